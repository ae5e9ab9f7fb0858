//! Elements of `U(a^ε_d)` in the PBW basis.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::lie::{GenId, LiePresentation};
use crate::rational::{fmt_q, Q};

/// Non-decreasing sequence of generator ids.
pub type Monomial = Vec<GenId>;

/// Finitely supported map from PBW monomials to coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NCPoly {
    terms: BTreeMap<Monomial, Q>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::scalar(Q::one())
    }

    pub fn scalar(c: Q) -> Self {
        NCPoly::monomial(Vec::new(), c)
    }

    pub fn generator(g: GenId) -> Self {
        NCPoly::monomial(vec![g], Q::one())
    }

    /// `c·m`; `m` must already be sorted.
    pub fn monomial(m: Monomial, c: Q) -> Self {
        debug_assert!(m.windows(2).all(|w| w[0] <= w[1]));
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        NCPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[GenId]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NCPoly, c: &Q) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Q) -> NCPoly {
        let mut out = NCPoly::zero();
        out.add_scaled(self, c);
        out
    }

    /// PBW degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    /// Top-degree part, the image in `gr U = S(a)`.
    pub fn leading_symbol(&self) -> NCPoly {
        let Some(d) = self.degree() else {
            return NCPoly::zero();
        };
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.len() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Weight if every monomial has the same one.
    pub fn homogeneous_weight(&self, lie: &LiePresentation) -> Option<Vec<i64>> {
        let mut w: Option<Vec<i64>> = None;
        for m in self.terms.keys() {
            let wm = monomial_weight(lie, m);
            match &w {
                None => w = Some(wm),
                Some(x) if *x != wm => return None,
                _ => {}
            }
        }
        Some(w.unwrap_or_else(|| lie.zero_weight()))
    }

    pub fn display<'a>(&'a self, lie: &'a LiePresentation) -> impl fmt::Display + 'a {
        Shown { poly: self, lie }
    }
}

pub fn monomial_weight(lie: &LiePresentation, m: &[GenId]) -> Vec<i64> {
    m.iter().fold(lie.zero_weight(), |acc, g| {
        lie.add_weights(&acc, lie.weight(*g))
    })
}

struct Shown<'a> {
    poly: &'a NCPoly,
    lie: &'a LiePresentation,
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", fmt_q(c))?;
            for g in m {
                write!(f, "*{}", self.lie.generator(*g))?;
            }
        }
        Ok(())
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(&-Q::one())
    }
}

/// Multiplication in `U(a)` with a memo of `monomial · generator` products.
///
/// Not `Sync`: each thread builds its own from the shared presentation.
#[derive(Clone, Debug)]
pub struct Algebra {
    lie: Arc<LiePresentation>,
    memo: RefCell<HashMap<(Monomial, GenId), NCPoly>>,
}

impl Algebra {
    pub fn new(lie: Arc<LiePresentation>) -> Self {
        Algebra {
            lie,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn lie(&self) -> &Arc<LiePresentation> {
        &self.lie
    }

    /// `m · x` for a PBW monomial `m`, moving `x` leftwards through
    /// `y x = x y + [y, x]`.
    pub fn mul_monomial_gen(&self, m: &[GenId], x: GenId) -> NCPoly {
        match m.last() {
            None => return NCPoly::generator(x),
            Some(&y) if y <= x => {
                let mut w = m.to_vec();
                w.push(x);
                return NCPoly::monomial(w, Q::one());
            }
            _ => {}
        }
        let key = (m.to_vec(), x);
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let (&y, rest) = m.split_last().expect("nonempty");
        let mut out = NCPoly::zero();
        let head = self.mul_monomial_gen(rest, x);
        for (hm, hc) in head.terms() {
            out.add_scaled(&self.mul_monomial_gen(hm, y), hc);
        }
        for (z, c) in self.lie.bracket(y, x).to_vec() {
            out.add_scaled(&self.mul_monomial_gen(rest, z), &c);
        }
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    pub fn mul_gen(&self, f: &NCPoly, x: GenId) -> NCPoly {
        let mut out = NCPoly::zero();
        for (m, c) in f.terms() {
            out.add_scaled(&self.mul_monomial_gen(m, x), c);
        }
        out
    }

    /// Product of a word of generators, in PBW normal form.
    pub fn normal_form(&self, word: &[GenId]) -> NCPoly {
        self.word_times(&NCPoly::one(), word)
    }

    /// `f · w` for a word `w`.
    pub fn word_times(&self, f: &NCPoly, word: &[GenId]) -> NCPoly {
        word.iter().fold(f.clone(), |acc, &x| self.mul_gen(&acc, x))
    }

    pub fn multiply(&self, f: &NCPoly, g: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (m, c) in g.terms() {
            out.add_scaled(&self.word_times(f, m), c);
        }
        out
    }

    pub fn commutator(&self, f: &NCPoly, g: &NCPoly) -> NCPoly {
        &self.multiply(f, g) - &self.multiply(g, f)
    }

    /// Product of a sequence of factors.
    pub fn product(&self, factors: &[NCPoly]) -> NCPoly {
        factors
            .iter()
            .fold(NCPoly::one(), |acc, f| self.multiply(&acc, f))
    }
}

/// Which descent the naive rewriting system reduces first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapStrategy {
    Leftmost,
    Rightmost,
}

/// Rewrites `word` by repeatedly replacing a descent `yx` (with `y > x`)
/// by `xy + [y, x]`, with no memoisation. Used to cross-check
/// [`Algebra::normal_form`].
pub fn rewrite_word(lie: &LiePresentation, word: &[GenId], strategy: SwapStrategy) -> NCPoly {
    let mut pending: BTreeMap<Vec<GenId>, Q> = BTreeMap::new();
    pending.insert(word.to_vec(), Q::one());
    let mut done = NCPoly::zero();
    while let Some((w, c)) = pending.pop_first() {
        let descents = (0..w.len().saturating_sub(1)).filter(|&k| w[k] > w[k + 1]);
        let pos = match strategy {
            SwapStrategy::Leftmost => descents.min(),
            SwapStrategy::Rightmost => descents.max(),
        };
        let Some(k) = pos else {
            done.add_term(w, c);
            continue;
        };
        let mut swapped = w.clone();
        swapped.swap(k, k + 1);
        push(&mut pending, swapped, c.clone());
        for (z, bc) in lie.bracket(w[k], w[k + 1]) {
            let mut v = w[..k].to_vec();
            v.push(*z);
            v.extend_from_slice(&w[k + 2..]);
            push(&mut pending, v, &c * bc);
        }
    }
    done
}

fn push(map: &mut BTreeMap<Vec<GenId>, Q>, w: Vec<GenId>, c: Q) {
    let e = map.entry(w).or_insert_with(Q::zero);
    *e += c;
}

impl Mul<&Q> for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &Q) -> NCPoly {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Generator;
    use crate::quadratic::DimVector;
    use crate::rational::q;
    use proptest::prelude::*;

    fn algebra(n: usize, d: &[usize]) -> Algebra {
        Algebra::new(Arc::new(
            LiePresentation::new(&DimVector::new(n, d.to_vec()).unwrap()).unwrap(),
        ))
    }

    #[test]
    fn normal_form_examples() {
        let alg = algebra(2, &[1, 1]);
        let lie = alg.lie().clone();
        let id = |g| lie.id(&g).unwrap();
        let (b, qq, p) = (
            id(Generator::b(0, 0, 0)),
            id(Generator::q(0, 0)),
            id(Generator::p(1, 0)),
        );
        assert_eq!(alg.normal_form(&[qq]), NCPoly::generator(qq));
        assert_eq!(alg.normal_form(&[p, p]), NCPoly::monomial(vec![p, p], q(1)));
        let expect = &NCPoly::monomial(vec![qq, p], q(1)) - &NCPoly::generator(b);
        assert_eq!(alg.normal_form(&[p, qq]), expect);
        let comm = alg.commutator(&NCPoly::generator(qq), &NCPoly::generator(p));
        assert_eq!(comm, NCPoly::generator(b));
        let f = alg.normal_form(&[p, qq, p]);
        assert_eq!(alg.multiply(&f, &NCPoly::one()), f);
        assert_eq!(alg.multiply(&NCPoly::one(), &f), f);
    }

    fn words(len: usize, n: u32) -> impl Strategy<Value = Vec<GenId>> {
        prop::collection::vec(0..n, 0..=len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn rewriting_strategies_agree(w in words(6, 10)) {
            let alg = algebra(4, &[1, 1, 1]);
            let lie = alg.lie().clone();
            let left = rewrite_word(&lie, &w, SwapStrategy::Leftmost);
            let right = rewrite_word(&lie, &w, SwapStrategy::Rightmost);
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(alg.normal_form(&w), left);
        }

        #[test]
        fn multiplication_is_associative(a in words(3, 9), b in words(3, 9), c in words(3, 9)) {
            let alg = algebra(4, &[1, 2, 1]);
            let (x, y, z) = (alg.normal_form(&a), alg.normal_form(&b), alg.normal_form(&c));
            let lhs = alg.multiply(&alg.multiply(&x, &y), &z);
            let rhs = alg.multiply(&x, &alg.multiply(&y, &z));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn normal_forms_are_homogeneous(w in words(6, 10)) {
            let alg = algebra(4, &[1, 1, 1]);
            let lie = alg.lie().clone();
            let nf = alg.normal_form(&w);
            if !nf.is_zero() {
                prop_assert_eq!(nf.homogeneous_weight(&lie), Some(monomial_weight(&lie, &w)));
            }
        }

        #[test]
        fn leading_symbol_is_multiplicative(a in words(3, 10), b in words(3, 10)) {
            let alg = algebra(4, &[1, 1, 1]);
            let (x, y) = (alg.normal_form(&a), alg.normal_form(&b));
            let mut sorted = [a.clone(), b.clone()].concat();
            sorted.sort();
            prop_assert_eq!(alg.multiply(&x, &y).leading_symbol(), NCPoly::monomial(sorted, q(1)));
        }
    }
}
