//! Polynomial functions on the coadjoint space `a^{ε*}_d` and their
//! Lie–Kirillov–Kostant bracket.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::ideal::{IdealBasis, InvarianceReport, InvarianceWitness};
use crate::lie::{GenId, Generator, LieElement, LiePresentation};
use crate::linalg::{SparseEchelon, SparseVec};
use crate::ncpoly::{Monomial, NCPoly};
use crate::quiver::QuiverPoint;
use crate::rational::Q;
use crate::symbolic::{product, Classical, QuiverSymbols};

/// A polynomial in the coordinate functions, one variable per generator.
/// Monomials are sorted multisets of generator ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFun {
    terms: BTreeMap<Monomial, Q>,
}

impl PolyFun {
    pub fn zero() -> Self {
        PolyFun::default()
    }

    pub fn one() -> Self {
        PolyFun::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut f = PolyFun::zero();
        f.add_term(Vec::new(), c);
        f
    }

    pub fn var(g: GenId) -> Self {
        let mut f = PolyFun::zero();
        f.add_term(vec![g], Q::one());
        f
    }

    /// The linear function `x̂` of a Lie element.
    pub fn linear(x: &LieElement) -> Self {
        let mut f = PolyFun::zero();
        for (g, c) in x {
            f.add_term(vec![*g], c.clone());
        }
        f
    }

    /// Leading symbol of an element of `U(a)`, read in `S(a)`.
    pub fn symbol_of(x: &NCPoly) -> Self {
        let mut f = PolyFun::zero();
        for (m, c) in x.leading_symbol().terms() {
            f.add_term(m.clone(), c.clone());
        }
        f
    }

    pub fn add_term(&mut self, mut m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        m.sort_unstable();
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut f = PolyFun::zero();
        for (m, x) in &self.terms {
            f.add_term(m.clone(), x * c);
        }
        f
    }

    pub fn variables(&self) -> Vec<GenId> {
        let mut v: Vec<GenId> = self.terms.keys().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn derivative(&self, g: GenId) -> Self {
        let mut f = PolyFun::zero();
        for (m, c) in &self.terms {
            let mult = m.iter().filter(|&&x| x == g).count();
            if mult == 0 {
                continue;
            }
            let pos = m.iter().position(|&x| x == g).expect("present");
            let mut rest = m.clone();
            rest.remove(pos);
            f.add_term(rest, c * Q::from_integer((mult as i64).into()));
        }
        f
    }

    /// Value at the point whose coordinate for generator `g` is `values[g]`.
    pub fn eval(&self, values: &[Q]) -> Q {
        let mut out = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for g in m {
                t *= &values[*g as usize];
            }
            out += t;
        }
        out
    }

    pub fn to_sparse(&self) -> SparseVec<Monomial> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }
}

impl Add for &PolyFun {
    type Output = PolyFun;
    fn add(self, rhs: &PolyFun) -> PolyFun {
        let mut f = self.clone();
        for (m, c) in &rhs.terms {
            f.add_term(m.clone(), c.clone());
        }
        f
    }
}

impl Sub for &PolyFun {
    type Output = PolyFun;
    fn sub(self, rhs: &PolyFun) -> PolyFun {
        self + &(-rhs)
    }
}

impl Neg for &PolyFun {
    type Output = PolyFun;
    fn neg(self) -> PolyFun {
        self.scale(&-Q::one())
    }
}

impl Mul for &PolyFun {
    type Output = PolyFun;
    fn mul(self, rhs: &PolyFun) -> PolyFun {
        let mut f = PolyFun::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                f.add_term(m, x * y);
            }
        }
        f
    }
}

/// `{f, g}(ξ) = ⟨ξ, [d_ξ f, d_ξ g]⟩`, i.e.
/// `Σ ∂_x f · ∂_y g · [x, y]^` over pairs of generators.
pub fn kirillov_bracket(lie: &LiePresentation, f: &PolyFun, g: &PolyFun) -> PolyFun {
    let mut out = PolyFun::zero();
    let gv = g.variables();
    let dg: Vec<(GenId, PolyFun)> = gv.iter().map(|&y| (y, g.derivative(y))).collect();
    for x in f.variables() {
        let dfx = f.derivative(x);
        for (y, dgy) in &dg {
            let br = lie.bracket(x, *y);
            if br.is_empty() {
                continue;
            }
            let lin = PolyFun::linear(&br.to_vec());
            out = &out + &(&(&dfx * dgy) * &lin);
        }
    }
    out
}

/// Classical entries of `B_lA_l + A′_{l+1}B_l + p_{l+1}q_l`, named as in
/// [`IdealBasis`].
pub fn classical_relations(lie: &LiePresentation) -> Vec<(String, PolyFun)> {
    let sym = QuiverSymbols::new(lie);
    let h = lie.dims().half();
    let mut out = Vec::new();
    for l in 0..h {
        let ba = product(&Classical, &[sym.b(l as i64), sym.a(l as i64)]);
        let ab = product(&Classical, &[sym.a_prime(l + 1), sym.b(l as i64)]);
        let pq = product(&Classical, &[sym.p(l as i64 + 1), sym.q(l as i64)]);
        for i in 0..ba.len() {
            for j in 0..ba[i].len() {
                let r = &(&ba[i][j] + &ab[i][j]) + &pq[i][j];
                out.push((format!("R{l}[{},{}]", i + 1, j + 1), r));
            }
        }
    }
    out
}

/// Checks `{x̂, r} ∈ span(R)` for every generator `x` and classical
/// relation entry `r`.
pub fn classical_r_invariance(lie: &LiePresentation) -> InvarianceReport {
    let rels = classical_relations(lie);
    let mut span = SparseEchelon::new();
    for (_, r) in &rels {
        span.insert(&r.to_sparse());
    }
    let mut report = InvarianceReport {
        pairs: 0,
        failures: Vec::new(),
    };
    for x in 0..lie.len() as GenId {
        let xf = PolyFun::var(x);
        for (name, r) in &rels {
            report.pairs += 1;
            if !span.contains(&kirillov_bracket(lie, &xf, r).to_sparse()) {
                report.failures.push(InvarianceWitness {
                    generator: lie.generator(x).to_string(),
                    relation: name.clone(),
                });
            }
        }
    }
    report
}

/// Whether the leading symbols of the quantum relation entries span the
/// same space as the classical ones.
pub fn symbols_match_classical(lie: &LiePresentation, basis: &IdealBasis) -> bool {
    let mut classical = SparseEchelon::new();
    for (_, r) in classical_relations(lie) {
        classical.insert(&r.to_sparse());
    }
    let mut quantum = SparseEchelon::new();
    for g in basis.relations() {
        quantum.insert(&PolyFun::symbol_of(&g.poly).to_sparse());
    }
    classical.rank() == quantum.rank()
        && basis
            .relations()
            .all(|g| classical.contains(&PolyFun::symbol_of(&g.poly).to_sparse()))
}

/// Coordinates of the image of a quiver point in `a^{ε*}_d`:
/// `A(l) = A_l`, `A′(l) = −A_l`, `B(l) = −B_l`, `p`, `q` unchanged. The
/// image lies on `S^ε_d ∩ π^{−1}(0)` exactly when the point lies on the
/// zero locus.
pub fn coadjoint_image(lie: &LiePresentation, pt: &QuiverPoint) -> Vec<Q> {
    lie.generators()
        .iter()
        .map(|g| match g.kind {
            crate::lie::GenKind::A => pt.a(g.l)[(g.i, g.j)].clone(),
            crate::lie::GenKind::APrime => -pt.a(g.l)[(g.i, g.j)].clone(),
            crate::lie::GenKind::B => -pt.b(g.l)[(g.i, g.j)].clone(),
            crate::lie::GenKind::P => pt.p(g.l)[(g.i, 0)].clone(),
            crate::lie::GenKind::Q => pt.q(g.l)[(0, g.j)].clone(),
        })
        .collect()
}

/// Values of the moment map components `π` (the `g_d` coordinates).
pub fn gauge_values(lie: &LiePresentation, values: &[Q]) -> Vec<Q> {
    let dims = lie.dims();
    let h = dims.half();
    let id = |g: Generator| lie.id(&g).expect("generator") as usize;
    let mut out = Vec::new();
    for l in 1..h {
        for i in 0..dims.d()[l] {
            for j in 0..dims.d()[l] {
                out.push(
                    &values[id(Generator::a(l, i, j))] + &values[id(Generator::a_prime(l, i, j))],
                );
            }
        }
    }
    for (l, prime) in [(0, false), (h, true)] {
        for i in 0..dims.d()[l] {
            for j in i + 1..dims.d()[l] {
                let g = |a, b| {
                    if prime {
                        Generator::a_prime(l, a, b)
                    } else {
                        Generator::a(l, a, b)
                    }
                };
                out.push(&values[id(g(i, j))] - &values[id(g(j, i))]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::IdealOracle;
    use crate::ncpoly::Algebra;
    use crate::quadratic::{DimVector, QuadraticSetup};
    use crate::quiver::sample_point;
    use crate::rational::q;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn lie(n: usize, d: &[usize]) -> LiePresentation {
        LiePresentation::new(&DimVector::new(n, d.to_vec()).unwrap()).unwrap()
    }

    fn random_poly(lie: &LiePresentation, spec: &[(Vec<u32>, i64)]) -> PolyFun {
        let mut f = PolyFun::zero();
        for (m, c) in spec {
            f.add_term(m.iter().map(|g| g % lie.len() as u32).collect(), q(*c));
        }
        f
    }

    #[test]
    fn linear_functions_bracket_like_the_algebra() {
        let g = lie(2, &[1, 1]);
        let id = |x| g.id(&x).unwrap();
        let qq = PolyFun::var(id(Generator::q(0, 0)));
        let p = PolyFun::var(id(Generator::p(1, 0)));
        let b = PolyFun::var(id(Generator::b(0, 0, 0)));
        assert_eq!(kirillov_bracket(&g, &qq, &p), b);
        for x in 0..g.len() as GenId {
            for y in 0..g.len() as GenId {
                let lhs = kirillov_bracket(&g, &PolyFun::var(x), &PolyFun::var(y));
                assert_eq!(lhs, PolyFun::linear(&g.bracket(x, y).to_vec()));
            }
        }
    }

    #[test]
    fn invariance_sweeps() {
        for (n, d) in [
            (2, vec![1, 1]),
            (4, vec![1, 1, 1]),
            (4, vec![2, 1, 2]),
            (2, vec![2, 2]),
        ] {
            let rep = classical_r_invariance(&lie(n, &d));
            assert!(rep.passed(), "{d:?}: {:?}", rep.failures);
        }
    }

    #[test]
    fn quantum_symbols_are_classical_relations() {
        for (n, d) in [(2, vec![1, 1]), (4, vec![2, 1, 2])] {
            let g = Arc::new(lie(n, &d));
            let oracle = IdealOracle::new(Algebra::new(g.clone()));
            assert!(symbols_match_classical(&g, oracle.basis()));
        }
    }

    #[test]
    fn quiver_points_land_on_the_reduction_locus() {
        let st = Arc::new(QuadraticSetup::from_dims(4, vec![2, 1, 2]).unwrap());
        let g = lie(4, &[2, 1, 2]);
        for seed in 0..3 {
            let pt = sample_point(&st, 3, seed).unwrap();
            let v = coadjoint_image(&g, &pt);
            assert!(classical_relations(&g)
                .iter()
                .all(|(_, r)| r.eval(&v).is_zero()));
            assert!(gauge_values(&g, &v).iter().all(Zero::is_zero));
        }
    }

    fn terms() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        prop::collection::vec((prop::collection::vec(0u32..40, 0..3), -3i64..=3), 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bracket_is_antisymmetric_and_leibniz(a in terms(), b in terms(), c in terms()) {
            let g = lie(4, &[1, 2, 1]);
            let (f, u, v) = (random_poly(&g, &a), random_poly(&g, &b), random_poly(&g, &c));
            prop_assert!(kirillov_bracket(&g, &f, &f).is_zero());
            prop_assert_eq!(kirillov_bracket(&g, &f, &u), -&kirillov_bracket(&g, &u, &f));
            let lhs = kirillov_bracket(&g, &f, &(&u * &v));
            let rhs = &(&kirillov_bracket(&g, &f, &u) * &v) + &(&u * &kirillov_bracket(&g, &f, &v));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bracket_satisfies_jacobi_on_linear_functions(x in prop::collection::vec((0u32..40, -3i64..=3), 1..4),
                                                      y in prop::collection::vec((0u32..40, -3i64..=3), 1..4),
                                                      z in prop::collection::vec((0u32..40, -3i64..=3), 1..4)) {
            let g = lie(4, &[1, 2, 1]);
            let lin = |v: &[(u32, i64)]| random_poly(&g, &v.iter().map(|(m, c)| (vec![*m], *c)).collect::<Vec<_>>());
            let (a, b, c) = (lin(&x), lin(&y), lin(&z));
            let br = |u: &PolyFun, v: &PolyFun| kirillov_bracket(&g, u, v);
            let total = &(&br(&a, &br(&b, &c)) + &br(&b, &br(&c, &a))) + &br(&c, &br(&a, &b));
            prop_assert!(total.is_zero());
        }
    }
}
