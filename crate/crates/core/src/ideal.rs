//! The left ideal `U(a)(R + g_d)` and an exact, bounded membership oracle.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::lie::{GenId, GenKind, Generator, LiePresentation};
use crate::linalg::{SparseEchelon, SparseVec};
use crate::matrix::Matrix;
use crate::ncpoly::{monomial_weight, Algebra, Monomial, NCPoly};
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IdealPart {
    /// An entry of `B_lA_l + A′_{l+1}B_l + p_{l+1}q_l`.
    Relation,
    /// A basis element of `g_d`.
    Gauge,
}

#[derive(Clone, Debug)]
pub struct IdealGenerator {
    pub name: String,
    pub part: IdealPart,
    pub poly: NCPoly,
    weight: Vec<i64>,
}

impl IdealGenerator {
    pub fn weight(&self) -> &[i64] {
        &self.weight
    }
}

#[derive(Clone, Debug)]
pub struct IdealBasis {
    gens: Vec<IdealGenerator>,
}

impl IdealBasis {
    pub fn new(alg: &Algebra) -> Self {
        let lie = alg.lie().clone();
        let dims = lie.dims().clone();
        let h = dims.half();
        let d = dims.d();
        let id = |g: Generator| lie.id(&g).expect("generator in range");
        let mut gens = Vec::new();
        let mut push = |name: String, part, poly: NCPoly| {
            let weight = poly
                .homogeneous_weight(&lie)
                .expect("ideal generators are homogeneous");
            gens.push(IdealGenerator {
                name,
                part,
                poly,
                weight,
            });
        };
        for l in 0..h {
            for i in 0..d[l + 1] {
                for j in 0..d[l] {
                    let mut r = NCPoly::zero();
                    for k in 0..d[l] {
                        r.add_scaled(
                            &alg.normal_form(&[
                                id(Generator::b(l, i, k)),
                                id(Generator::a(l, k, j)),
                            ]),
                            &Q::one(),
                        );
                    }
                    for k in 0..d[l + 1] {
                        r.add_scaled(
                            &alg.normal_form(&[
                                id(Generator::a_prime(l + 1, i, k)),
                                id(Generator::b(l, k, j)),
                            ]),
                            &Q::one(),
                        );
                    }
                    r.add_scaled(
                        &alg.normal_form(&[id(Generator::p(l + 1, i)), id(Generator::q(l, j))]),
                        &Q::one(),
                    );
                    push(format!("R{l}[{},{}]", i + 1, j + 1), IdealPart::Relation, r);
                }
            }
        }
        for l in 1..h {
            for i in 0..d[l] {
                for j in 0..d[l] {
                    let x = &NCPoly::generator(id(Generator::a(l, i, j)))
                        + &NCPoly::generator(id(Generator::a_prime(l, i, j)));
                    push(format!("gl{l}[{},{}]", i + 1, j + 1), IdealPart::Gauge, x);
                }
            }
        }
        for (l, prime) in [(0, false), (h, true)] {
            for i in 0..d[l] {
                for j in i + 1..d[l] {
                    let g = |a, b| {
                        if prime {
                            Generator::a_prime(l, a, b)
                        } else {
                            Generator::a(l, a, b)
                        }
                    };
                    let x = &NCPoly::generator(id(g(i, j))) - &NCPoly::generator(id(g(j, i)));
                    push(format!("o{l}[{},{}]", i + 1, j + 1), IdealPart::Gauge, x);
                }
            }
        }
        IdealBasis { gens }
    }

    pub fn generators(&self) -> &[IdealGenerator] {
        &self.gens
    }

    pub fn relations(&self) -> impl Iterator<Item = &IdealGenerator> {
        self.gens.iter().filter(|g| g.part == IdealPart::Relation)
    }

    pub fn gauge(&self) -> impl Iterator<Item = &IdealGenerator> {
        self.gens.iter().filter(|g| g.part == IdealPart::Gauge)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Membership {
    /// `x = Σ m·g` exactly; a proof.
    Verified { bound: usize },
    /// Not found up to `bound`; not a disproof.
    Inconclusive { bound: usize, reason: String },
}

impl Membership {
    pub fn is_verified(&self) -> bool {
        matches!(self, Membership::Verified { .. })
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::Verified { bound } => write!(f, "verified (bound {bound})"),
            Membership::Inconclusive { bound, reason } => {
                write!(f, "inconclusive (bound {bound}): {reason}")
            }
        }
    }
}

/// Bounded membership in `U(a)(R + g_d)`, caching one echelon span per
/// `(weight, bound)` slice.
#[derive(Debug)]
pub struct IdealOracle {
    alg: Algebra,
    basis: IdealBasis,
    spans: RefCell<HashMap<(Vec<i64>, usize), SparseEchelon<Monomial>>>,
    /// Upper limit on `m·g` products per slice.
    pub budget: usize,
}

impl IdealOracle {
    pub fn new(alg: Algebra) -> Self {
        let basis = IdealBasis::new(&alg);
        IdealOracle {
            alg,
            basis,
            spans: RefCell::new(HashMap::new()),
            budget: 400_000,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn basis(&self) -> &IdealBasis {
        &self.basis
    }

    fn lie(&self) -> &LiePresentation {
        self.alg.lie()
    }

    /// Monomials of degree `≤ max_deg` with the given weight.
    fn monomials_of_weight(&self, target: &[i64], max_deg: usize) -> Vec<Monomial> {
        let lie = self.lie();
        let nil_target = LiePresentation::nilpotent_degree(target);
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(
            lie: &LiePresentation,
            start: GenId,
            left: usize,
            nil_left: i64,
            w: Vec<i64>,
            target: &[i64],
            cur: &mut Vec<GenId>,
            out: &mut Vec<Monomial>,
        ) {
            if w == target {
                out.push(cur.clone());
            }
            if left == 0 {
                return;
            }
            for g in start..lie.len() as GenId {
                let gw = lie.weight(g);
                let nd = LiePresentation::nilpotent_degree(gw);
                if nd > nil_left {
                    continue;
                }
                cur.push(g);
                go(
                    lie,
                    g,
                    left - 1,
                    nil_left - nd,
                    lie.add_weights(&w, gw),
                    target,
                    cur,
                    out,
                );
                cur.pop();
            }
        }
        go(
            lie,
            0,
            max_deg,
            nil_target,
            lie.zero_weight(),
            target,
            &mut cur,
            &mut out,
        );
        out
    }

    fn negate_weight(&self, w: &[i64]) -> Vec<i64> {
        let neg: Vec<i64> = w.iter().map(|x| -x).collect();
        self.lie().add_weights(&self.lie().zero_weight(), &neg)
    }

    fn with_span<T>(
        &self,
        weight: &[i64],
        bound: usize,
        f: impl FnOnce(&SparseEchelon<Monomial>) -> T,
    ) -> Result<T, String> {
        let key = (weight.to_vec(), bound);
        if let Some(span) = self.spans.borrow().get(&key) {
            return Ok(f(span));
        }
        let mut span = SparseEchelon::new();
        let mut products = 0usize;
        for g in &self.basis.gens {
            let gdeg = g.poly.degree().unwrap_or(0);
            if gdeg > bound {
                continue;
            }
            let need = self
                .lie()
                .add_weights(weight, &self.negate_weight(g.weight()));
            for m in self.monomials_of_weight(&need, bound - gdeg) {
                products += 1;
                if products > self.budget {
                    return Err(format!("slice needs more than {} products", self.budget));
                }
                let mg = self.alg.multiply(&NCPoly::monomial(m, Q::one()), &g.poly);
                span.insert(&to_sparse(&mg));
            }
        }
        let out = f(&span);
        self.spans.borrow_mut().insert(key, span);
        Ok(out)
    }

    /// Splits `x` into weight components.
    fn components(&self, x: &NCPoly) -> BTreeMap<Vec<i64>, NCPoly> {
        let mut parts: BTreeMap<Vec<i64>, NCPoly> = BTreeMap::new();
        for (m, c) in x.terms() {
            parts
                .entry(monomial_weight(self.lie(), m))
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        parts
    }

    /// Default bound is `deg x + 2`.
    pub fn default_bound(x: &NCPoly) -> usize {
        x.degree().unwrap_or(0) + 2
    }

    pub fn membership(&self, x: &NCPoly, bound: usize) -> Membership {
        for (w, part) in self.components(x) {
            let deg = part.degree().unwrap_or(0);
            if bound < deg {
                return Membership::Inconclusive {
                    bound,
                    reason: format!("bound below degree {deg}"),
                };
            }
            match self.with_span(&w, bound, |span| span.contains(&to_sparse(&part))) {
                Ok(true) => {}
                Ok(false) => {
                    return Membership::Inconclusive {
                        bound,
                        reason: "not in the bounded span".into(),
                    };
                }
                Err(reason) => return Membership::Inconclusive { bound, reason },
            }
        }
        Membership::Verified { bound }
    }

    pub fn quotient_equal(&self, f: &NCPoly, g: &NCPoly, bound: usize) -> Membership {
        self.membership(&(f - g), bound)
    }

    /// Finds `λ` with `x − Σ λ_i y_i` in the ideal (bounded), if any.
    pub fn solve_modulo(&self, x: &NCPoly, ys: &[NCPoly], bound: usize) -> Option<Vec<Q>> {
        let mut residues: Vec<SparseVec<Monomial>> = Vec::new();
        let all: Vec<&NCPoly> = std::iter::once(x).chain(ys).collect();
        for f in &all {
            let mut r = SparseVec::new();
            for (w, part) in self.components(f) {
                let red = self
                    .with_span(&w, bound, |span| span.reduce(&to_sparse(&part)))
                    .ok()?;
                r.extend(red);
            }
            residues.push(r);
        }
        let mut keys: Vec<&Monomial> = residues.iter().flat_map(|r| r.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut m = Matrix::zeros(keys.len(), ys.len());
        let mut rhs = vec![Q::zero(); keys.len()];
        for (row, k) in keys.iter().enumerate() {
            rhs[row] = residues[0].get(*k).cloned().unwrap_or_else(Q::zero);
            for col in 0..ys.len() {
                m[(row, col)] = residues[col + 1].get(*k).cloned().unwrap_or_else(Q::zero);
            }
        }
        if keys.is_empty() {
            return Some(vec![Q::zero(); ys.len()]);
        }
        m.solve_any(&rhs)
    }
}

pub fn to_sparse(f: &NCPoly) -> SparseVec<Monomial> {
    f.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// A failing pair from an invariance sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceWitness {
    pub generator: String,
    pub relation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub pairs: usize,
    pub failures: Vec<InvarianceWitness>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `[x, r] ∈ span(R)` for every generator `x` and relation entry `r`;
/// this is stronger than asking for `span(R ∪ g_d)`.
pub fn quantum_r_invariance(alg: &Algebra, basis: &IdealBasis) -> InvarianceReport {
    let mut span = SparseEchelon::new();
    for g in basis.relations() {
        span.insert(&to_sparse(&g.poly));
    }
    let lie = alg.lie();
    let mut report = InvarianceReport {
        pairs: 0,
        failures: Vec::new(),
    };
    for x in 0..lie.len() as GenId {
        let gx = NCPoly::generator(x);
        for r in basis.relations() {
            report.pairs += 1;
            if !span.contains(&to_sparse(&alg.commutator(&gx, &r.poly))) {
                report.failures.push(InvarianceWitness {
                    generator: lie.generator(x).to_string(),
                    relation: r.name.clone(),
                });
            }
        }
    }
    report
}

/// Which side of the quiver a [`projection_certificate`] projects away.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateSide {
    /// `𝔨 = span(A′, B, p, A(l) inner)`; needs `d_0 ≤ 1`.
    Q,
    /// `𝔨 = span(A, B, q, A′(l) inner)`; needs `d_{N/2} ≤ 1`.
    P,
}

/// A one-sided disproof of membership: the image of `x` in `U(a)/U(a)𝔨`.
///
/// For side [`CertificateSide::Q`], `𝔫 = span(A′, B, p)` is an ideal of `a`
/// and every entry of `R` lies in `U(a)𝔫`; the gauge part lies in `𝔨` when
/// `d_0 ≤ 1`. So `U(a)(R + g_d) ⊆ U(a)𝔨` and a nonzero image proves
/// `x ∉ U(a)(R + g_d)`. Side [`CertificateSide::P`] is the mirror image with
/// `𝔫 = span(A, B, q)`, which contains the last letter of every term of `R`.
/// Returns `None` when the outer space on the kept side has dimension `≥ 2`.
pub fn projection_certificate(
    lie: &LiePresentation,
    x: &NCPoly,
    side: CertificateSide,
) -> Option<BTreeMap<Monomial, Q>> {
    let dims = lie.dims();
    let h = dims.half();
    let (outer, dropped, acting, word): (usize, [GenKind; 3], GenKind, GenKind) = match side {
        CertificateSide::Q => (
            0,
            [GenKind::APrime, GenKind::B, GenKind::P],
            GenKind::A,
            GenKind::Q,
        ),
        CertificateSide::P => (
            h,
            [GenKind::A, GenKind::B, GenKind::Q],
            GenKind::APrime,
            GenKind::P,
        ),
    };
    if dims.d()[outer] >= 2 {
        return None;
    }
    let mut out: BTreeMap<Monomial, Q> = BTreeMap::new();
    for (m, c) in x.terms() {
        let gens: Vec<Generator> = m.iter().map(|&g| lie.generator(g)).collect();
        if gens.iter().any(|g| dropped.contains(&g.kind)) {
            continue;
        }
        let mut head: Monomial = Vec::new();
        let mut inner: Vec<Generator> = Vec::new();
        let mut ws: Monomial = Vec::new();
        for (g, &id) in gens.iter().zip(m) {
            if g.kind == acting && (g.l == 0 || g.l == h) {
                head.push(id);
            } else if g.kind == acting {
                inner.push(*g);
            } else {
                debug_assert_eq!(g.kind, word);
                ws.push(id);
            }
        }
        // each inner letter acts on the kept word as a derivation:
        // [A_ij, q_k] = δ_ik q_j and [A′_ij, p_k] = −δ_jk p_i
        let mut poly: BTreeMap<Monomial, Q> = BTreeMap::from([(ws, c.clone())]);
        for a in inner.iter().rev() {
            let mut next: BTreeMap<Monomial, Q> = BTreeMap::new();
            for (w, wc) in &poly {
                for (pos, &wid) in w.iter().enumerate() {
                    let wg = lie.generator(wid);
                    let (hit, target, sign) = match side {
                        CertificateSide::Q => (wg.j == a.i, Generator::q(a.l, a.j), Q::one()),
                        CertificateSide::P => (wg.i == a.j, Generator::p(a.l, a.i), -Q::one()),
                    };
                    if wg.l != a.l || !hit {
                        continue;
                    }
                    let mut nw = w.clone();
                    nw[pos] = lie.id(&target).expect("word letter in range");
                    nw.sort_unstable();
                    *next.entry(nw).or_insert_with(Q::zero) += wc * &sign;
                }
            }
            next.retain(|_, v| !v.is_zero());
            poly = next;
        }
        for (w, wc) in poly {
            let mut key = head.clone();
            key.extend(w);
            *out.entry(key).or_insert_with(Q::zero) += wc;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Some(out)
}

/// Whether either [`projection_certificate`] proves `x ∉ U(a)(R + g_d)`.
pub fn provably_outside(lie: &LiePresentation, x: &NCPoly) -> bool {
    [CertificateSide::Q, CertificateSide::P]
        .into_iter()
        .any(|side| projection_certificate(lie, x, side).is_some_and(|img| !img.is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::DimVector;
    use crate::rational::q;
    use std::sync::Arc;

    fn oracle(n: usize, d: &[usize]) -> IdealOracle {
        let lie = Arc::new(LiePresentation::new(&DimVector::new(n, d.to_vec()).unwrap()).unwrap());
        IdealOracle::new(Algebra::new(lie))
    }

    #[test]
    fn basis_shapes() {
        let o = oracle(4, &[2, 1, 2]);
        assert_eq!(o.basis().relations().count(), 2 + 2);
        // gl(V_1) diagonal plus o(V_0), o(V_2)
        assert_eq!(o.basis().gauge().count(), 1 + 1 + 1);
    }

    #[test]
    fn membership_examples() {
        let o = oracle(2, &[1, 1]);
        let r = o.basis().relations().next().unwrap().poly.clone();
        assert!(o.membership(&r, 2).is_verified());
        let lie = o.algebra().lie().clone();
        let id = |g| lie.id(&g).unwrap();
        let pq = o
            .algebra()
            .normal_form(&[id(Generator::p(1, 0)), id(Generator::q(0, 0))]);
        let x = o.algebra().multiply(&pq, &r);
        assert!(o.membership(&x, 4).is_verified());
        assert!(o.membership(&x, 5).is_verified());
        for bound in 0..5 {
            assert!(!o.membership(&NCPoly::scalar(q(3)), bound).is_verified());
        }
        let f = o
            .algebra()
            .normal_form(&[id(Generator::q(0, 0)), id(Generator::p(1, 0))]);
        assert!(o.quotient_equal(&f, &f, 0).is_verified());
        assert!(!o
            .quotient_equal(&f, &(&f + &NCPoly::one()), 3)
            .is_verified());
    }

    #[test]
    fn right_multiples_reduce_through_invariance() {
        let o = oracle(2, &[1, 1]);
        let r = o.basis().relations().next().unwrap().poly.clone();
        let lie = o.algebra().lie().clone();
        let b = NCPoly::generator(lie.id(&Generator::b(0, 0, 0)).unwrap());
        let qq = NCPoly::generator(lie.id(&Generator::q(0, 0)).unwrap());
        for y in [b, qq] {
            let x = o.algebra().multiply(&r, &y);
            assert!(o.membership(&x, 3).is_verified());
        }
    }

    #[test]
    fn quantum_invariance_sweeps() {
        for (n, d) in [
            (2, vec![1, 1]),
            (4, vec![1, 1, 1]),
            (2, vec![2, 1]),
            (4, vec![1, 2, 1]),
        ] {
            let o = oracle(n, &d);
            let rep = quantum_r_invariance(o.algebra(), o.basis());
            assert!(rep.passed(), "{d:?}: {:?}", rep.failures);
        }
    }

    #[test]
    fn solve_modulo_recovers_scale() {
        let o = oracle(2, &[1, 1]);
        let r = o.basis().relations().next().unwrap().poly.clone();
        let lie = o.algebra().lie().clone();
        let b = NCPoly::generator(lie.id(&Generator::b(0, 0, 0)).unwrap());
        let x = &r + &b.scale(&q(5));
        assert_eq!(o.solve_modulo(&x, &[b], 2), Some(vec![q(5)]));
    }

    #[test]
    fn certificate_is_sound_on_ideal_elements() {
        use rand::{Rng, SeedableRng};
        for (n, d) in [
            (2, vec![1, 1]),
            (4, vec![1, 1, 1]),
            (4, vec![1, 2, 1]),
            (2, vec![1, 2]),
            (2, vec![2, 1]),
            (4, vec![2, 1, 1]),
        ] {
            let o = oracle(n, &d);
            let lie = o.algebra().lie().clone();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
            assert!(provably_outside(&lie, &NCPoly::one()));
            for g in o.basis().generators() {
                assert!(!provably_outside(&lie, &g.poly), "{}", g.name);
                for _ in 0..40 {
                    let len = rng.gen_range(1..4);
                    let w: Vec<GenId> = (0..len)
                        .map(|_| rng.gen_range(0..lie.len() as u32))
                        .collect();
                    let x = o.algebra().multiply(&o.algebra().normal_form(&w), &g.poly);
                    assert!(!provably_outside(&lie, &x), "{} times {w:?}", g.name);
                }
            }
        }
        let lie = oracle(2, &[2, 1]).algebra().lie().clone();
        assert!(projection_certificate(&lie, &NCPoly::one(), CertificateSide::Q).is_none());
        assert!(projection_certificate(&lie, &NCPoly::one(), CertificateSide::P).is_some());
        let lie = oracle(2, &[2, 2]).algebra().lie().clone();
        assert!(!provably_outside(&lie, &NCPoly::one()));
    }
}
