//! Matrices whose entries are linear combinations of Lie generators, and the
//! `Z`-indexed quiver data `A_l, B_l, p_l, q_l` built from them.
//!
//! Outside the window the data is the fixed-point extension
//! `A_{−l} = −A′ᵀ_l`, `B_{−l−1} = Bᵀ_l`, `q_{−l} = w_{l−1}^{−1} pᵀ_l`,
//! `p_{−l} = −w_l qᵀ_l`, where `w_m = (w_m, w_{N−1−m})` is the sign of the
//! form on `W`. At the boundary `q_{N/2} = −pᵀ_{N/2}` and
//! `A_{N/2} = −A′ᵀ_{N/2}`; `p_0 = qᵀ_0` for `N = 2` and `p_0 = −qᵀ_0` otherwise.

use num_traits::One;

use crate::lie::{normalize, Generator, LieElement, LiePresentation};
use crate::ncpoly::{Algebra, NCPoly};
use crate::poisson::PolyFun;
use crate::quadratic::QuadraticSetup;
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LieElement>,
}

impl LinMatrix {
    fn build(rows: usize, cols: usize, f: impl Fn(usize, usize) -> LieElement) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        LinMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &LieElement {
        &self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        LinMatrix::build(self.cols, self.rows, |i, j| self.entry(j, i).clone())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        LinMatrix::build(self.rows, self.cols, |i, j| {
            self.entry(i, j).iter().map(|(g, x)| (*g, x * c)).collect()
        })
    }
}

fn single(lie: &LiePresentation, g: Generator) -> LieElement {
    vec![(lie.id(&g).expect("generator in range"), Q::one())]
}

/// `Z`-indexed symbolic quiver data over `a^ε_d`.
pub struct QuiverSymbols<'a> {
    lie: &'a LiePresentation,
    setup: QuadraticSetup,
}

impl<'a> QuiverSymbols<'a> {
    pub fn new(lie: &'a LiePresentation) -> Self {
        QuiverSymbols {
            lie,
            setup: QuadraticSetup::new(lie.dims().clone()),
        }
    }

    pub fn lie(&self) -> &LiePresentation {
        self.lie
    }

    fn n(&self) -> usize {
        self.lie.dims().n()
    }

    fn h(&self) -> usize {
        self.lie.dims().half()
    }

    fn wrap(&self, l: i64) -> usize {
        l.rem_euclid(self.n() as i64) as usize
    }

    fn dim(&self, m: usize) -> usize {
        self.lie.dims().full(m as i64)
    }

    pub fn a(&self, l: i64) -> LinMatrix {
        let m = self.wrap(l);
        let d = self.dim(m);
        if m < self.h() {
            LinMatrix::build(d, d, |i, j| single(self.lie, Generator::a(m, i, j)))
        } else {
            let k = self.n() - m;
            let k = if m == self.h() { m } else { k };
            LinMatrix::build(d, d, |i, j| single(self.lie, Generator::a_prime(k, i, j)))
                .transpose()
                .neg()
        }
    }

    /// `A′_l` for `0 < l ≤ N/2`.
    pub fn a_prime(&self, l: usize) -> LinMatrix {
        let d = self.dim(l);
        LinMatrix::build(d, d, |i, j| single(self.lie, Generator::a_prime(l, i, j)))
    }

    pub fn b(&self, l: i64) -> LinMatrix {
        let m = self.wrap(l);
        if m < self.h() {
            LinMatrix::build(self.dim(m + 1), self.dim(m), |i, j| {
                single(self.lie, Generator::b(m, i, j))
            })
        } else {
            let k = self.n() - m - 1;
            LinMatrix::build(self.dim(k + 1), self.dim(k), |i, j| {
                single(self.lie, Generator::b(k, i, j))
            })
            .transpose()
        }
    }

    pub fn p(&self, l: i64) -> LinMatrix {
        let m = self.wrap(l);
        if m > 0 && m <= self.h() {
            LinMatrix::build(self.dim(m), 1, |i, _| single(self.lie, Generator::p(m, i)))
        } else {
            let k = (self.n() - m) % self.n();
            let sign = -self.setup.w_sign(k as i64);
            LinMatrix::build(1, self.dim(k), |_, j| single(self.lie, Generator::q(k, j)))
                .transpose()
                .scale(&sign)
        }
    }

    pub fn q(&self, l: i64) -> LinMatrix {
        let m = self.wrap(l);
        if m < self.h() {
            LinMatrix::build(1, self.dim(m), |_, j| single(self.lie, Generator::q(m, j)))
        } else {
            let k = self.n() - m;
            let k = if m == self.h() { m } else { k };
            let sign = self.setup.pq_sign(k as i64);
            LinMatrix::build(self.dim(k), 1, |i, _| single(self.lie, Generator::p(k, i)))
                .transpose()
                .scale(&sign)
        }
    }

    /// Factors of `q_l A_l^{s_l} B_{l−1} ⋯ B_k A_k^{s_k} p_k`, leftmost first.
    pub fn path_factors(&self, k: i64, l: i64, s: &[usize]) -> Vec<LinMatrix> {
        assert_eq!(s.len() as i64, l - k + 1);
        let mut out = vec![self.q(l)];
        for idx in (k..=l).rev() {
            for _ in 0..s[(idx - k) as usize] {
                out.push(self.a(idx));
            }
            if idx > k {
                out.push(self.b(idx - 1));
            }
        }
        out.push(self.p(k));
        out
    }
}

/// A coefficient ring for evaluating symbolic matrix products.
pub trait Coeffs {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn lift(&self, x: &LieElement) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

/// `S(a)`, the classical functions.
pub struct Classical;

impl Coeffs for Classical {
    type E = PolyFun;
    fn zero(&self) -> PolyFun {
        PolyFun::zero()
    }
    fn one(&self) -> PolyFun {
        PolyFun::one()
    }
    fn lift(&self, x: &LieElement) -> PolyFun {
        PolyFun::linear(x)
    }
    fn add(&self, a: &PolyFun, b: &PolyFun) -> PolyFun {
        a + b
    }
    fn mul(&self, a: &PolyFun, b: &PolyFun) -> PolyFun {
        a * b
    }
}

impl Coeffs for Algebra {
    type E = NCPoly;
    fn zero(&self) -> NCPoly {
        NCPoly::zero()
    }
    fn one(&self) -> NCPoly {
        NCPoly::one()
    }
    fn lift(&self, x: &LieElement) -> NCPoly {
        let mut out = NCPoly::zero();
        for (g, c) in normalize(x.clone()) {
            out.add_term(vec![g], c);
        }
        out
    }
    fn add(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        a + b
    }
    fn mul(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        self.multiply(a, b)
    }
}

/// Row-major product matrix of ring elements, factors kept in order.
pub fn product<C: Coeffs>(ring: &C, factors: &[LinMatrix]) -> Vec<Vec<C::E>> {
    let Some(first) = factors.first() else {
        return vec![vec![ring.one()]];
    };
    let mut acc: Vec<Vec<C::E>> = (0..first.rows())
        .map(|i| {
            (0..first.cols())
                .map(|j| ring.lift(first.entry(i, j)))
                .collect()
        })
        .collect();
    for f in &factors[1..] {
        let inner = f.rows();
        let mut next = vec![vec![ring.zero(); f.cols()]; acc.len()];
        for (i, row) in acc.iter().enumerate() {
            for j in 0..f.cols() {
                let mut s = ring.zero();
                for (k, x) in row.iter().enumerate().take(inner) {
                    let e = f.entry(k, j);
                    if e.is_empty() {
                        continue;
                    }
                    s = ring.add(&s, &ring.mul(x, &ring.lift(e)));
                }
                next[i][j] = s;
            }
        }
        acc = next;
    }
    acc
}

/// The `1×1` product, or zero when some factor has an empty dimension.
pub fn scalar_product<C: Coeffs>(ring: &C, factors: &[LinMatrix]) -> C::E {
    let m = product(ring, factors);
    m.first()
        .and_then(|r| r.first())
        .cloned()
        .unwrap_or_else(|| ring.zero())
}

/// `Tr` of a square symbolic product.
pub fn trace_product<C: Coeffs>(ring: &C, factors: &[LinMatrix]) -> C::E {
    let m = product(ring, factors);
    let mut s = ring.zero();
    for (i, row) in m.iter().enumerate() {
        s = ring.add(&s, &row[i]);
    }
    s
}
