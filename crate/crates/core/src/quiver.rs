//! Points of the quadratic chainsaw quiver: moment-map residuals, exact
//! sampling on the zero locus, the Levi group action, stability, the
//! factorisation morphism, and Jacobian probes.
//!
//! A [`QuiverPoint`] stores only the independent window
//! (`A_l` for `0 ≤ l ≤ N/2`, `B_l` and `q_l` for `0 ≤ l < N/2`, `p_l` for
//! `0 < l ≤ N/2`); the other half of the cyclic data is derived through the
//! adjoint calculus of [`QuadraticSetup`] whenever it is needed.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::matrix::Matrix;
use crate::quadratic::QuadraticSetup;
use crate::rational::{q, Q};
use crate::upoly::UPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverPoint {
    setup: Arc<QuadraticSetup>,
    a: Vec<Matrix>,
    b: Vec<Matrix>,
    p: Vec<Matrix>,
    q: Vec<Matrix>,
}

/// The whole `Z/N`-indexed collection, derived half included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullPoint {
    pub a: Vec<Matrix>,
    pub b: Vec<Matrix>,
    pub p: Vec<Matrix>,
    pub q: Vec<Matrix>,
}

impl FullPoint {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    fn at(&self, l: i64) -> usize {
        l.rem_euclid(self.n() as i64) as usize
    }

    pub fn a(&self, l: i64) -> &Matrix {
        &self.a[self.at(l)]
    }

    pub fn b(&self, l: i64) -> &Matrix {
        &self.b[self.at(l)]
    }

    pub fn p(&self, l: i64) -> &Matrix {
        &self.p[self.at(l)]
    }

    pub fn q(&self, l: i64) -> &Matrix {
        &self.q[self.at(l)]
    }

    /// `A_{l+1}B_l − B_lA_l + p_{l+1}q_l` for every `l ∈ Z/N`.
    pub fn residuals(&self) -> Vec<Matrix> {
        (0..self.n() as i64)
            .map(|l| {
                residual(
                    self.a(l + 1),
                    self.b(l),
                    self.a(l),
                    self.p(l + 1),
                    self.q(l),
                )
            })
            .collect()
    }
}

fn residual(a_next: &Matrix, b: &Matrix, a: &Matrix, p_next: &Matrix, ql: &Matrix) -> Matrix {
    let t = &(a_next * b) - &(b * a);
    &t + &(p_next * ql)
}

impl QuiverPoint {
    /// Builds a point from independent data, checking shapes and the
    /// symmetry of `A_0`, `A_{N/2}`.
    pub fn new(
        setup: Arc<QuadraticSetup>,
        a: Vec<Matrix>,
        b: Vec<Matrix>,
        p: Vec<Matrix>,
        q: Vec<Matrix>,
    ) -> Result<Self> {
        let dims = setup.dims();
        let h = dims.half();
        let d = dims.d();
        let bad = |what: String| Err(Error::DimensionMismatch(what));
        if a.len() != h + 1 || b.len() != h || p.len() != h || q.len() != h {
            return bad(format!(
                "window sizes a={} b={} p={} q={}",
                a.len(),
                b.len(),
                p.len(),
                q.len()
            ));
        }
        for l in 0..=h {
            if a[l].shape() != (d[l], d[l]) {
                return bad(format!("A_{l} has shape {:?}", a[l].shape()));
            }
            if dims.is_outer(l) && !a[l].is_symmetric() {
                return bad(format!("A_{l} must be symmetric"));
            }
        }
        for l in 0..h {
            if b[l].shape() != (d[l + 1], d[l]) {
                return bad(format!("B_{l} has shape {:?}", b[l].shape()));
            }
            if q[l].shape() != (1, d[l]) {
                return bad(format!("q_{l} has shape {:?}", q[l].shape()));
            }
            if p[l].shape() != (d[l + 1], 1) {
                return bad(format!("p_{} has shape {:?}", l + 1, p[l].shape()));
            }
        }
        Ok(QuiverPoint { setup, a, b, p, q })
    }

    pub fn zero(setup: Arc<QuadraticSetup>) -> Self {
        let d = setup.dims().d().to_vec();
        let h = setup.dims().half();
        let a = (0..=h).map(|l| Matrix::zeros(d[l], d[l])).collect();
        let b = (0..h).map(|l| Matrix::zeros(d[l + 1], d[l])).collect();
        let p = (0..h).map(|l| Matrix::zeros(d[l + 1], 1)).collect();
        let q = (0..h).map(|l| Matrix::zeros(1, d[l])).collect();
        QuiverPoint { setup, a, b, p, q }
    }

    pub fn setup(&self) -> &Arc<QuadraticSetup> {
        &self.setup
    }

    pub fn a(&self, l: usize) -> &Matrix {
        &self.a[l]
    }

    pub fn b(&self, l: usize) -> &Matrix {
        &self.b[l]
    }

    /// `p_l` for `1 ≤ l ≤ N/2`.
    pub fn p(&self, l: usize) -> &Matrix {
        &self.p[l - 1]
    }

    pub fn q(&self, l: usize) -> &Matrix {
        &self.q[l]
    }

    pub fn set_a(&mut self, l: usize, m: Matrix) {
        assert_eq!(m.shape(), self.a[l].shape());
        self.a[l] = m;
    }

    pub fn set_b(&mut self, l: usize, m: Matrix) {
        assert_eq!(m.shape(), self.b[l].shape());
        self.b[l] = m;
    }

    pub fn set_p(&mut self, l: usize, m: Matrix) {
        assert_eq!(m.shape(), self.p[l - 1].shape());
        self.p[l - 1] = m;
    }

    pub fn set_q(&mut self, l: usize, m: Matrix) {
        assert_eq!(m.shape(), self.q[l].shape());
        self.q[l] = m;
    }

    /// `self + t·dir`, coordinatewise.
    pub fn axpy(&self, t: &Q, dir: &QuiverPoint) -> QuiverPoint {
        let comb = |x: &[Matrix], y: &[Matrix]| -> Vec<Matrix> {
            x.iter().zip(y).map(|(a, b)| a + &b.scale(t)).collect()
        };
        QuiverPoint {
            setup: self.setup.clone(),
            a: comb(&self.a, &dir.a),
            b: comb(&self.b, &dir.b),
            p: comb(&self.p, &dir.p),
            q: comb(&self.q, &dir.q),
        }
    }

    /// Extends the window to all of `Z/N` through the selfadjointness
    /// conditions `A_l* = A_{−l}`, `B_l* = B_{−l−1}`, `p_l* = q_{−l}`.
    pub fn full(&self) -> FullPoint {
        let s = &self.setup;
        let n = s.dims().n();
        let h = s.dims().half();
        let mut a = vec![Matrix::zeros(0, 0); n];
        let mut b = vec![Matrix::zeros(0, 0); n];
        let mut p = vec![Matrix::zeros(0, 0); n];
        let mut qv = vec![Matrix::zeros(0, 0); n];
        for l in 0..=h {
            a[l] = self.a[l].clone();
            if l > 0 && l < h {
                a[n - l] = s.adjoint_a(l as i64, &self.a[l]).expect("window shapes");
            }
        }
        for l in 0..h {
            b[l] = self.b[l].clone();
            b[n - l - 1] = s.adjoint_b(l as i64, &self.b[l]).expect("window shapes");
            qv[l] = self.q[l].clone();
            p[(n - l) % n] = s.derive_qp(l as i64, &self.q[l]).expect("window shapes");
        }
        for l in 1..=h {
            p[l] = self.p[l - 1].clone();
            qv[n - l] = s
                .derive_pq(l as i64, &self.p[l - 1])
                .expect("window shapes");
        }
        FullPoint { a, b, p, q: qv }
    }

    /// `μ_l` for the independent window `l = 0, …, N/2 − 1`.
    pub fn moment_residuals(&self) -> Vec<Matrix> {
        let h = self.setup.dims().half();
        (0..h)
            .map(|l| {
                residual(
                    &self.a[l + 1],
                    &self.b[l],
                    &self.a[l],
                    &self.p[l],
                    &self.q[l],
                )
            })
            .collect()
    }

    pub fn is_on_zero_locus(&self) -> bool {
        self.moment_residuals().iter().all(Matrix::is_zero)
    }

    /// Whether `V` is generated from the images of all `p_l` under `A`, `B`
    /// on the full cyclic quiver.
    pub fn is_stable(&self) -> bool {
        let f = self.full();
        let n = f.n();
        let mut spans: Vec<EchelonBasis> =
            (0..n).map(|l| EchelonBasis::new(f.a[l].rows())).collect();
        let mut queue: Vec<(usize, Vec<Q>)> = Vec::new();
        for l in 0..n {
            let v = f.p[l].entries().to_vec();
            if spans[l].insert(&v) {
                queue.push((l, v));
            }
        }
        while let Some((l, v)) = queue.pop() {
            let col = Matrix::column(v);
            let av = (&f.a[l] * &col).entries().to_vec();
            if spans[l].insert(&av) {
                queue.push((l, av));
            }
            let m = (l + 1) % n;
            let bv = (&f.b[l] * &col).entries().to_vec();
            if spans[m].insert(&bv) {
                queue.push((m, bv));
            }
        }
        spans.iter().all(EchelonBasis::is_full)
    }

    /// Whether no nonzero `A,B`-invariant graded subspace lies in `∩ Ker q_l`;
    /// equivalently the covectors `q_l` generate `V*` under right
    /// multiplication by `A` and `B`.
    pub fn is_costable(&self) -> bool {
        let f = self.full();
        let n = f.n();
        let mut spans: Vec<EchelonBasis> =
            (0..n).map(|l| EchelonBasis::new(f.a[l].rows())).collect();
        let mut queue: Vec<(usize, Vec<Q>)> = Vec::new();
        for l in 0..n {
            let v = f.q[l].entries().to_vec();
            if spans[l].insert(&v) {
                queue.push((l, v));
            }
        }
        while let Some((l, v)) = queue.pop() {
            let row = Matrix::row(v);
            let xa = (&row * &f.a[l]).entries().to_vec();
            if spans[l].insert(&xa) {
                queue.push((l, xa));
            }
            let prev = (l + n - 1) % n;
            let xb = (&row * &f.b[prev]).entries().to_vec();
            if spans[prev].insert(&xb) {
                queue.push((prev, xb));
            }
        }
        spans.iter().all(EchelonBasis::is_full)
    }

    /// The factorisation morphism: characteristic polynomials of `A_l`, `l ∈ I`.
    pub fn upsilon(&self) -> ConfigurationPoint {
        ConfigurationPoint {
            polys: self.a.iter().map(Matrix::charpoly).collect(),
        }
    }

    /// Applies `g ∈ G_{−ε}(V_•)`.
    pub fn act(&self, g: &GroupElement) -> Result<QuiverPoint> {
        let h = self.setup.dims().half();
        if g.g.len() != h + 1 {
            return Err(Error::DimensionMismatch("group element length".into()));
        }
        for l in 0..=h {
            if g.g[l].shape() != self.a[l].shape() {
                return Err(Error::DimensionMismatch(format!("g_{l} shape")));
            }
        }
        let inv = &g.inv;
        let a = (0..=h).map(|l| &(&g.g[l] * &self.a[l]) * &inv[l]).collect();
        let b = (0..h)
            .map(|l| &(&g.g[l + 1] * &self.b[l]) * &inv[l])
            .collect();
        let p = (0..h).map(|l| &g.g[l + 1] * &self.p[l]).collect();
        let q = (0..h).map(|l| &self.q[l] * &inv[l]).collect();
        Ok(QuiverPoint {
            setup: self.setup.clone(),
            a,
            b,
            p,
            q,
        })
    }

    /// Independent coordinates: symmetric entries (`i ≤ j`) of `A_0`,
    /// `A_{N/2}`; all entries of the inner `A_l`, of `B_l`, `p_l`, `q_l`.
    pub fn coordinate_directions(&self) -> Vec<QuiverPoint> {
        let dims = self.setup.dims();
        let h = dims.half();
        let zero = QuiverPoint::zero(self.setup.clone());
        let mut dirs = Vec::new();
        for l in 0..=h {
            let d = dims.d()[l];
            for i in 0..d {
                let start = if dims.is_outer(l) { i } else { 0 };
                for j in start..d {
                    let mut e = Matrix::zeros(d, d);
                    e[(i, j)] = Q::one();
                    e[(j, i)] = Q::one();
                    if !dims.is_outer(l) && i != j {
                        e[(j, i)] = Q::zero();
                    }
                    let mut z = zero.clone();
                    z.a[l] = e;
                    dirs.push(z);
                }
            }
        }
        for l in 0..h {
            let (r, c) = self.b[l].shape();
            for i in 0..r {
                for j in 0..c {
                    let mut z = zero.clone();
                    z.b[l][(i, j)] = Q::one();
                    dirs.push(z);
                }
            }
        }
        for l in 0..h {
            for i in 0..self.p[l].rows() {
                let mut z = zero.clone();
                z.p[l][(i, 0)] = Q::one();
                dirs.push(z);
            }
        }
        for l in 0..h {
            for j in 0..self.q[l].cols() {
                let mut z = zero.clone();
                z.q[l][(0, j)] = Q::one();
                dirs.push(z);
            }
        }
        dirs
    }

    /// Differential of `(μ_l)_{l < N/2}` at this point along `dir`.
    pub fn moment_differential(&self, dir: &QuiverPoint) -> Vec<Q> {
        let h = self.setup.dims().half();
        let mut out = Vec::new();
        for l in 0..h {
            let t = &(&(&dir.a[l + 1] * &self.b[l]) + &(&self.a[l + 1] * &dir.b[l]))
                - &(&(&dir.b[l] * &self.a[l]) + &(&self.b[l] * &dir.a[l]));
            let t = &(&t + &(&dir.p[l] * &self.q[l])) + &(&self.p[l] * &dir.q[l]);
            out.extend(t.entries().iter().cloned());
        }
        out
    }

    /// Differential of the power sums `Tr A_l^k`, `1 ≤ k ≤ d_l`, which
    /// generate the same functions as the characteristic-polynomial
    /// coefficients (Newton's identities are triangular and invertible over `Q`).
    pub fn upsilon_differential(&self, dir: &QuiverPoint) -> Vec<Q> {
        let mut out = Vec::new();
        for (a, da) in self.a.iter().zip(&dir.a) {
            let mut pw = Matrix::identity(a.rows());
            for k in 1..=a.rows() {
                out.push((&pw * da).trace() * q(k as i64));
                pw = &pw * a;
            }
        }
        out
    }

    pub fn jacobian_rank_probe(&self) -> JacobianProbe {
        let dirs = self.coordinate_directions();
        let ncoords = dirs.len();
        let moment_cols: Vec<Vec<Q>> = dirs.iter().map(|d| self.moment_differential(d)).collect();
        let ups_cols: Vec<Vec<Q>> = dirs.iter().map(|d| self.upsilon_differential(d)).collect();
        let neq = moment_cols.first().map_or(0, Vec::len);
        let nups = ups_cols.first().map_or(0, Vec::len);
        let mut jac = Matrix::zeros(neq, ncoords);
        let mut stacked = Matrix::zeros(neq + nups, ncoords);
        for (j, (mc, uc)) in moment_cols.iter().zip(&ups_cols).enumerate() {
            for i in 0..neq {
                jac[(i, j)] = mc[i].clone();
                stacked[(i, j)] = mc[i].clone();
            }
            for i in 0..nups {
                stacked[(neq + i, j)] = uc[i].clone();
            }
        }
        let dims = self.setup.dims();
        let h = dims.half();
        let d = dims.d();
        let expected_codim = (0..h).map(|l| d[l + 1] * d[l]).sum();
        JacobianProbe {
            coordinates: ncoords,
            rank: jac.rank(),
            expected_codim,
            fiber_tangent_dim: ncoords - stacked.rank(),
            expected_fiber_dim: dims.group_dim() + d.iter().sum::<usize>(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianProbe {
    pub coordinates: usize,
    pub rank: usize,
    pub expected_codim: usize,
    pub fiber_tangent_dim: usize,
    pub expected_fiber_dim: usize,
}

impl JacobianProbe {
    pub fn is_complete_intersection_like(&self) -> bool {
        self.rank == self.expected_codim && self.fiber_tangent_dim == self.expected_fiber_dim
    }
}

/// Characteristic polynomials of `A_l`, `l ∈ I`; a point of `A^{d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigurationPoint {
    pub polys: Vec<UPoly>,
}

/// An element of `O(V_0) × O(V_{N/2}) × Π GL(V_l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    g: Vec<Matrix>,
    inv: Vec<Matrix>,
}

impl GroupElement {
    pub fn new(setup: &QuadraticSetup, g: Vec<Matrix>) -> Result<Self> {
        let dims = setup.dims();
        if g.len() != dims.half() + 1 {
            return Err(Error::DimensionMismatch(
                "group element needs one block per vertex in I".into(),
            ));
        }
        let mut inv = Vec::with_capacity(g.len());
        for (l, gl) in g.iter().enumerate() {
            let d = dims.d()[l];
            if gl.shape() != (d, d) {
                return Err(Error::DimensionMismatch(format!("g_{l} shape")));
            }
            let i = gl.inverse().ok_or(Error::NotInvertible(l))?;
            if dims.is_outer(l) && gl.transpose() != i {
                return Err(Error::NotOrthogonal(l));
            }
            inv.push(i);
        }
        Ok(GroupElement { g, inv })
    }

    pub fn identity(setup: &QuadraticSetup) -> Self {
        let g: Vec<Matrix> = setup
            .dims()
            .d()
            .iter()
            .map(|&d| Matrix::identity(d))
            .collect();
        GroupElement { inv: g.clone(), g }
    }

    pub fn block(&self, l: usize) -> &Matrix {
        &self.g[l]
    }

    pub fn inverse_block(&self, l: usize) -> &Matrix {
        &self.inv[l]
    }

    /// Random element: Cayley transforms of random antisymmetric matrices on
    /// `I₁` (composed with a reflection when `reflect` is set), random
    /// invertible integer matrices on `I₀`.
    pub fn random(setup: &QuadraticSetup, bound: i64, reflect: bool, rng: &mut impl Rng) -> Self {
        let dims = setup.dims();
        let mut g = Vec::new();
        for l in dims.vertices() {
            let d = dims.d()[l];
            let m = if dims.is_outer(l) {
                let mut k = Matrix::zeros(d, d);
                for i in 0..d {
                    for j in i + 1..d {
                        let x = q(rng.gen_range(-bound..=bound));
                        k[(i, j)] = x.clone();
                        k[(j, i)] = -x;
                    }
                }
                let mut o = cayley(&k);
                if reflect && d > 0 {
                    let mut r = Matrix::identity(d);
                    r[(0, 0)] = -Q::one();
                    o = &r * &o;
                }
                o
            } else {
                loop {
                    let m = random_matrix(d, d, bound, rng);
                    if !m.determinant().is_zero() {
                        break m;
                    }
                }
            };
            g.push(m);
        }
        GroupElement::new(setup, g).expect("constructed group element is valid")
    }
}

/// `(1 − K)(1 + K)⁻¹`, orthogonal for antisymmetric `K` (`1 + K` is always
/// invertible since `K` has purely imaginary spectrum).
pub fn cayley(k: &Matrix) -> Matrix {
    let n = k.rows();
    let id = Matrix::identity(n);
    let plus = (&id + k)
        .inverse()
        .expect("1 + K invertible for antisymmetric K");
    &(&id - k) * &plus
}

fn random_matrix(r: usize, c: usize, bound: i64, rng: &mut impl Rng) -> Matrix {
    let data = (0..r * c)
        .map(|_| q(rng.gen_range(-bound..=bound)))
        .collect();
    Matrix::from_vec(r, c, data)
}

fn random_symmetric(d: usize, bound: i64, rng: &mut impl Rng) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let x = q(rng.gen_range(-bound..=bound));
            m[(i, j)] = x.clone();
            m[(j, i)] = x;
        }
    }
    m
}

/// Knobs for [`sample_point_with`].
#[derive(Clone, Debug)]
pub struct SamplerConfig {
    /// Entries are drawn from `[−bound, bound]`.
    pub bound: i64,
    /// Probability of forcing an individual `p`/`q` entry to zero; positive
    /// values reach the non-stable strata.
    pub sparsity: f64,
    /// Draws allowed per vertex while looking for coprime spectra.
    pub budget: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            bound: 4,
            sparsity: 0.0,
            budget: 500,
        }
    }
}

/// Unique `X` with `P X − X Q = C`, provided `P` and `Q` have coprime
/// characteristic polynomials.
pub fn solve_sylvester(p: &Matrix, qm: &Matrix, c: &Matrix) -> Option<Matrix> {
    let (m, n) = c.shape();
    if m == 0 || n == 0 {
        return Some(Matrix::zeros(m, n));
    }
    let sys = &Matrix::identity(n).kron(p) - &qm.transpose().kron(&Matrix::identity(m));
    let x = sys.solve(&c.vectorize())?;
    Some(Matrix::unvectorize(m, n, &x))
}

/// A point of `sM^ε_d` drawn with seed `seed`; see [`sample_point_with`].
pub fn sample_point(setup: &Arc<QuadraticSetup>, bound: i64, seed: u64) -> Result<QuiverPoint> {
    sample_point_with(
        setup,
        &SamplerConfig {
            bound,
            ..SamplerConfig::default()
        },
        seed,
    )
}

/// Draws `A_l` with pairwise coprime neighbouring spectra, random `p`, `q`,
/// and solves each `A_{l+1}B_l − B_lA_l = −p_{l+1}q_l` exactly for `B_l`.
pub fn sample_point_with(
    setup: &Arc<QuadraticSetup>,
    cfg: &SamplerConfig,
    seed: u64,
) -> Result<QuiverPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = setup.dims();
    let h = dims.half();
    let d = dims.d().to_vec();
    let mut a: Vec<Matrix> = Vec::with_capacity(h + 1);
    for l in 0..=h {
        let mut tries = 0;
        let m = loop {
            tries += 1;
            if tries > cfg.budget {
                return Err(Error::RejectionBudget(cfg.budget));
            }
            let m = if dims.is_outer(l) {
                random_symmetric(d[l], cfg.bound, &mut rng)
            } else {
                random_matrix(d[l], d[l], cfg.bound, &mut rng)
            };
            if l == 0 || a[l - 1].charpoly().coprime(&m.charpoly()) {
                break m;
            }
        };
        a.push(m);
    }
    let sparse = |rows: usize, cols: usize, rng: &mut ChaCha8Rng| {
        let mut m = random_matrix(rows, cols, cfg.bound, rng);
        for i in 0..rows {
            for j in 0..cols {
                if cfg.sparsity > 0.0 && rng.gen_bool(cfg.sparsity) {
                    m[(i, j)] = Q::zero();
                }
            }
        }
        m
    };
    let p: Vec<Matrix> = (0..h).map(|l| sparse(d[l + 1], 1, &mut rng)).collect();
    let qv: Vec<Matrix> = (0..h).map(|l| sparse(1, d[l], &mut rng)).collect();
    let mut b = Vec::with_capacity(h);
    for l in 0..h {
        let rhs = -&(&p[l] * &qv[l]);
        let x = solve_sylvester(&a[l + 1], &a[l], &rhs)
            .expect("coprime spectra give a unique solution");
        b.push(x);
    }
    QuiverPoint::new(setup.clone(), a, b, p, qv)
}

/// A point of the type-A coadjoint space `a_d*`: `(A_l, A′_l, B_l, p_l, q_l)`
/// for all `l ∈ Z/N`, with `d̃` symmetric so that `σ` acts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeAPoint {
    pub setup: Arc<QuadraticSetup>,
    pub a: Vec<Matrix>,
    pub a_prime: Vec<Matrix>,
    pub b: Vec<Matrix>,
    pub p: Vec<Matrix>,
    pub q: Vec<Matrix>,
}

impl TypeAPoint {
    fn n(&self) -> usize {
        self.a.len()
    }

    fn at(&self, l: i64) -> usize {
        l.rem_euclid(self.n() as i64) as usize
    }

    /// `B_lA_l + A′_{l+1}B_l + p_{l+1}q_l` for all `l`.
    pub fn s_residuals(&self) -> Vec<Matrix> {
        let n = self.n();
        (0..n)
            .map(|l| {
                let m = (l + 1) % n;
                let t = &(&self.b[l] * &self.a[l]) + &(&self.a_prime[m] * &self.b[l]);
                &t + &(&self.p[m] * &self.q[l])
            })
            .collect()
    }

    /// `A_l ↦ −A′*_{−l}`, `A′_l ↦ −A*_{−l}`, `B_l ↦ B*_{−l−1}`,
    /// `p_l ↦ q*_{−l}`, `q_l ↦ p*_{−l}`.
    ///
    /// On `p`, `q` the star is the transpose up to the symplectic sign:
    /// `q ↦ qᵀ` and `p ↦ −pᵀ`, so `p** = −p` and `q** = −q`.
    pub fn sigma(&self) -> TypeAPoint {
        let s = &self.setup;
        let n = self.n() as i64;
        let mut out = self.clone();
        for l in 0..n {
            let i = self.at(l);
            let m = self.at(-l);
            out.a[i] = -&s.adjoint_a(-l, &self.a_prime[m]).expect("shape");
            out.a_prime[i] = -&s.adjoint_a(-l, &self.a[m]).expect("shape");
            let src = self.at(-l - 1);
            out.b[i] = s.adjoint_b(-l - 1, &self.b[src]).expect("shape");
            out.p[i] = self.q[m].transpose();
            out.q[i] = -&self.p[m].transpose();
        }
        out
    }

    /// Random point of `S_d` (type A): `A`, `A′`, `p`, `q` random, then
    /// `B_l` solved from `A′_{l+1}B_l + B_lA_l = −p_{l+1}q_l`.
    pub fn sample_on_s(setup: &Arc<QuadraticSetup>, bound: i64, seed: u64) -> Result<TypeAPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims = setup.dims();
        let n = dims.n();
        let dd: Vec<usize> = (0..n as i64).map(|l| dims.full(l)).collect();
        let a: Vec<Matrix> = dd
            .iter()
            .map(|&d| random_matrix(d, d, bound, &mut rng))
            .collect();
        let mut a_prime: Vec<Matrix> = Vec::with_capacity(n);
        for l in 0..n {
            let prev = (l + n - 1) % n;
            let neg_prev = -&a[prev];
            let mut tries = 0;
            let m = loop {
                tries += 1;
                if tries > 500 {
                    return Err(Error::RejectionBudget(500));
                }
                let m = random_matrix(dd[l], dd[l], bound, &mut rng);
                if m.charpoly().coprime(&neg_prev.charpoly()) {
                    break m;
                }
            };
            a_prime.push(m);
        }
        let p: Vec<Matrix> = dd
            .iter()
            .map(|&d| random_matrix(d, 1, bound, &mut rng))
            .collect();
        let qv: Vec<Matrix> = dd
            .iter()
            .map(|&d| random_matrix(1, d, bound, &mut rng))
            .collect();
        let mut b = Vec::with_capacity(n);
        for l in 0..n {
            let m = (l + 1) % n;
            let rhs = -&(&p[m] * &qv[l]);
            let x = solve_sylvester(&a_prime[m], &(-&a[l]), &rhs).expect("coprime spectra");
            b.push(x);
        }
        Ok(TypeAPoint {
            setup: setup.clone(),
            a,
            a_prime,
            b,
            p,
            q: qv,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn setup(n: usize, d: &[usize]) -> Arc<QuadraticSetup> {
        Arc::new(QuadraticSetup::from_dims(n, d.to_vec()).unwrap())
    }

    fn s(x: i64) -> Matrix {
        Matrix::from_i64(&[&[x]])
    }

    fn c2_witness() -> QuiverPoint {
        let st = setup(4, &[0, 1, 1]);
        let mut pt = QuiverPoint::zero(st);
        pt.set_a(1, s(3));
        pt.set_a(2, s(1));
        pt.set_b(1, s(1));
        pt.set_p(1, s(5));
        pt.set_p(2, s(2));
        pt.set_q(1, s(1));
        pt
    }

    #[test]
    fn residual_examples() {
        let st = setup(4, &[0, 1, 1]);
        assert!(QuiverPoint::zero(st)
            .moment_residuals()
            .iter()
            .all(Matrix::is_zero));
        assert!(c2_witness().moment_residuals()[1].is_zero());
        let mut pt = QuiverPoint::zero(setup(2, &[1, 1]));
        pt.set_a(1, s(2));
        pt.set_b(0, s(-2));
        pt.set_p(1, s(4));
        pt.set_q(0, s(1));
        assert!(pt.is_on_zero_locus());
    }

    #[test]
    fn scalar_sylvester_solves() {
        let x = solve_sylvester(&s(2), &s(0), &s(-4)).unwrap();
        assert_eq!(x, s(-2));
        let x = solve_sylvester(&s(1), &s(3), &s(-2)).unwrap();
        assert_eq!(x, s(1));
    }

    #[test]
    fn sampled_points_lie_on_the_locus_and_are_reproducible() {
        for (n, d) in [
            (2, vec![1, 1]),
            (2, vec![2, 2]),
            (4, vec![1, 1, 1]),
            (4, vec![2, 1, 1]),
            (4, vec![0, 1, 1]),
        ] {
            let st = setup(n, &d);
            for seed in 0..5 {
                let pt = sample_point(&st, 3, seed).unwrap();
                assert!(pt.is_on_zero_locus());
                assert!(pt.full().residuals().iter().all(Matrix::is_zero));
                assert_eq!(pt, sample_point(&st, 3, seed).unwrap());
            }
        }
    }

    #[test]
    fn derived_residuals_are_adjoints_of_window_residuals() {
        let st = setup(6, &[2, 1, 2, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut pt = QuiverPoint::zero(st.clone());
        for l in 0..=3 {
            let d = st.dims().d()[l];
            let m = if st.dims().is_outer(l) {
                random_symmetric(d, 3, &mut rng)
            } else {
                random_matrix(d, d, 3, &mut rng)
            };
            pt.set_a(l, m);
        }
        for l in 0..3 {
            let (r, c) = pt.b(l).shape();
            pt.set_b(l, random_matrix(r, c, 3, &mut rng));
            pt.set_q(l, random_matrix(1, c, 3, &mut rng));
            pt.set_p(l + 1, random_matrix(r, 1, 3, &mut rng));
        }
        let full = pt.full().residuals();
        let n = 6;
        for l in 0..3usize {
            let derived = &full[n - l - 1];
            let adj = st.adjoint_v(l as i64, l as i64 + 1, &full[l]).unwrap();
            assert_eq!(derived, &-&adj);
        }
    }

    #[test]
    fn stability_examples() {
        assert!(QuiverPoint::zero(setup(4, &[0, 0, 0])).is_stable());
        assert!(QuiverPoint::zero(setup(4, &[0, 0, 0])).is_costable());
        assert!(!QuiverPoint::zero(setup(2, &[1, 1])).is_stable());
        let mut pt = QuiverPoint::zero(setup(2, &[1, 1]));
        pt.set_p(1, s(1));
        pt.set_b(0, s(1));
        assert!(pt.is_stable());
    }

    #[test]
    fn upsilon_examples() {
        let mut pt = QuiverPoint::zero(setup(2, &[1, 1]));
        pt.set_a(1, s(2));
        let ups = pt.upsilon();
        assert_eq!(
            ups.polys,
            vec![UPoly::from_i64(&[0, 1]), UPoly::from_i64(&[-2, 1])]
        );
        let mut pt = QuiverPoint::zero(setup(2, &[0, 2]));
        pt.set_a(1, Matrix::from_i64(&[&[1, 2], &[2, 0]]));
        assert_eq!(pt.upsilon().polys[1], UPoly::from_i64(&[-4, -1, 1]));
        let pt = QuiverPoint::zero(setup(4, &[2, 1, 3]));
        for (poly, d) in pt.upsilon().polys.iter().zip([2, 1, 3]) {
            let mut c = vec![0; d + 1];
            c[d] = 1;
            assert_eq!(poly, &UPoly::from_i64(&c));
        }
    }

    #[test]
    fn action_examples() {
        let pt = c2_witness();
        let st = pt.setup().clone();
        assert_eq!(pt.act(&GroupElement::identity(&st)).unwrap(), pt);
        // g_1 = 1/c with c = 3, g_2 = -1: B_1 -> c s B_1, p_1 -> p_1 / c, p_2 -> s p_2, p_3 -> c p_3
        let third = Matrix::from_vec(1, 1, vec![Q::one() / q(3)]);
        let g = GroupElement::new(&st, vec![Matrix::zeros(0, 0), third, s(-1)]).unwrap();
        let moved = pt.act(&g).unwrap().full();
        let orig = pt.full();
        assert_eq!(moved.b(1), &orig.b(1).scale(&q(-3)));
        assert_eq!(moved.p(1), &orig.p(1).scale(&(Q::one() / q(3))));
        assert_eq!(moved.p(2), &orig.p(2).scale(&q(-1)));
        assert_eq!(moved.p(3), &orig.p(3).scale(&q(3)));
        assert!(GroupElement::new(&st, vec![Matrix::zeros(0, 0), s(0), s(1)]).is_err());
        assert!(GroupElement::new(&st, vec![Matrix::zeros(0, 0), s(1), s(2)]).is_err());
    }

    #[test]
    fn action_is_equivariant_and_preserves_upsilon() {
        let st = setup(4, &[2, 1, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..4 {
            let pt = sample_point(&st, 3, seed).unwrap();
            let g = GroupElement::random(&st, 2, seed % 2 == 0, &mut rng);
            let moved = pt.act(&g).unwrap();
            assert!(moved.is_on_zero_locus());
            assert_eq!(moved.upsilon(), pt.upsilon());
            assert_eq!(moved.is_stable(), pt.is_stable());
            assert_eq!(moved.is_costable(), pt.is_costable());
        }
    }

    #[test]
    fn jacobian_examples() {
        let pt = sample_point(&setup(2, &[1, 1]), 4, 1).unwrap();
        let probe = pt.jacobian_rank_probe();
        assert_eq!((probe.rank, probe.expected_codim), (1, 1));
        assert_eq!(probe.expected_fiber_dim, 2);
        assert_eq!(probe.fiber_tangent_dim, 2);
        let pt = sample_point(&setup(4, &[0, 1, 1]), 4, 2).unwrap();
        assert_eq!(pt.jacobian_rank_probe().rank, 1);
    }

    #[test]
    fn sigma_preserves_s_and_squares_to_sign() {
        let st = setup(4, &[1, 2, 1]);
        for seed in 0..3 {
            let pt = TypeAPoint::sample_on_s(&st, 3, seed).unwrap();
            assert!(pt.s_residuals().iter().all(Matrix::is_zero));
            let img = pt.sigma();
            assert!(img.s_residuals().iter().all(Matrix::is_zero));
            let sq = img.sigma();
            assert_eq!(sq.a, pt.a);
            assert_eq!(sq.a_prime, pt.a_prime);
            assert_eq!(sq.b, pt.b);
            let neg_p: Vec<Matrix> = pt.p.iter().map(|m| -m).collect();
            let neg_q: Vec<Matrix> = pt.q.iter().map(|m| -m).collect();
            assert_eq!(sq.p, neg_p);
            assert_eq!(sq.q, neg_q);
        }
    }
}
