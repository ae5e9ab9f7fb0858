//! Dimension vectors, the bilinear forms on `W` and `V`, and the adjoint
//! calculus of the quadratic chainsaw quiver (`ε = −1`: `W` symplectic, `V`
//! orthogonal).
//!
//! Bases are fixed once. `V_0` and `V_{N/2}` carry orthonormal bases, and for
//! `0 < l < N/2` the bases of `V_l` and `V_{−l}` are dual to each other, so the
//! adjoint of a linear map between graded pieces of `V` is its transpose.
//! `W` has basis `w_0, …, w_{N−1}` with `(w_m, w_{N−1−m}) = ε_m` for
//! `m < N/2` and antisymmetry for the other half. The signs `ε_m` are `+1`
//! except for the middle pair `m = N/2 − 1`, which carries `−1`; this is the
//! sign pattern under which `p ↦ p*` reproduces the worked `C₂` and `C̃₁`
//! coordinates (`q_2 = −p_2`, `q_3 = p_1`, `q_1 = p_3` for `N = 4`;
//! `q_0 = p_0`, `q_1 = −p_1` for `N = 2`).

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Q;

/// `N` together with `d_l` for `l ∈ I = {0, …, N/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimVector {
    n: usize,
    d: Vec<usize>,
}

impl DimVector {
    pub fn new(n: usize, d: Vec<usize>) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidDims(format!(
                "N must be even and at least 2, got {n}"
            )));
        }
        if d.len() != n / 2 + 1 {
            return Err(Error::InvalidDims(format!(
                "dimension vector must have N/2+1 = {} entries, got {}",
                n / 2 + 1,
                d.len()
            )));
        }
        Ok(DimVector { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half(&self) -> usize {
        self.n / 2
    }

    /// `d_l` for `l ∈ I`.
    pub fn d(&self) -> &[usize] {
        &self.d
    }

    /// Reduces any integer vertex label into `0..N`.
    pub fn wrap(&self, l: i64) -> usize {
        l.rem_euclid(self.n as i64) as usize
    }

    /// `d̃_l` on the full cyclic quiver, `d̃_{N−l} = d_l`.
    pub fn full(&self, l: i64) -> usize {
        let l = self.wrap(l);
        if l <= self.half() {
            self.d[l]
        } else {
            self.d[self.n - l]
        }
    }

    /// `I₁ = {0, N/2}`.
    pub fn is_outer(&self, l: usize) -> bool {
        l == 0 || l == self.half()
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.half()
    }

    pub fn inner(&self) -> impl Iterator<Item = usize> {
        1..self.half()
    }

    /// Total dimension of `V = ⊕_{l ∈ Z/N} V_l`.
    pub fn total(&self) -> usize {
        (0..self.n as i64).map(|l| self.full(l)).sum()
    }

    /// `dim G_{−ε}(V_•) = Σ_{I₁} d(d−1)/2 + Σ_{I₀} d²`.
    pub fn group_dim(&self) -> usize {
        self.vertices()
            .map(|l| {
                let d = self.d[l];
                if self.is_outer(l) {
                    d * d.saturating_sub(1) / 2
                } else {
                    d * d
                }
            })
            .sum()
    }

    pub fn label(&self) -> String {
        let d: Vec<String> = self.d.iter().map(|x| x.to_string()).collect();
        format!("N={},d=({})", self.n, d.join(","))
    }
}

/// The fixed bilinear forms on `W` and `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSetup {
    dims: DimVector,
    form_w: Matrix,
    form_v: Matrix,
    offsets: Vec<usize>,
}

impl QuadraticSetup {
    pub fn new(dims: DimVector) -> Self {
        let n = dims.n();
        let half = dims.half();
        let mut form_w = Matrix::zeros(n, n);
        for m in 0..half {
            let eps = if m + 1 == half { -Q::one() } else { Q::one() };
            form_w[(m, n - 1 - m)] = eps.clone();
            form_w[(n - 1 - m, m)] = -eps;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for l in 0..n as i64 {
            offsets.push(acc);
            acc += dims.full(l);
        }
        offsets.push(acc);
        let mut form_v = Matrix::zeros(acc, acc);
        for l in 0..n {
            let m = (n - l) % n;
            for i in 0..dims.full(l as i64) {
                form_v[(offsets[l] + i, offsets[m] + i)] = Q::one();
            }
        }
        QuadraticSetup {
            dims,
            form_w,
            form_v,
            offsets,
        }
    }

    pub fn from_dims(n: usize, d: Vec<usize>) -> Result<Self> {
        Ok(Self::new(DimVector::new(n, d)?))
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn form_w(&self) -> &Matrix {
        &self.form_w
    }

    pub fn form_v(&self) -> &Matrix {
        &self.form_v
    }

    /// `(w_m, w_{N−1−m})`, for any `m ∈ Z/N`.
    pub fn w_sign(&self, m: i64) -> Q {
        let n = self.dims.n();
        let m = self.dims.wrap(m);
        self.form_w[(m, n - 1 - m)].clone()
    }

    /// Pairing block of `form_V` between `V_l` and `V_{−l}`.
    fn pairing(&self, l: i64) -> Matrix {
        let a = self.dims.wrap(l);
        let b = self.dims.wrap(-l);
        let (da, db) = (self.dims.full(l), self.dims.full(-l));
        let mut m = Matrix::zeros(da, db);
        for i in 0..da {
            for j in 0..db {
                m[(i, j)] = self.form_v[(self.offsets[a] + i, self.offsets[b] + j)].clone();
            }
        }
        m
    }

    fn expect_shape(&self, what: &str, x: &Matrix, shape: (usize, usize)) -> Result<()> {
        if x.shape() != shape {
            return Err(Error::DimensionMismatch(format!(
                "{what}: expected {}x{}, got {}x{}",
                shape.0,
                shape.1,
                x.rows(),
                x.cols()
            )));
        }
        Ok(())
    }

    /// Adjoint of `X: V_src → V_dst` with respect to `form_V`, a map
    /// `V_{−dst} → V_{−src}` characterised by `(Xu, v) = (u, X*v)`.
    pub fn adjoint_v(&self, src: i64, dst: i64, x: &Matrix) -> Result<Matrix> {
        let shape = (self.dims.full(dst), self.dims.full(src));
        self.expect_shape("adjoint", x, shape)?;
        let ps = self.pairing(src);
        let pd = self.pairing(dst);
        let ps_inv = ps.inverse().expect("form_V pairing blocks are invertible");
        Ok(&(&ps_inv * &x.transpose()) * &pd)
    }

    /// `A_{−l} = A_l*`.
    pub fn adjoint_a(&self, l: i64, a: &Matrix) -> Result<Matrix> {
        self.adjoint_v(l, l, a)
    }

    /// `B_{−l−1} = B_l*` for `B_l: V_l → V_{l+1}`.
    pub fn adjoint_b(&self, l: i64, b: &Matrix) -> Result<Matrix> {
        self.adjoint_v(l, l + 1, b)
    }

    /// `q_{−l} = p_l*` for `p_l: W_{l−1} → V_l`, returned as a `1 x d_l`
    /// covector on `V_{−l}`: `(p_l w, v)_V = (w, q_{−l} v)_W`.
    pub fn derive_pq(&self, l: i64, p: &Matrix) -> Result<Matrix> {
        self.expect_shape("p vector", p, (self.dims.full(l), 1))?;
        let pair = self.pairing(l);
        let sign = self.w_sign(l - 1);
        Ok((&p.transpose() * &pair).scale(&(Q::one() / sign)))
    }

    /// `q*` for `q: V_m → W_m`, a vector of `V_{−m}` defined by
    /// `(q v, w)_W = (v, q* w)_V` with `w = w_{N−1−m}`.
    pub fn adjoint_q(&self, m: i64, qv: &Matrix) -> Result<Matrix> {
        self.expect_shape("q covector", qv, (1, self.dims.full(m)))?;
        let pair = self.pairing(m);
        let inv = pair
            .inverse()
            .expect("form_V pairing blocks are invertible");
        Ok((&inv * &qv.transpose()).scale(&self.w_sign(m)))
    }

    /// The vector `p_{−m}` determined by an independent covector `q_m`
    /// through `p_{−m}* = q_m`. Since `p** = −p`, this is `−q_m*`.
    pub fn derive_qp(&self, m: i64, qv: &Matrix) -> Result<Matrix> {
        Ok(-&self.adjoint_q(m, qv)?)
    }

    /// Sign `s` with `q_{−l} = s · p_lᵀ` under the fixed bases.
    pub fn pq_sign(&self, l: i64) -> Q {
        Q::one() / self.w_sign(l - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn setup(n: usize, d: &[usize]) -> QuadraticSetup {
        QuadraticSetup::from_dims(n, d.to_vec()).unwrap()
    }

    fn scalar(x: i64) -> Matrix {
        Matrix::from_i64(&[&[x]])
    }

    #[test]
    fn rejects_odd_n_and_wrong_length() {
        assert!(DimVector::new(3, vec![1, 1]).is_err());
        assert!(DimVector::new(4, vec![1, 1]).is_err());
        assert!(DimVector::new(0, vec![1]).is_err());
    }

    #[test]
    fn full_vector_is_symmetric() {
        let d = DimVector::new(6, vec![1, 2, 3, 4]).unwrap();
        for l in -12..12 {
            assert_eq!(d.full(l), d.full(-l));
        }
        assert_eq!(d.full(4), 3);
        assert_eq!(d.total(), 1 + 2 + 3 + 4 + 3 + 2);
    }

    #[test]
    fn adjoint_examples() {
        let s = setup(4, &[0, 2, 1]);
        let a = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(
            s.adjoint_a(1, &a).unwrap(),
            Matrix::from_i64(&[&[1, 3], &[2, 4]])
        );
        let s1 = setup(4, &[0, 1, 1]);
        assert_eq!(s1.adjoint_a(1, &scalar(2)).unwrap(), scalar(2));
        let sym = Matrix::from_i64(&[&[1, 5], &[5, 0]]);
        let s0 = setup(2, &[2, 1]);
        assert_eq!(s0.adjoint_a(0, &sym).unwrap(), sym);
        assert!(s.adjoint_a(1, &scalar(1)).is_err());
    }

    #[test]
    fn adjoint_b_examples() {
        let s = setup(2, &[1, 1]);
        assert_eq!(s.adjoint_b(0, &scalar(7)).unwrap(), scalar(7));
        let s = setup(4, &[0, 1, 1]);
        assert_eq!(s.adjoint_b(1, &scalar(-3)).unwrap(), scalar(-3));
        let s = setup(4, &[1, 2, 2]);
        let z = Matrix::zeros(2, 2);
        assert!(s.adjoint_b(1, &z).unwrap().is_zero());
        assert!(s.adjoint_b(0, &Matrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn sign_witnesses() {
        let s = setup(4, &[0, 1, 1]);
        let x = scalar(5);
        assert_eq!(s.derive_pq(2, &x).unwrap(), scalar(-5));
        assert_eq!(s.derive_pq(1, &x).unwrap(), scalar(5));
        // q_1 independent, p_3 = p_{-1} derived: q_1 = p_3
        assert_eq!(s.derive_qp(1, &x).unwrap(), scalar(5));
        let s = setup(2, &[1, 1]);
        assert_eq!(s.derive_pq(1, &x).unwrap(), scalar(-5));
        assert_eq!(s.derive_qp(0, &x).unwrap(), scalar(5));
    }

    #[test]
    fn forms_are_nondegenerate_with_declared_symmetry() {
        for (n, d) in [(2, vec![1, 2]), (4, vec![1, 2, 1]), (6, vec![2, 1, 0, 3])] {
            let s = setup(n, &d);
            let w = s.form_w();
            assert_eq!(&w.transpose(), &-w);
            assert_eq!(w.rank(), n);
            let v = s.form_v();
            assert!(v.is_symmetric());
            assert_eq!(v.rank(), s.dims().total());
        }
    }

    #[test]
    fn half_forms_follow_basis_convention() {
        let s = setup(6, &[1, 1, 1, 1]);
        assert_eq!(s.w_sign(0), q(1));
        assert_eq!(s.w_sign(1), q(1));
        assert_eq!(s.w_sign(2), q(-1));
        assert_eq!(s.w_sign(3), q(1));
        assert_eq!(s.w_sign(5), q(-1));
    }
}
