//! Truncated Laurent series in `u^{-1}` over a coefficient ring, and
//! coefficient extraction for two-variable expressions
//! `P(u − v)·F(u)G(v)` expanded in the region `|v| < |u|`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ncpoly::{Algebra, NCPoly};
use crate::rational::{binom, Q};

/// Coefficient ring operations needed by [`Series`].
pub trait Ring {
    type E: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn scale(&self, a: &Self::E, c: &Q) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// `Some(c)` if `a` is the constant `c`.
    fn as_scalar(&self, a: &Self::E) -> Option<Q>;

    fn scalar(&self, c: &Q) -> Self::E {
        self.scale(&self.one(), c)
    }

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.scale(b, &-Q::one()))
    }
}

/// The rationals as a coefficient ring.
#[derive(Clone, Copy, Debug, Default)]
pub struct Scalars;

impl Ring for Scalars {
    type E = Q;
    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn scale(&self, a: &Q, c: &Q) -> Q {
        a * c
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
    fn as_scalar(&self, a: &Q) -> Option<Q> {
        Some(a.clone())
    }
}

impl Ring for Algebra {
    type E = NCPoly;
    fn zero(&self) -> NCPoly {
        NCPoly::zero()
    }
    fn one(&self) -> NCPoly {
        NCPoly::one()
    }
    fn add(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        a + b
    }
    fn mul(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        self.multiply(a, b)
    }
    fn scale(&self, a: &NCPoly, c: &Q) -> NCPoly {
        a.scale(c)
    }
    fn is_zero(&self, a: &NCPoly) -> bool {
        a.is_zero()
    }
    fn as_scalar(&self, a: &NCPoly) -> Option<Q> {
        match a.len() {
            0 => Some(Q::zero()),
            1 => a
                .terms()
                .next()
                .filter(|(m, _)| m.is_empty())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }
}

/// `Σ_{e ≤ top} c_e u^e`, exact for every exponent `e ≥ −prec`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<E> {
    top: i64,
    prec: i64,
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Series<E> {
    /// Coefficients listed from `u^top` downwards; missing ones are zero.
    pub fn from_coeffs<R: Ring<E = E>>(ring: &R, top: i64, prec: i64, mut coeffs: Vec<E>) -> Self {
        let len = (top + prec + 1).max(0) as usize;
        coeffs.resize(len, ring.zero());
        coeffs.truncate(len);
        Series { top, prec, coeffs }
    }

    pub fn zero<R: Ring<E = E>>(ring: &R, prec: i64) -> Self {
        Series::from_coeffs(ring, -1, prec, Vec::new())
    }

    pub fn constant<R: Ring<E = E>>(ring: &R, c: E, prec: i64) -> Self {
        Series::from_coeffs(ring, 0, prec, vec![c])
    }

    /// `u^k`, as a series exact to `prec`.
    pub fn monomial<R: Ring<E = E>>(ring: &R, k: i64, prec: i64) -> Self {
        Series::from_coeffs(ring, k, prec, vec![ring.one()])
    }

    /// A monic polynomial-headed series `u^d + Σ_r c_r u^{d−r−1}`.
    pub fn monic<R: Ring<E = E>>(ring: &R, d: i64, tail: &[E], prec: i64) -> Self {
        let mut coeffs = vec![ring.one()];
        coeffs.extend_from_slice(tail);
        Series::from_coeffs(ring, d, prec, coeffs)
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Coefficient of `u^e`. Exponents above `top` are zero; exponents
    /// below `−prec` are unknown.
    pub fn coeff(&self, e: i64) -> Option<&E> {
        if e > self.top || e < -self.prec {
            return None;
        }
        self.coeffs.get((self.top - e) as usize)
    }

    pub fn coeff_or_zero<R: Ring<E = E>>(&self, ring: &R, e: i64) -> Result<E> {
        if e > self.top {
            return Ok(ring.zero());
        }
        self.coeff(e).cloned().ok_or(Error::Truncation(e))
    }

    /// Coefficients of `u^e` for `e` from `top` down to `−prec`.
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn truncate<R: Ring<E = E>>(&self, ring: &R, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        Series::from_coeffs(ring, self.top, prec, self.coeffs.clone())
    }

    pub fn add<R: Ring<E = E>>(&self, ring: &R, other: &Self) -> Self {
        let top = self.top.max(other.top);
        let prec = self.prec.min(other.prec);
        let coeffs = (0..=(top + prec))
            .map(|k| {
                let e = top - k;
                let a = self.coeff(e).cloned().unwrap_or_else(|| ring.zero());
                let b = other.coeff(e).cloned().unwrap_or_else(|| ring.zero());
                ring.add(&a, &b)
            })
            .collect();
        Series::from_coeffs(ring, top, prec, coeffs)
    }

    pub fn scale<R: Ring<E = E>>(&self, ring: &R, c: &Q) -> Self {
        Series {
            top: self.top,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|x| ring.scale(x, c)).collect(),
        }
    }

    pub fn sub<R: Ring<E = E>>(&self, ring: &R, other: &Self) -> Self {
        self.add(ring, &other.scale(ring, &-Q::one()))
    }

    /// `self · other`, factors kept in order.
    pub fn mul<R: Ring<E = E>>(&self, ring: &R, other: &Self) -> Self {
        let top = self.top + other.top;
        let prec = (self.prec - other.top).min(other.prec - self.top);
        let mut coeffs = Vec::with_capacity((top + prec + 1).max(0) as usize);
        for k in 0..=(top + prec) {
            let mut acc = ring.zero();
            for i in 0..=k {
                let (Some(a), Some(b)) = (
                    self.coeffs.get(i as usize),
                    other.coeffs.get((k - i) as usize),
                ) else {
                    continue;
                };
                if ring.is_zero(a) || ring.is_zero(b) {
                    continue;
                }
                acc = ring.add(&acc, &ring.mul(a, b));
            }
            coeffs.push(acc);
        }
        Series::from_coeffs(ring, top, prec, coeffs)
    }

    /// Two-sided inverse; the leading coefficient must be a nonzero scalar.
    pub fn invert<R: Ring<E = E>>(&self, ring: &R) -> Result<Self> {
        let lead = self.coeffs.first().ok_or(Error::NonInvertibleHead)?;
        let c = ring
            .as_scalar(lead)
            .filter(|c| !c.is_zero())
            .ok_or(Error::NonInvertibleHead)?;
        let inv_c = Q::one() / c;
        let top = -self.top;
        let prec = 2 * self.top + self.prec;
        let len = (top + prec + 1).max(0) as usize;
        let mut g: Vec<E> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = if k == 0 { ring.one() } else { ring.zero() };
            for i in 1..=k {
                let Some(a) = self.coeffs.get(i) else { break };
                if ring.is_zero(a) {
                    continue;
                }
                acc = ring.sub(&acc, &ring.mul(a, &g[k - i]));
            }
            g.push(ring.scale(&acc, &inv_c));
        }
        Ok(Series::from_coeffs(ring, top, prec, g))
    }

    /// `u ↦ u + c`, re-expanded in `u^{-1}`.
    pub fn shift<R: Ring<E = E>>(&self, ring: &R, c: &Q) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let len = self.coeffs.len();
        let mut out = vec![ring.zero(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            if ring.is_zero(x) {
                continue;
            }
            let e = Q::from_integer((self.top - i as i64).into());
            let mut cpow = Q::one();
            for n in 0..(len - i) {
                let b = binom(&e, n) * &cpow;
                if !b.is_zero() {
                    out[i + n] = ring.add(&out[i + n], &ring.scale(x, &b));
                }
                cpow *= c;
            }
        }
        Series {
            top: self.top,
            prec: self.prec,
            coeffs: out,
        }
    }

    pub fn map<F: Clone + PartialEq + std::fmt::Debug>(&self, f: impl Fn(&E) -> F) -> Series<F> {
        Series {
            top: self.top,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// Laurent polynomial/series in `w = u − v` with scalar coefficients.
pub type WSeries = Series<Q>;

/// `(α w + β)/(γ w + δ)` expanded in `w^{-1}` to `prec`.
pub fn w_ratio(alpha: &Q, beta: &Q, gamma: &Q, delta: &Q, prec: i64) -> Result<WSeries> {
    let num = w_linear(alpha, beta, prec + 2);
    let den = w_linear(gamma, delta, prec + 2);
    Ok(num
        .mul(&Scalars, &den.invert(&Scalars)?)
        .truncate(&Scalars, prec))
}

/// `α w + β` (or a constant when `α = 0`).
pub fn w_linear(alpha: &Q, beta: &Q, prec: i64) -> WSeries {
    if alpha.is_zero() {
        Series::constant(&Scalars, beta.clone(), prec)
    } else {
        Series::from_coeffs(&Scalars, 1, prec, vec![alpha.clone(), beta.clone()])
    }
}

/// Which variable a factor depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    U,
    V,
}

/// `P(w) · X(u) · Y(v)` or `P(w) · Y(v) · X(u)`: one term of a
/// two-variable identity.
#[derive(Clone, Debug)]
pub struct Term2<'a, E> {
    pub prefactor: &'a WSeries,
    /// Ordered factors: exactly one in `u` and one in `v`.
    pub left: (Var, &'a Series<E>),
    pub right: (Var, &'a Series<E>),
}

/// Coefficient of `u^{eu} v^{ev}` in `Σ terms`, expanding
/// `w^n = Σ_k binom(n, k)(−1)^k u^{n−k} v^k`.
pub fn coeff2<R: Ring>(ring: &R, terms: &[Term2<'_, R::E>], eu: i64, ev: i64) -> Result<R::E> {
    let mut acc = ring.zero();
    for t in terms {
        let (fu, fv, u_first) = match (t.left.0, t.right.0) {
            (Var::U, Var::V) => (t.left.1, t.right.1, true),
            (Var::V, Var::U) => (t.right.1, t.left.1, false),
            _ => {
                return Err(Error::InvalidKind(
                    "two-variable term needs one factor in each variable".into(),
                ))
            }
        };
        let p = t.prefactor;
        let n_min = eu - fu.top();
        for n in (n_min..=p.top()).rev() {
            let pn = p.coeff(n).ok_or(Error::Truncation(n))?;
            if pn.is_zero() {
                continue;
            }
            let nq = Q::from_integer(n.into());
            let kmax = fu.top() - eu + n;
            for k in 0..=kmax {
                let mut b = binom(&nq, k as usize);
                if b.is_zero() {
                    continue;
                }
                if k % 2 == 1 {
                    b = -b;
                }
                let x = fu.coeff_or_zero(ring, eu - n + k)?;
                let y = fv.coeff_or_zero(ring, ev - k)?;
                if ring.is_zero(&x) || ring.is_zero(&y) {
                    continue;
                }
                let prod = if u_first {
                    ring.mul(&x, &y)
                } else {
                    ring.mul(&y, &x)
                };
                acc = ring.add(&acc, &ring.scale(&prod, &(&b * pn)));
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use proptest::prelude::*;

    fn sc(top: i64, prec: i64, c: &[Q]) -> Series<Q> {
        Series::from_coeffs(&Scalars, top, prec, c.to_vec())
    }

    #[test]
    fn shift_of_one_minus_inverse() {
        let f = sc(0, 6, &[q(1), q(-1)]);
        let g = f.shift(&Scalars, &q(1));
        assert_eq!(g.coeffs()[..5], [q(1), q(-1), q(1), q(-1), q(1)]);
    }

    #[test]
    fn ratio_expansion() {
        let num = sc(1, 8, &[q(1), qf(1, 2)]);
        let den = sc(1, 8, &[q(1), qf(3, 2)]);
        let r = num.mul(&Scalars, &den.invert(&Scalars).unwrap());
        assert_eq!(r.coeffs()[..4], [q(1), q(-1), qf(3, 2), qf(-9, 4)]);
        assert_eq!(r.top(), 0);
    }

    #[test]
    fn two_variable_prefactor_expansion() {
        // (u - v)^{-1} · 1(u) · 1(v) = Σ v^k u^{-k-1}
        let p = w_ratio(&q(0), &q(1), &q(1), &q(0), 8).unwrap();
        let one = Series::constant(&Scalars, q(1), 10);
        let t = [Term2 {
            prefactor: &p,
            left: (Var::U, &one),
            right: (Var::V, &one),
        }];
        assert_eq!(coeff2(&Scalars, &t, -1, 0).unwrap(), q(1));
        assert_eq!(coeff2(&Scalars, &t, -3, 2).unwrap(), q(1));
        assert_eq!(coeff2(&Scalars, &t, -2, 0).unwrap(), q(0));
        // (u - v)^2 · u^{-1} · v^{-1} has u·v^{-1} coefficient 1, u^0 v^0 coefficient -2
        let w2 = sc(2, 8, &[q(1)]);
        let x = sc(-1, 8, &[q(1)]);
        let t = [Term2 {
            prefactor: &w2,
            left: (Var::U, &x),
            right: (Var::V, &x),
        }];
        assert_eq!(coeff2(&Scalars, &t, 1, -1).unwrap(), q(1));
        assert_eq!(coeff2(&Scalars, &t, 0, 0).unwrap(), q(-2));
        assert_eq!(coeff2(&Scalars, &t, -1, 1).unwrap(), q(1));
    }

    fn series_strategy() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-5i64..=5, 1..6)
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(tail in series_strategy()) {
            let mut c = vec![q(1)];
            c.extend(tail.iter().map(|x| q(*x)));
            let f = sc(0, 8, &c);
            let g = f.invert(&Scalars).unwrap();
            let one = Series::constant(&Scalars, q(1), 8);
            prop_assert_eq!(f.mul(&Scalars, &g).truncate(&Scalars, 8), one.clone());
            prop_assert_eq!(g.mul(&Scalars, &f).truncate(&Scalars, 8), one);
        }

        #[test]
        fn shift_is_a_ring_map(a in series_strategy(), b in series_strategy(), c in -3i64..=3) {
            let f = sc(1, 8, &a.iter().map(|x| q(*x)).collect::<Vec<_>>());
            let g = sc(0, 8, &b.iter().map(|x| q(*x)).collect::<Vec<_>>());
            let c = qf(c, 2);
            let lhs = f.mul(&Scalars, &g).shift(&Scalars, &c);
            let rhs = f.shift(&Scalars, &c).mul(&Scalars, &g.shift(&Scalars, &c));
            prop_assert_eq!(lhs.truncate(&Scalars, 6), rhs.truncate(&Scalars, 6));
            let back = f.shift(&Scalars, &c).shift(&Scalars, &-c.clone());
            prop_assert_eq!(back, f);
        }
    }
}
