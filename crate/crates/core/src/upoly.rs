//! Univariate polynomials over `Q`, used for characteristic polynomials and
//! coprimality tests on spectra.

use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{fmt_q, q, Q};

/// Dense coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Q>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => fmt_q(c),
                1 => format!("{}*u", fmt_q(c)),
                _ => format!("{}*u^{}", fmt_q(c), k),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    fn lead(&self) -> &Q {
        self.coeffs
            .last()
            .expect("leading coefficient of zero polynomial")
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        UPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    /// Remainder of Euclidean division.
    pub fn rem(&self, d: &UPoly) -> UPoly {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let dl = d.lead().clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let f = &r[k] / &dl;
            for (i, c) in d.coeffs.iter().enumerate() {
                let t = &f * c;
                r[k - dd + i] -= t;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UPoly::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn coprime(&self, other: &UPoly) -> bool {
        self.gcd(other).degree() == Some(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_detects_common_root() {
        // (u-1)(u-2) and (u-2)(u+3)
        let a = UPoly::from_i64(&[2, -3, 1]);
        let b = UPoly::from_i64(&[-6, 1, 1]);
        assert_eq!(a.gcd(&b), UPoly::from_i64(&[-2, 1]));
        assert!(!a.coprime(&b));
        assert!(a.coprime(&UPoly::from_i64(&[5, 1])));
    }

    #[test]
    fn constants_are_coprime_to_everything() {
        let one = UPoly::from_i64(&[1]);
        assert!(one.coprime(&UPoly::from_i64(&[0, 0, 1])));
    }
}
