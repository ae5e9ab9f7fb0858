//! Exact rational scalars. Every computation in the crate runs over `Q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Compact textual form used in reports and witnesses: `3`, `-1/2`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// Binomial coefficient `C(n, k)` for a rational upper argument.
pub fn binom(n: &Q, k: usize) -> Q {
    let mut acc = one();
    for i in 0..k {
        acc = acc * (n - q(i as i64)) / q(i as i64 + 1);
    }
    acc
}

pub fn abs_max_height(x: &Q) -> usize {
    x.numer().abs().bits().max(x.denom().bits()) as usize
}
