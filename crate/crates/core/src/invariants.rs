//! Classical invariant functions on `sM^ε_d` and the explicit example
//! relations in types `C₁`, `C₂`, `C̃₁`.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quadratic::QuadraticSetup;
use crate::quiver::{sample_point, FullPoint, QuiverPoint};
use crate::rational::{fmt_q, q, Q};

/// A classical invariant. Indices live in `Z`; factors outside the
/// independent window come from the derived half of the point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InvariantLabel {
    /// `Tr A_l^r`.
    Trace { l: i64, r: usize },
    /// `q_l A_l^{s_l} B_{l−1} ⋯ B_k A_k^{s_k} p_k` with `s = (s_k, …, s_l)`.
    Path { k: i64, l: i64, s: Vec<usize> },
    /// `Tr(B_{k+mN−1} A^{s} ⋯ B_k A_k^{s_k})`, one exponent per arrow.
    Loop { k: i64, m: usize, s: Vec<usize> },
    /// `(p_l, A_l^s p_l)` at a vertex of `I₁`.
    Norm { l: usize, s: usize },
}

impl InvariantLabel {
    /// `b_{l,s} = q_l A_l^s p_l`.
    pub fn pairing(l: i64, s: usize) -> Self {
        InvariantLabel::Path {
            k: l,
            l,
            s: vec![s],
        }
    }

    pub fn validate(&self, setup: &QuadraticSetup) -> Result<()> {
        let dims = setup.dims();
        let bad = |m: String| Err(Error::InvalidLabel(m));
        match self {
            InvariantLabel::Trace { .. } => Ok(()),
            InvariantLabel::Path { k, l, s } => {
                if k > l {
                    return bad(format!("path needs k ≤ l, got {k} > {l}"));
                }
                if s.len() as i64 != l - k + 1 {
                    return bad(format!("path {k}..{l} needs {} exponents", l - k + 1));
                }
                Ok(())
            }
            InvariantLabel::Loop { m, s, .. } => {
                if *m == 0 || s.len() != m * dims.n() {
                    return bad(format!(
                        "loop needs m ≥ 1 and m·N exponents, got m={m}, {}",
                        s.len()
                    ));
                }
                Ok(())
            }
            InvariantLabel::Norm { l, .. } => {
                if *l > dims.half() || !dims.is_outer(*l) {
                    return bad(format!("norm invariant needs an outer vertex, got {l}"));
                }
                Ok(())
            }
        }
    }

    /// Polynomial degree in the quiver coordinates.
    pub fn degree(&self) -> usize {
        match self {
            InvariantLabel::Trace { r, .. } => *r,
            InvariantLabel::Path { s, .. } => s.iter().sum::<usize>() + s.len() + 1,
            InvariantLabel::Loop { s, .. } => s.iter().sum::<usize>() + s.len(),
            InvariantLabel::Norm { s, .. } => s + 2,
        }
    }
}

impl fmt::Display for InvariantLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &[usize]| {
            s.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            InvariantLabel::Trace { l, r } => write!(f, "a({l},{r})"),
            InvariantLabel::Path { k, l, s } if k == l => write!(f, "b({l},{})", s[0]),
            InvariantLabel::Path { k, l, s } => write!(f, "b({k},{l};{})", join(s)),
            InvariantLabel::Loop { k, m, s } => write!(f, "c({k},{m};{})", join(s)),
            InvariantLabel::Norm { l, s } => write!(f, "n({l},{s})"),
        }
    }
}

pub fn eval_invariant(label: &InvariantLabel, pt: &QuiverPoint) -> Result<Q> {
    label.validate(pt.setup())?;
    Ok(eval_full(label, &pt.full()))
}

/// Evaluates on an already extended point; the label must be valid.
pub fn eval_full(label: &InvariantLabel, f: &FullPoint) -> Q {
    match label {
        InvariantLabel::Trace { l, r } => f.a(*l).pow(*r).trace(),
        InvariantLabel::Path { k, l, s } => {
            let mut v = f.p(*k).clone();
            for (step, idx) in (*k..=*l).enumerate() {
                if step > 0 {
                    v = f.b(idx - 1) * &v;
                }
                v = &f.a(idx).pow(s[step]) * &v;
            }
            scalar(&(f.q(*l) * &v))
        }
        InvariantLabel::Loop { k, s, .. } => {
            let n = f.a(*k).rows();
            let mut m = Matrix::identity(n);
            for (step, &e) in s.iter().enumerate() {
                let idx = k + step as i64;
                m = f.b(idx) * &(&f.a(idx).pow(e) * &m);
            }
            m.trace()
        }
        InvariantLabel::Norm { l, s } => {
            let p = f.p(*l as i64);
            scalar(&(&p.transpose() * &(&f.a(*l as i64).pow(*s) * p)))
        }
    }
}

fn scalar(m: &Matrix) -> Q {
    m.entries().first().cloned().unwrap_or_else(Q::zero)
}

/// Exact derivative of `label` at `pt` along `dir`, by interpolating the
/// polynomial `t ↦ f(pt + t·dir)` on `t = 0, …, deg`.
pub fn directional_derivative(label: &InvariantLabel, pt: &QuiverPoint, dir: &QuiverPoint) -> Q {
    let deg = label.degree();
    let values: Vec<Q> = (0..=deg)
        .map(|t| eval_full(label, &pt.axpy(&q(t as i64), dir).full()))
        .collect();
    derivative_at_zero(&values)
}

/// `P′(0)` for the polynomial of degree `< n` with `P(t) = values[t]`.
fn derivative_at_zero(values: &[Q]) -> Q {
    let n = values.len();
    let mut out = Q::zero();
    for (i, v) in values.iter().enumerate() {
        // L_i'(0) for the Lagrange basis on nodes 0..n.
        let (num, den) = lagrange_derivative(i, n);
        out += v * num / den;
    }
    out
}

fn lagrange_derivative(i: usize, n: usize) -> (Q, Q) {
    let mut den = Q::one();
    for j in 0..n {
        if j != i {
            den *= q(i as i64 - j as i64);
        }
    }
    // d/dt Π_{j≠i} (t − j) at t = 0
    let mut num = Q::zero();
    for skip in 0..n {
        if skip == i {
            continue;
        }
        let mut prod = Q::one();
        for j in 0..n {
            if j != i && j != skip {
                prod *= q(-(j as i64));
            }
        }
        num += prod;
    }
    (num, den)
}

/// Jacobian of `labels` in the independent coordinates at `pt`.
pub fn invariant_jacobian(labels: &[InvariantLabel], pt: &QuiverPoint) -> Matrix {
    let dirs = pt.coordinate_directions();
    let mut jac = Matrix::zeros(labels.len(), dirs.len());
    for (i, label) in labels.iter().enumerate() {
        for (j, dir) in dirs.iter().enumerate() {
            jac[(i, j)] = directional_derivative(label, pt, dir);
        }
    }
    jac
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ExampleSuite {
    C1,
    C2,
    C1Tilde,
}

impl ExampleSuite {
    pub fn name(self) -> &'static str {
        match self {
            ExampleSuite::C1 => "C1",
            ExampleSuite::C2 => "C2",
            ExampleSuite::C1Tilde => "C1~",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "C1" => Some(ExampleSuite::C1),
            "C2" => Some(ExampleSuite::C2),
            "C1~" | "C1t" | "C1-tilde" => Some(ExampleSuite::C1Tilde),
            _ => None,
        }
    }
}

/// One sampled point where an expected identity failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleFailure {
    pub trial: usize,
    pub seed: u64,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleReport {
    pub suite: String,
    pub dims: String,
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<ExampleFailure>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Per-trial seed, derived from the master seed and the trial index.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(trial as u64)
        .rotate_left(17)
        ^ 0xD1B5_4A32_D192_ED03
}

pub fn c2_generators() -> [(&'static str, InvariantLabel, Q); 4] {
    [
        ("b01", InvariantLabel::pairing(1, 0), q(1)),
        (
            "b02",
            InvariantLabel::Path {
                k: 1,
                l: 2,
                s: vec![0, 0],
            },
            q(-1),
        ),
        ("b12", InvariantLabel::Norm { l: 2, s: 0 }, q(1)),
        (
            "b03",
            InvariantLabel::Path {
                k: 1,
                l: 3,
                s: vec![0, 0, 0],
            },
            q(1),
        ),
    ]
}

/// `(b01, b02, b12, b03)` at a point of the `C₂` example.
pub fn c2_values(f: &FullPoint) -> [Q; 4] {
    c2_generators().map(|(_, label, sign)| sign * eval_full(&label, f))
}

/// The three quadratic relations, as residuals.
pub fn c2_residuals(f: &FullPoint) -> [Q; 3] {
    let [b01, b02, b12, b03] = c2_values(f);
    let diff = &f.a[1][(0, 0)] - &f.a[2][(0, 0)];
    [
        &b02 * &diff - &b01 * &b12,
        &b03 * &diff - &b01 * &b02,
        &b02 * &b02 - &b12 * &b03,
    ]
}

/// `b₁b₀ − s(A₀ − A₁)²` with `b₁ = p_1²`, `b₀ = p_0²`, `s = B_0²`.
pub fn c1_tilde_residual(f: &FullPoint) -> Q {
    let b1 = eval_full(&InvariantLabel::Norm { l: 1, s: 0 }, f);
    let b0 = eval_full(&InvariantLabel::Norm { l: 0, s: 0 }, f);
    let s = eval_full(
        &InvariantLabel::Loop {
            k: 0,
            m: 1,
            s: vec![0, 0],
        },
        f,
    );
    let diff = &f.a[0][(0, 0)] - &f.a[1][(0, 0)];
    b1 * b0 - s * &diff * &diff
}

/// `a_1..a_d, b_0..b_{d−1}` at the vertex `N/2` of `N = 2`, `d = (0, d)`.
pub fn c1_labels(d: usize) -> Vec<InvariantLabel> {
    let mut labels: Vec<InvariantLabel> =
        (1..=d).map(|r| InvariantLabel::Trace { l: 1, r }).collect();
    labels.extend((0..d).map(|s| InvariantLabel::Norm { l: 1, s }));
    labels
}

pub fn suite_setup(suite: ExampleSuite, c1_dim: usize) -> Arc<QuadraticSetup> {
    let (n, d) = match suite {
        ExampleSuite::C1 => (2, vec![0, c1_dim]),
        ExampleSuite::C2 => (4, vec![0, 1, 1]),
        ExampleSuite::C1Tilde => (2, vec![1, 1]),
    };
    Arc::new(QuadraticSetup::from_dims(n, d).expect("example dimensions are valid"))
}

/// Samples `trials` points and checks the suite's identities exactly.
/// `c1_dim` is the dimension at vertex `N/2` for `C₁`.
pub fn run_example_suite(
    suite: ExampleSuite,
    trials: usize,
    seed: u64,
    c1_dim: usize,
) -> Result<ExampleReport> {
    let setup = suite_setup(suite, c1_dim);
    let mut report = ExampleReport {
        suite: suite.name().into(),
        dims: setup.dims().label(),
        trials,
        checks: 0,
        failures: Vec::new(),
    };
    for trial in 0..trials {
        let s = trial_seed(seed, trial);
        let pt = sample_point(&setup, 6, s)?;
        let f = pt.full();
        let mut fail = |check: &str, detail: String| {
            report.failures.push(ExampleFailure {
                trial,
                seed: s,
                check: check.into(),
                detail,
            });
        };
        match suite {
            ExampleSuite::C2 => {
                for (k, r) in c2_residuals(&f).iter().enumerate() {
                    if !r.is_zero() {
                        fail(
                            &format!("relation {}", k + 1),
                            format!("residual {}", fmt_q(r)),
                        );
                    }
                }
                report.checks += 3;
            }
            ExampleSuite::C1Tilde => {
                let r = c1_tilde_residual(&f);
                if !r.is_zero() {
                    fail("relation", format!("residual {}", fmt_q(&r)));
                }
                report.checks += 1;
            }
            ExampleSuite::C1 => {
                let rank = invariant_jacobian(&c1_labels(c1_dim), &pt).rank();
                if rank != 2 * c1_dim {
                    fail(
                        "jacobian rank",
                        format!("rank {rank}, expected {}", 2 * c1_dim),
                    );
                }
                report.checks += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::GroupElement;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(x: i64) -> Matrix {
        Matrix::from_i64(&[&[x]])
    }

    fn c2_witness() -> QuiverPoint {
        let mut pt = QuiverPoint::zero(suite_setup(ExampleSuite::C2, 0));
        pt.set_a(1, s(3));
        pt.set_a(2, s(1));
        pt.set_b(1, s(1));
        pt.set_p(1, s(5));
        pt.set_p(2, s(2));
        pt.set_q(1, s(1));
        pt
    }

    #[test]
    fn c1_type_values() {
        let mut pt = QuiverPoint::zero(suite_setup(ExampleSuite::C1, 2));
        pt.set_a(1, Matrix::from_i64(&[&[1, 2], &[2, 0]]));
        pt.set_p(1, Matrix::from_i64(&[&[1], &[0]]));
        assert_eq!(
            eval_invariant(&InvariantLabel::Trace { l: 1, r: 2 }, &pt).unwrap(),
            q(9)
        );
        assert_eq!(
            eval_invariant(&InvariantLabel::Norm { l: 1, s: 1 }, &pt).unwrap(),
            q(1)
        );
        pt.set_p(1, Matrix::zeros(2, 1));
        assert_eq!(
            eval_invariant(&InvariantLabel::pairing(1, 0), &pt).unwrap(),
            q(0)
        );
    }

    #[test]
    fn c2_witness_values() {
        let pt = c2_witness();
        let f = pt.full();
        assert_eq!(f.p(3), &s(1));
        assert_eq!(c2_values(&f), [q(5), q(10), q(4), q(25)]);
        assert_eq!(c2_residuals(&f), [q(0), q(0), q(0)]);
    }

    #[test]
    fn c1_tilde_witness() {
        let mut pt = QuiverPoint::zero(suite_setup(ExampleSuite::C1Tilde, 0));
        pt.set_a(1, s(2));
        pt.set_b(0, s(-2));
        pt.set_p(1, s(4));
        pt.set_q(0, s(1));
        assert_eq!(c1_tilde_residual(&pt.full()), q(0));
    }

    #[test]
    fn c1_jacobian_scalar_case() {
        let mut pt = QuiverPoint::zero(suite_setup(ExampleSuite::C1, 1));
        pt.set_a(1, s(2));
        pt.set_p(1, s(3));
        let jac = invariant_jacobian(&c1_labels(1), &pt);
        assert_eq!(jac, Matrix::from_i64(&[&[1, 0], &[0, 6]]));
    }

    #[test]
    fn labels_validate() {
        let st = suite_setup(ExampleSuite::C2, 0);
        assert!(InvariantLabel::Path {
            k: 2,
            l: 1,
            s: vec![0, 0]
        }
        .validate(&st)
        .is_err());
        assert!(InvariantLabel::Path {
            k: 1,
            l: 2,
            s: vec![0]
        }
        .validate(&st)
        .is_err());
        assert!(InvariantLabel::Loop {
            k: 0,
            m: 1,
            s: vec![0; 3]
        }
        .validate(&st)
        .is_err());
        assert!(InvariantLabel::Norm { l: 1, s: 0 }.validate(&st).is_err());
        assert!(InvariantLabel::Norm { l: 2, s: 0 }.validate(&st).is_ok());
    }

    #[test]
    fn suites_pass() {
        for suite in [ExampleSuite::C2, ExampleSuite::C1Tilde] {
            let rep = run_example_suite(suite, 20, 5, 0).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
        for d in [1, 2] {
            assert!(run_example_suite(ExampleSuite::C1, 3, 1, d)
                .unwrap()
                .passed());
        }
    }

    #[test]
    fn invariants_are_group_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cases: Vec<(usize, Vec<usize>)> = vec![
            (4, vec![0, 1, 1]),
            (4, vec![2, 1, 2]),
            (2, vec![1, 1]),
            (6, vec![1, 2, 1, 2]),
        ];
        for (n, d) in cases {
            let st = Arc::new(QuadraticSetup::from_dims(n, d.clone()).unwrap());
            let labels = sample_labels(&st);
            for seed in 0..3 {
                let pt = sample_point(&st, 3, seed).unwrap();
                let g = GroupElement::random(&st, 2, seed % 2 == 1, &mut rng);
                let moved = pt.act(&g).unwrap();
                for label in &labels {
                    assert_eq!(
                        eval_invariant(label, &moved).unwrap(),
                        eval_invariant(label, &pt).unwrap(),
                        "{label} at {d:?}"
                    );
                }
            }
        }
    }

    fn sample_labels(st: &QuadraticSetup) -> Vec<InvariantLabel> {
        let n = st.dims().n() as i64;
        let mut out = Vec::new();
        for l in 0..n {
            out.push(InvariantLabel::Trace { l, r: 2 });
            out.push(InvariantLabel::pairing(l, 1));
            out.push(InvariantLabel::Path {
                k: l,
                l: l + 2,
                s: vec![1, 0, 2],
            });
        }
        out.push(InvariantLabel::Path {
            k: -1,
            l: n,
            s: vec![0; n as usize + 2],
        });
        out.push(InvariantLabel::Loop {
            k: 1,
            m: 1,
            s: (0..n as usize).map(|i| i % 2).collect(),
        });
        out.push(InvariantLabel::Norm { l: 0, s: 1 });
        out
    }
}
