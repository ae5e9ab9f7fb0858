//! Suite orchestration: a JSON configuration selects suites, each suite
//! turns into case records, and the records aggregate into one report.
//!
//! Reports are deterministic for a fixed configuration and convention file.
//! Wall-clock timings live in their own top-level field and are dropped by
//! [`SuiteReport::payload`].

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ideal::{quantum_r_invariance, IdealBasis};
use crate::invariants::{run_example_suite, trial_seed, ExampleReport, ExampleSuite};
use crate::lie::{GenId, LiePresentation};
use crate::matrix::Matrix;
use crate::ncpoly::{rewrite_word, Algebra, SwapStrategy};
use crate::poisson::classical_r_invariance;
use crate::quadratic::{DimVector, QuadraticSetup};
use crate::quiver::{sample_point, sample_point_with, SamplerConfig, TypeAPoint};
use crate::relations::{check_relation_family, CaseStatus, Family};
use crate::yangian::capelli_newton_check;

/// The frozen convention file.
pub const CONVENTIONS: &str = include_str!("../conventions.toml");

pub const SCHEMA_VERSION: u32 = 1;

/// Hex SHA-256 of [`CONVENTIONS`].
pub fn convention_hash() -> String {
    hex::encode(Sha256::digest(CONVENTIONS.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub d: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_order")]
    pub order: usize,
    /// Membership degree bound; `None` means `deg + 2`.
    #[serde(default)]
    pub bound: Option<usize>,
    #[serde(default)]
    pub strict: bool,
    pub suites: Vec<String>,
}

fn default_trials() -> usize {
    100
}

fn default_order() -> usize {
    4
}

impl SuiteConfig {
    pub fn new(n: usize, d: Vec<usize>, suites: &[&str]) -> Self {
        SuiteConfig {
            n,
            d,
            seed: 0,
            trials: default_trials(),
            order: default_order(),
            bound: None,
            strict: false,
            suites: suites.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn dims(&self) -> Result<DimVector> {
        DimVector::new(self.n, self.d.clone()).map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks dimensions, bounds and suite names.
    pub fn validate(&self) -> Result<Vec<Suite>> {
        self.dims()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if self.order == 0 {
            return Err(Error::Config("order must be positive".into()));
        }
        if self.bound == Some(0) {
            return Err(Error::Config("bound must be positive".into()));
        }
        if self.suites.is_empty() {
            return Err(Error::Config("no suite selected".into()));
        }
        self.suites
            .iter()
            .map(|s| {
                Suite::parse(s).ok_or_else(|| {
                    Error::Config(format!(
                        "unknown suite {s:?}; known: {}",
                        Suite::names().join(", ")
                    ))
                })
            })
            .collect()
    }
}

pub fn load_config(path: &Path) -> Result<SuiteConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let cfg: SuiteConfig = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Boundary sign witnesses of the derived coordinates.
    Signs,
    Example(ExampleSuite),
    /// Moment-map Jacobian rank and `Υ`-fiber tangent dimension.
    CompleteIntersection,
    /// Stability agrees with costability on sampled points.
    Stability,
    /// `σ` preserves the type-A locus and squares to the `(p, q)` sign.
    Sigma,
    RInvariance,
    /// Jacobi sweep, rewriting confluence and associativity.
    Pbw,
    Capelli,
    Relations(Family),
}

impl Suite {
    const FIXED: [(&'static str, Suite); 10] = [
        ("signs", Suite::Signs),
        ("C1", Suite::Example(ExampleSuite::C1)),
        ("C2", Suite::Example(ExampleSuite::C2)),
        ("C1~", Suite::Example(ExampleSuite::C1Tilde)),
        ("complete-intersection", Suite::CompleteIntersection),
        ("stability", Suite::Stability),
        ("sigma", Suite::Sigma),
        ("r-invariance", Suite::RInvariance),
        ("pbw", Suite::Pbw),
        ("capelli", Suite::Capelli),
    ];

    pub fn names() -> Vec<&'static str> {
        Self::FIXED
            .iter()
            .map(|(n, _)| *n)
            .chain(Family::ALL.iter().map(|f| f.name()))
            .collect()
    }

    pub fn parse(s: &str) -> Option<Suite> {
        if let Some((_, suite)) = Self::FIXED.iter().find(|(n, _)| *n == s) {
            return Some(*suite);
        }
        if let Some(e) = ExampleSuite::parse(s) {
            return Some(Suite::Example(e));
        }
        Family::parse(s).map(Suite::Relations)
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Example(e) => e.name(),
            Suite::Relations(f) => f.name(),
            other => Self::FIXED
                .iter()
                .find(|(_, s)| *s == other)
                .map(|(n, _)| *n)
                .unwrap_or("?"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseEntry {
    pub suite: String,
    pub case: String,
    pub status: CaseStatus,
    /// Points, pairs or coefficients examined.
    pub checked: usize,
    /// Informational reading that does not count towards the exit code.
    pub alternative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub verified: usize,
    pub refuted: usize,
    pub inconclusive: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub suite: String,
    pub millis: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub convention_hash: String,
    pub config: SuiteConfig,
    pub cases: Vec<CaseEntry>,
    pub summary: Summary,
    pub passed: bool,
    pub timings: Vec<Timing>,
}

impl SuiteReport {
    /// The report without timings, as pretty JSON.
    pub fn payload(&self) -> String {
        let mut r = self.clone();
        r.timings.clear();
        serde_json::to_string_pretty(&r).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Entries of one suite, primary readings only.
    pub fn primary<'a>(&'a self, suite: &'a str) -> impl Iterator<Item = &'a CaseEntry> + 'a {
        self.cases
            .iter()
            .filter(move |c| c.suite == suite && !c.alternative)
    }

    /// Exit code: 0 when passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub fn emit_report(report: &SuiteReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_json() + "\n")
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

struct Cases<'a> {
    suite: &'a str,
    out: Vec<CaseEntry>,
}

impl Cases<'_> {
    fn push(
        &mut self,
        case: impl Into<String>,
        ok: bool,
        checked: usize,
        seed: Option<u64>,
        witness: Option<String>,
    ) {
        let status = if ok {
            CaseStatus::Verified
        } else {
            CaseStatus::Refuted
        };
        self.out.push(CaseEntry {
            suite: self.suite.into(),
            case: case.into(),
            status,
            checked,
            alternative: false,
            seed,
            witness,
        });
    }

    fn example(&mut self, case: impl Into<String>, rep: &ExampleReport) {
        let w = rep.failures.first().map(|f| {
            format!(
                "trial {} (seed {}): {} {}",
                f.trial, f.seed, f.check, f.detail
            )
        });
        let seed = rep.failures.first().map(|f| f.seed);
        self.push(case, rep.passed(), rep.checks, seed, w);
    }
}

/// Runs every selected suite in order.
pub fn run(config: &SuiteConfig) -> Result<SuiteReport> {
    let suites = config.validate()?;
    let mut cases = Vec::new();
    let mut timings = Vec::new();
    for suite in suites {
        let start = Instant::now();
        let mut c = Cases {
            suite: suite.name(),
            out: Vec::new(),
        };
        run_suite(suite, config, &mut c)?;
        cases.extend(c.out);
        timings.push(Timing {
            suite: suite.name().into(),
            millis: start.elapsed().as_millis(),
        });
    }
    let mut summary = Summary::default();
    for c in cases.iter().filter(|c| !c.alternative) {
        match c.status {
            CaseStatus::Verified => summary.verified += 1,
            CaseStatus::Refuted => summary.refuted += 1,
            CaseStatus::Inconclusive => summary.inconclusive += 1,
            CaseStatus::Skipped => summary.skipped += 1,
        }
    }
    let passed = summary.refuted == 0 && (!config.strict || summary.inconclusive == 0);
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        convention_hash: convention_hash(),
        config: config.clone(),
        cases,
        summary,
        passed,
        timings,
    })
}

fn run_suite(suite: Suite, cfg: &SuiteConfig, c: &mut Cases<'_>) -> Result<()> {
    let dims = cfg.dims()?;
    match suite {
        Suite::Signs => signs(c)?,
        Suite::Example(ExampleSuite::C1) => {
            for d in [2, 3] {
                let rep = run_example_suite(ExampleSuite::C1, cfg.trials, cfg.seed, d)?;
                c.example(format!("jacobian rank 2d at d={d}"), &rep);
            }
        }
        Suite::Example(e) => {
            let rep = run_example_suite(e, cfg.trials, cfg.seed, 0)?;
            c.example(format!("relations at {}", rep.dims), &rep);
        }
        Suite::CompleteIntersection => {
            let setup = Arc::new(QuadraticSetup::new(dims));
            let mut bad = None;
            for t in 0..cfg.trials {
                let s = trial_seed(cfg.seed, t);
                let p = sample_point(&setup, 4, s)?.jacobian_rank_probe();
                if !p.is_complete_intersection_like() && bad.is_none() {
                    bad = Some((
                        s,
                        format!(
                            "rank {} (expected {}), fiber tangent {} (expected {})",
                            p.rank, p.expected_codim, p.fiber_tangent_dim, p.expected_fiber_dim
                        ),
                    ));
                }
            }
            let (seed, w) = bad.unzip();
            c.push(
                format!("jacobian at {}", setup.dims().label()),
                w.is_none(),
                cfg.trials,
                seed,
                w,
            );
        }
        Suite::Stability => {
            let setup = Arc::new(QuadraticSetup::new(dims));
            // sparse draws also reach the unstable strata
            let sampler = SamplerConfig {
                bound: 3,
                sparsity: 0.4,
                ..SamplerConfig::default()
            };
            let (mut stable, mut bad) = (0, None);
            for t in 0..cfg.trials {
                let s = trial_seed(cfg.seed, t);
                let pt = sample_point_with(&setup, &sampler, s)?;
                let (st, co) = (pt.is_stable(), pt.is_costable());
                stable += st as usize;
                if st != co && bad.is_none() {
                    bad = Some((s, format!("stable={st}, costable={co}")));
                }
            }
            let (seed, w) = bad.unzip();
            let w = w.or_else(|| Some(format!("{stable} of {} stable", cfg.trials)));
            c.push(
                format!("stable iff costable at {}", setup.dims().label()),
                seed.is_none(),
                cfg.trials,
                seed,
                w,
            );
        }
        Suite::Sigma => {
            let setup = Arc::new(QuadraticSetup::new(dims));
            let mut bad = None;
            for t in 0..cfg.trials {
                let s = trial_seed(cfg.seed, t);
                let pt = TypeAPoint::sample_on_s(&setup, 3, s)?;
                let img = pt.sigma();
                let sq = img.sigma();
                let preserved = img.s_residuals().iter().all(Matrix::is_zero);
                let neg = |v: &[Matrix]| v.iter().map(|m| -m).collect::<Vec<_>>();
                let square = sq.a == pt.a
                    && sq.a_prime == pt.a_prime
                    && sq.b == pt.b
                    && sq.p == neg(&pt.p)
                    && sq.q == neg(&pt.q);
                if !(preserved && square) && bad.is_none() {
                    bad = Some((
                        s,
                        format!("preserves S: {preserved}, square matches: {square}"),
                    ));
                }
            }
            let (seed, w) = bad.unzip();
            c.push(
                format!("sigma at {}", setup.dims().label()),
                w.is_none(),
                cfg.trials,
                seed,
                w,
            );
        }
        Suite::RInvariance => {
            let lie = Arc::new(LiePresentation::new(&dims)?);
            let cl = classical_r_invariance(&lie);
            let first = |f: Option<&crate::ideal::InvarianceWitness>| {
                f.map(|w| format!("{} against {}", w.generator, w.relation))
            };
            c.push(
                "classical",
                cl.passed(),
                cl.pairs,
                None,
                first(cl.failures.first()),
            );
            let alg = Algebra::new(lie);
            let qu = quantum_r_invariance(&alg, &IdealBasis::new(&alg));
            c.push(
                "quantum",
                qu.passed(),
                qu.pairs,
                None,
                first(qu.failures.first()),
            );
        }
        Suite::Pbw => pbw(&dims, cfg.seed, c)?,
        Suite::Capelli => {
            let mut ds: Vec<usize> = cfg.d.iter().copied().filter(|&d| d > 0).collect();
            ds.sort_unstable();
            ds.dedup();
            for d in ds {
                let rep = capelli_newton_check(d, cfg.order, 0)?;
                let w = match rep.chosen() {
                    Some(ch) => format!(
                        "shift {}; D = Capelli: {}; D_r = 0 past d: {}",
                        ch.shift.name(),
                        rep.d_matches_capelli,
                        rep.truncation.iter().all(|t| t.1)
                    ),
                    None => "no shift satisfies the identity".into(),
                };
                c.push(
                    format!("newton identity d={d} order {}", cfg.order),
                    rep.passed(),
                    rep.candidates.len(),
                    None,
                    Some(w),
                );
            }
        }
        Suite::Relations(f) => {
            let rep = check_relation_family(f, &dims, cfg.order, cfg.bound)?;
            for (alt, list) in [(false, &rep.cases), (true, &rep.alternative_readings)] {
                for r in list {
                    c.out.push(CaseEntry {
                        suite: c.suite.into(),
                        case: r.case.clone(),
                        status: r.status,
                        checked: r.checked,
                        alternative: alt,
                        seed: None,
                        witness: r.witness.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

fn signs(c: &mut Cases<'_>) -> Result<()> {
    let x = Matrix::from_i64(&[&[5]]);
    let neg = Matrix::from_i64(&[&[-5]]);
    let n4 = QuadraticSetup::from_dims(4, vec![0, 1, 1])?;
    let n2 = QuadraticSetup::from_dims(2, vec![1, 1])?;
    let checks = [
        ("N=4 q_2 = -p_2", n4.derive_pq(2, &x)?, &neg),
        ("N=4 q_3 = p_1", n4.derive_pq(1, &x)?, &x),
        ("N=4 q_1 = p_3", n4.derive_qp(1, &x)?, &x),
        ("N=2 q_1 = -p_1", n2.derive_pq(1, &x)?, &neg),
        ("N=2 q_0 = p_0", n2.derive_qp(0, &x)?, &x),
    ];
    for (name, got, want) in checks {
        let ok = &got == want;
        c.push(name, ok, 1, None, (!ok).then(|| format!("got {got:?}")));
    }
    Ok(())
}

const CONFLUENCE_WORDS: usize = 1000;
const ASSOCIATIVITY_TRIPLES: usize = 200;

fn pbw(dims: &DimVector, seed: u64, c: &mut Cases<'_>) -> Result<()> {
    let lie = Arc::new(LiePresentation::new(dims)?);
    let bad = lie.check_structure();
    let w = bad.map(|(x, y, z)| {
        format!(
            "{}, {}, {}",
            lie.generator(x),
            lie.generator(y),
            lie.generator(z)
        )
    });
    c.push(
        "jacobi and antisymmetry",
        bad.is_none(),
        lie.len().pow(3),
        None,
        w,
    );
    c.push(
        "grading is additive",
        lie.grading_is_additive(),
        lie.len().pow(2),
        None,
        None,
    );
    let alg = Algebra::new(lie.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = lie.len() as GenId;
    let mut word = |len: usize| -> Vec<GenId> {
        (0..rng.gen_range(0..=len))
            .map(|_| rng.gen_range(0..n))
            .collect()
    };
    let mut bad = None;
    for _ in 0..CONFLUENCE_WORDS {
        let w = word(6);
        let left = rewrite_word(&lie, &w, SwapStrategy::Leftmost);
        if left != rewrite_word(&lie, &w, SwapStrategy::Rightmost) || left != alg.normal_form(&w) {
            bad.get_or_insert(w);
        }
    }
    let show = |w: &[GenId]| {
        w.iter()
            .map(|&g| lie.generator(g).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    c.push(
        "normal-form confluence",
        bad.is_none(),
        CONFLUENCE_WORDS,
        None,
        bad.as_deref().map(show),
    );
    let mut bad = None;
    for _ in 0..ASSOCIATIVITY_TRIPLES {
        let (a, b, d) = (word(3), word(3), word(3));
        let (x, y, z) = (
            alg.normal_form(&a),
            alg.normal_form(&b),
            alg.normal_form(&d),
        );
        if alg.multiply(&alg.multiply(&x, &y), &z) != alg.multiply(&x, &alg.multiply(&y, &z)) {
            bad.get_or_insert([a, b, d].map(|w| show(&w)).join(" | "));
        }
    }
    c.push(
        "associativity",
        bad.is_none(),
        ASSOCIATIVITY_TRIPLES,
        None,
        bad,
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_and_validates() {
        let text = r#"{"N":4,"d":[0,1,1],"seed":7,"trials":100,"order":4,"bound":null,"strict":true,"suites":["C2","b-rel"]}"#;
        let cfg: SuiteConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.n, 4);
        assert_eq!(
            cfg.validate().unwrap(),
            vec![
                Suite::Example(ExampleSuite::C2),
                Suite::Relations(Family::BRel)
            ]
        );
        let mut bad = cfg.clone();
        bad.suites.push("nope".into());
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        let mut bad = cfg.clone();
        bad.d = vec![1, 1];
        assert!(bad.validate().is_err());
        assert!(
            serde_json::from_str::<SuiteConfig>(r#"{"N":2,"d":[1,1],"suites":[],"extra":1}"#)
                .is_err()
        );
    }

    #[test]
    fn suite_names_parse_back() {
        for name in Suite::names() {
            assert_eq!(Suite::parse(name).unwrap().name(), name);
        }
    }

    #[test]
    fn convention_table_matches_the_forms() {
        let table: toml::Value = CONVENTIONS.parse().unwrap();
        for n in [2, 4, 6] {
            let setup = QuadraticSetup::from_dims(n, vec![1; n / 2 + 1]).unwrap();
            let key = format!("n{n}");
            let w: Vec<i64> = (0..n as i64)
                .map(|m| {
                    if setup.w_sign(m) > num_traits::Zero::zero() {
                        1
                    } else {
                        -1
                    }
                })
                .collect();
            let pq: Vec<i64> = (1..=(n / 2) as i64)
                .map(|l| {
                    if setup.pq_sign(l) > num_traits::Zero::zero() {
                        1
                    } else {
                        -1
                    }
                })
                .collect();
            let read = |sec: &str| -> Vec<i64> {
                table[sec][&key]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_integer().unwrap())
                    .collect()
            };
            assert_eq!(read("form_w"), w, "form_w at N={n}");
            assert_eq!(read("boundary"), pq, "boundary at N={n}");
        }
    }

    #[test]
    fn classical_and_sign_suites_pass_deterministically() {
        let mut cfg =
            SuiteConfig::new(2, vec![1, 1], &["signs", "C2", "C1~", "sigma", "stability"]);
        cfg.trials = 10;
        let a = run(&cfg).unwrap();
        assert!(a.passed, "{}", a.to_json());
        assert_eq!(a.payload(), run(&cfg).unwrap().payload());
        assert_eq!(a.schema_version, SCHEMA_VERSION);
        assert_eq!(a.convention_hash.len(), 64);
    }
}
