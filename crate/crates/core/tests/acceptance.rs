//! One PASS/FAIL line per acceptance criterion.
//!
//! The run always exits 0 so that a red criterion stays visible without
//! hiding the rest of the test suite. Set `ZASTAVA_ACCEPTANCE_STRICT=1` to
//! turn any FAIL into a nonzero exit.

use std::time::Instant;

use zastava::harness::{run, CaseEntry, SuiteConfig, SuiteReport};
use zastava::relations::CaseStatus;

fn cfg(n: usize, d: &[usize], suites: &[&str]) -> SuiteConfig {
    let mut c = SuiteConfig::new(n, d.to_vec(), suites);
    c.seed = 2024;
    c.strict = true;
    c
}

fn report(c: &SuiteConfig) -> Result<SuiteReport, String> {
    run(c).map_err(|e| e.to_string())
}

fn describe(c: &CaseEntry) -> String {
    let w = c.witness.as_deref().unwrap_or("");
    format!("{}/{} {:?} {w}", c.suite, c.case, c.status)
}

/// `(passed, detail)` over the primary cases of several reports.
fn verdict(reports: &[SuiteReport], keep: impl Fn(&CaseEntry) -> bool) -> (bool, String) {
    let cases: Vec<&CaseEntry> = reports
        .iter()
        .flat_map(|r| r.cases.iter())
        .filter(|c| !c.alternative && keep(c))
        .collect();
    let count = |s: CaseStatus| cases.iter().filter(|c| c.status == s).count();
    let bad: Vec<String> = cases
        .iter()
        .filter(|c| matches!(c.status, CaseStatus::Refuted | CaseStatus::Inconclusive))
        .take(3)
        .map(|c| describe(c))
        .collect();
    let ok = !cases.is_empty() && bad.is_empty();
    let mut detail = format!(
        "{} verified, {} refuted, {} inconclusive, {} skipped",
        count(CaseStatus::Verified),
        count(CaseStatus::Refuted),
        count(CaseStatus::Inconclusive),
        count(CaseStatus::Skipped)
    );
    if !bad.is_empty() {
        detail += &format!("; first: {}", bad.join("; "));
    }
    (ok, detail)
}

fn all(reports: Result<Vec<SuiteReport>, String>) -> (bool, String) {
    match reports {
        Ok(r) => verdict(&r, |_| true),
        Err(e) => (false, format!("error: {e}")),
    }
}

fn many(configs: Vec<SuiteConfig>) -> (bool, String) {
    all(configs.iter().map(report).collect())
}

const CI_DIMS: [(usize, &[usize]); 3] = [(2, &[2, 2]), (4, &[1, 1, 1]), (4, &[2, 1, 1])];

fn criterion(k: usize) -> (&'static str, (bool, String)) {
    match k {
        1 => (
            "sign-convention witnesses",
            many(vec![cfg(4, &[0, 1, 1], &["signs"])]),
        ),
        2 => (
            "C2 relations on 100 points",
            many(vec![cfg(4, &[0, 1, 1], &["C2"])]),
        ),
        3 => (
            "C1~ relation on 100 points",
            many(vec![cfg(2, &[1, 1], &["C1~"])]),
        ),
        4 => {
            let mut c = cfg(2, &[0, 2], &["C1"]);
            c.trials = 10;
            (
                "C1 independence: jacobian rank 2d at d = 2, 3",
                many(vec![c]),
            )
        }
        5 => {
            let cs = CI_DIMS
                .iter()
                .map(|(n, d)| {
                    let mut c = cfg(*n, d, &["complete-intersection"]);
                    c.trials = 20;
                    c
                })
                .collect();
            ("complete-intersection probe", many(cs))
        }
        6 => (
            "stability iff costability",
            many(
                CI_DIMS
                    .iter()
                    .map(|(n, d)| cfg(*n, d, &["stability"]))
                    .collect(),
            ),
        ),
        7 => {
            let cs = [(4, &[1, 2, 1][..]), (2, &[1, 1]), (6, &[1, 1, 2, 1])]
                .iter()
                .map(|(n, d)| {
                    let mut c = cfg(*n, d, &["sigma"]);
                    c.trials = 20;
                    c
                })
                .collect();
            ("sigma preserves S, squares to the (p, q) sign", many(cs))
        }
        8 => (
            "R-invariance, classical and quantum",
            many(vec![
                cfg(2, &[1, 1], &["r-invariance"]),
                cfg(4, &[1, 1, 1], &["r-invariance"]),
            ]),
        ),
        9 => (
            "PBW engine health",
            many(vec![
                cfg(4, &[1, 1, 1], &["pbw"]),
                cfg(4, &[1, 2, 1], &["pbw"]),
            ]),
        ),
        10 => (
            "b-rel at N=2, d=(1,1), order 4, strict",
            many(vec![cfg(2, &[1, 1], &["b-rel"])]),
        ),
        11 => (
            "bb-commutators at N=4, d=(1,1,1)",
            many(vec![cfg(4, &[1, 1, 1], &["bb-commutators"])]),
        ),
        12 => {
            let mut c = cfg(2, &[1, 2], &["capelli"]);
            c.order = 6;
            ("Capelli/Newton to order 6 at d = 1, 2", many(vec![c]))
        }
        13 => {
            let mut quad = cfg(2, &[1, 1], &["phi-d"]);
            quad.order = 3;
            let mut serre = quad.clone();
            serre.order = 2;
            let res = (|| -> Result<(bool, String), String> {
                let q = report(&quad)?;
                let s = report(&serre)?;
                let (qa, qd) = verdict(std::slice::from_ref(&q), |c| !c.case.starts_with("serre"));
                let (sa, sd) = verdict(std::slice::from_ref(&s), |c| c.case.starts_with("serre"));
                Ok((
                    qa && sa,
                    format!("quadratic and A-x at order 3: {qd} | Serre at order 2: {sd}"),
                ))
            })();
            (
                "phi-d homomorphism at N=2, d=(1,1)",
                res.unwrap_or_else(|e| (false, format!("error: {e}"))),
            )
        }
        14 => {
            let mut c = cfg(2, &[1, 1], &["signs", "C2", "C1~", "stability", "b-rel"]);
            c.trials = 30;
            c.order = 2;
            let res = match (report(&c), report(&c)) {
                (Ok(a), Ok(b)) => {
                    let same = a.payload() == b.payload();
                    (
                        same,
                        format!(
                            "payload {} bytes, hash {}",
                            a.payload().len(),
                            &a.convention_hash[..12]
                        ),
                    )
                }
                (Err(e), _) | (_, Err(e)) => (false, format!("error: {e}")),
            };
            ("deterministic report payload", res)
        }
        _ => unreachable!(),
    }
}

fn main() {
    let mut failed = 0;
    for k in 1..=14 {
        let start = Instant::now();
        let (name, (ok, detail)) = criterion(k);
        failed += !ok as usize;
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} criterion {k:>2}: {name} ({detail}) [{secs:.1}s]",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {} of 14 criteria pass", 14 - failed);
    if failed > 0 && std::env::var("ZASTAVA_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
