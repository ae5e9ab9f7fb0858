use std::path::Path;
use std::process::Command;

fn zastava(dir: &Path, config: &str, extra: &[&str]) -> (i32, String) {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    let report = dir.join("report.json");
    let _ = std::fs::remove_file(&report);
    let out = Command::new(env!("CARGO_BIN_EXE_zastava"))
        .arg("--config")
        .arg(&cfg)
        .arg("--report")
        .arg(&report)
        .args(extra)
        .output()
        .unwrap();
    let text = std::fs::read_to_string(&report).unwrap_or_default();
    (out.status.code().unwrap(), text)
}

fn without_timings(report: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(report).unwrap();
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn classical_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = zastava(
        dir.path(),
        r#"{"N":4,"d":[0,1,1],"seed":7,"trials":20,"suites":["C2","signs"]}"#,
        &[],
    );
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["summary"]["refuted"], 0);
    assert_eq!(v["convention_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn undefined_suite_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = zastava(
        dir.path(),
        r#"{"N":2,"d":[1,1],"suites":["no-such-suite"]}"#,
        &[],
    );
    assert_eq!(code, 2);
    assert!(report.is_empty());
}

#[test]
fn malformed_configs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in [
        r#"{"N":3,"d":[1,1],"suites":["C2"]}"#,
        r#"{"N":2,"d":[1],"suites":["C2"]}"#,
        "not json",
        r#"{"N":2,"d":[1,1],"suites":["C2"],"trials":0}"#,
    ] {
        assert_eq!(zastava(dir.path(), cfg, &[]).0, 2, "{cfg}");
    }
    assert_eq!(
        zastava(
            dir.path(),
            r#"{"N":2,"d":[1,1],"suites":["C2"]}"#,
            &["--order", "0"]
        )
        .0,
        2
    );
}

#[test]
fn refuted_relation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = zastava(
        dir.path(),
        r#"{"N":2,"d":[1,1],"order":2,"suites":["btilde"]}"#,
        &[],
    );
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert!(v["summary"]["refuted"].as_u64().unwrap() > 0);
}

#[test]
fn overrides_apply_and_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"N":2,"d":[1,1],"seed":1,"trials":5,"order":2,"suites":["C2"]}"#;
    let args = [
        "--suite", "C1~", "--suite", "b-rel", "--seed", "9", "--strict",
    ];
    let (code, a) = zastava(dir.path(), cfg, &args);
    assert_eq!(code, 0);
    let (_, b) = zastava(dir.path(), cfg, &args);
    assert_eq!(without_timings(&a), without_timings(&b));
    let v = without_timings(&a);
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["config"]["strict"], true);
    assert_eq!(v["config"]["suites"], serde_json::json!(["C1~", "b-rel"]));
}
