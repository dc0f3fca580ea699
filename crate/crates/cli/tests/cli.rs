use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coevents::report::Report;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn coevents(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coevents"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn machine(args: &[&str]) -> Report {
    let mut full = args.to_vec();
    full.extend(["--format", "machine"]);
    let out = coevents(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    Report::from_machine(&stdout(&out)).unwrap()
}

#[test]
fn validate_t2() {
    let t2 = fixture("t2.json");
    let r = machine(&["validate", t2.to_str().unwrap()]);
    let v = r.validate.unwrap();
    assert!(v.quantum.pass);
    assert!(!v.classical.pass);
    assert_eq!(v.classical.violations[0].events, ["{1}", "{2}"]);
    assert!(v.null_cover);

    let text = stdout(&coevents(&["validate", t2.to_str().unwrap()]));
    assert!(text.contains("quantum (level-2): pass"));
    assert!(text.contains("classical (kolmogorov): fail"));
    assert!(text.contains("null cover: true"));
}

#[test]
fn scheme_of_t2() {
    let t2 = fixture("t2.json");
    let out = coevents(&["coevents", t2.to_str().unwrap(), "--set", "scheme"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("scheme (1): [{1,2}*]"));
}

#[test]
fn coin_orders() {
    let coin = fixture("coin.json");
    let r = machine(&["orders", coin.to_str().unwrap(), "--set", "multiplicative"]);
    let o = r.orders.unwrap();
    assert!(o.meet_agree);
    assert!(!o.join_agree);
    assert_eq!(o.join_witnesses, [("{h}".to_string(), "{t}".to_string())]);
}

#[test]
fn report_is_deterministic_and_round_trips() {
    for name in ["coin.json", "t2.json"] {
        let path = fixture(name);
        let path = path.to_str().unwrap();
        for format in ["text", "machine"] {
            let a = coevents(&["report", path, "--format", format]);
            let b = coevents(&["report", path, "--format", format]);
            assert_eq!(a.status.code(), Some(0));
            assert_eq!(a.stdout, b.stdout, "{name} {format}");
        }
        let emitted = stdout(&coevents(&["report", path, "--format", "machine"]));
        let parsed = Report::from_machine(&emitted).unwrap();
        assert_eq!(parsed.to_machine(), emitted);
    }
}

#[test]
fn flags_reach_the_analyses() {
    let t2 = fixture("t2.json");
    let t2 = t2.to_str().unwrap();
    let r = machine(&["tau", t2, "--event", "1,2"]);
    assert_eq!(r.tau.unwrap().entries[0].image, "[{1}*, {2}*, {1,2}*]");

    let r = machine(&["topos", t2, "--event", "1,2", "--context", "1,2,3"]);
    let chi = r.topos.unwrap().chi;
    assert_eq!(chi.len(), 1);
    assert_eq!(chi[0].sieve, "@{1,2,3}*: [{1}*, {2}*, {1,2}*]");

    let r = machine(&["complete", t2, "--mode", "boolean"]);
    assert!(r.complete.unwrap().boolean);

    let r = machine(&["coevents", t2, "--set", "multiplicative", "--include-empty-dual"]);
    assert_eq!(r.coevents.unwrap().sets[0].members[0], "{}*");

    let r = machine(&["audit", t2, "--event", "1", "--other", "2"]);
    let audit = r.audit.unwrap();
    assert_eq!(audit.checked, 7);
    assert!(audit.and_identity_holds);
}

#[test]
fn exit_codes() {
    let t2 = fixture("t2.json");
    let t2 = t2.to_str().unwrap();
    assert_eq!(coevents(&["frobnicate", t2]).status.code(), Some(1));
    assert_eq!(coevents(&["tau", t2, "--event", "9"]).status.code(), Some(1));
    assert_eq!(coevents(&["validate"]).status.code(), Some(1));
    assert_eq!(coevents(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"sample_space\": [\"h\",\n}").unwrap();
    let out = coevents(&["validate", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let dup = dir.path().join("dup.json");
    std::fs::write(
        &dup,
        r#"{"sample_space": ["h", "h"], "measure": {"amplitudes": [1, 0]}}"#,
    )
    .unwrap();
    assert_eq!(coevents(&["validate", dup.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(
        coevents(&["validate", dir.path().join("missing.json").to_str().unwrap()]).status.code(),
        Some(2)
    );

    let out = coevents(&["coevents", t2, "--set", "all", "--cap", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--cap"));
    let out = coevents(&["topos", t2, "--sieve-cap", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--sieve-cap"));
}

#[test]
fn law_failures_are_findings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad_sum_rule.json");
    // Nonnegative and normalized, but violates the level-2 rule.
    std::fs::write(
        &path,
        r#"{"sample_space": ["a", "b", "c"], "measure": {"event_table": {
            "": 0, "a": 1, "b": 1, "c": 1, "a,b": 0, "a,c": 0, "b,c": 0, "a,b,c": 1}}}"#,
    )
    .unwrap();
    let out = coevents(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("quantum (level-2): fail"));
}
