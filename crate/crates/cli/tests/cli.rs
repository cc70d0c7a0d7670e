use std::process::{Command, Output};

use serde_json::Value;

fn twistfib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistfib"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_shows_the_catalog() {
    let o = twistfib(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 15);
    assert!(lines.iter().all(|l| l.contains('"')));
    assert!(text.contains("prop-5.1") && text.contains("lemma-A.4"));
}

#[test]
fn generate_is_deterministic() {
    let a = twistfib(&["generate", "fincat", "--seed", "42", "--max-objects", "3"]);
    let b = twistfib(&["generate", "fincat", "--seed", "42", "--max-objects", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["objects"].as_array().unwrap().len() <= 3);
    assert!(!twistfib(&["generate", "nothing"]).status.success());
}

#[test]
fn verify_writes_json_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.json");
    let o = twistfib(&[
        "verify",
        "prop-5.1",
        "--seed",
        "7",
        "--reps",
        "50",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("50 of 50 cases passed"));
    let reports: Vec<Value> =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(reports.len(), 50);
    assert!(reports.iter().all(|r| r["pass"] == true));

    let one = dir.path().join("one.json");
    std::fs::write(&one, reports[3].to_string()).unwrap();
    let r = twistfib(&["replay", one.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).contains(reports[3]["instance_hash"].as_str().unwrap()));
}

#[test]
fn verify_is_deterministic_across_execution_modes() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |p: &std::path::Path| -> Vec<Value> {
        let mut v: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        for r in &mut v {
            r.as_object_mut().unwrap().remove("timing_ms");
        }
        v
    };
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (p, extra) in [(&a, None), (&b, Some("--sequential"))] {
        let mut args = vec!["verify", "lemma-A.4", "--json", p.to_str().unwrap()];
        args.extend(extra);
        assert!(twistfib(&args).status.success());
    }
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn bad_input_is_rejected() {
    let o = twistfib(&["verify", "prop-0.0"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("prop-0.0"));
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    std::fs::write(&w, "{\"suite\": 3}").unwrap();
    assert!(!twistfib(&["replay", w.to_str().unwrap()]).status.success());
    assert!(
        !twistfib(&["verify", "prop-5.1", "--max-objects", "100000"])
            .status
            .success()
    );
}
