use super::*;

fn spec(id: &str, seed: u64, reps: usize) -> SuiteSpec {
    SuiteSpec {
        reps,
        ..SuiteSpec::new(id, seed).unwrap()
    }
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn quotes(citation: &str) -> Vec<&str> {
    citation.split('"').skip(1).step_by(2).collect()
}

#[test]
fn catalog_census() {
    let ids: Vec<&str> = catalog().iter().map(|s| s.id).collect();
    assert!(ids.len() >= 15, "{ids:?}");
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), ids.len());
    for s in catalog() {
        assert!(!quotes(s.citation).is_empty(), "{}", s.id);
    }
}

#[test]
fn citations_quote_the_source_verbatim() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../paper.md");
    let Ok(text) = std::fs::read_to_string(path) else {
        return;
    };
    let text = squash(&text);
    for s in catalog() {
        for q in quotes(s.citation) {
            assert!(text.contains(&squash(q)), "{}: {q}", s.id);
        }
    }
}

#[test]
fn unknown_suite_and_bounds() {
    assert!(matches!(
        run(&SuiteSpec {
            suite: "prop-0.0".into(),
            ..spec("ex-2.5", 0, 1)
        }),
        Err(Error::UnknownSuite(_))
    ));
    let mut s = spec("prop-5.1", 0, 1);
    s.bounds.max_objects = 10_000;
    assert!(matches!(run(&s), Err(Error::SizeBoundExceeded { .. })));
    let mut s = spec("prop-5.1", 0, 1);
    s.bounds.dim_bound = 40;
    assert!(matches!(run(&s), Err(Error::DimensionBoundExceeded { .. })));
    let mut s = spec("thm-7.4", 0, 1);
    s.bounds.probes = vec!["nonsense".into()];
    assert!(matches!(run(&s), Err(Error::Parse(_))));
}

#[test]
fn probes_by_name() {
    assert_eq!(probe("[2]").unwrap(), poset(2));
    assert_eq!(probe("1").unwrap(), poset(1));
    assert_eq!(probe("[1]x[1]").unwrap().num_objects(), 4);
    assert!(probe("iso").unwrap().is_groupoid());
}

#[test]
fn runs_are_deterministic_and_sorted() {
    let a = run(&spec("prop-5.1", 7, 12)).unwrap();
    let mut seq = spec("prop-5.1", 7, 12);
    seq.exec = Execution::Sequential;
    let b = run(&seq).unwrap();
    let ja: Vec<Value> = a.iter().map(|r| r.untimed_json()).collect();
    let jb: Vec<Value> = b.iter().map(|r| r.untimed_json()).collect();
    assert_eq!(
        serde_json::to_string(&ja).unwrap(),
        serde_json::to_string(&jb).unwrap()
    );
    assert!(a
        .windows(2)
        .all(|w| w[0].instance_hash <= w[1].instance_hash));
    assert!(a.iter().all(|r| r.pass && r.witness.is_none()));
    assert!(a.iter().all(|r| r.citation.contains("Proposition 5.1")));
}

#[test]
fn replay_reproduces_a_case() {
    let reports = run(&spec("prop-7.1", 3, 4)).unwrap();
    for r in &reports {
        let again = replay(&serde_json::to_string(r).unwrap()).unwrap();
        assert_eq!(again.untimed_json(), r.untimed_json());
        let bare = replay(&serde_json::to_string(&r.replay).unwrap()).unwrap();
        assert_eq!(bare.instance_hash, r.instance_hash);
    }
}

#[test]
fn malformed_witnesses() {
    assert!(matches!(
        replay("not json"),
        Err(Error::MalformedWitness(_))
    ));
    assert!(matches!(
        replay(r#"{"suite": "ex-2.5"}"#),
        Err(Error::MalformedWitness(_))
    ));
    let w =
        r#"{"suite": "nope", "index": 0, "seed": 1, "bounds": {"max_objects": 2, "dim_bound": 2}}"#;
    assert!(matches!(replay(w), Err(Error::UnknownSuite(_))));
}

#[test]
fn failing_cases_carry_a_witness() {
    let s = find("ex-2.5").unwrap();
    let bad = Suite {
        id: "always-fails",
        citation: s.citation,
        default_reps: 1,
        case: |_, i, _| case(json!({ "i": i }), Verdict::fail("no", json!({ "why": i }))),
    };
    let ctx = context(&Bounds::default()).unwrap();
    let w = Witness {
        suite: bad.id.into(),
        index: 5,
        seed: 9,
        bounds: Bounds::default(),
    };
    let r = run_one(&bad, &ctx, w);
    assert!(!r.pass);
    let wit = r.witness.unwrap();
    assert_eq!(wit["counterexample"]["why"], 5);
    assert_eq!(wit["instance"]["i"], 5);
}

#[test]
fn every_suite_passes_a_small_run() {
    for s in catalog() {
        let reports = run(&spec(s.id, 11, 2)).unwrap();
        for r in &reports {
            assert!(r.pass, "{}: {} {:?}", s.id, r.detail, r.witness);
        }
    }
}
