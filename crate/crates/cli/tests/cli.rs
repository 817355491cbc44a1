//! End-to-end runs of the `secat` binary against the bundled data.

use std::path::PathBuf;
use std::process::{Command, Output};

use secat_core::bounds::{parse_facts, BoundsEngine};
use serde_json::Value;

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name);
    p.to_string_lossy().into_owned()
}

fn secat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secat")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = secat(&all);
    (code(&out), serde_json::from_str(&stdout(&out)).unwrap())
}

/// The value of the result whose subject is `subject`.
fn value(report: &Value, subject: &str) -> String {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["subject"] == subject)
        .unwrap_or_else(|| panic!("no {subject} in {report}"))["value"]
        .as_str()
        .unwrap()
        .to_string()
}

/// A scratch file unique to this process and test.
fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("secat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn chain_invariants_of_small_models() {
    let s2 = data("s2.chain");
    let (c, r) = json(&["chain", "secat", &s2]);
    assert_eq!((c, value(&r, "secat(id)")), (0, "0".into()));
    let (c, r) = json(&["chain", "cat", &s2]);
    assert_eq!((c, value(&r, "cat(S2)")), (0, "1".into()));
    assert_eq!(r["cap"], 4);
    let (_, r) = json(&["chain", "cat", &s2, "--cap", "0"]);
    assert_eq!(value(&r, "cat(S2)"), "OVER_CAP(0)");
    assert_eq!(r["status"], "ok");
}

#[test]
fn trace_lists_the_tower_stages() {
    let out = secat(&["chain", "cat", &data("s2.chain"), "--trace"]);
    let text = stdout(&out);
    assert!(text.contains("| stage 0: 0 -> S2: section absent"), "{text}");
    assert!(text.contains("| stage 1:"), "{text}");
    let quiet = stdout(&secat(&["chain", "cat", &data("s2.chain")]));
    assert!(!quiet.contains("| stage"));
}

#[test]
fn corpus_relcat_minus_secat_is_zero_or_one() {
    let mut gaps = Vec::new();
    let dir = PathBuf::from(data("corpus"));
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(files.len() >= 10);
    for f in files {
        let f = f.to_string_lossy().into_owned();
        let (_, s) = json(&["chain", "secat", &f]);
        let (_, r) = json(&["chain", "relcat", &f]);
        let s: i64 = value(&s, "secat(iota)").parse().unwrap();
        let r: i64 = value(&r, "relcat(iota)").parse().unwrap();
        assert!((0..=1).contains(&(r - s)), "{f}: secat {s}, relcat {r}");
        gaps.push(r - s);
    }
    assert!(gaps.contains(&0) && gaps.contains(&1));
}

#[test]
fn certificates_validate_at_their_lengths() {
    let (c, r) = json(&["certify", "relcat", &data("pinch.cert")]);
    assert_eq!((c, value(&r, "relcat certificate")), (0, "accepted, length 1".into()));
    let (c, r) = json(&["certify", "pushcat", &data("pinch.cert")]);
    assert_eq!((c, value(&r, "pushcat certificate")), (0, "accepted, length 1".into()));
    let (c, r) = json(&["certify", "relcat", &data("suspension.cert")]);
    assert_eq!((c, value(&r, "relcat certificate")), (0, "accepted, length 2".into()));
}

#[test]
fn suspension_certificate_of_the_circle_has_length_two() {
    let written = scratch("suspension.cert", "");
    let (c, r) = json(&["certify", "suspension", &data("s1.chain"), "--output", &written]);
    assert_eq!(c, 0);
    assert_eq!(value(&r, "diagonal of the suspension of S1"), "accepted, length 2");
    let (c, r) = json(&["certify", "relcat", &written]);
    assert_eq!((c, value(&r, "relcat certificate")), (0, "accepted, length 2".into()));
}

#[test]
fn tampered_certificate_is_rejected_verbatim() {
    let out = secat(&["certify", "relcat", &data("pinch-tampered.cert")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("REJECT stage 0 rho-sigma: "), "{}", stdout(&out));
    let (c, r) = json(&["certify", "relcat", &data("pinch-tampered.cert")]);
    assert_eq!((c, r["status"].as_str()), (1, Some("reject")));
    assert!(r["error"].as_str().unwrap().starts_with("REJECT stage 0 rho-sigma"));
}

#[test]
fn estimates_emit_usable_fact_blocks() {
    let ring = data("cp3s4.ring");
    let cases = [
        (vec!["estimate", "compl", "sphere(2)"], "lower bound for compl(sphere_2)", "2"),
        (vec!["estimate", "cat", "cp(2)"], "lower bound for cat(cp_2)", "2"),
        (vec!["estimate", "secat-of-hom", &ring], "lower bound for secat(delta)", "2"),
    ];
    for (args, subject, want) in cases {
        let (c, r) = json(&args);
        assert_eq!((c, value(&r, subject)), (0, want.to_string()), "{args:?}");
        let facts = r["facts"].as_str().unwrap();
        let mut engine = BoundsEngine::from_facts(parse_facts(facts).unwrap()).unwrap();
        engine.propagate().unwrap();
        assert!(facts.contains(&format!(">= {want} source estimator:")), "{facts}");
    }
}

#[test]
fn bounds_reproduce_the_bundled_facts() {
    let (c, r) = json(&["bounds", &data("hopf.facts")]);
    assert_eq!(c, 0);
    assert_eq!(value(&r, "secat(h)"), "[1,1]");
    assert_eq!(value(&r, "relcat(h)"), "[2,2]");
    let (_, r) = json(&["bounds", &data("cp3s4.facts")]);
    assert_eq!(value(&r, "compl_map(iota)"), "[2,2]");
    let (_, r) = json(&["bounds", &data("evensphere.facts")]);
    for n in [2, 4, 6] {
        assert_eq!(value(&r, &format!("Compl(S{n})")), "[2,2]");
    }
}

#[test]
fn bounds_trace_explains_each_interval() {
    let out = stdout(&secat(&["bounds", &data("hopf.facts"), "--trace"]));
    assert!(out.contains("secat(h) = [1,1]\n    lo 1 by R8 "), "{out}");
    assert!(out.contains("| fixpoint after "), "{out}");
}

#[test]
fn inconsistent_facts_exit_with_one() {
    let cases = [
        "secat-facts v1\nobject X\nassert cat X = 1\nassert cat X >= 3\n",
        "secat-facts v1\nobject X\nassert cat X <= 0\nassert Cat X >= 2\n",
    ];
    for text in cases {
        let f = scratch("bad.facts", text);
        let out = secat(&["bounds", &f]);
        assert_eq!(code(&out), 1, "{text}");
        assert!(stdout(&out).contains("INCONSISTENT: "), "{}", stdout(&out));
    }
}

#[test]
fn input_errors_exit_with_two_and_distinct_codes() {
    let cases = [
        ("x.chain", "secat-chain v1\ncomplex X\ndegrees 0 1\ndims 1\n", "PARSE_ERROR line 2"),
        (
            "y.chain",
            "secat-chain v1\ncomplex X\ndegrees 0 2\ndims 1 1 1\nd 1 = 1\nd 2 = 1\n",
            "INVALID_COMPLEX",
        ),
        ("z.chain", "secat-chain v0\n", "PARSE_ERROR line 1"),
    ];
    for (name, text, want) in cases {
        let out = secat(&["chain", "cat", &scratch(name, text)]);
        assert_eq!(code(&out), 2, "{text}");
        assert!(stderr(&out).starts_with(want), "{}", stderr(&out));
    }
    let out = secat(&["estimate", "cat", "torus(3)"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).starts_with("UNKNOWN_NAME"));
    let out = secat(&["chain", "cat", "/no/such/file.chain"]);
    assert_eq!(code(&out), 2);
    assert_eq!(code(&secat(&["bounds"])), 2);
    assert_eq!(code(&secat(&["examples", "--disable-rule", "R99"])), 2);
}

#[test]
fn ambiguous_choices_must_be_named() {
    let f = data("corpus/map-02.chain");
    let out = secat(&["chain", "cat", &f]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--object"));
    let (c, r) = json(&["chain", "cat", &f, "--object", "X"]);
    assert_eq!(c, 0);
    assert!(value(&r, "cat(X)").parse::<usize>().is_ok());
}

#[test]
fn json_reports_are_deterministic() {
    for args in [
        vec!["bounds".to_string(), data("cp3s4.facts")],
        vec!["chain".to_string(), "relcat".to_string(), data("corpus/map-12.chain")],
        vec!["examples".to_string(), "--item".to_string(), "cp3-s4".to_string()],
    ] {
        let mut all: Vec<&str> = args.iter().map(String::as_str).collect();
        all.extend(["--format", "json"]);
        let (a, b) = (secat(&all), secat(&all));
        assert_eq!(a.stdout, b.stdout);
        assert!(!stdout(&a).contains("elapsed"));
    }
}

#[test]
fn examples_list_and_run_items() {
    let (c, r) = json(&["examples", "--list"]);
    assert_eq!(c, 0);
    let ids: Vec<&str> = r["results"].as_array().unwrap().iter().map(|e| e["subject"].as_str().unwrap()).collect();
    assert_eq!(ids.len(), 13);
    assert!(ids.contains(&"hopf") && ids.contains(&"cube-axiom") && ids.contains(&"strict-alpha"));
    let (c, r) = json(&["examples", "--item", "hopf", "--item", "pushout-increase"]);
    assert_eq!((c, value(&r, "hopf"), value(&r, "pushout-increase")), (0, "pass".into(), "pass".into()));
    assert_eq!(code(&secat(&["examples", "--item", "nope"])), 2);
}

#[test]
fn strict_alpha_fails_with_exit_one() {
    let (c, r) = json(&["examples", "--item", "strict-alpha"]);
    assert_eq!((c, value(&r, "strict-alpha")), (1, "fail".into()));
    assert_eq!(r["status"], "failed");
}

#[test]
fn rule_ablation_changes_the_hopf_item() {
    // the factorization rule alone is not load-bearing: another rule pins relcat(h)
    let (c, _) = json(&["examples", "--item", "hopf", "--disable-rule", "R8"]);
    assert_eq!(c, 0);
    let (c, r) = json(&["examples", "--item", "hopf", "--disable-rule", "R8", "--disable-rule", "R11"]);
    assert_eq!((c, value(&r, "hopf")), (1, "fail".into()));
    let notes = r["results"][0]["notes"].as_array().unwrap();
    let notes: Vec<&str> = notes.iter().map(|n| n.as_str().unwrap()).collect();
    assert!(notes.contains(&"secat(h) = [1,inf]"), "{notes:?}");
}
