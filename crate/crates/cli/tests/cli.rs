use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entrench")).current_dir(root()).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exited")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

fn stable(mut v: Value) -> Value {
    if let Some(t) = v.get_mut("timing_ms") {
        *t = Value::from(0.0);
    }
    v
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden {name} differs");
}

fn text(args: &[&str]) -> String {
    String::from_utf8(run(args).stdout).unwrap()
}

const FIGURE1_QUERY: [&str; 4] = ["query", "fixtures/figure1.ent", "p", "b"];
const FIGURE1_EXTENSIONS: [&str; 3] = ["extensions", "fixtures/figure1.ent", "true"];
const EXAMPLE5_VERIFY: [&str; 4] = ["verify", "fixtures/example5", "--suites", "axioms,wd"];

#[test]
fn figure1_text_reports_match_golden() {
    golden("figure1_query.txt", &text(&FIGURE1_QUERY));
    golden("figure1_extensions.txt", &text(&FIGURE1_EXTENSIONS));
}

#[test]
fn figure1_json_report_matches_golden() {
    let v = stable(json(&FIGURE1_QUERY));
    golden("figure1_query.json", &(serde_json::to_string_pretty(&v).unwrap() + "\n"));
}

#[test]
fn example5_reports_match_golden() {
    golden("example5_verify.txt", &text(&EXAMPLE5_VERIFY));
    let v = stable(json(&EXAMPLE5_VERIFY));
    golden("example5_verify.json", &(serde_json::to_string_pretty(&v).unwrap() + "\n"));
}

#[test]
fn reports_are_identical_across_runs() {
    assert_eq!(text(&FIGURE1_QUERY), text(&FIGURE1_QUERY));
    assert_eq!(stable(json(&FIGURE1_EXTENSIONS)), stable(json(&FIGURE1_EXTENSIONS)));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["leq", "figure1", "f", "!p"]), 0);
    assert_eq!(code(&["leq", "figure1", "!p", "f"]), 1);
    assert_eq!(code(&["query", "figure1", "p", "b"]), 0);
    assert_eq!(code(&["query", "figure1", "true", "!p"]), 1);
    assert_eq!(code(&["leq", "figure1", "x", "p"]), 2);
    assert_eq!(code(&["query", "no/such/file.ent", "p", "p"]), 2);
    assert_eq!(code(&["verify", "example5", "--suites", "bogus"]), 2);
    assert_eq!(code(&["verify", "example5", "--suites", "wd"]), 1);
    assert_eq!(code(&["verify", "chain1", "--suites", "connected,sysp"]), 0);
    assert_eq!(code(&["verify", "figure1", "--suites", "connected"]), 3);
}

#[test]
fn fixture_ids_and_paths_agree() {
    assert_eq!(
        stable(json(&["query", "figure1", "p", "!f"]))["result"],
        stable(json(&["query", "fixtures/figure1.ent", "p", "!f"]))["result"]
    );
}

#[test]
fn json_validates_against_shipped_schema() {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(root().join("report.schema.json")).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let cases: [&[&str]; 9] = [
        &["leq", "figure1", "f", "!p"],
        &FIGURE1_QUERY,
        &FIGURE1_EXTENSIONS,
        &EXAMPLE5_VERIFY,
        &["verify", "figure1", "--suites", "sysp,connected", "--sampled", "2000", "--seed", "3"],
        &["verify", "--random", "3", "--n", "2", "--suites", "roundtrips"],
        &["translate", "chain1", "--direction", "n"],
        &["bench", "--n", "3", "--generators", "4"],
        &["leq", "figure1", "x", "p"],
    ];
    for args in cases {
        let v = json(args);
        if let Err(errors) = compiled.validate(&v) {
            let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
            panic!("{args:?}: {msgs:?}");
        };
    }
}

#[test]
fn text_and_json_agree_on_verdicts() {
    let args = ["verify", "example5", "--suites", "axioms,wd"];
    let t = text(&args);
    let v = json(&args);
    for suite in v["result"]["suites"].as_array().unwrap() {
        for verdict in suite["verdicts"].as_array().unwrap() {
            let law = verdict["law"].as_str().unwrap();
            let status = if verdict["pass"].as_bool().unwrap() { "pass" } else { "FAIL" };
            let line = format!(
                "{law}: {status} ({} instances, {} violations)",
                verdict["instances_checked"], verdict["violations"]
            );
            assert!(t.contains(&line), "missing `{line}` in text output");
        }
    }
}

#[test]
fn sampled_verify_is_seed_deterministic() {
    let args = ["verify", "figure1", "--suites", "sysp", "--sampled", "5000", "--seed", "9"];
    assert_eq!(text(&args), text(&args));
    let mode = &json(&args)["mode"];
    assert_eq!(mode["kind"], "sampled");
    assert_eq!(mode["seed"], 9);
    assert_eq!(mode["samples"], 5000);
}

#[test]
fn corrupted_fixtures_fail_with_counterexamples() {
    for suite in ["axioms", "wd", "splitting", "sysp", "oracle_eq"] {
        let path = format!("fixtures/corrupted/{suite}.ent");
        let v = json(&["verify", &path, "--suites", suite]);
        assert_eq!(v["result"]["pass"], false, "{suite}");
        assert!(!v["counterexamples"].as_array().unwrap().is_empty(), "{suite}");
        assert_eq!(code(&["verify", &path, "--suites", suite]), 1);
    }
}

#[test]
fn serve_answers_stdin_queries() {
    // the N-translation answers `a |~ b` exactly when `!a | !b <= !a`
    let queries = [("p", "b"), ("p", "!f"), ("true", "!p"), ("b", "f"), ("p & f", "false")];
    let mut child = Command::new(env!("CARGO_BIN_EXE_entrench"))
        .current_dir(root())
        .args(["translate", "figure1", "--direction", "n", "--serve"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input: String = queries.iter().map(|(a, b)| format!("{a} |~ {b}\n")).collect();
    input.push_str("# comment\nnot a query\n");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let lines: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(str::to_string).collect();
    assert_eq!(lines.len(), queries.len() + 1);
    for ((a, b), got) in queries.iter().zip(&lines) {
        let below = code(&["leq", "figure1", &format!("!({a}) | !({b})"), &format!("!({a})")]) == 0;
        assert_eq!(got, &below.to_string(), "{a} |~ {b}");
    }
    assert!(lines.last().unwrap().starts_with("error:"));
}

#[test]
fn compile_kb_emits_a_loadable_base_and_report() {
    let dir = std::env::temp_dir().join(format!("entrench-kb-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let kb = dir.join("birds.kb");
    std::fs::write(&kb, "vars: p b f\nb |~ f\np |~ b\np |~ !f\n").unwrap();
    let out = run(&["compile-kb", kb.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for conditional in ["b |~ f", "p |~ b", "p |~ !f"] {
        assert!(text.contains(&format!("# {conditional}: ")), "{conditional} missing from report");
    }
    let base = dir.join("birds.ent");
    std::fs::write(&base, &text).unwrap();
    assert!([0, 1].contains(&code(&["query", base.to_str().unwrap(), "p", "!f"])));
    std::fs::remove_dir_all(&dir).unwrap();
}
