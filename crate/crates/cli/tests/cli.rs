use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fairdiv::formats::{Report, Verdict};
use serde_json::{json, Value};
use tempfile::TempDir;

const WORKED_FORMULA: &str = "c worked example\np cnf 3 2\n1 2 -3 0\n-1 -2 -3 0\n";

fn fairdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairdiv"))
        .args(args)
        .env_remove("FAIRDIV_BUDGET")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a report ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn without_timing(mut v: Value) -> Value {
    v["stats"].as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn verify_po_on_worked_example() {
    let dir = TempDir::new().unwrap();
    let formula = write(&dir, "f.cnf", WORKED_FORMULA);
    let out = fairdiv(&["verify-reduction", "po", &formula]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    assert_eq!(r["verdict"], "yes");
    assert_eq!(r["result"]["agreement"], true);
    assert_eq!(r["result"]["satisfiable"], true);
    assert_eq!(r["result"]["improvement_dominates"], true);
    assert_eq!(r["result"]["dominated"], "yes");
    assert_eq!(r["result"]["relation"], "satisfiable ⇔ dominated");
    assert_eq!(r["provenance"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn verify_eef_on_true_and_false_formulas() {
    let dir = TempDir::new().unwrap();
    let yes = write(
        &dir,
        "yes.qcnf",
        "p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n",
    );
    let no = write(&dir, "no.qcnf", "p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n1 -2 0\n");
    for (path, value, exists) in [(yes, true, "no"), (no, false, "yes")] {
        let out = fairdiv(&["verify-reduction", "eef", &path, "--all-flags"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stdout)
        );
        let r = report(&out);
        assert_eq!(r["result"]["formula_value"], value);
        assert_eq!(r["result"]["eef_allocation_exists"], exists);
        assert_eq!(r["result"]["agreement"], true);
    }
}

#[test]
fn solve_leximin_small_instance() {
    let dir = TempDir::new().unwrap();
    let doc = json!({
        "kind": "max-atomic",
        "agents": ["a1", "a2"],
        "resources": ["o1", "o2"],
        "matrix": [[5, 3], [4, 1]],
    });
    let path = write(&dir, "i.json", &doc.to_string());
    let out = fairdiv(&["solve-leximin", &path]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["sorted"], json!([3, 4]));
    assert_eq!(r["witness"], json!({"o1": "a2", "o2": "a1"}));

    let out = fairdiv(&["solve-leximin", &path, "--K", "3,4"]);
    assert_eq!(report(&out)["result"]["leximin_better_than_K"], false);
    assert_eq!(out.status.code(), Some(1));
    let out = fairdiv(&["solve-leximin", &path, "--K", "2,4"]);
    assert_eq!(report(&out)["result"]["leximin_better_than_K"], true);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tiny_budget_exits_unknown() {
    let dir = TempDir::new().unwrap();
    let formula = write(&dir, "f.cnf", WORKED_FORMULA);
    let instance = dir.path().join("po.json");
    let out = fairdiv(&["reduce-po", &formula, "--out", instance.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(instance.exists());
    let out = fairdiv(&["check-pareto", instance.to_str().unwrap(), "--budget", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["verdict"], "unknown");
    let out = fairdiv(&["check-pareto", instance.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["verdict"], "no");
}

#[test]
fn budget_from_environment() {
    let dir = TempDir::new().unwrap();
    let formula = write(&dir, "f.cnf", WORKED_FORMULA);
    let instance = dir.path().join("po.json");
    fairdiv(&["reduce-po", &formula, "--out", instance.to_str().unwrap()]);
    let out = Command::new(env!("CARGO_BIN_EXE_fairdiv"))
        .args(["check-pareto", instance.to_str().unwrap()])
        .env("FAIRDIV_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_without_out_prints_document() {
    let dir = TempDir::new().unwrap();
    let formula = write(&dir, "f.cnf", WORKED_FORMULA);
    let out = fairdiv(&["reduce-po", &formula]);
    assert_eq!(out.status.code(), Some(0));
    let doc = fairdiv::formats::parse_instance(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(doc.instance.num_agents(), 10);
    assert_eq!(doc.instance.num_resources(), 12);
    assert!(doc.allocation.is_some() && doc.roles.is_some());
}

#[test]
fn envy_and_eef_checks() {
    let dir = TempDir::new().unwrap();
    let shared = json!({
        "kind": "additive",
        "agents": ["a", "b"],
        "resources": ["o"],
        "matrix": [[1], [1]],
        "allocation": {"o": "a"},
    });
    let path = write(&dir, "shared.json", &shared.to_string());
    let out = fairdiv(&["check-envy", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["witness"]["envious"], "b");
    let out = fairdiv(&["find-eef", &path]);
    assert_eq!(out.status.code(), Some(1));

    let own = json!({
        "kind": "additive",
        "agents": ["a", "b"],
        "resources": ["o1", "o2"],
        "matrix": [[1, 0], [0, "1/2"]],
    });
    let path = write(&dir, "own.json", &own.to_string());
    let out = fairdiv(&["find-eef", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["witness"], json!({"o1": "a", "o2": "b"}));
}

#[test]
fn errors_exit_three() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"kind": "additive", "agents": ["a"], "resources": ["o"], "matrix": [[0.5]]}"#,
    );
    let out = fairdiv(&["check-envy", &bad]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert_eq!(r["verdict"], "error");
    assert!(r["error"].as_str().unwrap().contains("$.matrix"));

    let missing = dir.path().join("nope.json");
    assert_eq!(
        fairdiv(&["check-envy", missing.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(fairdiv(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(
        fairdiv(&["check-pareto", &bad, "--budget", "zero"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(fairdiv(&["--help"]).status.code(), Some(0));
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let formula = write(&dir, "f.cnf", WORKED_FORMULA);
    let ae = write(
        &dir,
        "g.qcnf",
        "p cnf 3 2\na 1 0\ne 2 3 0\n1 2 -3 0\n-1 -2 3 0\n",
    );
    for args in [
        vec!["verify-reduction", "po", formula.as_str()],
        vec!["verify-reduction", "eef", ae.as_str(), "--all-flags"],
    ] {
        let first = without_timing(report(&fairdiv(&args)));
        let second = without_timing(report(&fairdiv(&args)));
        assert_eq!(first.to_string(), second.to_string());
    }
    let a = fairdiv(&["reduce-eef", &ae]);
    let b = fairdiv(&["reduce-eef", &ae]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_code_depends_only_on_verdict() {
    for (verdict, code) in [
        (Verdict::Yes, 0),
        (Verdict::No, 1),
        (Verdict::Unknown, 2),
        (Verdict::Error, 3),
    ] {
        for command in ["check-pareto", "find-eef", "verify-reduction"] {
            let mut r = Report::new(command, verdict);
            assert_eq!(r.exit_code(), code);
            r.result = json!({"anything": [1, 2, 3]});
            r.error = Some("noise".into());
            r.stats.nodes = Some(12345);
            r.stats.elapsed_ms = 99;
            assert_eq!(r.exit_code(), code);
        }
    }
}

#[test]
fn reduce_eef_reports_added_clauses() {
    let dir = TempDir::new().unwrap();
    let ae = write(&dir, "g.qcnf", "p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n");
    let out_path = dir.path().join("eef.json");
    let out = fairdiv(&["reduce-eef", &ae, "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["added_clauses"].as_array().unwrap().len(), 2);
    let doc = fairdiv::formats::parse_instance(&fs::read_to_string(Path::new(&out_path)).unwrap())
        .unwrap();
    assert!(doc.roles.is_some());
}
