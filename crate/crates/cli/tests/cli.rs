use std::path::PathBuf;
use std::process::{Command, Output};

fn crossed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossed")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crossed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const SHIFT: &str = r#"
algebra A { blocks = [1, 1] }
group Z { name = "Z" }
pauto a1 { algebra = A; map = [[0, 1]] }
paction alpha { algebra = A; group = Z; alphas = { 1: a1 } }
rep pi { algebra = A; multiplicity = [1, 1] }
family u { 1: [[0, 0], [1, 0]] }
covrep cov { action = alpha; rep = pi; family = u; faithful = true }
verify main { theorem = "6.2"; covrep = cov; alternates = [2]; expect = { blocks: [2] } }
"#;

#[test]
fn lists_builtins_in_order() {
    let out = crossed(&["builtins"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert!(names.len() >= 7);
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for n in ["example_6_3", "example_6_4_finite_analog", "rotation_counterexample", "semilattice_5_8"] {
        assert!(names.contains(&n), "{n} missing");
    }
}

#[test]
fn builtin_passes_and_reports_blocks() {
    let json = scratch("builtin.json");
    let out = crossed(&["run", "example_6_3", "--machine-report", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    let main = report["directives"].as_array().unwrap().iter().find(|d| d["name"] == "main").unwrap();
    assert_eq!(main["details"]["blocks"], serde_json::json!([2]));
}

#[test]
fn file_scenario_and_failing_expectation() {
    let good = scratch("shift.scn");
    std::fs::write(&good, SHIFT).unwrap();
    assert_eq!(crossed(&["run", good.to_str().unwrap()]).status.code(), Some(0));
    let bad = scratch("shift_bad.scn");
    std::fs::write(&bad, SHIFT.replace("blocks: [2]", "blocks: [1, 1]")).unwrap();
    let out = crossed(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn input_errors_exit_2() {
    let dangling = scratch("dangling.scn");
    std::fs::write(&dangling, SHIFT.replace("family = u;", "family = nowhere;")).unwrap();
    let out = crossed(&["run", dangling.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere"));

    let syntax = scratch("syntax.scn");
    std::fs::write(&syntax, "algebra A { blocks = [1, 1 }\n").unwrap();
    assert_eq!(crossed(&["run", syntax.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(crossed(&["run", "no_such_scenario"]).status.code(), Some(2));
    assert_eq!(crossed(&["run", "example_6_3", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(crossed(&["run", "example_6_3", "--mode", "sideways"]).status.code(), Some(2));
    assert_eq!(crossed(&["fuzz", "section2", "--count", "0"]).status.code(), Some(2));
    assert_eq!(crossed(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn machine_reports_are_byte_identical() {
    let a = scratch("a.json");
    let b = scratch("b.json");
    for p in [&a, &b] {
        let out = crossed(&["run", "semilattice_5_8", "--seed", "5", "--machine-report", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let text = std::fs::read_to_string(&a).unwrap();
    assert!(text.contains("\"seed\": 5") && text.contains("seed_scheme"));
}

#[test]
fn fuzz_suites() {
    let json = scratch("fuzz.json");
    let out = crossed(&["fuzz", "section2", "--count", "100", "--seed", "7", "--machine-report", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["violations"].as_array().map(Vec::len), Some(0));

    let out = crossed(&["fuzz", "l-algebra", "--count", "100", "--machine-report", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let assoc = report["max_residuals"]["associativity"].as_f64().unwrap();
    assert!(assoc <= 1e-9);
}
