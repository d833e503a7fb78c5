use crossed::builtins;
use crossed::scenario::{run_source, Overrides, ScenarioError, Status};

const BASE: &str = r#"
config { tol = 1e-9; seed = 4 }
algebra A { blocks = [1, 1] }
group Z { name = "Z" }
pauto a1 { algebra = A; map = [[0, 1]] }
paction alpha { algebra = A; group = Z; alphas = { 1: a1 } }
rep pi { algebra = A; multiplicity = [1, 1] }
family u { 1: [[0, 0], [1, 0]] }
covrep cov { action = alpha; rep = pi; family = u; faithful = true }
"#;

fn run(extra: &str) -> Result<crossed::scenario::Report, ScenarioError> {
    run_source("t", &format!("{BASE}{extra}"), &Overrides::default())
}

#[test]
fn every_builtin_passes() {
    for name in builtins::names() {
        let r = builtins::run_builtin(name, &Overrides::default()).unwrap();
        assert!(r.passed, "{name}\n{}", r.to_text());
        assert!(!r.directives.is_empty());
    }
}

#[test]
fn complex_literals_and_expectation_bounds() {
    let r = run(r#"
        family w { 1: [[0, 0], [(0, 1), 0]] }
        covrep cw { action = alpha; rep = pi; family = w }
        verify calc { theorem = "section3"; covrep = cw; max_len = 3; expect = { max_collapse.max: 1e-9 } }
    "#)
    .unwrap();
    assert!(r.passed, "{}", r.to_text());
}

#[test]
fn non_partial_isometry_is_a_failure_not_a_crash() {
    let r = run(r#"
        family bad { 1: [[0, 0], [2, 0]] }
        covrep cb { action = alpha; rep = pi; family = bad }
        verify calc { theorem = "section3"; covrep = cb }
    "#)
    .unwrap();
    assert_eq!(r.directives[0].status, Status::Fail);
    assert!(r.directives[0].message.is_some());
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn closure_bound_is_an_error_status() {
    let src = format!("{BASE}verify main {{ theorem = \"6.2\"; covrep = cov }}\n");
    let r = run_source("t", &src, &Overrides { bound: Some(3), ..Default::default() }).unwrap();
    assert_eq!(r.directives[0].status, Status::Error, "{}", r.to_text());
}

#[test]
fn input_errors() {
    assert!(matches!(run("verify v { theorem = \"4.4\"; covrep = missing }"), Err(ScenarioError::UnresolvedReference { .. })));
    assert!(matches!(run("algebra A { blocks = [2] }"), Err(ScenarioError::Invalid { .. })));
    assert!(matches!(run("verify v { theorem = \"9.9\"; covrep = cov }"), Err(ScenarioError::Invalid { .. })));
    assert!(matches!(run("algebra B { blocks = [1], colour = 3 }"), Err(ScenarioError::Parse { .. } | ScenarioError::Invalid { .. })));
    assert!(matches!(run("algebra B { blocks = [1]; colour = 3 }"), Err(ScenarioError::Invalid { .. })));
    match run("\n\nalgebra B { blocks = [1, }") {
        Err(ScenarioError::Parse { line, .. }) => assert!(line >= 10),
        other => panic!("{other:?}"),
    }
    assert!(run_source("t", "config { tol = 0 }", &Overrides::default()).is_err());
}

#[test]
fn directive_order_and_seeds_are_stable() {
    let r = run(r#"
        verify b { theorem = "4.4"; covrep = cov }
        verify a { theorem = "section2"; action = alpha }
    "#)
    .unwrap();
    let names: Vec<&str> = r.directives.iter().map(|d| d.name.as_str()).collect();
    assert_eq!(names, ["b", "a"]);
    assert_ne!(r.directives[0].seed, r.directives[1].seed);
    assert_eq!(r.to_json(), run("verify b { theorem = \"4.4\"; covrep = cov }\nverify a { theorem = \"section2\"; action = alpha }").unwrap().to_json());
}
