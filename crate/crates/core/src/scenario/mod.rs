//! Scenario files: definitions of algebras, actions and representations
//! followed by `verify` and `crossed` directives, executed in order.

mod build;
mod exec;
mod parse;

pub use parse::{parse, Block, Entry, Value};

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::config::{derive_seed, Config, Mode};

/// Problems with the input itself; these map to exit code 2.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unresolved reference `{name}`")]
    UnresolvedReference { line: usize, name: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

/// Command-line values that take precedence over the scenario's `config`.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub bound: Option<usize>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectiveReport {
    pub name: String,
    pub theorem: String,
    pub status: Status,
    pub seed: u64,
    pub details: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Outcome of a scenario. The machine-readable form leaves out wall times
/// so that equal inputs give equal bytes.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub seed_scheme: &'static str,
    pub config: Config,
    pub passed: bool,
    pub directives: Vec<DirectiveReport>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {} (seed {})", self.scenario, self.seed);
        for d in &self.directives {
            let _ = writeln!(
                out,
                "{:5} {} [{}] seed={} time={:.3}s",
                d.status.label(),
                d.name,
                d.theorem,
                d.seed,
                d.wall_time.as_secs_f64()
            );
            if let Some(m) = &d.message {
                let _ = writeln!(out, "      {m}");
            }
            if let serde_json::Value::Object(map) = &d.details {
                for (k, v) in map {
                    let _ = writeln!(out, "      {k}: {v}");
                }
            }
        }
        let passed = self.directives.iter().filter(|d| d.status == Status::Pass).count();
        let _ = writeln!(out, "{passed}/{} directives passed", self.directives.len());
        out
    }
}

pub const SEED_SCHEME: &str = "splitmix64(root + (index + 1) * 0x9E3779B97F4A7C15)";

/// Parses, resolves and runs a scenario held in memory.
pub fn run_source(name: &str, src: &str, overrides: &Overrides) -> Result<Report, ScenarioError> {
    let blocks = parse(src)?;
    let mut cfg = build::read_config(&blocks)?;
    if let Some(t) = overrides.tol {
        cfg.tol = t;
    }
    if let Some(b) = overrides.bound {
        cfg.bound = b;
    }
    if let Some(m) = overrides.mode {
        cfg.mode = m;
    }
    if let Some(s) = overrides.seed {
        cfg.seed = s;
    }
    cfg.validate().map_err(|message| ScenarioError::Invalid { line: 0, message })?;
    let env = build::Env::build(&blocks, cfg.clone())?;

    let mut directives = Vec::with_capacity(env.directives.len());
    for (i, d) in env.directives.iter().enumerate() {
        let seed = derive_seed(cfg.seed, i as u64);
        let dcfg = cfg.clone().with_seed(seed);
        let start = Instant::now();
        let (status, details, message) = exec::run(d, &dcfg);
        directives.push(DirectiveReport {
            name: d.name.clone(),
            theorem: d.theorem.clone(),
            status,
            seed,
            details,
            message,
            wall_time: start.elapsed(),
        });
    }
    let passed = directives.iter().all(|d| d.status == Status::Pass);
    Ok(Report { scenario: name.to_string(), seed: cfg.seed, seed_scheme: SEED_SCHEME, config: cfg, passed, directives })
}

/// Reads and runs a scenario file.
pub fn run_scenario(path: &std::path::Path, overrides: &Overrides) -> Result<Report, ScenarioError> {
    let src = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    run_source(&name, &src, overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHIFT: &str = r#"
        config { seed = 3 }
        algebra A { blocks = [1, 1] }
        group Z { name = "Z" }
        pauto a1 { algebra = A; map = [[0, 1]] }
        paction alpha { algebra = A; group = Z; alphas = { 1: a1 } }
        rep pi { algebra = A; multiplicity = [1, 1] }
        family u { 1: [[0, 0], [1, 0]] }
        covrep cov { action = alpha; rep = pi; family = u; faithful = true }
        verify laws { theorem = "section2"; action = alpha; max_len = 3; expect = { paut_order: 6 } }
        verify main { theorem = "6.2"; covrep = cov; alternates = [1, 2]; expect = { blocks: [2], pair_order: 6 } }
    "#;

    #[test]
    fn shift_scenario_passes() {
        let r = run_source("shift", SHIFT, &Overrides::default()).unwrap();
        assert!(r.passed, "{}", r.to_text());
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.directives[0].seed, derive_seed(3, 0));
    }

    #[test]
    fn failed_expectation_fails() {
        let src = SHIFT.replace("paut_order: 6", "paut_order: 7");
        let r = run_source("shift", &src, &Overrides::default()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.directives[0].status, Status::Fail);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn dangling_reference() {
        let src = SHIFT.replace("family = u;", "family = w;");
        assert!(matches!(
            run_source("shift", &src, &Overrides::default()),
            Err(ScenarioError::UnresolvedReference { name, .. }) if name == "w"
        ));
    }

    #[test]
    fn overrides_apply() {
        let o = Overrides { seed: Some(11), tol: Some(1e-8), ..Default::default() };
        let r = run_source("shift", SHIFT, &o).unwrap();
        assert_eq!(r.seed, 11);
        assert_eq!(r.config.tol, 1e-8);
        let bad = Overrides { tol: Some(-1.0), ..Default::default() };
        assert!(run_source("shift", SHIFT, &bad).is_err());
    }

    #[test]
    fn json_is_deterministic() {
        let a = run_source("shift", SHIFT, &Overrides::default()).unwrap().to_json();
        let b = run_source("shift", SHIFT, &Overrides::default()).unwrap().to_json();
        assert_eq!(a, b);
        assert!(!a.contains("wall_time"));
    }
}
