//! Scenarios compiled into the library, in lexicographic order.

use crate::scenario::{run_source, Overrides, Report, ScenarioError};

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../scenarios/", $name, ".scn")))),*]
    };
}

const BUILTINS: &[(&str, &str)] = bundled![
    "example_6_3",
    "example_6_4_finite_analog",
    "idempotent_5_11",
    "pair_semigroup_4_4",
    "rotation_counterexample",
    "scalar_5_10",
    "semilattice_5_8",
];

pub fn names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

pub fn source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// The first line of a scenario's leading comment.
pub fn summary(name: &str) -> Option<&'static str> {
    let src = source(name)?;
    src.lines().next().and_then(|l| l.strip_prefix("# "))
}

pub fn run_builtin(name: &str, overrides: &Overrides) -> Result<Report, ScenarioError> {
    let src = source(name).ok_or_else(|| ScenarioError::Io(format!("no bundled scenario named `{name}`")))?;
    run_source(name, src, overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_sorted() {
        let n = names();
        assert!(n.len() >= 7);
        let mut sorted = n.clone();
        sorted.sort_unstable();
        assert_eq!(n, sorted);
        assert!(source("nope").is_none());
        assert!(n.iter().all(|b| summary(b).is_some()));
    }
}
