//! Numerical tolerances, closure bounds and seeding shared by every module.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Validation mode for the initial/final space conditions of covariant
/// representations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `u*u` and `uu*` must equal the ideal projections.
    #[default]
    Strict,
    /// `u*u` and `uu*` need only dominate the ideal projections.
    Lax,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Strict => f.write_str("strict"),
            Mode::Lax => f.write_str("lax"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Mode::Strict),
            "lax" => Ok(Mode::Lax),
            other => Err(format!("unknown mode `{other}` (expected strict or lax)")),
        }
    }
}

/// One record holding every tolerance and bound used by the engine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Frobenius tolerance for matrix identities and element equality.
    pub tol: f64,
    /// Gram–Schmidt drop threshold used to detect span dimension.
    pub drop_tol: f64,
    /// Relative singular-value threshold when extracting null spaces.
    pub rank_tol: f64,
    /// Minimum eigenvalue gap of the generic central element.
    pub gap_tol: f64,
    /// Maximum size of a generated inverse semigroup.
    pub bound: usize,
    /// Root seed; every directive derives its own seed from it.
    pub seed: u64,
    pub mode: Mode,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: 1e-9,
            drop_tol: 1e-10,
            rank_tol: 1e-8,
            gap_tol: 1e-6,
            bound: 512,
            seed: 0,
            mode: Mode::Strict,
        }
    }
}

impl Config {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    /// Checks that all tolerances and bounds are positive.
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("tol", self.tol),
            ("drop_tol", self.drop_tol),
            ("rank_tol", self.rank_tol),
            ("gap_tol", self.gap_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("config value `{name}` must be positive, got {v}"));
            }
        }
        if self.bound == 0 {
            return Err("config value `bound` must be positive".into());
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of child `index` from `root`.
///
/// The scheme is `splitmix64(root + (index + 1) * 0x9E3779B97F4A7C15)`, so
/// children of the same root are independent and each child can itself be
/// split further.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    splitmix64(root.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = Config::default();
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.tol, 1e-9);
        assert_eq!(cfg.bound, 512);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(Config::default().with_tol(0.0).validate().is_err());
        assert!(Config::default().with_bound(0).validate().is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(7, 0);
        let b = derive_seed(7, 1);
        assert_ne!(a, b);
        assert_eq!(a, derive_seed(7, 0));
    }

    #[test]
    fn mode_round_trip() {
        assert_eq!("lax".parse::<Mode>().unwrap(), Mode::Lax);
        assert_eq!(Mode::Strict.to_string(), "strict");
        assert!("loose".parse::<Mode>().is_err());
    }
}
