//! The convolution algebra of an inverse semigroup action, its
//! representations `π × v`, and verifiers for the crossed product
//! isomorphisms.

mod lelement;
mod realize;
mod verify;

pub use lelement::{random_lelement, LElement};
pub use realize::{induce_covrep, pi_times_v, realize_crossed_product, CrossedProductRealization, LinearExtension};
pub use verify::{
    left_regular, random_semilattice_action, Alternate, AlternateReport, verify_main_theorem, verify_scalar_crossed_product,
    verify_semilattice_crossed_product, verify_semilattice_idempotent_decomposition, LeftRegular, MainTheoremReport,
    ScalarReport, SemilatticeReport, DecompositionReport,
};

use thiserror::Error;

use crate::covariant::CovError;
use crate::cstar::CstarError;
use crate::semigroup::SemigroupError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrossedError {
    #[error("elements belong to different actions")]
    ParentMismatch,
    #[error("coefficient at {s} is not supported in E_{s}")]
    NotInIdeal { s: usize },
    #[error("semigroup index {0} is out of range")]
    OutOfRange(usize),
    #[error("covariant representation belongs to a different action")]
    CovrepMismatch,
    #[error("order collapse fails for {s} <= {t} (residual {residual:.3e})")]
    OrderCollapse { s: usize, t: usize, residual: f64 },
    #[error("representation of the crossed product is not a *-homomorphism: {0}")]
    NotStarHomomorphism(String),
    #[error("representation of the crossed product is degenerate")]
    NotNondegenerate,
    #[error("structures differ: {0}")]
    StructureMismatch(String),
    #[error("beta_{0} is ill defined at the idempotent {1}")]
    ActionIllDefined(usize, usize),
    #[error("spans differ: {0}")]
    SpanMismatch(String),
    #[error("diagram fails at {unit} delta_{s} (residual {residual:.3e})")]
    DiagramViolated { unit: String, s: usize, residual: f64 },
    #[error(transparent)]
    Cstar(#[from] CstarError),
    #[error(transparent)]
    Cov(#[from] CovError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}
