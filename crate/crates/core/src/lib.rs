//! Partial actions of discrete groups on finite-dimensional C*-algebras,
//! actions of finite inverse semigroups, and concrete realizations of their
//! crossed products as algebras of complex matrices.

pub mod builtins;
pub mod config;
pub mod covariant;
pub mod crossed;
pub mod cstar;
pub mod linalg;
pub mod partial_action;
pub mod semigroup;
pub mod scenario;
pub mod suites;

pub use config::{Config, Mode};
