//! Monotone submodular maximization under a cardinality constraint.
//!
//! Sets are represented as slices of element indices in `0..n`. Every
//! algorithm evaluates the function through a [`CountingOracle`], so the
//! number of value queries is exact.

pub mod greedy;
pub mod oracle;
pub mod verify;

use thiserror::Error;

pub use greedy::{
    brute_force_submax, greedy, marginal_gain, threshold_greedy, threshold_greedy_eval_bound,
    Selection,
};
pub use oracle::{CountingOracle, Coverage, FnSetFunction, GroundSet, Modular, SetFunction};
pub use verify::{verify_submodular, verify_submodular_report, Violation};

/// Largest ground set accepted by the exhaustive routines.
pub const MAX_BRUTE_FORCE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubmodularError {
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{what} {got} exceeds the limit {max}")]
    TooLarge {
        what: &'static str,
        got: usize,
        max: usize,
    },
    #[error("element {0} is already in the set")]
    AlreadyChosen(usize),
    #[error("element {element} is outside the ground set of size {n}")]
    OutOfRange { element: usize, n: usize },
    #[error("duplicate ground element `{0}`")]
    Duplicate(String),
    #[error("ground set is empty")]
    EmptyGroundSet,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}
