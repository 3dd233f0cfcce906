//! Exact linear optimization over finite 0/1 sets by augmentation, and its
//! restarted versions, bit scaling and geometric scaling.

pub mod augment;
pub mod binary;
pub mod instance;
pub mod scaling;

use thiserror::Error;

pub use augment::{
    augment, augment_observed, AugmentObjective, GeometricObjective, ImprovingOracle, Policy,
};
pub use binary::{
    geo_objective, scale_objective, BinaryVector, Dyadic, IntegerObjective, LinearFunctional,
    MAX_DIM,
};
pub use instance::{
    make_cube_powers, make_random_01_polytope, AugmentInstance, Orientation, MAX_ENUMERABLE_DIM,
};
pub use scaling::{bit_scaling, geometric_scaling, AugmentStep, ScalingPhase, ScalingRun};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscreteError {
    #[error("coordinate {index} is {value}, expected 0 or 1")]
    NotBinary { index: usize, value: u8 },
    #[error("{what} {got} exceeds the limit {max}")]
    TooLarge {
        what: &'static str,
        got: usize,
        max: usize,
    },
    #[error("objective entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: i64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("starting point {0} is not feasible")]
    Infeasible(String),
    #[error("feasible set is empty")]
    EmptyFeasibleSet,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}
