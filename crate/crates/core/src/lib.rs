//! Restart schemes in three settings.
//!
//! * [`restart`]: the generic engine that runs a base algorithm in phases.
//! * [`smooth`]: gradient descent, accelerated gradient descent and the
//!   subgradient method, restarted on strongly convex problems, plus the
//!   regularization reduction for merely convex ones.
//! * [`discrete`]: augmentation over finite 0/1 sets, restarted through bit
//!   scaling and geometric scaling of the objective.
//! * [`submodular`]: greedy and threshold greedy for monotone submodular
//!   maximization under a cardinality constraint.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discrete;
pub mod restart;
pub mod smooth;
pub mod submodular;

pub use restart::{
    halving_schedule, phase_count, run_restart_scheme, run_with_policy, BaseAlgorithm, Constants,
    PhasePolicy, RestartSchedule, TraceRecord, Variant,
};
