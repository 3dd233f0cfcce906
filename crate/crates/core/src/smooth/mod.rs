//! Smooth and non-smooth convex minimization.

pub mod checks;
pub mod methods;
pub mod oracle;
pub mod restarted;

pub use checks::{
    convexity_violation, finite_difference_check, quadratic_growth_violation, smoothness_violation,
    strong_convexity_violation,
};
pub use methods::{
    gd_step, run_agd, run_gd, run_subgradient, Accelerated, GradientDescent, Radius, Run,
    Subgradient,
};
pub use oracle::{
    certified_gap, gradient_certificate, AbsQuadratic, Assumed, DiagonalQuadratic, LogSumExp,
    MaxOfLinear, NonsmoothOracle, Regularized, SmoothOracle,
};
pub use restarted::{
    regularized_reduction, restarted_minimize, restarted_subgradient, MinimizeError,
    MinimizeReport, ReductionReport, RestartOptions, SmoothVariant,
};
