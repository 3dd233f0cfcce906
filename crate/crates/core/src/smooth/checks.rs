//! Numerical checks of the inequalities the restart analysis relies on.
//!
//! Each `*_violation` function returns how far the inequality is from
//! holding at the given points: 0 when it holds, a positive amount otherwise.

use super::oracle::{dist_sq, dot, SmoothOracle};

/// `max_i |(f(x + h e_i) - f(x - h e_i)) / 2h - grad f(x)_i|`.
pub fn finite_difference_check<O: SmoothOracle + ?Sized>(oracle: &O, x: &[f64], h: f64) -> f64 {
    let g = oracle.gradient(x);
    let mut probe = x.to_vec();
    let mut worst: f64 = 0.0;
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = oracle.value(&probe);
        probe[i] = x[i] - h;
        let down = oracle.value(&probe);
        probe[i] = x[i];
        worst = worst.max(((up - down) / (2.0 * h) - g[i]).abs());
    }
    worst
}

fn linear_gap<O: SmoothOracle + ?Sized>(oracle: &O, x: &[f64], y: &[f64]) -> (f64, f64) {
    let g = oracle.gradient(x);
    let diff: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
    (oracle.value(y) - oracle.value(x), dot(&g, &diff))
}

/// `f(y) - f(x) >= <grad f(x), y - x>`.
pub fn convexity_violation<O: SmoothOracle + ?Sized>(oracle: &O, x: &[f64], y: &[f64]) -> f64 {
    let (df, lin) = linear_gap(oracle, x, y);
    (lin - df).max(0.0)
}

/// `f(y) - f(x) >= <grad f(x), y - x> + (mu/2) ||y - x||^2`.
pub fn strong_convexity_violation<O: SmoothOracle + ?Sized>(
    oracle: &O,
    x: &[f64],
    y: &[f64],
) -> f64 {
    let (df, lin) = linear_gap(oracle, x, y);
    (lin + 0.5 * oracle.strong_convexity() * dist_sq(x, y) - df).max(0.0)
}

/// `f(y) - f(x) <= <grad f(x), y - x> + (L/2) ||y - x||^2`.
pub fn smoothness_violation<O: SmoothOracle + ?Sized>(oracle: &O, x: &[f64], y: &[f64]) -> f64 {
    let (df, lin) = linear_gap(oracle, x, y);
    (df - lin - 0.5 * oracle.smoothness() * dist_sq(x, y)).max(0.0)
}

/// `f(y) - f(x*) >= (mu/2) ||y - x*||^2`; `None` without a known minimizer.
pub fn quadratic_growth_violation<O: SmoothOracle + ?Sized>(oracle: &O, y: &[f64]) -> Option<f64> {
    let star = oracle.minimizer()?;
    let opt = oracle
        .optimal_value()
        .unwrap_or_else(|| oracle.value(&star));
    let gap = oracle.value(y) - opt;
    Some((0.5 * oracle.strong_convexity() * dist_sq(y, &star) - gap).max(0.0))
}
