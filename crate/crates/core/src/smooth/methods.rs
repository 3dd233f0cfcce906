//! First-order base algorithms: gradient descent with step `1/L`, Nesterov's
//! accelerated gradient descent and the subgradient method.

use super::oracle::{certified_gap, NonsmoothOracle, SmoothOracle};
use crate::restart::{
    run_restart_scheme, AlgorithmError, BaseAlgorithm, PhaseRun, RestartError, RestartSchedule,
    StepRecord, TraceRecord,
};

/// A point together with the trace that produced it.
#[derive(Debug, Clone)]
pub struct Run {
    pub point: Vec<f64>,
    pub trace: Vec<TraceRecord>,
}

fn check_dim(expected: usize, x: &[f64]) -> Result<(), AlgorithmError> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(AlgorithmError::Dimension {
            expected,
            got: x.len(),
        })
    }
}

fn finite_vec(v: &[f64], quantity: &'static str, iter: usize) -> Result<(), AlgorithmError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(AlgorithmError::NonFinite { quantity, iter })
    }
}

fn finite(v: f64, quantity: &'static str, iter: usize) -> Result<f64, AlgorithmError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(AlgorithmError::NonFinite { quantity, iter })
    }
}

fn step_along(x: &[f64], g: &[f64], eta: f64) -> Vec<f64> {
    x.iter().zip(g).map(|(xi, gi)| xi - eta * gi).collect()
}

/// `x - (1/L) grad f(x)`.
pub fn gd_step<O: SmoothOracle + ?Sized>(
    oracle: &O,
    x: &[f64],
) -> Result<Vec<f64>, AlgorithmError> {
    check_dim(oracle.dim(), x)?;
    let g = oracle.gradient(x);
    finite_vec(&g, "gradient", 0)?;
    Ok(step_along(x, &g, 1.0 / oracle.smoothness()))
}

/// Gradient descent with fixed step `1/L`. Memoryless: one phase of `T`
/// iterations followed by another of `T'` is the same as one of `T + T'`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GradientDescent;

impl<O: SmoothOracle + ?Sized> BaseAlgorithm<O> for GradientDescent {
    type Point = Vec<f64>;

    fn run_phase(
        &self,
        oracle: &O,
        start: &Vec<f64>,
        _phase: usize,
        iters: usize,
    ) -> Result<PhaseRun<Vec<f64>>, AlgorithmError> {
        check_dim(oracle.dim(), start)?;
        let mut x = start.clone();
        let mut steps = Vec::with_capacity(iters);
        for t in 1..=iters {
            x = gd_step(oracle, &x).map_err(|e| match e {
                AlgorithmError::NonFinite { quantity, .. } => {
                    AlgorithmError::NonFinite { quantity, iter: t }
                }
                other => other,
            })?;
            let value = finite(oracle.value(&x), "value", t)?;
            steps.push(StepRecord {
                value,
                gap_certificate: certified_gap(oracle, &x),
                oracle_calls: t as u64,
            });
        }
        Ok(PhaseRun { point: x, steps })
    }

    fn certify(&self, oracle: &O, point: &Vec<f64>) -> Option<f64> {
        certified_gap(oracle, point)
    }
}

/// Nesterov's accelerated gradient descent:
///
/// ```text
/// y_0 = x_0
/// x_{t+1} = y_t - (1/L) grad f(y_t)
/// y_{t+1} = x_{t+1} + t/(t+3) (x_{t+1} - x_t)
/// ```
///
/// The momentum counter restarts at 0 in every phase.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accelerated;

impl<O: SmoothOracle + ?Sized> BaseAlgorithm<O> for Accelerated {
    type Point = Vec<f64>;

    fn run_phase(
        &self,
        oracle: &O,
        start: &Vec<f64>,
        _phase: usize,
        iters: usize,
    ) -> Result<PhaseRun<Vec<f64>>, AlgorithmError> {
        check_dim(oracle.dim(), start)?;
        let eta = 1.0 / oracle.smoothness();
        let mut x = start.clone();
        let mut y = start.clone();
        let mut steps = Vec::with_capacity(iters);
        for t in 0..iters {
            let g = oracle.gradient(&y);
            finite_vec(&g, "gradient", t + 1)?;
            let x_next = step_along(&y, &g, eta);
            let beta = t as f64 / (t as f64 + 3.0);
            y = x_next
                .iter()
                .zip(&x)
                .map(|(xn, xp)| xn + beta * (xn - xp))
                .collect();
            x = x_next;
            let value = finite(oracle.value(&x), "value", t + 1)?;
            steps.push(StepRecord {
                value,
                gap_certificate: certified_gap(oracle, &x),
                oracle_calls: t as u64 + 1,
            });
        }
        Ok(PhaseRun { point: x, steps })
    }

    fn certify(&self, oracle: &O, point: &Vec<f64>) -> Option<f64> {
        certified_gap(oracle, point)
    }
}

/// How the subgradient method picks the radius `D >= ||x_0 - x*||` of a phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Fixed(f64),
    /// Phase `l` starts within gap `gap0 2^-(l-1)`, so by strong convexity
    /// its distance to the optimum is at most `sqrt(2 gap_l / mu)`.
    Halving {
        gap0: f64,
        mu: f64,
    },
}

impl Radius {
    fn for_phase(&self, phase: usize) -> f64 {
        match *self {
            Radius::Fixed(d) => d,
            Radius::Halving { gap0, mu } => {
                let gap = gap0 * 0.5f64.powi(phase.saturating_sub(1) as i32);
                (2.0 * gap / mu).sqrt()
            }
        }
    }
}

/// Subgradient method with the fixed-horizon step `D / (G sqrt(T))`,
/// returning the best iterate seen (the start point included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subgradient {
    pub radius: Radius,
}

fn nonsmooth_gap<O: NonsmoothOracle + ?Sized>(oracle: &O, value: f64) -> Option<f64> {
    oracle.optimal_value().map(|opt| (value - opt).max(0.0))
}

impl<O: NonsmoothOracle + ?Sized> BaseAlgorithm<O> for Subgradient {
    type Point = Vec<f64>;

    fn run_phase(
        &self,
        oracle: &O,
        start: &Vec<f64>,
        phase: usize,
        iters: usize,
    ) -> Result<PhaseRun<Vec<f64>>, AlgorithmError> {
        check_dim(oracle.dim(), start)?;
        let g_bound = oracle.subgradient_bound();
        let radius = self.radius.for_phase(phase);
        if !(g_bound > 0.0) || !(radius > 0.0) {
            return Err(AlgorithmError::Invalid(format!(
                "subgradient bound {g_bound} and radius {radius} must be positive"
            )));
        }
        let eta = radius / (g_bound * (iters as f64).sqrt());
        let mut x = start.clone();
        let mut best = start.clone();
        let mut best_value = finite(oracle.value(start), "value", 0)?;
        let mut steps = Vec::with_capacity(iters);
        for t in 1..=iters {
            let g = oracle.subgradient(&x);
            finite_vec(&g, "subgradient", t)?;
            x = step_along(&x, &g, eta);
            let value = finite(oracle.value(&x), "value", t)?;
            if value < best_value {
                best_value = value;
                best.clone_from(&x);
            }
            steps.push(StepRecord {
                value: best_value,
                gap_certificate: nonsmooth_gap(oracle, best_value),
                oracle_calls: t as u64,
            });
        }
        Ok(PhaseRun { point: best, steps })
    }

    fn certify(&self, oracle: &O, point: &Vec<f64>) -> Option<f64> {
        nonsmooth_gap(oracle, oracle.value(point))
    }
}

fn single_phase<O, A>(algo: &A, oracle: &O, x0: &[f64], iters: usize) -> Result<Run, AlgorithmError>
where
    O: ?Sized,
    A: BaseAlgorithm<O, Point = Vec<f64>>,
{
    let schedule = if iters == 0 {
        RestartSchedule::empty()
    } else {
        RestartSchedule::uniform(iters, 1).expect("positive budget")
    };
    let run = run_restart_scheme(algo, oracle, &x0.to_vec(), &schedule).map_err(|e| match e {
        RestartError::Phase { source, .. } => source,
        other => AlgorithmError::Invalid(other.to_string()),
    })?;
    Ok(Run {
        point: run.point,
        trace: run.trace,
    })
}

/// `iters` steps of gradient descent from `x0`.
pub fn run_gd<O: SmoothOracle + ?Sized>(
    oracle: &O,
    x0: &[f64],
    iters: usize,
) -> Result<Run, AlgorithmError> {
    single_phase(&GradientDescent, oracle, x0, iters)
}

/// `iters` steps of accelerated gradient descent from `x0`.
pub fn run_agd<O: SmoothOracle + ?Sized>(
    oracle: &O,
    x0: &[f64],
    iters: usize,
) -> Result<Run, AlgorithmError> {
    single_phase(&Accelerated, oracle, x0, iters)
}

/// `iters` subgradient steps from `x0` for a caller-supplied radius
/// `radius >= ||x0 - x*||`; returns the best iterate.
pub fn run_subgradient<O: NonsmoothOracle + ?Sized>(
    oracle: &O,
    x0: &[f64],
    iters: usize,
    radius: f64,
) -> Result<Run, AlgorithmError> {
    let algo = Subgradient {
        radius: Radius::Fixed(radius),
    };
    single_phase(&algo, oracle, x0, iters)
}
