//! Restarted first-order methods for strongly convex problems, and the
//! regularization reduction that handles merely convex ones.

use thiserror::Error;

use super::methods::{Accelerated, GradientDescent, Radius, Subgradient};
use super::oracle::{certified_gap, NonsmoothOracle, Regularized, SmoothOracle};
use crate::restart::{
    iters_to_halve, phase_count, run_with_policy, Constants, PhasePolicy, PhaseSummary,
    RestartError, ScheduleError, TraceRecord, Variant,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinimizeError {
    #[error("restarted minimization needs mu > 0 (got {0}); use the regularized reduction")]
    RequiresStrongConvexity(f64),
    #[error("no certificate for the initial gap is available")]
    NoCertificate,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Restart(#[from] RestartError),
}

/// Which smooth base method to restart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothVariant {
    GradientDescent,
    Accelerated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestartOptions {
    /// Rate constant `c` assumed for accelerated gradient descent. Doubled for
    /// the remaining phases whenever a phase fails to halve its certified gap.
    pub agd_constant: f64,
    /// Phases allowed past the planned `K` when the certified gap is still
    /// above the target. Any such phase pushes the run past its bound.
    pub extra_phases: usize,
}

impl Default for RestartOptions {
    fn default() -> Self {
        Self {
            agd_constant: 2.0,
            extra_phases: 32,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeReport {
    pub point: Vec<f64>,
    pub trace: Vec<TraceRecord>,
    pub phases: Vec<PhaseSummary>,
    /// Upper bound on the initial gap the schedule was built from.
    pub gap0: f64,
    /// Planned number of halvings `K`.
    pub planned_phases: usize,
    /// Closed-form iteration bound for the configured constants.
    pub bound: usize,
    /// Certified gap at the returned point, when a certificate exists.
    pub final_gap: Option<f64>,
    /// Accelerated rate constant in force at the end of the run.
    pub agd_constant: f64,
}

impl MinimizeReport {
    pub fn total_iters(&self) -> usize {
        self.phases.iter().map(|p| p.iters).sum()
    }

    pub fn oracle_calls(&self) -> u64 {
        self.trace.last().map_or(0, |r| r.oracle_calls)
    }

    pub fn within_bound(&self) -> bool {
        self.total_iters() <= self.bound
    }
}

struct Halving {
    variant: Variant,
    constants: Constants,
    gap0: f64,
    eps: f64,
    planned: usize,
    extra: usize,
}

impl PhasePolicy for Halving {
    fn next_phase(&mut self, history: &[PhaseSummary]) -> Option<usize> {
        if let Some(last) = history.last() {
            match last.end_gap {
                Some(gap) if gap <= self.eps => return None,
                None if history.len() >= self.planned => return None,
                _ => {}
            }
            if let Variant::Accelerated { c } = &mut self.variant {
                if !last.halved() {
                    *c *= 2.0;
                }
            }
        }
        if history.len() >= self.planned + self.extra {
            return None;
        }
        let nominal = self.gap0 * 0.5f64.powi(history.len() as i32);
        iters_to_halve(self.variant, &self.constants, nominal).ok()
    }
}

fn check_eps(eps: f64) -> Result<(), MinimizeError> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(MinimizeError::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )))
    }
}

/// Restarted gradient descent or accelerated gradient descent on a
/// `mu`-strongly convex, `L`-smooth function.
///
/// The initial gap bound is the recorded optimum gap when the oracle has one,
/// else `||grad f(x0)||^2 / (2 mu)`. Phases of `ceil(4L/mu)` (gradient descent)
/// or `ceil(sqrt(4cL/mu))` (accelerated) iterations run until the certified
/// gap is at most `eps`.
pub fn restarted_minimize<O: SmoothOracle + ?Sized>(
    variant: SmoothVariant,
    oracle: &O,
    x0: &[f64],
    eps: f64,
    options: &RestartOptions,
) -> Result<MinimizeReport, MinimizeError> {
    check_eps(eps)?;
    let mu = oracle.strong_convexity();
    if !(mu > 0.0) {
        return Err(MinimizeError::RequiresStrongConvexity(mu));
    }
    let gap0 = certified_gap(oracle, x0).ok_or(MinimizeError::NoCertificate)?;
    let constants = Constants {
        smoothness: Some(oracle.smoothness()),
        strong_convexity: mu,
        subgradient_bound: None,
    };
    let base_variant = match variant {
        SmoothVariant::GradientDescent => Variant::GradientDescent,
        SmoothVariant::Accelerated => Variant::Accelerated {
            c: options.agd_constant,
        },
    };
    let per_phase = iters_to_halve(base_variant, &constants, gap0.max(f64::MIN_POSITIVE))?;
    let planned = phase_count(gap0, eps);
    let mut policy = Halving {
        variant: base_variant,
        constants,
        gap0,
        eps,
        planned,
        extra: options.extra_phases,
    };
    if gap0 <= eps {
        policy.planned = 0;
        policy.extra = 0;
    }
    let start = x0.to_vec();
    let run = match variant {
        SmoothVariant::GradientDescent => {
            run_with_policy(&GradientDescent, oracle, &start, &mut policy)?
        }
        SmoothVariant::Accelerated => run_with_policy(&Accelerated, oracle, &start, &mut policy)?,
    };
    let final_gap = run.phases.last().map_or(Some(gap0), |p| p.end_gap);
    let agd_constant = match policy.variant {
        Variant::Accelerated { c } => c,
        _ => options.agd_constant,
    };
    Ok(MinimizeReport {
        point: run.point,
        trace: run.trace,
        phases: run.phases,
        gap0,
        planned_phases: planned,
        bound: per_phase * planned,
        final_gap,
        agd_constant,
    })
}

/// Restarted subgradient method for a `mu`-strongly convex function whose
/// subgradients are bounded by `G`, started within gap `gap0` of optimal.
///
/// Phase `l` runs `ceil(4 G^2 / (mu gap_l))` steps with `gap_l = gap0 2^-(l-1)`.
/// The reported bound is `ceil(8 G^2 / (eps mu))`.
pub fn restarted_subgradient<O: NonsmoothOracle + ?Sized>(
    oracle: &O,
    x0: &[f64],
    eps: f64,
    gap0: f64,
    options: &RestartOptions,
) -> Result<MinimizeReport, MinimizeError> {
    check_eps(eps)?;
    let mu = oracle.strong_convexity();
    if !(mu > 0.0) {
        return Err(MinimizeError::RequiresStrongConvexity(mu));
    }
    if !(gap0 > 0.0 && gap0.is_finite()) {
        return Err(MinimizeError::InvalidArgument(format!(
            "gap0 must be positive, got {gap0}"
        )));
    }
    let g = oracle.subgradient_bound();
    let constants = Constants {
        smoothness: None,
        strong_convexity: mu,
        subgradient_bound: Some(g),
    };
    iters_to_halve(Variant::Subgradient, &constants, gap0)?;
    let planned = phase_count(gap0, eps);
    let mut policy = Halving {
        variant: Variant::Subgradient,
        constants,
        gap0,
        eps,
        planned,
        extra: options.extra_phases,
    };
    let algo = Subgradient {
        radius: Radius::Halving { gap0, mu },
    };
    let run = run_with_policy(&algo, oracle, &x0.to_vec(), &mut policy)?;
    let final_gap = match run.phases.last() {
        Some(p) => p.end_gap,
        None => oracle
            .optimal_value()
            .map(|opt| (oracle.value(x0) - opt).max(0.0)),
    };
    Ok(MinimizeReport {
        point: run.point,
        trace: run.trace,
        phases: run.phases,
        gap0,
        planned_phases: planned,
        bound: (8.0 * g * g / (eps * mu)).ceil() as usize,
        final_gap,
        agd_constant: options.agd_constant,
    })
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub point: Vec<f64>,
    /// Smoothness of the regularized function, `L + eps / D^2`.
    pub smoothness: f64,
    /// Strong convexity of the regularized function, `eps / D^2`.
    pub strong_convexity: f64,
    /// Upper bound on `f(x) - f*`: the regularized certificate plus `eps / 2`.
    pub certified_gap: Option<f64>,
    /// The restarted accelerated run on the regularized function.
    pub inner: MinimizeReport,
}

/// Minimizes a smooth convex `f` to accuracy `eps` by solving
/// `f(x) + eps / (2 D^2) ||x - x0||^2` to accuracy `eps / 2` with restarted
/// accelerated gradient descent. Requires `||x0 - x*|| <= D` for some
/// minimizer `x*`.
pub fn regularized_reduction<O: SmoothOracle + ?Sized>(
    oracle: &O,
    x0: &[f64],
    radius: f64,
    eps: f64,
    options: &RestartOptions,
) -> Result<ReductionReport, MinimizeError> {
    check_eps(eps)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(MinimizeError::InvalidArgument(format!(
            "D must be positive, got {radius}"
        )));
    }
    let weight = eps / (radius * radius);
    let reg = Regularized::new(oracle, x0.to_vec(), weight);
    let inner = restarted_minimize(SmoothVariant::Accelerated, &reg, x0, 0.5 * eps, options)?;
    Ok(ReductionReport {
        point: inner.point.clone(),
        smoothness: reg.smoothness(),
        strong_convexity: reg.strong_convexity(),
        certified_gap: inner.final_gap.map(|g| g + 0.5 * eps),
        inner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::oracle::{AbsQuadratic, DiagonalQuadratic, LogSumExp};

    #[test]
    fn gd_bound_on_small_quadratic() {
        let f = DiagonalQuadratic::new(vec![1.0, 10.0]);
        let x0 = [1.0, 1.0];
        let r = restarted_minimize(
            SmoothVariant::GradientDescent,
            &f,
            &x0,
            1e-6,
            &Default::default(),
        )
        .unwrap();
        let k = phase_count(5.5, 1e-6);
        assert_eq!(r.bound, 40 * k);
        assert!(r.total_iters() <= 40 * k);
        assert!(r.final_gap.unwrap() <= 1e-6);
        for p in &r.phases {
            assert!(p.halved(), "{p:?}");
        }
    }

    #[test]
    fn agd_beats_gd() {
        let f = DiagonalQuadratic::new(vec![1.0, 10.0]);
        let x0 = [1.0, 1.0];
        let gd = restarted_minimize(
            SmoothVariant::GradientDescent,
            &f,
            &x0,
            1e-6,
            &Default::default(),
        )
        .unwrap();
        let agd = restarted_minimize(
            SmoothVariant::Accelerated,
            &f,
            &x0,
            1e-6,
            &Default::default(),
        )
        .unwrap();
        assert!(agd.total_iters() <= 9 * agd.planned_phases);
        assert!(agd.total_iters() < gd.total_iters());
        assert!(agd.final_gap.unwrap() <= 1e-6);
    }

    #[test]
    fn rejects_merely_convex() {
        let f = LogSumExp::new(1);
        assert!(matches!(
            restarted_minimize(
                SmoothVariant::GradientDescent,
                &f,
                &[1.0],
                1e-3,
                &Default::default()
            ),
            Err(MinimizeError::RequiresStrongConvexity(_))
        ));
    }

    #[test]
    fn already_optimal() {
        let f = DiagonalQuadratic::new(vec![1.0, 10.0]);
        let r = restarted_minimize(
            SmoothVariant::GradientDescent,
            &f,
            &[0.0, 0.0],
            1e-6,
            &Default::default(),
        )
        .unwrap();
        assert!(r.trace.is_empty());
        assert_eq!(r.final_gap, Some(0.0));
    }

    #[test]
    fn subgradient_within_320() {
        let f = AbsQuadratic::new(1, 1.0, 1.0);
        let r = restarted_subgradient(&f, &[1.0], 0.1, 1.5, &Default::default()).unwrap();
        assert_eq!(r.bound, 320);
        assert!(r.total_iters() <= 320);
        assert!(r.final_gap.unwrap() <= 0.1);
    }

    #[test]
    fn reduction_constants() {
        let f = DiagonalQuadratic::new(vec![1.0, 0.0]);
        let r = regularized_reduction(&f, &[1.0, 1.0], 1.0, 0.2, &Default::default()).unwrap();
        assert!((r.smoothness - 1.2).abs() < 1e-15);
        assert!((r.strong_convexity - 0.2).abs() < 1e-15);
        assert!(f.value(&r.point) <= 0.2);
    }

    #[test]
    fn reduction_at_minimizer() {
        let f = DiagonalQuadratic::new(vec![1.0]);
        let r = regularized_reduction(&f, &[0.0], 1.0, 0.1, &Default::default()).unwrap();
        assert_eq!(r.point, vec![0.0]);
        assert!(r.inner.trace.is_empty());
        assert_eq!(r.inner.final_gap, Some(0.0));
    }

    #[test]
    fn reduction_logsumexp() {
        let f = LogSumExp::new(1);
        let r = regularized_reduction(&f, &[2.0], 2.0, 1e-2, &Default::default()).unwrap();
        assert!(f.value(&r.point) <= f.value(&[0.0]) + 1e-2);
        assert!(r.certified_gap.unwrap() >= f.value(&r.point) - f.value(&[0.0]));
    }

    #[test]
    fn reduction_rejects_bad_radius() {
        let f = LogSumExp::new(1);
        assert!(regularized_reduction(&f, &[2.0], 0.0, 1e-2, &Default::default()).is_err());
    }
}
