//! Generic restart engine.
//!
//! A restart scheme runs a base algorithm for a bounded number of iterations,
//! then runs it again from the point it returned, and so on. Each phase is
//! independent of the previous one except through the point handed over.
//!
//! Schedules come either from a fixed [`RestartSchedule`] or from a
//! [`PhasePolicy`] that decides the next phase budget after looking at the
//! certified gaps of the phases run so far.

use thiserror::Error;

/// One row of a convergence trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub phase: usize,
    pub global_iter: usize,
    pub objective_value: f64,
    pub gap_certificate: Option<f64>,
    pub oracle_calls: u64,
}

/// Per-iteration output of a base algorithm inside one phase.
///
/// `oracle_calls` counts calls made since the start of the phase.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub value: f64,
    pub gap_certificate: Option<f64>,
    pub oracle_calls: u64,
}

/// Result of running a base algorithm for one phase.
#[derive(Debug, Clone)]
pub struct PhaseRun<X> {
    pub point: X,
    pub steps: Vec<StepRecord>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgorithmError {
    #[error("non-finite {quantity} at iteration {iter}")]
    NonFinite { quantity: &'static str, iter: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RestartError {
    #[error("phase {phase}: {source}")]
    Phase {
        phase: usize,
        #[source]
        source: AlgorithmError,
    },
    #[error("phase {phase}: base algorithm ran {got} iterations, expected {expected}")]
    StepCount {
        phase: usize,
        expected: usize,
        got: usize,
    },
    #[error("phase {phase}: empty iteration budget")]
    EmptyPhase { phase: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("phase {phase} has zero iterations")]
    ZeroIterations { phase: usize },
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{0} is required for this variant")]
    Missing(&'static str),
}

/// A base algorithm that can be restarted.
///
/// `run_phase` must perform exactly `iters` iterations and return one
/// [`StepRecord`] per iteration. Implementations must be deterministic. The
/// phase index (starting at 1) is passed for algorithms whose parameters are
/// tied to the phase, such as a shrinking search radius; it is not state.
pub trait BaseAlgorithm<P: ?Sized> {
    type Point: Clone;

    fn run_phase(
        &self,
        problem: &P,
        start: &Self::Point,
        phase: usize,
        iters: usize,
    ) -> Result<PhaseRun<Self::Point>, AlgorithmError>;

    /// An upper bound on the primal gap at `point`, if one can be computed.
    fn certify(&self, _problem: &P, _point: &Self::Point) -> Option<f64> {
        None
    }
}

/// Per-phase iteration counts `T_1, ..., T_K`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RestartSchedule {
    per_phase_iters: Vec<usize>,
}

impl RestartSchedule {
    pub fn new(per_phase_iters: Vec<usize>) -> Result<Self, ScheduleError> {
        if let Some(i) = per_phase_iters.iter().position(|&t| t == 0) {
            return Err(ScheduleError::ZeroIterations { phase: i + 1 });
        }
        Ok(Self { per_phase_iters })
    }

    pub fn uniform(iters: usize, phases: usize) -> Result<Self, ScheduleError> {
        Self::new(vec![iters; phases])
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn phase_count(&self) -> usize {
        self.per_phase_iters.len()
    }

    pub fn per_phase_iters(&self) -> &[usize] {
        &self.per_phase_iters
    }

    pub fn total_iters(&self) -> usize {
        self.per_phase_iters.iter().sum()
    }
}

/// Summary of a completed phase, as seen by a [`PhasePolicy`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSummary {
    pub phase: usize,
    pub iters: usize,
    pub start_gap: Option<f64>,
    pub end_gap: Option<f64>,
}

impl PhaseSummary {
    /// True when both certificates are known and the end gap is at most half
    /// the start gap.
    pub fn halved(&self) -> bool {
        matches!((self.start_gap, self.end_gap), (Some(s), Some(e)) if e <= 0.5 * s)
    }
}

/// Decides the budget of the next phase from the history so far.
pub trait PhasePolicy {
    /// `None` ends the scheme.
    fn next_phase(&mut self, history: &[PhaseSummary]) -> Option<usize>;
}

impl PhasePolicy for RestartSchedule {
    fn next_phase(&mut self, history: &[PhaseSummary]) -> Option<usize> {
        self.per_phase_iters.get(history.len()).copied()
    }
}

/// Output of a restart run.
#[derive(Debug, Clone)]
pub struct RestartRun<X> {
    pub point: X,
    pub trace: Vec<TraceRecord>,
    pub phases: Vec<PhaseSummary>,
}

impl<X> RestartRun<X> {
    pub fn total_iters(&self) -> usize {
        self.phases.iter().map(|p| p.iters).sum()
    }

    pub fn oracle_calls(&self) -> u64 {
        self.trace.last().map_or(0, |r| r.oracle_calls)
    }
}

/// Runs `algo` once per phase of `schedule`, chaining end points into start
/// points. An empty schedule returns `x0` with an empty trace.
pub fn run_restart_scheme<P, A>(
    algo: &A,
    problem: &P,
    x0: &A::Point,
    schedule: &RestartSchedule,
) -> Result<RestartRun<A::Point>, RestartError>
where
    P: ?Sized,
    A: BaseAlgorithm<P>,
{
    let mut schedule = schedule.clone();
    run_with_policy(algo, problem, x0, &mut schedule)
}

/// Like [`run_restart_scheme`] but the phase budgets come from a policy.
pub fn run_with_policy<P, A, Pol>(
    algo: &A,
    problem: &P,
    x0: &A::Point,
    policy: &mut Pol,
) -> Result<RestartRun<A::Point>, RestartError>
where
    P: ?Sized,
    A: BaseAlgorithm<P>,
    Pol: PhasePolicy + ?Sized,
{
    let mut point = x0.clone();
    let mut trace = Vec::new();
    let mut phases: Vec<PhaseSummary> = Vec::new();
    let mut global_iter = 0;
    let mut calls_before = 0;
    let mut start_gap = algo.certify(problem, &point);

    while let Some(iters) = policy.next_phase(&phases) {
        let phase = phases.len() + 1;
        if iters == 0 {
            return Err(RestartError::EmptyPhase { phase });
        }
        let run = algo
            .run_phase(problem, &point, phase, iters)
            .map_err(|source| RestartError::Phase { phase, source })?;
        if run.steps.len() != iters {
            return Err(RestartError::StepCount {
                phase,
                expected: iters,
                got: run.steps.len(),
            });
        }
        for step in &run.steps {
            global_iter += 1;
            trace.push(TraceRecord {
                phase,
                global_iter,
                objective_value: step.value,
                gap_certificate: step.gap_certificate,
                oracle_calls: calls_before + step.oracle_calls,
            });
        }
        calls_before = trace.last().map_or(calls_before, |r| r.oracle_calls);
        point = run.point;
        let end_gap = algo.certify(problem, &point);
        phases.push(PhaseSummary {
            phase,
            iters,
            start_gap,
            end_gap,
        });
        start_gap = end_gap;
    }

    Ok(RestartRun {
        point,
        trace,
        phases,
    })
}

/// Base method whose halving time is being scheduled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    GradientDescent,
    /// Accelerated gradient descent with rate constant `c` in
    /// `f(x_t) - f* <= c L ||x_0 - x*||^2 / t^2`.
    Accelerated {
        c: f64,
    },
    Subgradient,
}

/// Problem constants the schedules depend on.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Constants {
    /// Smoothness `L` (gradient and accelerated variants).
    pub smoothness: Option<f64>,
    /// Strong convexity `mu`.
    pub strong_convexity: f64,
    /// Subgradient norm bound `G` (subgradient variant).
    pub subgradient_bound: Option<f64>,
}

fn positive(name: &'static str, value: f64) -> Result<f64, ScheduleError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ScheduleError::NonPositive { name, value })
    }
}

/// Number of halvings needed to bring `gap0` down to `eps`, i.e.
/// `ceil(log2(gap0 / eps))`, and 0 when `eps >= gap0`.
///
/// Computed by repeated exact halving so powers of two land exactly.
pub fn phase_count(gap0: f64, eps: f64) -> usize {
    if !(gap0 > eps) || !(eps > 0.0) || !gap0.is_finite() {
        return 0;
    }
    let mut gap = gap0;
    let mut k = 0;
    while gap > eps {
        gap *= 0.5;
        k += 1;
    }
    k
}

/// Iterations that provably halve a primal gap of size `gap` for `variant`.
///
/// * gradient descent: `ceil(4L/mu)`
/// * accelerated: `ceil(sqrt(4cL/mu))`
/// * subgradient: `ceil(4G^2/(mu * gap))`
pub fn iters_to_halve(
    variant: Variant,
    constants: &Constants,
    gap: f64,
) -> Result<usize, ScheduleError> {
    let mu = positive("mu", constants.strong_convexity)?;
    let t = match variant {
        Variant::GradientDescent => {
            let l = positive(
                "L",
                constants.smoothness.ok_or(ScheduleError::Missing("L"))?,
            )?;
            (4.0 * l / mu).ceil()
        }
        Variant::Accelerated { c } => {
            let l = positive(
                "L",
                constants.smoothness.ok_or(ScheduleError::Missing("L"))?,
            )?;
            let c = positive("c", c)?;
            (4.0 * c * l / mu).sqrt().ceil()
        }
        Variant::Subgradient => {
            let g = positive(
                "G",
                constants
                    .subgradient_bound
                    .ok_or(ScheduleError::Missing("G"))?,
            )?;
            let gap = positive("gap", gap)?;
            (4.0 * g * g / (mu * gap)).ceil()
        }
    };
    Ok((t as usize).max(1))
}

/// Builds the halving schedule: `K = phase_count(gap0, eps)` phases, each
/// long enough to halve the gap it starts from. For the subgradient variant
/// phase `l` is sized for the gap `gap0 * 2^-(l-1)`.
pub fn halving_schedule(
    variant: Variant,
    constants: &Constants,
    gap0: f64,
    eps: f64,
) -> Result<RestartSchedule, ScheduleError> {
    let gap0 = positive("gap0", gap0)?;
    let eps = positive("eps", eps)?;
    // validate constants even when no phase is needed
    iters_to_halve(variant, constants, gap0)?;
    let k = phase_count(gap0, eps);
    let mut iters = Vec::with_capacity(k);
    let mut gap = gap0;
    for _ in 0..k {
        iters.push(iters_to_halve(variant, constants, gap)?);
        gap *= 0.5;
    }
    RestartSchedule::new(iters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smooth(l: f64, mu: f64) -> Constants {
        Constants {
            smoothness: Some(l),
            strong_convexity: mu,
            subgradient_bound: None,
        }
    }

    #[test]
    fn phase_count_examples() {
        assert_eq!(phase_count(1.0, 1.0 / 1024.0), 10);
        assert_eq!(phase_count(1.0, 1.0), 0);
        assert_eq!(phase_count(5.0, 1e-3), 13);
        assert_eq!(phase_count(1.0, 2.0), 0);
    }

    #[test]
    fn gd_schedule() {
        let s = halving_schedule(Variant::GradientDescent, &smooth(10.0, 1.0), 1.0, 1e-3).unwrap();
        assert_eq!(s.phase_count(), 10);
        assert!(s.per_phase_iters().iter().all(|&t| t == 40));
        assert_eq!(s.total_iters(), 400);
    }

    #[test]
    fn agd_schedule() {
        let s = halving_schedule(
            Variant::Accelerated { c: 2.0 },
            &smooth(10.0, 1.0),
            1.0,
            1e-3,
        )
        .unwrap();
        assert_eq!(s.phase_count(), 10);
        assert!(s.per_phase_iters().iter().all(|&t| t == 9));
    }

    #[test]
    fn subgradient_schedule() {
        let c = Constants {
            smoothness: None,
            strong_convexity: 1.0,
            subgradient_bound: Some(2.0),
        };
        let s = halving_schedule(Variant::Subgradient, &c, 1.0, 0.1).unwrap();
        assert_eq!(s.per_phase_iters(), &[16, 32, 64, 128]);
        assert!(s.total_iters() <= 320);
    }

    #[test]
    fn rejects_bad_constants() {
        assert!(halving_schedule(Variant::GradientDescent, &smooth(0.0, 1.0), 1.0, 0.1).is_err());
        assert!(halving_schedule(Variant::GradientDescent, &smooth(1.0, -1.0), 1.0, 0.1).is_err());
        assert!(halving_schedule(Variant::GradientDescent, &smooth(1.0, 1.0), 1.0, 0.0).is_err());
        let no_g = Constants {
            strong_convexity: 1.0,
            ..Default::default()
        };
        assert_eq!(
            halving_schedule(Variant::Subgradient, &no_g, 1.0, 0.1),
            Err(ScheduleError::Missing("G"))
        );
    }

    #[test]
    fn schedule_rejects_zero() {
        assert_eq!(
            RestartSchedule::new(vec![3, 0]),
            Err(ScheduleError::ZeroIterations { phase: 2 })
        );
    }

    /// Counts iterations; the point is the number of iterations run so far.
    struct Counter;

    impl BaseAlgorithm<()> for Counter {
        type Point = usize;

        fn run_phase(
            &self,
            _: &(),
            start: &usize,
            _phase: usize,
            iters: usize,
        ) -> Result<PhaseRun<usize>, AlgorithmError> {
            let steps = (0..iters)
                .map(|i| StepRecord {
                    value: (start + i + 1) as f64,
                    gap_certificate: None,
                    oracle_calls: i as u64 + 1,
                })
                .collect();
            Ok(PhaseRun {
                point: start + iters,
                steps,
            })
        }
    }

    #[test]
    fn chains_phases() {
        let s = RestartSchedule::new(vec![2, 3, 1]).unwrap();
        let run = run_restart_scheme(&Counter, &(), &0, &s).unwrap();
        assert_eq!(run.point, 6);
        assert_eq!(run.trace.len(), 6);
        assert_eq!(run.total_iters(), 6);
        let phases: Vec<_> = run.trace.iter().map(|r| r.phase).collect();
        assert_eq!(phases, vec![1, 1, 2, 2, 2, 3]);
        for (i, r) in run.trace.iter().enumerate() {
            assert_eq!(r.global_iter, i + 1);
            assert_eq!(r.oracle_calls, i as u64 + 1);
            assert_eq!(r.objective_value, (i + 1) as f64);
        }
    }

    #[test]
    fn empty_schedule_returns_input() {
        let run = run_restart_scheme(&Counter, &(), &7, &RestartSchedule::empty()).unwrap();
        assert_eq!(run.point, 7);
        assert!(run.trace.is_empty());
    }

    struct Failing;

    impl BaseAlgorithm<()> for Failing {
        type Point = usize;

        fn run_phase(
            &self,
            _: &(),
            start: &usize,
            phase: usize,
            iters: usize,
        ) -> Result<PhaseRun<usize>, AlgorithmError> {
            if phase == 2 {
                return Err(AlgorithmError::NonFinite {
                    quantity: "value",
                    iter: 1,
                });
            }
            Counter.run_phase(&(), start, phase, iters)
        }
    }

    #[test]
    fn failure_carries_phase() {
        let s = RestartSchedule::uniform(2, 3).unwrap();
        let err = run_restart_scheme(&Failing, &(), &0, &s).unwrap_err();
        assert!(matches!(err, RestartError::Phase { phase: 2, .. }));
    }
}
