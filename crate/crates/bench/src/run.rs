//! Running and auditing experiments.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use restarts::discrete::{
    augment_observed, bit_scaling, geometric_scaling, AugmentInstance, ImprovingOracle,
    LinearFunctional, Orientation, Policy, ScalingRun,
};
use restarts::smooth::{
    regularized_reduction, restarted_minimize, restarted_subgradient, Assumed, NonsmoothOracle,
    RestartOptions, SmoothOracle, SmoothVariant,
};
use restarts::submodular::{
    brute_force_submax, greedy, threshold_greedy, threshold_greedy_eval_bound, CountingOracle,
    Coverage, SetFunction, MAX_BRUTE_FORCE,
};
use restarts::TraceRecord;

use crate::config::{Domain, ExperimentConfig};
use crate::task::{AugmentAlgo, ContinuousAlgo, ContinuousProblem, SubmodularAlgo, Task};
use crate::BenchError;

/// Relative slack when comparing a certificate with the true gap.
const CERT_TOL: f64 = 1e-12;

/// Summary of one experiment.
///
/// `bound_satisfied` holds iff the run finished, `measured <= bound`, and
/// every audit listed in `violations` passed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub experiment_id: String,
    pub domain: Domain,
    pub algo: String,
    pub instance: String,
    /// What `measured` counts: iterations, augmentation steps or evaluations.
    pub measure: &'static str,
    pub measured: u64,
    pub bound: Option<u64>,
    pub bound_satisfied: bool,
    pub final_value: Option<f64>,
    /// Gap certificate at the returned point (continuous), or the primal gap
    /// against the enumerated optimum (augment, submodular).
    pub final_gap: Option<f64>,
    /// Gap measured against the known optimum, independent of the solver.
    pub true_gap: Option<f64>,
    pub approx_ratio: Option<f64>,
    pub violations: Vec<String>,
    pub error: Option<String>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone)]
pub struct CellOutput {
    pub record: ResultRecord,
    pub trace: Vec<TraceRecord>,
}

struct Outcome {
    measure: &'static str,
    measured: u64,
    bound: Option<u64>,
    final_value: Option<f64>,
    final_gap: Option<f64>,
    true_gap: Option<f64>,
    approx_ratio: Option<f64>,
    violations: Vec<String>,
    trace: Vec<TraceRecord>,
}

impl Outcome {
    fn new(
        measure: &'static str,
        measured: u64,
        bound: Option<u64>,
        trace: Vec<TraceRecord>,
    ) -> Self {
        let mut violations = Vec::new();
        if let Some(b) = bound {
            if measured > b {
                violations.push(format!("{measure} {measured} exceed the bound {b}"));
            }
        }
        Self {
            measure,
            measured,
            bound,
            final_value: None,
            final_gap: None,
            true_gap: None,
            approx_ratio: None,
            violations,
            trace,
        }
    }
}

/// Validates and runs one experiment. Only configuration problems are
/// returned as errors; failures during the run are recorded in the result.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<CellOutput, BenchError> {
    let task = Task::from_config(cfg)?;
    Ok(execute(cfg, &task))
}

/// Results of a matrix, in configuration order.
#[derive(Debug, Clone)]
pub struct MatrixOutcome {
    pub cells: Vec<CellOutput>,
}

impl MatrixOutcome {
    pub fn all_satisfied(&self) -> bool {
        self.cells.iter().all(|c| c.record.bound_satisfied)
    }
}

/// Runs every configuration whose id contains `filter`, in parallel across
/// cells. All configurations are validated before anything runs.
pub fn run_matrix(
    configs: &[ExperimentConfig],
    filter: Option<&str>,
) -> Result<MatrixOutcome, BenchError> {
    let selected: Vec<&ExperimentConfig> = configs
        .iter()
        .filter(|c| filter.is_none_or(|f| c.id().contains(f)))
        .collect();
    if selected.is_empty() {
        return Err(BenchError::usage("filter", "no experiments selected"));
    }
    let tasks = selected
        .iter()
        .map(|c| {
            Task::from_config(c).map_err(|e| match e {
                BenchError::Usage { field, message } => {
                    BenchError::usage(field, format!("{}: {message}", c.id()))
                }
                other => other,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cells = selected
        .par_iter()
        .zip(tasks.par_iter())
        .map(|(cfg, task)| execute(cfg, task))
        .collect();
    Ok(MatrixOutcome { cells })
}

fn execute(cfg: &ExperimentConfig, task: &Task) -> CellOutput {
    let start = Instant::now();
    let result = match task {
        Task::Continuous {
            algo,
            problem,
            x0,
            eps,
            mu,
        } => run_continuous(*algo, problem, x0, *eps, *mu),
        Task::Augment {
            algo,
            instance,
            orientation,
            policy,
        } => run_augment(*algo, instance, orientation, *policy),
        Task::Submodular {
            algo,
            coverage,
            k,
            eps,
        } => run_submodular(*algo, coverage, *k, *eps),
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut record = ResultRecord {
        experiment_id: cfg.id(),
        domain: cfg.domain,
        algo: cfg.algo.clone(),
        instance: cfg.instance.clone(),
        measure: "",
        measured: 0,
        bound: None,
        bound_satisfied: false,
        final_value: None,
        final_gap: None,
        true_gap: None,
        approx_ratio: None,
        violations: Vec::new(),
        error: None,
        wall_time_ms,
    };
    let trace = match result {
        Ok(out) => {
            record.measure = out.measure;
            record.measured = out.measured;
            record.bound = out.bound;
            record.bound_satisfied = out.violations.is_empty();
            record.final_value = out.final_value;
            record.final_gap = out.final_gap;
            record.true_gap = out.true_gap;
            record.approx_ratio = out.approx_ratio;
            record.violations = out.violations;
            out.trace
        }
        Err(e) => {
            record.error = Some(e);
            Vec::new()
        }
    };
    CellOutput { record, trace }
}

fn run_continuous(
    algo: ContinuousAlgo,
    problem: &ContinuousProblem,
    x0: &[f64],
    eps: f64,
    mu: Option<f64>,
) -> Result<Outcome, String> {
    match (algo, problem) {
        (ContinuousAlgo::RestartedGd, ContinuousProblem::Quadratic(f)) => {
            restarted_smooth(SmoothVariant::GradientDescent, f, x0, eps, mu)
        }
        (ContinuousAlgo::RestartedGd, ContinuousProblem::LogSumExp(f)) => {
            restarted_smooth(SmoothVariant::GradientDescent, f, x0, eps, mu)
        }
        (ContinuousAlgo::RestartedAgd, ContinuousProblem::Quadratic(f)) => {
            restarted_smooth(SmoothVariant::Accelerated, f, x0, eps, mu)
        }
        (ContinuousAlgo::RestartedAgd, ContinuousProblem::LogSumExp(f)) => {
            restarted_smooth(SmoothVariant::Accelerated, f, x0, eps, mu)
        }
        (ContinuousAlgo::RegularizedAgd, ContinuousProblem::Quadratic(f)) => {
            regularized(f, x0, eps)
        }
        (ContinuousAlgo::RegularizedAgd, ContinuousProblem::LogSumExp(f)) => {
            regularized(f, x0, eps)
        }
        (ContinuousAlgo::RestartedSubgradient, ContinuousProblem::AbsQuadratic(f)) => {
            subgradient(f, x0, eps, mu)
        }
        _ => Err("algorithm does not apply to this instance".into()),
    }
}

fn true_optimum(opt: Option<f64>) -> Result<f64, String> {
    opt.ok_or_else(|| "instance has no recorded optimum to audit against".to_string())
}

/// Every certificate in the trace must upper-bound the true gap.
fn audit_certificates(trace: &[TraceRecord], fstar: f64, violations: &mut Vec<String>) {
    let bad: Vec<&TraceRecord> = trace
        .iter()
        .filter(|r| {
            let gap = r.objective_value - fstar;
            r.gap_certificate
                .is_some_and(|c| c < gap * (1.0 - CERT_TOL))
        })
        .collect();
    if let Some(first) = bad.first() {
        violations.push(format!(
            "gap certificate below the true gap at {} of {} iterations (first at iteration {}: {:e} < {:e})",
            bad.len(),
            trace.len(),
            first.global_iter,
            first.gap_certificate.unwrap_or(f64::NAN),
            first.objective_value - fstar,
        ));
    }
}

fn audit_final_gap(true_gap: f64, eps: f64, violations: &mut Vec<String>) {
    if !(true_gap <= eps) {
        violations.push(format!(
            "true final gap {true_gap:e} exceeds epsilon {eps:e}"
        ));
    }
}

/// Runs with the optimum hidden, so the solver certifies through gradients
/// and the constants it was given, then audits against the true function.
fn restarted_smooth<O: SmoothOracle>(
    variant: SmoothVariant,
    truth: &O,
    x0: &[f64],
    eps: f64,
    mu: Option<f64>,
) -> Result<Outcome, String> {
    let mut solver = Assumed::new(truth).hide_optimum();
    if let Some(m) = mu {
        solver = solver.with_strong_convexity(m);
    }
    let fstar = true_optimum(truth.optimal_value())?;
    let report = restarted_minimize(variant, &solver, x0, eps, &RestartOptions::default())
        .map_err(|e| e.to_string())?;
    let mut out = Outcome::new(
        "iterations",
        report.total_iters() as u64,
        Some(report.bound as u64),
        report.trace,
    );
    let final_value = truth.value(&report.point);
    let true_gap = final_value - fstar;
    audit_final_gap(true_gap, eps, &mut out.violations);
    audit_certificates(&out.trace, fstar, &mut out.violations);
    out.final_value = Some(final_value);
    out.final_gap = report.final_gap;
    out.true_gap = Some(true_gap);
    Ok(out)
}

fn regularized<O: SmoothOracle>(truth: &O, x0: &[f64], eps: f64) -> Result<Outcome, String> {
    let fstar = true_optimum(truth.optimal_value())?;
    let star = truth
        .minimizer()
        .ok_or_else(|| "instance has no recorded minimizer to size D".to_string())?;
    let d = x0
        .iter()
        .zip(&star)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if !(d > 0.0) {
        return Err("start point is already a minimizer".into());
    }
    let solver = Assumed::new(truth).hide_optimum();
    let report = regularized_reduction(&solver, x0, d, eps, &RestartOptions::default())
        .map_err(|e| e.to_string())?;
    let inner = report.inner;
    let mut out = Outcome::new(
        "iterations",
        inner.total_iters() as u64,
        Some(inner.bound as u64),
        inner.trace,
    );
    let final_value = truth.value(&report.point);
    let true_gap = final_value - fstar;
    audit_final_gap(true_gap, eps, &mut out.violations);
    match report.certified_gap {
        Some(c) if c >= true_gap * (1.0 - CERT_TOL) => {}
        other => out.violations.push(format!(
            "certified gap {other:?} does not cover the true gap {true_gap:e}"
        )),
    }
    out.final_value = Some(final_value);
    out.final_gap = report.certified_gap;
    out.true_gap = Some(true_gap);
    Ok(out)
}

fn subgradient<O: NonsmoothOracle>(
    truth: &O,
    x0: &[f64],
    eps: f64,
    mu: Option<f64>,
) -> Result<Outcome, String> {
    let fstar = true_optimum(truth.optimal_value())?;
    let mut solver = Assumed::new(truth);
    if let Some(m) = mu {
        solver = solver.with_strong_convexity(m);
    }
    let gap0 = truth.value(x0) - fstar;
    if !(gap0 > 0.0) {
        return Err("start point is already optimal".into());
    }
    let report = restarted_subgradient(&solver, x0, eps, gap0, &RestartOptions::default())
        .map_err(|e| e.to_string())?;
    let mut out = Outcome::new(
        "iterations",
        report.total_iters() as u64,
        Some(report.bound as u64),
        report.trace,
    );
    let final_value = truth.value(&report.point);
    let true_gap = final_value - fstar;
    audit_final_gap(true_gap, eps, &mut out.violations);
    out.final_value = Some(final_value);
    out.final_gap = report.final_gap;
    out.true_gap = Some(true_gap);
    Ok(out)
}

fn ceil_log2(v: u64) -> u64 {
    (u64::BITS - v.saturating_sub(1).leading_zeros()) as u64
}

fn floor_log2(v: u64) -> u64 {
    (u64::BITS - 1 - v.leading_zeros()) as u64
}

fn run_augment(
    algo: AugmentAlgo,
    instance: &AugmentInstance,
    orientation: &Orientation,
    policy: Policy,
) -> Result<Outcome, String> {
    let n = instance.dim() as u64;
    let c = instance.objective();
    let big_c = c.big_c() as u64;
    let x0 = instance.first_point();
    let opt = instance.optimal_value();
    let (point, mut out) = match algo {
        AugmentAlgo::Plain => {
            let f = LinearFunctional::from_objective(c);
            let oracle = ImprovingOracle::new(instance, policy);
            let mut trace = Vec::new();
            let (point, steps) = augment_observed(&oracle, &x0, &f, |_, to| {
                let i = trace.len() + 1;
                trace.push(TraceRecord {
                    phase: 1,
                    global_iter: i,
                    objective_value: c.dot(to) as f64,
                    gap_certificate: None,
                    oracle_calls: i as u64,
                });
            })
            .map_err(|e| e.to_string())?;
            // each step visits a new feasible point
            let bound = instance.points().len() as u64 - 1;
            (
                point,
                Outcome::new("steps", steps as u64, Some(bound), trace),
            )
        }
        AugmentAlgo::BitScaling => {
            let run = bit_scaling(instance, &x0, policy).map_err(|e| e.to_string())?;
            let bound = n * ceil_log2(big_c);
            let mut out = Outcome::new(
                "steps",
                run.total_steps as u64,
                Some(bound),
                run.trace.clone(),
            );
            phase_ceiling(&run, n, &mut out.violations);
            (run.point, out)
        }
        AugmentAlgo::GeometricScaling => {
            let run = geometric_scaling(instance, &x0, policy).map_err(|e| e.to_string())?;
            let phases = floor_log2(n * n * big_c) + 2;
            let bound = 2 * n * phases;
            let mut out = Outcome::new(
                "steps",
                run.total_steps as u64,
                Some(bound),
                run.trace.clone(),
            );
            phase_ceiling(&run, 2 * n, &mut out.violations);
            if run.phases.len() as u64 > phases {
                out.violations.push(format!(
                    "{} phases exceed the ceiling {phases}",
                    run.phases.len()
                ));
            }
            (run.point, out)
        }
    };
    for r in &mut out.trace {
        let v = r.objective_value as i64;
        r.gap_certificate = Some((opt - v) as f64);
        r.objective_value = orientation.original_value(v) as f64;
    }
    let value = c.dot(&point);
    if value != opt {
        out.violations.push(format!(
            "returned value {value} differs from the enumerated optimum {opt}"
        ));
    }
    out.final_value = Some(orientation.original_value(value) as f64);
    out.final_gap = Some((opt - value) as f64);
    out.true_gap = out.final_gap;
    Ok(out)
}

fn phase_ceiling(run: &ScalingRun, ceiling: u64, violations: &mut Vec<String>) {
    if let Some((i, p)) = run
        .phases
        .iter()
        .enumerate()
        .find(|(_, p)| p.steps as u64 > ceiling)
    {
        violations.push(format!(
            "phase {} took {} steps, ceiling {ceiling}",
            i + 1,
            p.steps
        ));
    }
}

fn run_submodular(
    algo: SubmodularAlgo,
    coverage: &Coverage,
    k: usize,
    eps: f64,
) -> Result<Outcome, String> {
    let n = coverage.ground_size();
    let oracle = CountingOracle::new(coverage);
    let (selection, bound, guarantee) = match algo {
        SubmodularAlgo::Greedy => (
            greedy(&oracle, k).map_err(|e| e.to_string())?,
            2 * (k * n) as u64,
            1.0 - 1.0 / std::f64::consts::E,
        ),
        SubmodularAlgo::ThresholdGreedy => (
            threshold_greedy(&oracle, k, eps).map_err(|e| e.to_string())?,
            threshold_greedy_eval_bound(n, eps),
            1.0 - 1.0 / std::f64::consts::E - eps,
        ),
    };
    let mut out = Outcome::new(
        "evaluations",
        selection.evals_used,
        Some(bound),
        selection.trace,
    );
    if selection.evals_used != oracle.calls() {
        out.violations
            .push("evaluation count disagrees with the oracle counter".into());
    }
    out.final_value = Some(selection.value);
    if n <= MAX_BRUTE_FORCE {
        let best =
            brute_force_submax(&CountingOracle::new(coverage), k).map_err(|e| e.to_string())?;
        let ratio = if best.value > 0.0 {
            selection.value / best.value
        } else {
            1.0
        };
        if ratio < guarantee - 1e-12 {
            out.violations.push(format!(
                "approximation ratio {ratio:.4} below the guarantee {guarantee:.4}"
            ));
        }
        for r in &mut out.trace {
            r.gap_certificate = Some(best.value - r.objective_value);
        }
        out.final_gap = Some(best.value - selection.value);
        out.true_gap = out.final_gap;
        out.approx_ratio = Some(ratio);
    }
    Ok(out)
}
