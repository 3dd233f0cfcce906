//! Restarted augmentation: bit scaling and geometric scaling.

use super::augment::{
    augment_observed, AugmentObjective, GeometricObjective, ImprovingOracle, Policy,
};
use super::binary::{scale_objective, BinaryVector, Dyadic, LinearFunctional};
use super::instance::AugmentInstance;
use super::DiscreteError;
use crate::restart::TraceRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingPhase {
    /// `mu` for this phase.
    pub scale: f64,
    /// Iterate handed to this phase.
    pub start: BinaryVector,
    pub steps: usize,
    /// Improving-oracle calls, including the final unsuccessful one.
    pub oracle_calls: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AugmentStep {
    pub phase: usize,
    pub from: BinaryVector,
    pub to: BinaryVector,
}

/// Outcome of a scaling run.
///
/// The trace has one record per accepted step, valued under the instance
/// objective; `global_iter` is the step number and `oracle_calls` the
/// cumulative number of improving-oracle calls when the step was accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRun {
    pub point: BinaryVector,
    pub total_steps: usize,
    pub phases: Vec<ScalingPhase>,
    pub steps: Vec<AugmentStep>,
    pub trace: Vec<TraceRecord>,
}

impl ScalingRun {
    pub fn oracle_calls(&self) -> u64 {
        self.phases.iter().map(|p| p.oracle_calls).sum()
    }

    pub fn max_phase_steps(&self) -> usize {
        self.phases.iter().map(|p| p.steps).max().unwrap_or(0)
    }
}

struct Recorder<'a> {
    instance: &'a AugmentInstance,
    run: ScalingRun,
    calls: u64,
}

impl<'a> Recorder<'a> {
    fn new(instance: &'a AugmentInstance, x0: BinaryVector) -> Self {
        Self {
            instance,
            run: ScalingRun {
                point: x0,
                total_steps: 0,
                phases: Vec::new(),
                steps: Vec::new(),
                trace: Vec::new(),
            },
            calls: 0,
        }
    }

    fn phase<O: AugmentObjective + ?Sized>(
        &mut self,
        oracle: &ImprovingOracle<'_>,
        objective: &O,
        scale: f64,
    ) -> Result<(), DiscreteError> {
        let phase = self.run.phases.len() + 1;
        let start = self.run.point;
        let c = self.instance.objective();
        let (run, calls) = (&mut self.run, &mut self.calls);
        let (point, steps) = augment_observed(oracle, &start, objective, |from, to| {
            *calls += 1;
            run.steps.push(AugmentStep {
                phase,
                from: *from,
                to: *to,
            });
            run.trace.push(TraceRecord {
                phase,
                global_iter: run.steps.len(),
                objective_value: c.dot(to) as f64,
                gap_certificate: None,
                oracle_calls: *calls,
            });
        })?;
        self.calls += 1;
        self.run.point = point;
        self.run.total_steps += steps;
        self.run.phases.push(ScalingPhase {
            scale,
            start,
            steps,
            oracle_calls: steps as u64 + 1,
        });
        Ok(())
    }
}

fn check_start(instance: &AugmentInstance, x0: &BinaryVector) -> Result<(), DiscreteError> {
    if x0.len() != instance.dim() {
        return Err(DiscreteError::Dimension {
            expected: instance.dim(),
            got: x0.len(),
        });
    }
    if !instance.contains(x0) {
        return Err(DiscreteError::Infeasible(x0.to_string()));
    }
    Ok(())
}

/// Bit scaling: augmentation on `floor(c / mu)` for `mu = 2^(k-1), ..., 2, 1`
/// with `k = ceil(log2 C)`, each phase started from the previous optimum.
///
/// The scale `2^k` of the initial assignment gives the zero objective, so
/// that phase is skipped; `k` phases are run, and none when `c = 0`.
pub fn bit_scaling(
    instance: &AugmentInstance,
    x0: &BinaryVector,
    policy: Policy,
) -> Result<ScalingRun, DiscreteError> {
    check_start(instance, x0)?;
    let c = instance.objective();
    let big_c = c.big_c() as u64;
    let k = u64::BITS - (big_c - 1).leading_zeros(); // ceil(log2 C)
    let oracle = ImprovingOracle::new(instance, policy);
    let mut rec = Recorder::new(instance, *x0);
    for j in (0..k).rev() {
        let mu = 1u64 << j;
        let f = LinearFunctional::from_objective(&scale_objective(c, mu));
        rec.phase(&oracle, &f, mu as f64)?;
    }
    Ok(rec.run)
}

/// Geometric scaling: augmentation on `c(x - x~) - mu ||x - x~||_1` with
/// `mu = nC, nC/2, ...`, stopping after the first phase with `mu < 1/n`.
///
/// At that point `c(x* - x) <= mu n < 1`, so the result is optimal.
pub fn geometric_scaling(
    instance: &AugmentInstance,
    x0: &BinaryVector,
    policy: Policy,
) -> Result<ScalingRun, DiscreteError> {
    check_start(instance, x0)?;
    let n = instance.dim();
    let c = instance.objective();
    let oracle = ImprovingOracle::new(instance, policy);
    let mut rec = Recorder::new(instance, *x0);
    if n == 0 {
        return Ok(rec.run);
    }
    let mut mu = Dyadic::from_int(n as i64 * c.big_c());
    loop {
        rec.phase(&oracle, &GeometricObjective { c, mu }, mu.to_f64())?;
        if mu.below_reciprocal(n as u64) {
            break;
        }
        mu = mu.half();
    }
    Ok(rec.run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::binary::IntegerObjective;
    use crate::discrete::instance::make_cube_powers;

    #[test]
    fn bit_scaling_cube() {
        let cube = make_cube_powers(3).unwrap();
        for policy in Policy::ALL {
            let run = bit_scaling(&cube, &BinaryVector::zeros(3), policy).unwrap();
            assert_eq!(run.point.bits(), vec![1, 1, 1]);
            assert_eq!(cube.objective().dot(&run.point), 7);
            assert_eq!(run.phases.len(), 3);
            assert!(run.total_steps <= 9);
            assert!(run.phases.iter().all(|p| p.steps <= 3));
        }
    }

    #[test]
    fn bit_scaling_cube_ten() {
        let cube = make_cube_powers(10).unwrap();
        let run = bit_scaling(&cube, &BinaryVector::zeros(10), Policy::MinImprovement).unwrap();
        assert_eq!(run.point, cube.brute_force_opt());
        assert_eq!(run.phases.len(), 10);
        assert!(run.total_steps <= 100);
        assert_eq!(run.oracle_calls(), run.total_steps as u64 + 10);
    }

    #[test]
    fn geometric_scaling_cube() {
        let cube = make_cube_powers(3).unwrap();
        for policy in Policy::ALL {
            let run = geometric_scaling(&cube, &BinaryVector::zeros(3), policy).unwrap();
            assert_eq!(cube.objective().dot(&run.point), 7);
            assert!(run.max_phase_steps() <= 6);
            // mu = 15, 7.5, ..., 15/64 < 1/3
            assert_eq!(run.phases.len(), 7);
            assert_eq!(run.phases[0].steps, 0);
        }
    }

    #[test]
    fn zero_objective_is_a_no_op() {
        let pts = (0..8).map(|m| BinaryVector::from_mask(3, m)).collect();
        let inst =
            AugmentInstance::new(3, pts, IntegerObjective::new(vec![0, 0, 0]).unwrap()).unwrap();
        let x0 = BinaryVector::from_mask(3, 5);
        let bit = bit_scaling(&inst, &x0, Policy::MaxImprovement).unwrap();
        assert_eq!((bit.point, bit.total_steps), (x0, 0));
        assert!(bit.phases.is_empty());
        let geo = geometric_scaling(&inst, &x0, Policy::MaxImprovement).unwrap();
        assert_eq!((geo.point, geo.total_steps), (x0, 0));
    }

    #[test]
    fn trace_is_consistent() {
        let cube = make_cube_powers(5).unwrap();
        let run =
            geometric_scaling(&cube, &BinaryVector::zeros(5), Policy::MinImprovement).unwrap();
        assert_eq!(run.trace.len(), run.total_steps);
        for w in run.trace.windows(2) {
            assert!(w[1].objective_value > w[0].objective_value);
            assert!(w[1].oracle_calls > w[0].oracle_calls);
        }
        assert_eq!(run.trace.last().unwrap().objective_value, 31.0);
    }
}
