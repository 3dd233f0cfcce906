//! The augmentation method: keep replacing the iterate by a strictly better
//! feasible point until none exists.

use super::binary::{geo_objective, BinaryVector, Dyadic, IntegerObjective, LinearFunctional};
use super::instance::AugmentInstance;
use super::DiscreteError;

/// Which improving point the oracle returns when several exist.
///
/// Ties are always broken towards the lexicographically smallest point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Largest improvement.
    MaxImprovement,
    /// Smallest strictly positive improvement.
    MinImprovement,
    /// First improving point in lexicographic order.
    Lexicographic,
}

impl Policy {
    pub const ALL: [Policy; 3] = [
        Policy::MaxImprovement,
        Policy::MinImprovement,
        Policy::Lexicographic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Policy::MaxImprovement => "max",
            Policy::MinImprovement => "min",
            Policy::Lexicographic => "lex",
        }
    }
}

/// Returns a feasible point that strictly improves a linear functional, by
/// scanning the explicit point list.
#[derive(Debug, Clone, Copy)]
pub struct ImprovingOracle<'a> {
    instance: &'a AugmentInstance,
    policy: Policy,
}

impl<'a> ImprovingOracle<'a> {
    pub fn new(instance: &'a AugmentInstance, policy: Policy) -> Self {
        Self { instance, policy }
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn instance(&self) -> &'a AugmentInstance {
        self.instance
    }

    /// `None` iff no feasible point has a larger value than `current`.
    pub fn improve(&self, f: &LinearFunctional, current: &BinaryVector) -> Option<BinaryVector> {
        let base = f.eval_scaled(current);
        // points are sorted, so the first hit of a strict comparison is the
        // lexicographically smallest among ties
        let mut best: Option<(BinaryVector, i128)> = None;
        for p in self.instance.points() {
            let gain = f.eval_scaled(p) - base;
            if gain <= 0 {
                continue;
            }
            let better = match (self.policy, best) {
                (_, None) => true,
                (Policy::MaxImprovement, Some((_, g))) => gain > g,
                (Policy::MinImprovement, Some((_, g))) => gain < g,
                (Policy::Lexicographic, Some(_)) => false,
            };
            if better {
                best = Some((*p, gain));
                if self.policy == Policy::Lexicographic {
                    break;
                }
            }
        }
        best.map(|(p, _)| p)
    }
}

/// An objective for augmentation, possibly depending on the current iterate.
pub trait AugmentObjective {
    /// The functional to improve upon when standing at `center`.
    fn centered_at(&self, center: &BinaryVector) -> LinearFunctional;
}

impl AugmentObjective for LinearFunctional {
    fn centered_at(&self, _: &BinaryVector) -> LinearFunctional {
        self.clone()
    }
}

/// `c(x - x~) - mu ||x - x~||_1`, re-centred at the current iterate `x~`.
#[derive(Debug, Clone)]
pub struct GeometricObjective<'a> {
    pub c: &'a IntegerObjective,
    pub mu: Dyadic,
}

impl AugmentObjective for GeometricObjective<'_> {
    fn centered_at(&self, center: &BinaryVector) -> LinearFunctional {
        geo_objective(self.c, self.mu, center)
    }
}

/// Runs augmentation from `x0` and returns the final point and the number
/// of accepted steps.
pub fn augment<O: AugmentObjective + ?Sized>(
    oracle: &ImprovingOracle<'_>,
    x0: &BinaryVector,
    objective: &O,
) -> Result<(BinaryVector, usize), DiscreteError> {
    augment_observed(oracle, x0, objective, |_, _| {})
}

/// Like [`augment`], calling `on_step(from, to)` for every accepted step.
pub fn augment_observed<O, F>(
    oracle: &ImprovingOracle<'_>,
    x0: &BinaryVector,
    objective: &O,
    mut on_step: F,
) -> Result<(BinaryVector, usize), DiscreteError>
where
    O: AugmentObjective + ?Sized,
    F: FnMut(&BinaryVector, &BinaryVector),
{
    let instance = oracle.instance();
    if x0.len() != instance.dim() {
        return Err(DiscreteError::Dimension {
            expected: instance.dim(),
            got: x0.len(),
        });
    }
    if !instance.contains(x0) {
        return Err(DiscreteError::Infeasible(x0.to_string()));
    }
    let mut x = *x0;
    let mut steps = 0;
    while let Some(next) = oracle.improve(&objective.centered_at(&x), &x) {
        on_step(&x, &next);
        x = next;
        steps += 1;
    }
    Ok((x, steps))
}
