//! Turning a configuration into a concrete, validated task.

use restarts::discrete::{
    make_cube_powers, make_random_01_polytope, AugmentInstance, Orientation, Policy,
};
use restarts::smooth::{AbsQuadratic, DiagonalQuadratic, LogSumExp};
use restarts::submodular::Coverage;

use crate::config::{Domain, ExperimentConfig, InstanceSpec, Params};
use crate::BenchError;

pub const DEFAULT_CONTINUOUS_EPS: f64 = 1e-6;
pub const DEFAULT_THRESHOLD_EPS: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuousAlgo {
    RestartedGd,
    RestartedAgd,
    RestartedSubgradient,
    RegularizedAgd,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ContinuousProblem {
    Quadratic(DiagonalQuadratic),
    LogSumExp(LogSumExp),
    AbsQuadratic(AbsQuadratic),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentAlgo {
    Plain,
    BitScaling,
    GeometricScaling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubmodularAlgo {
    Greedy,
    ThresholdGreedy,
}

#[derive(Debug, Clone)]
pub enum Task {
    Continuous {
        algo: ContinuousAlgo,
        problem: ContinuousProblem,
        x0: Vec<f64>,
        eps: f64,
        /// Strong-convexity constant given to the solver, if not the true one.
        mu: Option<f64>,
    },
    Augment {
        algo: AugmentAlgo,
        instance: AugmentInstance,
        orientation: Orientation,
        policy: Policy,
    },
    Submodular {
        algo: SubmodularAlgo,
        coverage: Coverage,
        k: usize,
        eps: f64,
    },
}

fn positive(field: &'static str, v: f64) -> Result<f64, BenchError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(BenchError::usage(
            field,
            format!("must be positive, got {v}"),
        ))
    }
}

fn builtin(spec: InstanceSpec, domain: Domain) -> Result<(String, Params), BenchError> {
    match spec {
        InstanceSpec::Builtin { name, params } => Ok((name, params)),
        InstanceSpec::File(p) => Err(BenchError::usage(
            "instance",
            format!(
                "{domain} instances are built in; `{}` is a path",
                p.display()
            ),
        )),
    }
}

fn parse_policy(s: &str) -> Result<Policy, BenchError> {
    match s {
        "max" => Ok(Policy::MaxImprovement),
        "min" => Ok(Policy::MinImprovement),
        "lex" => Ok(Policy::Lexicographic),
        other => Err(BenchError::usage(
            "policy",
            format!("unknown policy `{other}` (max, min, lex)"),
        )),
    }
}

impl Task {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self, BenchError> {
        let spec: InstanceSpec = cfg.instance.parse()?;
        match cfg.domain {
            Domain::Continuous => continuous(cfg, spec),
            Domain::Augment => augment(cfg, spec),
            Domain::Submodular => submodular(cfg, spec),
        }
    }
}

fn continuous(cfg: &ExperimentConfig, spec: InstanceSpec) -> Result<Task, BenchError> {
    let algo = match cfg.algo.as_str() {
        "restarted-gd" => ContinuousAlgo::RestartedGd,
        "restarted-agd" => ContinuousAlgo::RestartedAgd,
        "restarted-subgrad" => ContinuousAlgo::RestartedSubgradient,
        "regularized-agd" => ContinuousAlgo::RegularizedAgd,
        other => {
            return Err(BenchError::usage(
                "algo",
                format!("unknown continuous algorithm `{other}`"),
            ))
        }
    };
    let (name, mut p) = builtin(spec, Domain::Continuous)?;
    let (problem, n, x0) = match name.as_str() {
        "quadratic" => {
            let n = p.take("n", 20usize)?;
            let mu = positive("instance", p.take("mu", 1.0)?)?;
            let l = positive("instance", p.take("l", 10.0)?)?;
            if n == 0 || l < mu {
                return Err(BenchError::usage(
                    "instance",
                    "quadratic needs n >= 1 and l >= mu",
                ));
            }
            let x0 = p.take("x0", 1.0)?;
            (
                ContinuousProblem::Quadratic(DiagonalQuadratic::geometric(n, mu, l)),
                n,
                x0,
            )
        }
        "logsumexp" => {
            let n = p.take("n", 4usize)?;
            if n == 0 {
                return Err(BenchError::usage("instance", "logsumexp needs n >= 1"));
            }
            let x0 = p.take("x0", 1.0)?;
            (ContinuousProblem::LogSumExp(LogSumExp::new(n)), n, x0)
        }
        "abs-quadratic" => {
            let n = p.take("n", 1usize)?;
            let mu = positive("instance", p.take("mu", 1.0)?)?;
            let r = positive("instance", p.take("r", 1.0)?)?;
            let x0 = p.take("x0", 1.0)?;
            if n == 0 || f64::abs(x0) > r {
                return Err(BenchError::usage(
                    "instance",
                    "abs-quadratic needs n >= 1 and |x0| <= r",
                ));
            }
            (
                ContinuousProblem::AbsQuadratic(AbsQuadratic::new(n, mu, r)),
                n,
                x0,
            )
        }
        other => {
            return Err(BenchError::usage(
                "instance",
                format!("unknown continuous instance `{other}`"),
            ))
        }
    };
    p.finish(&name)?;
    let nonsmooth = matches!(problem, ContinuousProblem::AbsQuadratic(_));
    if nonsmooth != (algo == ContinuousAlgo::RestartedSubgradient) {
        return Err(BenchError::usage(
            "algo",
            format!("`{}` does not apply to instance `{name}`", cfg.algo),
        ));
    }
    let eps = positive("epsilon", cfg.epsilon.unwrap_or(DEFAULT_CONTINUOUS_EPS))?;
    let mu = cfg.mu.map(|m| positive("mu", m)).transpose()?;
    if mu.is_some() && algo == ContinuousAlgo::RegularizedAgd {
        return Err(BenchError::usage(
            "mu",
            "regularized-agd derives its own strong-convexity constant",
        ));
    }
    Ok(Task::Continuous {
        algo,
        problem,
        x0: vec![x0; n],
        eps,
        mu,
    })
}

fn augment(cfg: &ExperimentConfig, spec: InstanceSpec) -> Result<Task, BenchError> {
    let (algo, fixed_policy) = match cfg.algo.as_str() {
        "augment-max" => (AugmentAlgo::Plain, Some(Policy::MaxImprovement)),
        "augment-min" => (AugmentAlgo::Plain, Some(Policy::MinImprovement)),
        "augment-lex" => (AugmentAlgo::Plain, Some(Policy::Lexicographic)),
        "bit-scaling" => (AugmentAlgo::BitScaling, None),
        "geometric-scaling" => (AugmentAlgo::GeometricScaling, None),
        other => {
            return Err(BenchError::usage(
                "algo",
                format!("unknown augment algorithm `{other}`"),
            ))
        }
    };
    let policy = match (fixed_policy, cfg.policy.as_deref()) {
        (Some(_), Some(_)) => {
            return Err(BenchError::usage(
                "policy",
                format!("`{}` fixes its own policy", cfg.algo),
            ))
        }
        (Some(p), None) => p,
        (None, Some(s)) => parse_policy(s)?,
        (None, None) => Policy::MaxImprovement,
    };
    let to_usage =
        |e: restarts::discrete::DiscreteError| BenchError::usage("instance", e.to_string());
    let (instance, orientation) = match spec {
        InstanceSpec::File(path) => AugmentInstance::from_file(&path).map_err(to_usage)?,
        InstanceSpec::Builtin { name, mut params } => {
            let inst = match name.as_str() {
                "cube-powers" => make_cube_powers(params.take("n", 10usize)?).map_err(to_usage)?,
                "random01" => {
                    let n = params.take("n", 8usize)?;
                    let m = params.take("m", 50usize)?;
                    make_random_01_polytope(n, m, cfg.seed).map_err(to_usage)?
                }
                other => {
                    return Err(BenchError::usage(
                        "instance",
                        format!("unknown augment instance `{other}`"),
                    ))
                }
            };
            params.finish(&name)?;
            let n = inst.dim();
            (inst, Orientation::identity(n))
        }
    };
    Ok(Task::Augment {
        algo,
        instance,
        orientation,
        policy,
    })
}

fn submodular(cfg: &ExperimentConfig, spec: InstanceSpec) -> Result<Task, BenchError> {
    let algo = match cfg.algo.as_str() {
        "greedy" => SubmodularAlgo::Greedy,
        "threshold-greedy" => SubmodularAlgo::ThresholdGreedy,
        other => {
            return Err(BenchError::usage(
                "algo",
                format!("unknown submodular algorithm `{other}`"),
            ))
        }
    };
    let to_usage =
        |e: restarts::submodular::SubmodularError| BenchError::usage("instance", e.to_string());
    let coverage = match spec {
        InstanceSpec::File(path) => Coverage::from_file(&path).map_err(to_usage)?,
        InstanceSpec::Builtin { name, mut params } => {
            let g = match name.as_str() {
                "coverage" => {
                    let n = params.take("n", 12usize)?;
                    let u = params.take("u", 2 * n)?;
                    Coverage::random(n, u, cfg.seed).map_err(to_usage)?
                }
                "uniform-coverage" => {
                    let n = params.take("n", 100usize)?;
                    let u = params.take("u", 1000usize)?;
                    let s = params.take("s", 10usize)?;
                    Coverage::random_uniform(n, u, s, cfg.seed).map_err(to_usage)?
                }
                other => {
                    return Err(BenchError::usage(
                        "instance",
                        format!("unknown submodular instance `{other}`"),
                    ))
                }
            };
            params.finish(&name)?;
            g
        }
    };
    let k = cfg
        .k
        .ok_or_else(|| BenchError::usage("k", "the cardinality budget k is required"))?;
    if k == 0 {
        return Err(BenchError::usage("k", "must be at least 1"));
    }
    let eps = cfg.epsilon.unwrap_or(DEFAULT_THRESHOLD_EPS);
    if algo == SubmodularAlgo::ThresholdGreedy && !(eps > 0.0 && eps < 1.0) {
        return Err(BenchError::usage(
            "epsilon",
            format!("must lie in (0, 1), got {eps}"),
        ));
    }
    Ok(Task::Submodular {
        algo,
        coverage,
        k,
        eps,
    })
}
