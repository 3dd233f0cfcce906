//! Greedy, threshold greedy and exhaustive search.

use super::oracle::{CountingOracle, SetFunction};
use super::{SubmodularError, MAX_BRUTE_FORCE};
use crate::restart::TraceRecord;

/// A chosen set with its value and the number of evaluations spent.
///
/// `chosen` is in insertion order. The trace has one record per accepted
/// element: `phase` is the greedy round or threshold pass, `global_iter` the
/// size of the set after the insertion, and `oracle_calls` the evaluations
/// spent so far.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub chosen: Vec<usize>,
    pub value: f64,
    pub evals_used: u64,
    /// Greedy rounds, or threshold passes (restarts of the inner scan).
    pub rounds: usize,
    pub trace: Vec<TraceRecord>,
}

fn check_element(n: usize, e: usize) -> Result<(), SubmodularError> {
    if e >= n {
        return Err(SubmodularError::OutOfRange { element: e, n });
    }
    Ok(())
}

/// `g(S + e) - g(S)`, using two evaluations.
pub fn marginal_gain<F: SetFunction>(
    oracle: &CountingOracle<F>,
    set: &[usize],
    e: usize,
) -> Result<f64, SubmodularError> {
    let n = oracle.ground_size();
    check_element(n, e)?;
    for &s in set {
        check_element(n, s)?;
    }
    if set.contains(&e) {
        return Err(SubmodularError::AlreadyChosen(e));
    }
    let mut with = set.to_vec();
    with.push(e);
    Ok(oracle.evaluate(&with) - oracle.evaluate(set))
}

fn record(trace: &mut Vec<TraceRecord>, phase: usize, size: usize, value: f64, calls: u64) {
    trace.push(TraceRecord {
        phase,
        global_iter: size,
        objective_value: value,
        gap_certificate: None,
        oracle_calls: calls,
    });
}

/// Adds the element of largest marginal gain, `min(k, n)` times; ties go to
/// the smallest index.
///
/// `g(S)` is cached, so a round over `m` candidates costs `m` evaluations
/// and the total is at most `1 + kn`.
pub fn greedy<F: SetFunction>(
    oracle: &CountingOracle<F>,
    k: usize,
) -> Result<Selection, SubmodularError> {
    if k < 1 {
        return Err(SubmodularError::InvalidArgument(
            "budget k must be at least 1".into(),
        ));
    }
    let n = oracle.ground_size();
    let start = oracle.calls();
    let mut chosen = Vec::with_capacity(k.min(n));
    let mut in_set = vec![false; n];
    let mut trace = Vec::new();
    let mut current = oracle.evaluate(&chosen);
    let mut scratch = Vec::with_capacity(k.min(n) + 1);
    for round in 1..=k.min(n) {
        let mut best: Option<(usize, f64, f64)> = None;
        for e in (0..n).filter(|&e| !in_set[e]) {
            scratch.clear();
            scratch.extend_from_slice(&chosen);
            scratch.push(e);
            let v = oracle.evaluate(&scratch);
            let gain = v - current;
            if best.is_none_or(|(_, g, _)| gain > g) {
                best = Some((e, gain, v));
            }
        }
        let Some((e, _, v)) = best else { break };
        chosen.push(e);
        in_set[e] = true;
        current = v;
        record(
            &mut trace,
            round,
            chosen.len(),
            current,
            oracle.calls() - start,
        );
    }
    let rounds = chosen.len();
    Ok(Selection {
        chosen,
        value: current,
        evals_used: oracle.calls() - start,
        rounds,
        trace,
    })
}

/// `n (ceil(log_{1/(1-eps)}(n/eps)) + 2)`: the evaluation ceiling for
/// [`threshold_greedy`].
pub fn threshold_greedy_eval_bound(n: usize, eps: f64) -> u64 {
    let passes = ((n as f64 / eps).ln() / (1.0 / (1.0 - eps)).ln())
        .ceil()
        .max(0.0) as u64;
    n as u64 * (passes + 2)
}

/// Threshold greedy: scan the ground set in index order accepting every
/// element whose marginal gain is at least `Phi`, then lower `Phi` by a
/// factor `1 - eps` and scan again, until `Phi < (eps/n) Phi_0` or `k`
/// elements are chosen.
///
/// `Phi_0` is the largest singleton gain. Singleton values are reused during
/// the first scan while the set is still empty.
pub fn threshold_greedy<F: SetFunction>(
    oracle: &CountingOracle<F>,
    k: usize,
    eps: f64,
) -> Result<Selection, SubmodularError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(SubmodularError::InvalidArgument(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    if k < 1 {
        return Err(SubmodularError::InvalidArgument(
            "budget k must be at least 1".into(),
        ));
    }
    let n = oracle.ground_size();
    let start = oracle.calls();
    let mut chosen: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    let mut current = oracle.evaluate(&chosen);
    let singles: Vec<f64> = (0..n).map(|e| oracle.evaluate(&[e])).collect();
    let phi0 = singles
        .iter()
        .map(|v| v - current)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut rounds = 0;
    if phi0 > 0.0 {
        let floor = eps / n as f64 * phi0;
        let mut in_set = vec![false; n];
        let mut scratch = Vec::new();
        'passes: loop {
            let phi = phi0 * (1.0 - eps).powi(rounds as i32);
            if phi < floor {
                break;
            }
            rounds += 1;
            for e in 0..n {
                if chosen.len() >= k {
                    break 'passes;
                }
                if in_set[e] {
                    continue;
                }
                let v = if chosen.is_empty() {
                    singles[e]
                } else {
                    scratch.clear();
                    scratch.extend_from_slice(&chosen);
                    scratch.push(e);
                    oracle.evaluate(&scratch)
                };
                if v - current >= phi {
                    chosen.push(e);
                    in_set[e] = true;
                    current = v;
                    record(
                        &mut trace,
                        rounds,
                        chosen.len(),
                        current,
                        oracle.calls() - start,
                    );
                }
            }
            if chosen.len() >= k {
                break;
            }
        }
    }
    Ok(Selection {
        chosen,
        value: current,
        evals_used: oracle.calls() - start,
        rounds,
        trace,
    })
}

/// Exact maximum over all sets of size at most `k`, by enumeration in
/// lexicographic order; the first maximizer found is kept.
pub fn brute_force_submax<F: SetFunction>(
    oracle: &CountingOracle<F>,
    k: usize,
) -> Result<Selection, SubmodularError> {
    let n = oracle.ground_size();
    if n > MAX_BRUTE_FORCE {
        return Err(SubmodularError::TooLarge {
            what: "ground set",
            got: n,
            max: MAX_BRUTE_FORCE,
        });
    }
    let start = oracle.calls();
    let mut set = Vec::with_capacity(k.min(n));
    let mut best = (Vec::new(), oracle.evaluate(&set));
    dfs(oracle, n, k.min(n), 0, &mut set, &mut best);
    let (chosen, value) = best;
    Ok(Selection {
        chosen,
        value,
        evals_used: oracle.calls() - start,
        rounds: 0,
        trace: Vec::new(),
    })
}

fn dfs<F: SetFunction>(
    oracle: &CountingOracle<F>,
    n: usize,
    k: usize,
    from: usize,
    set: &mut Vec<usize>,
    best: &mut (Vec<usize>, f64),
) {
    if set.len() == k {
        return;
    }
    for e in from..n {
        set.push(e);
        let v = oracle.evaluate(set);
        if v > best.1 {
            *best = (set.clone(), v);
        }
        dfs(oracle, n, k, e + 1, set, best);
        set.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submodular::oracle::{Coverage, Modular};

    fn abc() -> CountingOracle<Coverage> {
        CountingOracle::new(
            Coverage::unweighted(vec![vec![1, 2], vec![3, 4], vec![1, 3]], 5).unwrap(),
        )
    }

    #[test]
    fn marginal_gains() {
        let single = CountingOracle::new(Coverage::unweighted(vec![vec![1, 2]], 3).unwrap());
        assert_eq!(marginal_gain(&single, &[], 0).unwrap(), 2.0);
        assert_eq!(single.calls(), 2);
        let g = abc();
        assert_eq!(marginal_gain(&g, &[0], 2).unwrap(), 1.0);
        let nested =
            CountingOracle::new(Coverage::unweighted(vec![vec![0, 1], vec![1]], 2).unwrap());
        assert_eq!(marginal_gain(&nested, &[0], 1).unwrap(), 0.0);
        assert!(matches!(
            marginal_gain(&g, &[0], 0),
            Err(SubmodularError::AlreadyChosen(0))
        ));
    }

    #[test]
    fn greedy_examples() {
        let g = abc();
        let sel = greedy(&g, 2).unwrap();
        assert_eq!(sel.chosen, vec![0, 1]);
        assert_eq!(sel.value, 4.0);
        assert!(sel.evals_used <= 2 * 2 * 3);
        assert_eq!(sel.evals_used, g.calls());

        let all = greedy(&g, 3).unwrap();
        assert_eq!(all.chosen.len(), 3);
        assert_eq!(all.value, 4.0);

        let m = CountingOracle::new(Modular::new(vec![1.0, 5.0, 3.0, 4.0]));
        let top = greedy(&m, 2).unwrap();
        assert_eq!(top.chosen, vec![1, 3]);
        assert_eq!(top.value, 9.0);
        assert!(greedy(&m, 0).is_err());
    }

    #[test]
    fn threshold_examples() {
        let g = abc();
        let sel = threshold_greedy(&g, 2, 0.25).unwrap();
        assert_eq!(sel.chosen, vec![0, 1]);
        assert_eq!(sel.value, 4.0);
        assert!(sel.evals_used <= 30);
        assert!(sel.evals_used <= threshold_greedy_eval_bound(3, 0.25));

        let m = CountingOracle::new(Modular::new(vec![1.0, 5.0, 3.0, 4.0]));
        let one = threshold_greedy(&m, 1, 0.25).unwrap();
        assert_eq!(one.chosen, vec![1]);

        assert!(threshold_greedy(&m, 1, 0.0).is_err());
        assert!(threshold_greedy(&m, 1, 1.0).is_err());
        assert!(threshold_greedy(&m, 1, f64::NAN).is_err());
    }

    #[test]
    fn threshold_zero_function() {
        let m = CountingOracle::new(Modular::new(vec![0.0; 4]));
        let sel = threshold_greedy(&m, 2, 0.1).unwrap();
        assert!(sel.chosen.is_empty());
        assert_eq!(sel.evals_used, 5);
    }

    #[test]
    fn brute_force_examples() {
        let g = abc();
        let best = brute_force_submax(&g, 2).unwrap();
        assert_eq!(best.chosen, vec![0, 1]);
        assert_eq!(best.value, 4.0);
        let none = brute_force_submax(&g, 0).unwrap();
        assert!(none.chosen.is_empty());
        assert_eq!(none.value, 0.0);
        let m = CountingOracle::new(Modular::new(vec![1.0, 5.0, 3.0, 4.0]));
        assert_eq!(brute_force_submax(&m, 2).unwrap().chosen, vec![1, 3]);
        let big = CountingOracle::new(Modular::new(vec![1.0; 21]));
        assert!(brute_force_submax(&big, 2).is_err());
    }

    #[test]
    fn eval_bound_arithmetic() {
        // ln(12)/ln(4/3) = 8.64 -> 9 passes
        assert_eq!(threshold_greedy_eval_bound(3, 0.25), 3 * 11);
    }
}
