//! Checks that a set function is nonnegative, monotone and submodular.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::{GroundSet, SetFunction};

/// Ground sets up to this size are checked exhaustively.
pub const FULL_CHECK_LIMIT: usize = 12;

const SAMPLES: usize = 4000;
const REL_TOL: f64 = 1e-9;

/// The first property found to fail.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Negative {
        set: Vec<usize>,
        value: f64,
    },
    NotMonotone {
        set: Vec<usize>,
        element: usize,
    },
    NotSubmodular {
        smaller: Vec<usize>,
        larger: Vec<usize>,
        element: usize,
    },
    SizeMismatch {
        ground: usize,
        function: usize,
    },
}

/// `true` iff no violation is found; see [`verify_submodular_report`].
pub fn verify_submodular<F: SetFunction + ?Sized>(g: &F, ground: &GroundSet) -> bool {
    verify_submodular_report(g, ground, 0).is_none()
}

/// Exhaustive for `n <= 12`: every value is computed once, and nonnegativity,
/// `g(A) <= g(A + e)` and `g_A(e) >= g_{A+f}(e)` are checked for all `A`,
/// `e`, `f` (the one-step form implies the general one). Larger ground sets
/// are checked on random chains `A ⊆ B ∌ e` drawn from `seed`.
pub fn verify_submodular_report<F: SetFunction + ?Sized>(
    g: &F,
    ground: &GroundSet,
    seed: u64,
) -> Option<Violation> {
    let n = ground.len();
    if g.ground_size() != n {
        return Some(Violation::SizeMismatch {
            ground: n,
            function: g.ground_size(),
        });
    }
    if n <= FULL_CHECK_LIMIT {
        full_check(g, n)
    } else {
        sampled_check(g, n, seed)
    }
}

fn members(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

fn tol(values: &[f64]) -> f64 {
    REL_TOL * values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

fn full_check<F: SetFunction + ?Sized>(g: &F, n: usize) -> Option<Violation> {
    let values: Vec<f64> = (0..1usize << n).map(|m| g.value(&members(m, n))).collect();
    let tol = tol(&values);
    for (a, &va) in values.iter().enumerate() {
        if !(va >= -tol) {
            return Some(Violation::Negative {
                set: members(a, n),
                value: va,
            });
        }
        for e in (0..n).filter(|&e| a >> e & 1 == 0) {
            let gain = values[a | 1 << e] - va;
            if !(gain >= -tol) {
                return Some(Violation::NotMonotone {
                    set: members(a, n),
                    element: e,
                });
            }
            for f in (0..n).filter(|&f| f != e && a >> f & 1 == 0) {
                let b = a | 1 << f;
                if values[b | 1 << e] - values[b] > gain + tol {
                    return Some(Violation::NotSubmodular {
                        smaller: members(a, n),
                        larger: members(b, n),
                        element: e,
                    });
                }
            }
        }
    }
    None
}

fn sampled_check<F: SetFunction + ?Sized>(g: &F, n: usize, seed: u64) -> Option<Violation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLES {
        let e = rng.gen_range(0..n);
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in (0..n).filter(|&i| i != e) {
            let r: f64 = rng.gen();
            if r < 0.25 {
                a.push(i);
                b.push(i);
            } else if r < 0.5 {
                b.push(i);
            }
        }
        let with = |s: &[usize]| {
            let mut t = s.to_vec();
            t.push(e);
            t
        };
        let (ga, gae, gb, gbe) = (
            g.value(&a),
            g.value(&with(&a)),
            g.value(&b),
            g.value(&with(&b)),
        );
        let tol = tol(&[ga, gae, gb, gbe]);
        for (set, v) in [(&a, ga), (&b, gb)] {
            if !(v >= -tol) {
                return Some(Violation::Negative {
                    set: set.clone(),
                    value: v,
                });
            }
        }
        if !(gb >= ga - tol) || !(gae >= ga - tol) {
            return Some(Violation::NotMonotone { set: a, element: e });
        }
        if gbe - gb > gae - ga + tol {
            return Some(Violation::NotSubmodular {
                smaller: a,
                larger: b,
                element: e,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submodular::oracle::{Coverage, FnSetFunction};

    #[test]
    fn coverage_passes() {
        let g = Coverage::random(8, 12, 5).unwrap();
        assert!(verify_submodular(&g, &GroundSet::indexed(8).unwrap()));
        let big = Coverage::random(20, 30, 5).unwrap();
        assert!(verify_submodular(&big, &GroundSet::indexed(20).unwrap()));
    }

    #[test]
    fn square_of_size_fails() {
        let g = FnSetFunction::new(3, |s: &[usize]| (s.len() * s.len()) as f64);
        let report = verify_submodular_report(&g, &GroundSet::indexed(3).unwrap(), 0);
        assert!(matches!(report, Some(Violation::NotSubmodular { .. })));
        let big = FnSetFunction::new(15, |s: &[usize]| (s.len() * s.len()) as f64);
        assert!(!verify_submodular(&big, &GroundSet::indexed(15).unwrap()));
    }

    #[test]
    fn zero_passes_and_negative_fails() {
        let zero = FnSetFunction::new(4, |_: &[usize]| 0.0);
        assert!(verify_submodular(&zero, &GroundSet::indexed(4).unwrap()));
        let neg = FnSetFunction::new(2, |s: &[usize]| s.len() as f64 - 1.0);
        assert!(matches!(
            verify_submodular_report(&neg, &GroundSet::indexed(2).unwrap(), 0),
            Some(Violation::Negative { .. })
        ));
        let dec = FnSetFunction::new(2, |s: &[usize]| 5.0 - s.len() as f64);
        assert!(matches!(
            verify_submodular_report(&dec, &GroundSet::indexed(2).unwrap(), 0),
            Some(Violation::NotMonotone { .. })
        ));
    }
}
