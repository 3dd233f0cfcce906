//! Finite 0/1 feasible sets with a linear objective.

use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::binary::{BinaryVector, IntegerObjective, MAX_DIM};
use super::DiscreteError;

/// Largest dimension accepted by the explicit generators.
pub const MAX_ENUMERABLE_DIM: usize = 25;

/// `max { c x : x in F }` over an explicit finite `F` of 0/1 points.
///
/// Points are kept sorted lexicographically and free of duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentInstance {
    n: usize,
    points: Vec<BinaryVector>,
    objective: IntegerObjective,
}

impl AugmentInstance {
    pub fn new(
        n: usize,
        mut points: Vec<BinaryVector>,
        objective: IntegerObjective,
    ) -> Result<Self, DiscreteError> {
        if n > MAX_DIM {
            return Err(DiscreteError::TooLarge {
                what: "dimension",
                got: n,
                max: MAX_DIM,
            });
        }
        if points.is_empty() {
            return Err(DiscreteError::EmptyFeasibleSet);
        }
        if objective.len() != n {
            return Err(DiscreteError::Dimension {
                expected: n,
                got: objective.len(),
            });
        }
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(DiscreteError::Dimension {
                expected: n,
                got: p.len(),
            });
        }
        points.sort_unstable();
        points.dedup();
        Ok(Self {
            n,
            points,
            objective,
        })
    }

    /// Builds an instance from an objective that may have negative entries
    /// by flipping those coordinates (`x_i -> 1 - x_i`).
    pub fn with_signed_objective(
        n: usize,
        points: Vec<BinaryVector>,
        c: Vec<i64>,
    ) -> Result<(Self, Orientation), DiscreteError> {
        if c.len() != n {
            return Err(DiscreteError::Dimension {
                expected: n,
                got: c.len(),
            });
        }
        let flip_bits: Vec<u8> = c.iter().map(|&v| u8::from(v < 0)).collect();
        let flips = BinaryVector::new(&flip_bits)?;
        let points = points.iter().map(|p| p.flip_all(&flips)).collect();
        let objective = IntegerObjective::new(c.iter().map(|v| v.abs()).collect())?;
        let shift = c.iter().filter(|&&v| v < 0).sum();
        let instance = Self::new(n, points, objective)?;
        Ok((instance, Orientation { flips, shift }))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[BinaryVector] {
        &self.points
    }

    pub fn objective(&self) -> &IntegerObjective {
        &self.objective
    }

    pub fn contains(&self, x: &BinaryVector) -> bool {
        self.points.binary_search(x).is_ok()
    }

    /// The lexicographically smallest feasible point.
    pub fn first_point(&self) -> BinaryVector {
        self.points[0]
    }

    /// Exact maximizer of `c x` by enumeration; ties go to the
    /// lexicographically smallest point.
    pub fn brute_force_opt(&self) -> BinaryVector {
        let mut best = self.points[0];
        let mut best_value = self.objective.dot(&best);
        for p in &self.points[1..] {
            let v = self.objective.dot(p);
            if v > best_value {
                best = *p;
                best_value = v;
            }
        }
        best
    }

    pub fn optimal_value(&self) -> i64 {
        self.objective.dot(&self.brute_force_opt())
    }

    /// Same feasible set, different objective.
    pub fn with_objective(&self, objective: IntegerObjective) -> Result<Self, DiscreteError> {
        if objective.len() != self.n {
            return Err(DiscreteError::Dimension {
                expected: self.n,
                got: objective.len(),
            });
        }
        Ok(Self {
            n: self.n,
            points: self.points.clone(),
            objective,
        })
    }

    /// Reads the text format: a header `n m`, `m` lines of space-separated
    /// bits, then one line of `n` integer objective entries (negative entries
    /// are flipped, see [`AugmentInstance::with_signed_objective`]).
    pub fn parse(text: &str) -> Result<(Self, Orientation), DiscreteError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) = lines.next().ok_or(DiscreteError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let header = parse_numbers::<usize>(header, line_no)?;
        let [n, m] = header[..] else {
            return Err(DiscreteError::Parse {
                line: line_no,
                message: "header must be `n m`".into(),
            });
        };
        let mut points = Vec::with_capacity(m);
        for _ in 0..m {
            let (line_no, line) = lines.next().ok_or(DiscreteError::Parse {
                line: line_no,
                message: format!("expected {m} points"),
            })?;
            let bits = parse_numbers::<u8>(line, line_no)?;
            if bits.len() != n {
                return Err(DiscreteError::Parse {
                    line: line_no,
                    message: format!("expected {n} bits, got {}", bits.len()),
                });
            }
            points.push(BinaryVector::new(&bits).map_err(|e| DiscreteError::Parse {
                line: line_no,
                message: e.to_string(),
            })?);
        }
        let (line_no, line) = lines.next().ok_or(DiscreteError::Parse {
            line: line_no,
            message: "missing objective line".into(),
        })?;
        let c = parse_numbers::<i64>(line, line_no)?;
        if let Some((extra, _)) = lines.next() {
            return Err(DiscreteError::Parse {
                line: extra,
                message: "trailing content".into(),
            });
        }
        Self::with_signed_objective(n, points, c)
    }

    pub fn from_file(path: &Path) -> Result<(Self, Orientation), DiscreteError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DiscreteError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Writes the text format read by [`AugmentInstance::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.points.len());
        for p in &self.points {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        let c: Vec<String> = self
            .objective
            .entries()
            .iter()
            .map(|v| v.to_string())
            .collect();
        out.push_str(&c.join(" "));
        out.push('\n');
        out
    }
}

fn parse_numbers<T: std::str::FromStr>(
    line: &str,
    line_no: usize,
) -> Result<Vec<T>, DiscreteError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<T>().map_err(|_| DiscreteError::Parse {
                line: line_no,
                message: format!("bad number `{tok}`"),
            })
        })
        .collect()
}

/// Coordinate flips applied to make an objective nonnegative.
///
/// With flips `s`, the original point is `x XOR s` and the original objective
/// value is the flipped value plus `shift` (the sum of negative entries).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    flips: BinaryVector,
    shift: i64,
}

impl Orientation {
    pub fn identity(n: usize) -> Self {
        Self {
            flips: BinaryVector::zeros(n),
            shift: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.flips.count_ones() == 0
    }

    /// Maps a point between the original and the flipped coordinates (the
    /// map is its own inverse).
    pub fn apply(&self, x: &BinaryVector) -> BinaryVector {
        x.flip_all(&self.flips)
    }

    pub fn original_value(&self, flipped_value: i64) -> i64 {
        flipped_value + self.shift
    }
}

/// The cube `{0,1}^n` with objective `(1, 2, 4, ..., 2^(n-1))`, on which plain
/// augmentation with smallest improvements visits all `2^n` points.
pub fn make_cube_powers(n: usize) -> Result<AugmentInstance, DiscreteError> {
    if n == 0 || n > MAX_ENUMERABLE_DIM {
        return Err(DiscreteError::TooLarge {
            what: "cube dimension",
            got: n,
            max: MAX_ENUMERABLE_DIM,
        });
    }
    let points = (0..1u64 << n)
        .map(|m| BinaryVector::from_mask(n, m))
        .collect();
    let c = IntegerObjective::new((0..n).map(|i| 1i64 << i).collect())?;
    AugmentInstance::new(n, points, c)
}

/// `m` distinct 0/1 points drawn uniformly, with objective entries uniform
/// in `[0, 100]`. Deterministic in `seed`.
pub fn make_random_01_polytope(
    n: usize,
    m: usize,
    seed: u64,
) -> Result<AugmentInstance, DiscreteError> {
    if n == 0 || n > MAX_ENUMERABLE_DIM {
        return Err(DiscreteError::TooLarge {
            what: "dimension",
            got: n,
            max: MAX_ENUMERABLE_DIM,
        });
    }
    let total = 1usize << n;
    if m == 0 || m > total {
        return Err(DiscreteError::InvalidArgument(format!(
            "need 1 <= m <= 2^n = {total}, got {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = sample(&mut rng, total, m)
        .into_iter()
        .map(|idx| BinaryVector::from_mask(n, idx as u64))
        .collect();
    let c = IntegerObjective::new((0..n).map(|_| rng.gen_range(0..=100)).collect())?;
    AugmentInstance::new(n, points, c)
}
