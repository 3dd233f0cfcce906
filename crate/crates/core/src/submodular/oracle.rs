//! Set functions and the counting value oracle.

use std::cell::Cell;
use std::collections::HashSet;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SubmodularError;

/// A set function on `{0, ..., n-1}`.
pub trait SetFunction {
    fn ground_size(&self) -> usize;
    fn value(&self, set: &[usize]) -> f64;
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &[usize]) -> f64 {
        (**self).value(set)
    }
}

/// Value oracle that counts every evaluation.
///
/// The counter sits in a `Cell`, so an oracle must not be shared between
/// threads; give each solve its own.
#[derive(Debug)]
pub struct CountingOracle<F> {
    inner: F,
    calls: Cell<u64>,
}

impl<F: SetFunction> CountingOracle<F> {
    pub fn new(inner: F) -> Self {
        Self {
            inner,
            calls: Cell::new(0),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    pub fn evaluate(&self, set: &[usize]) -> f64 {
        self.calls.set(self.calls.get() + 1);
        self.inner.value(set)
    }

    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    pub fn reset(&self) {
        self.calls.set(0);
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

/// Named ground elements, indexed `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    names: Vec<String>,
}

impl GroundSet {
    pub fn new(names: Vec<String>) -> Result<Self, SubmodularError> {
        if names.is_empty() {
            return Err(SubmodularError::EmptyGroundSet);
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(SubmodularError::Duplicate(name.clone()));
            }
        }
        Ok(Self { names })
    }

    /// Elements named `0`, `1`, ..., `n-1`.
    pub fn indexed(n: usize) -> Result<Self, SubmodularError> {
        Self::new((0..n).map(|i| i.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }
}

/// Weighted coverage: element `i` covers `subsets[i]` of a weighted universe,
/// and `g(S)` is the total weight of the union.
#[derive(Debug, Clone, PartialEq)]
pub struct Coverage {
    subsets: Vec<Vec<usize>>,
    weights: Vec<f64>,
}

impl Coverage {
    pub fn new(subsets: Vec<Vec<usize>>, weights: Vec<f64>) -> Result<Self, SubmodularError> {
        if subsets.is_empty() {
            return Err(SubmodularError::EmptyGroundSet);
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(SubmodularError::InvalidArgument(format!(
                "universe weights must be finite and nonnegative, got {w}"
            )));
        }
        let u = weights.len();
        for s in &subsets {
            if let Some(&j) = s.iter().find(|&&j| j >= u) {
                return Err(SubmodularError::OutOfRange { element: j, n: u });
            }
        }
        Ok(Self { subsets, weights })
    }

    /// Unit weights.
    pub fn unweighted(subsets: Vec<Vec<usize>>, universe: usize) -> Result<Self, SubmodularError> {
        Self::new(subsets, vec![1.0; universe])
    }

    /// `n` elements over a universe of size `u`; each element covers between
    /// 1 and `max(1, u/3)` distinct universe items, and universe weights are
    /// integers in `[1, 10]`. Deterministic in `seed`.
    pub fn random(n: usize, u: usize, seed: u64) -> Result<Self, SubmodularError> {
        if n == 0 || u == 0 {
            return Err(SubmodularError::InvalidArgument(
                "need n >= 1 and u >= 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max_size = (u / 3).max(1);
        let subsets = (0..n)
            .map(|_| {
                let size = rng.gen_range(1..=max_size);
                let mut s = sample(&mut rng, u, size).into_vec();
                s.sort_unstable();
                s
            })
            .collect();
        let weights = (0..u).map(|_| rng.gen_range(1..=10) as f64).collect();
        Self::new(subsets, weights)
    }

    /// `n` elements, each covering exactly `size` distinct items of a
    /// unit-weight universe of size `u`. Deterministic in `seed`.
    pub fn random_uniform(
        n: usize,
        u: usize,
        size: usize,
        seed: u64,
    ) -> Result<Self, SubmodularError> {
        if n == 0 || size == 0 || size > u {
            return Err(SubmodularError::InvalidArgument(format!(
                "need n >= 1 and 1 <= size <= u, got n={n} u={u} size={size}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let subsets = (0..n)
            .map(|_| {
                let mut s = sample(&mut rng, u, size).into_vec();
                s.sort_unstable();
                s
            })
            .collect();
        Self::unweighted(subsets, u)
    }

    pub fn universe_size(&self) -> usize {
        self.weights.len()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Reads the text format: a header `n u`, then one line per ground
    /// element listing the universe indices it covers (`-` for none), then a
    /// line of `u` nonnegative weights. Blank lines and `#` comments are
    /// ignored.
    pub fn parse(text: &str) -> Result<Self, SubmodularError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines.next().ok_or(SubmodularError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let header: Vec<usize> = parse_tokens(header, line_no)?;
        let [n, u] = header[..] else {
            return Err(SubmodularError::Parse {
                line: line_no,
                message: "header must be `n u`".into(),
            });
        };
        let mut subsets = Vec::with_capacity(n);
        let mut last = line_no;
        for _ in 0..n {
            let (line_no, line) = lines.next().ok_or(SubmodularError::Parse {
                line: last,
                message: format!("expected {n} element lines"),
            })?;
            last = line_no;
            if line == "-" {
                subsets.push(Vec::new());
            } else {
                subsets.push(parse_tokens(line, line_no)?);
            }
        }
        let (line_no, line) = lines.next().ok_or(SubmodularError::Parse {
            line: last,
            message: "missing weight line".into(),
        })?;
        let weights: Vec<f64> = parse_tokens(line, line_no)?;
        if weights.len() != u {
            return Err(SubmodularError::Parse {
                line: line_no,
                message: format!("expected {u} weights, got {}", weights.len()),
            });
        }
        if let Some((extra, _)) = lines.next() {
            return Err(SubmodularError::Parse {
                line: extra,
                message: "trailing content".into(),
            });
        }
        Self::new(subsets, weights)
    }

    pub fn from_file(path: &Path) -> Result<Self, SubmodularError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SubmodularError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.subsets.len(), self.weights.len());
        for s in &self.subsets {
            if s.is_empty() {
                out.push('-');
            } else {
                let items: Vec<String> = s.iter().map(|j| j.to_string()).collect();
                out.push_str(&items.join(" "));
            }
            out.push('\n');
        }
        let w: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        out.push_str(&w.join(" "));
        out.push('\n');
        out
    }
}

fn parse_tokens<T: std::str::FromStr>(
    line: &str,
    line_no: usize,
) -> Result<Vec<T>, SubmodularError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse().map_err(|_| SubmodularError::Parse {
                line: line_no,
                message: format!("bad number `{tok}`"),
            })
        })
        .collect()
}

impl SetFunction for Coverage {
    fn ground_size(&self) -> usize {
        self.subsets.len()
    }

    fn value(&self, set: &[usize]) -> f64 {
        let mut covered = vec![false; self.weights.len()];
        let mut total = 0.0;
        for &e in set {
            for &j in &self.subsets[e] {
                if !covered[j] {
                    covered[j] = true;
                    total += self.weights[j];
                }
            }
        }
        total
    }
}

/// `g(S) = sum_{e in S} w_e`.
#[derive(Debug, Clone, PartialEq)]
pub struct Modular {
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Self {
        Self { weights }
    }
}

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: &[usize]) -> f64 {
        set.iter().map(|&e| self.weights[e]).sum()
    }
}

/// A set function given by a closure.
pub struct FnSetFunction<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[usize]) -> f64> FnSetFunction<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(&[usize]) -> f64> SetFunction for FnSetFunction<F> {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &[usize]) -> f64 {
        (self.f)(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Coverage {
        Coverage::unweighted(vec![vec![1, 2], vec![3, 4], vec![1, 3]], 5).unwrap()
    }

    #[test]
    fn coverage_values() {
        let g = abc();
        assert_eq!(g.value(&[]), 0.0);
        assert_eq!(g.value(&[0]), 2.0);
        assert_eq!(g.value(&[0, 2]), 3.0);
        assert_eq!(g.value(&[0, 1, 2]), 4.0);
    }

    #[test]
    fn counter_counts_every_call() {
        let oracle = CountingOracle::new(abc());
        for _ in 0..5 {
            oracle.evaluate(&[1]);
        }
        assert_eq!(oracle.calls(), 5);
        oracle.reset();
        assert_eq!(oracle.calls(), 0);
    }

    #[test]
    fn ground_set_rejects_duplicates() {
        assert!(GroundSet::new(vec!["a".into(), "b".into()]).is_ok());
        assert!(matches!(
            GroundSet::new(vec!["a".into(), "a".into()]),
            Err(SubmodularError::Duplicate(_))
        ));
        assert!(GroundSet::new(vec![]).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let g = Coverage::random(7, 9, 4).unwrap();
        assert_eq!(Coverage::parse(&g.to_text()).unwrap(), g);
        let text = "2 3\n0 2\n-\n1 1 5\n";
        let h = Coverage::parse(text).unwrap();
        assert_eq!(h.value(&[0, 1]), 6.0);
        assert!(Coverage::parse("1 2\n0 2\n1 1\n").is_err());
        assert!(Coverage::parse("1 2\n0\n1 -1\n").is_err());
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(
            Coverage::random(10, 20, 3).unwrap(),
            Coverage::random(10, 20, 3).unwrap()
        );
        assert_ne!(
            Coverage::random(10, 20, 3).unwrap(),
            Coverage::random(10, 20, 4).unwrap()
        );
    }
}
