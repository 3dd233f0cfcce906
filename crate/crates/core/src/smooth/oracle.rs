//! Oracles for convex objectives and the built-in test problems.

/// A differentiable convex function with smoothness constant `L` and
/// strong-convexity constant `mu` (0 when merely convex).
pub trait SmoothOracle {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    fn smoothness(&self) -> f64;
    fn strong_convexity(&self) -> f64;

    /// A known minimizer, when the problem has one on record.
    fn minimizer(&self) -> Option<Vec<f64>> {
        None
    }

    /// The known optimal value `f*`.
    fn optimal_value(&self) -> Option<f64> {
        None
    }
}

/// A convex, possibly non-differentiable function accessed through
/// subgradients bounded in norm by `G` on the working region.
pub trait NonsmoothOracle {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn subgradient(&self, x: &[f64]) -> Vec<f64>;
    fn subgradient_bound(&self) -> f64;
    fn strong_convexity(&self) -> f64;

    fn minimizer(&self) -> Option<Vec<f64>> {
        None
    }

    fn optimal_value(&self) -> Option<f64> {
        None
    }
}

impl<O: SmoothOracle + ?Sized> SmoothOracle for &O {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (**self).gradient(x)
    }
    fn smoothness(&self) -> f64 {
        (**self).smoothness()
    }
    fn strong_convexity(&self) -> f64 {
        (**self).strong_convexity()
    }
    fn minimizer(&self) -> Option<Vec<f64>> {
        (**self).minimizer()
    }
    fn optimal_value(&self) -> Option<f64> {
        (**self).optimal_value()
    }
}

impl<O: NonsmoothOracle + ?Sized> NonsmoothOracle for &O {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        (**self).subgradient(x)
    }
    fn subgradient_bound(&self) -> f64 {
        (**self).subgradient_bound()
    }
    fn strong_convexity(&self) -> f64 {
        (**self).strong_convexity()
    }
    fn minimizer(&self) -> Option<Vec<f64>> {
        (**self).minimizer()
    }
    fn optimal_value(&self) -> Option<f64> {
        (**self).optimal_value()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Best available upper bound on `f(x) - f*` for a smooth oracle.
///
/// Uses the recorded optimal value when there is one, otherwise the
/// strong-convexity bound `||grad f(x)||^2 / (2 mu)`.
pub fn certified_gap<O: SmoothOracle + ?Sized>(oracle: &O, x: &[f64]) -> Option<f64> {
    if let Some(opt) = oracle.optimal_value() {
        return Some((oracle.value(x) - opt).max(0.0));
    }
    gradient_certificate(oracle, x)
}

/// `||grad f(x)||^2 / (2 mu)`, defined for `mu > 0`.
pub fn gradient_certificate<O: SmoothOracle + ?Sized>(oracle: &O, x: &[f64]) -> Option<f64> {
    let mu = oracle.strong_convexity();
    if mu > 0.0 {
        Some(norm_sq(&oracle.gradient(x)) / (2.0 * mu))
    } else {
        None
    }
}

/// `f(x) = 1/2 sum_i d_i x_i^2` with `d_i >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalQuadratic {
    diag: Vec<f64>,
}

impl DiagonalQuadratic {
    /// Panics if the diagonal is empty or has a negative or non-finite entry.
    pub fn new(diag: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "empty diagonal");
        assert!(
            diag.iter().all(|d| *d >= 0.0 && d.is_finite()),
            "diagonal entries must be finite and nonnegative"
        );
        assert!(
            diag.iter().any(|d| *d > 0.0),
            "diagonal must not be all zero"
        );
        Self { diag }
    }

    /// `n` eigenvalues spaced geometrically from `mu` to `l` (both included).
    pub fn geometric(n: usize, mu: f64, l: f64) -> Self {
        assert!(n >= 1 && mu > 0.0 && l >= mu);
        if n == 1 {
            return Self::new(vec![l]);
        }
        let ratio = l / mu;
        let mut diag: Vec<f64> = (0..n)
            .map(|i| mu * ratio.powf(i as f64 / (n - 1) as f64))
            .collect();
        // pin the extremes so L and mu are exact
        diag[0] = mu;
        diag[n - 1] = l;
        Self::new(diag)
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }
}

impl SmoothOracle for DiagonalQuadratic {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        0.5 * self.diag.iter().zip(x).map(|(d, v)| d * v * v).sum::<f64>()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.diag.iter().zip(x).map(|(d, v)| d * v).collect()
    }

    fn smoothness(&self) -> f64 {
        self.diag.iter().cloned().fold(0.0, f64::max)
    }

    fn strong_convexity(&self) -> f64 {
        self.diag.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    fn minimizer(&self) -> Option<Vec<f64>> {
        Some(vec![0.0; self.diag.len()])
    }

    fn optimal_value(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// `f(x) = sum_i log(e^{x_i} + e^{-x_i})`: 1-smooth, convex but not strongly
/// convex, minimized at 0 with value `n ln 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSumExp {
    dim: usize,
}

impl LogSumExp {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        Self { dim }
    }
}

impl SmoothOracle for LogSumExp {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter()
            .map(|v| {
                let a = v.abs();
                a + (-2.0 * a).exp().ln_1p()
            })
            .sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| v.tanh()).collect()
    }

    fn smoothness(&self) -> f64 {
        1.0
    }

    fn strong_convexity(&self) -> f64 {
        0.0
    }

    fn minimizer(&self) -> Option<Vec<f64>> {
        Some(vec![0.0; self.dim])
    }

    fn optimal_value(&self) -> Option<f64> {
        Some(self.dim as f64 * std::f64::consts::LN_2)
    }
}

/// `f(x) + (w/2) ||x - center||^2`.
///
/// Smoothness `L + w`, strong convexity `mu + w`. The minimizer is not known.
#[derive(Debug, Clone)]
pub struct Regularized<O> {
    inner: O,
    center: Vec<f64>,
    weight: f64,
}

impl<O: SmoothOracle> Regularized<O> {
    pub fn new(inner: O, center: Vec<f64>, weight: f64) -> Self {
        assert_eq!(inner.dim(), center.len());
        assert!(weight > 0.0);
        Self {
            inner,
            center,
            weight,
        }
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: SmoothOracle> SmoothOracle for Regularized<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.inner.value(x) + 0.5 * self.weight * dist_sq(x, &self.center)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.inner.gradient(x);
        for ((gi, xi), ci) in g.iter_mut().zip(x).zip(&self.center) {
            *gi += self.weight * (xi - ci);
        }
        g
    }

    fn smoothness(&self) -> f64 {
        self.inner.smoothness() + self.weight
    }

    fn strong_convexity(&self) -> f64 {
        self.inner.strong_convexity() + self.weight
    }
}

/// Presents an oracle with different constants, or with its optimum hidden.
///
/// Used to run solvers "blind" (certifying through gradients only) and to
/// inject mis-specified constants.
#[derive(Debug, Clone)]
pub struct Assumed<O> {
    inner: O,
    smoothness: Option<f64>,
    strong_convexity: Option<f64>,
    hide_optimum: bool,
}

impl<O> Assumed<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            smoothness: None,
            strong_convexity: None,
            hide_optimum: false,
        }
    }

    pub fn with_smoothness(mut self, l: f64) -> Self {
        self.smoothness = Some(l);
        self
    }

    pub fn with_strong_convexity(mut self, mu: f64) -> Self {
        self.strong_convexity = Some(mu);
        self
    }

    pub fn hide_optimum(mut self) -> Self {
        self.hide_optimum = true;
        self
    }
}

impl<O: SmoothOracle> SmoothOracle for Assumed<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.inner.value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.inner.gradient(x)
    }
    fn smoothness(&self) -> f64 {
        self.smoothness.unwrap_or_else(|| self.inner.smoothness())
    }
    fn strong_convexity(&self) -> f64 {
        self.strong_convexity
            .unwrap_or_else(|| self.inner.strong_convexity())
    }
    fn minimizer(&self) -> Option<Vec<f64>> {
        if self.hide_optimum {
            None
        } else {
            self.inner.minimizer()
        }
    }
    fn optimal_value(&self) -> Option<f64> {
        if self.hide_optimum {
            None
        } else {
            self.inner.optimal_value()
        }
    }
}

impl<O: NonsmoothOracle> NonsmoothOracle for Assumed<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.inner.value(x)
    }
    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        self.inner.subgradient(x)
    }
    fn subgradient_bound(&self) -> f64 {
        self.inner.subgradient_bound()
    }
    fn strong_convexity(&self) -> f64 {
        self.strong_convexity
            .unwrap_or_else(|| self.inner.strong_convexity())
    }
    fn minimizer(&self) -> Option<Vec<f64>> {
        if self.hide_optimum {
            None
        } else {
            self.inner.minimizer()
        }
    }
    fn optimal_value(&self) -> Option<f64> {
        if self.hide_optimum {
            None
        } else {
            self.inner.optimal_value()
        }
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `f(x) = ||x||_1 + (mu/2) ||x||^2`, minimized at 0.
///
/// `G = sqrt(n) (1 + mu R)` bounds the subgradients on the box `[-R, R]^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsQuadratic {
    dim: usize,
    mu: f64,
    radius: f64,
}

impl AbsQuadratic {
    pub fn new(dim: usize, mu: f64, radius: f64) -> Self {
        assert!(dim >= 1 && mu >= 0.0 && radius > 0.0);
        Self { dim, mu, radius }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl NonsmoothOracle for AbsQuadratic {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v.abs()).sum::<f64>() + 0.5 * self.mu * norm_sq(x)
    }

    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| sign(v) + self.mu * v).collect()
    }

    fn subgradient_bound(&self) -> f64 {
        (self.dim as f64).sqrt() * (1.0 + self.mu * self.radius)
    }

    fn strong_convexity(&self) -> f64 {
        self.mu
    }

    fn minimizer(&self) -> Option<Vec<f64>> {
        Some(vec![0.0; self.dim])
    }

    fn optimal_value(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// One-dimensional `f(x) = max_i s_i x` with slopes of both signs, so the
/// minimum 0 is attained at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxOfLinear {
    slopes: Vec<f64>,
}

impl MaxOfLinear {
    pub fn new(slopes: Vec<f64>) -> Self {
        assert!(slopes.iter().any(|s| *s > 0.0) && slopes.iter().any(|s| *s < 0.0));
        Self { slopes }
    }
}

impl NonsmoothOracle for MaxOfLinear {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.slopes
            .iter()
            .map(|s| s * x[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        if x[0] == 0.0 {
            // 0 lies between the extreme slopes
            return vec![0.0];
        }
        let best = self
            .slopes
            .iter()
            .cloned()
            .max_by(|a, b| (a * x[0]).total_cmp(&(b * x[0])))
            .unwrap();
        vec![best]
    }

    fn subgradient_bound(&self) -> f64 {
        self.slopes.iter().map(|s| s.abs()).fold(0.0, f64::max)
    }

    fn strong_convexity(&self) -> f64 {
        0.0
    }

    fn minimizer(&self) -> Option<Vec<f64>> {
        Some(vec![0.0])
    }

    fn optimal_value(&self) -> Option<f64> {
        Some(0.0)
    }
}
