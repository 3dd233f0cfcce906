//! 0/1 points, nonnegative integer objectives and exact linear functionals.

use std::fmt;

use super::DiscreteError;

/// Largest supported dimension; points are packed into a `u64`.
pub const MAX_DIM: usize = 64;

/// A point of `{0,1}^n`, `n <= 64`.
///
/// Coordinate 0 is the most significant bit of the mask, so comparing masks
/// of equal length is lexicographic comparison of the coordinate vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryVector {
    len: usize,
    mask: u64,
}

impl BinaryVector {
    pub fn new(bits: &[u8]) -> Result<Self, DiscreteError> {
        if bits.len() > MAX_DIM {
            return Err(DiscreteError::TooLarge {
                what: "dimension",
                got: bits.len(),
                max: MAX_DIM,
            });
        }
        let mut mask = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(DiscreteError::NotBinary { index: i, value: b });
            }
            mask = (mask << 1) | b as u64;
        }
        Ok(Self {
            len: bits.len(),
            mask,
        })
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_DIM);
        Self { len, mask: 0 }
    }

    /// Builds a point from a mask whose bit `len - 1 - i` is coordinate `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= MAX_DIM);
        assert!(len == 64 || mask >> len == 0, "mask wider than dimension");
        Self { len, mask }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len);
        ((self.mask >> (self.len - 1 - i)) & 1) as u8
    }

    pub fn flip(&self, i: usize) -> Self {
        assert!(i < self.len);
        Self {
            len: self.len,
            mask: self.mask ^ (1 << (self.len - 1 - i)),
        }
    }

    /// Flips every coordinate set in `flips`.
    pub fn flip_all(&self, flips: &BinaryVector) -> Self {
        assert_eq!(self.len, flips.len);
        Self {
            len: self.len,
            mask: self.mask ^ flips.mask,
        }
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn count_ones(&self) -> u32 {
        self.mask.count_ones()
    }

    /// `||self - other||_1`.
    pub fn hamming(&self, other: &BinaryVector) -> u32 {
        assert_eq!(self.len, other.len);
        (self.mask ^ other.mask).count_ones()
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

/// A nonnegative integer objective `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerObjective {
    c: Vec<i64>,
}

impl IntegerObjective {
    pub fn new(c: Vec<i64>) -> Result<Self, DiscreteError> {
        if let Some(i) = c.iter().position(|&v| v < 0) {
            return Err(DiscreteError::NegativeEntry {
                index: i,
                value: c[i],
            });
        }
        Ok(Self { c })
    }

    pub fn entries(&self) -> &[i64] {
        &self.c
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// `C = ||c||_inf + 1`.
    pub fn big_c(&self) -> i64 {
        self.c.iter().copied().max().unwrap_or(0) + 1
    }

    pub fn dot(&self, x: &BinaryVector) -> i64 {
        assert_eq!(self.c.len(), x.len());
        self.c
            .iter()
            .enumerate()
            .filter(|&(i, _)| x.get(i) == 1)
            .map(|(_, v)| v)
            .sum()
    }
}

/// Entrywise `floor(c / mu)`.
pub fn scale_objective(c: &IntegerObjective, mu: u64) -> IntegerObjective {
    assert!(mu >= 1, "scale must be at least 1");
    IntegerObjective {
        c: c.c.iter().map(|&v| v / mu as i64).collect(),
    }
}

/// A positive dyadic rational `num / 2^log2_den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dyadic {
    num: i128,
    log2_den: u32,
}

impl Dyadic {
    pub fn from_int(v: i64) -> Self {
        assert!(v > 0, "dyadic scale must be positive");
        Self {
            num: v as i128,
            log2_den: 0,
        }
    }

    pub fn half(self) -> Self {
        if self.num % 2 == 0 {
            Self {
                num: self.num / 2,
                log2_den: self.log2_den,
            }
        } else {
            Self {
                num: self.num,
                log2_den: self.log2_den + 1,
            }
        }
    }

    /// `self < 1 / n`.
    pub fn below_reciprocal(self, n: u64) -> bool {
        self.num * n as i128 > 0 && (self.num * n as i128) < (1i128 << self.log2_den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / (self.log2_den as f64).exp2()
    }

    pub(crate) fn parts(self) -> (i128, u32) {
        (self.num, self.log2_den)
    }
}

/// An exact affine functional `x -> (offset + sum_i w_i x_i) / 2^log2_den`
/// on `{0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFunctional {
    weights: Vec<i128>,
    offset: i128,
    log2_den: u32,
}

impl LinearFunctional {
    pub fn from_objective(c: &IntegerObjective) -> Self {
        Self {
            weights: c.c.iter().map(|&v| v as i128).collect(),
            offset: 0,
            log2_den: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Value times `2^log2_den`; exact.
    pub fn eval_scaled(&self, x: &BinaryVector) -> i128 {
        assert_eq!(self.weights.len(), x.len());
        self.offset
            + self
                .weights
                .iter()
                .enumerate()
                .filter(|&(i, _)| x.get(i) == 1)
                .map(|(_, w)| *w)
                .sum::<i128>()
    }

    pub fn eval(&self, x: &BinaryVector) -> f64 {
        self.eval_scaled(x) as f64 / (self.log2_den as f64).exp2()
    }
}

/// `x -> c(x - x_ref) - mu ||x - x_ref||_1`, which is affine in `x` for a fixed
/// reference point.
pub fn geo_objective(c: &IntegerObjective, mu: Dyadic, x_ref: &BinaryVector) -> LinearFunctional {
    assert_eq!(c.len(), x_ref.len());
    let (mu_num, log2_den) = mu.parts();
    let scale = 1i128 << log2_den;
    let mut offset = 0i128;
    let weights =
        c.c.iter()
            .enumerate()
            .map(|(i, &ci)| {
                let ci = ci as i128 * scale;
                if x_ref.get(i) == 1 {
                    // moving away from 1 costs mu: c_i(x_i - 1) - mu (1 - x_i)
                    offset -= ci + mu_num;
                    ci + mu_num
                } else {
                    ci - mu_num
                }
            })
            .collect();
    LinearFunctional {
        weights,
        offset,
        log2_den,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(bits: &[u8]) -> BinaryVector {
        BinaryVector::new(bits).unwrap()
    }

    #[test]
    fn lexicographic_order() {
        assert!(bv(&[0, 1, 1]) < bv(&[1, 0, 0]));
        assert!(bv(&[0, 0, 1]) < bv(&[0, 1, 0]));
        assert_eq!(bv(&[1, 0, 1]).bits(), vec![1, 0, 1]);
        assert_eq!(bv(&[1, 0, 1]).to_string(), "1 0 1");
    }

    #[test]
    fn rejects_non_binary() {
        assert!(matches!(
            BinaryVector::new(&[0, 2]),
            Err(DiscreteError::NotBinary { index: 1, value: 2 })
        ));
        assert!(IntegerObjective::new(vec![1, -1]).is_err());
    }

    #[test]
    fn scaling() {
        let c = IntegerObjective::new(vec![6, 3]).unwrap();
        assert_eq!(scale_objective(&c, 4).entries(), &[1, 0]);
        assert_eq!(scale_objective(&c, 2).entries(), &[3, 1]);
        assert_eq!(scale_objective(&c, 1).entries(), &[6, 3]);
        assert_eq!(c.big_c(), 7);
    }

    #[test]
    fn geometric_functional() {
        let c = IntegerObjective::new(vec![1, 2, 4]).unwrap();
        let zero = BinaryVector::zeros(3);
        let f = geo_objective(&c, Dyadic::from_int(1), &zero);
        assert_eq!(f.eval(&zero), 0.0);
        assert_eq!(f.eval(&bv(&[1, 1, 1])), 4.0);
        let g = geo_objective(&c, Dyadic::from_int(15), &zero);
        assert_eq!(g.eval(&bv(&[0, 0, 1])), -11.0);
    }

    #[test]
    fn geometric_functional_matches_definition() {
        let c = IntegerObjective::new(vec![3, 0, 5, 7]).unwrap();
        let mu = Dyadic::from_int(5).half().half(); // 1.25
        for r in 0..16u64 {
            let x_ref = BinaryVector::from_mask(4, r);
            let f = geo_objective(&c, mu, &x_ref);
            assert_eq!(f.eval(&x_ref), 0.0);
            for m in 0..16u64 {
                let x = BinaryVector::from_mask(4, m);
                let expect = (c.dot(&x) - c.dot(&x_ref)) as f64 - 1.25 * x.hamming(&x_ref) as f64;
                assert_eq!(f.eval(&x), expect);
            }
        }
    }

    #[test]
    fn dyadic_threshold() {
        let mut mu = Dyadic::from_int(6);
        let mut values = vec![];
        while !mu.below_reciprocal(3) {
            values.push(mu.to_f64());
            mu = mu.half();
        }
        // 6, 3, 1.5, .75, .375 are >= 1/3; 0.1875 is not
        assert_eq!(values, vec![6.0, 3.0, 1.5, 0.75, 0.375]);
        assert_eq!(mu.to_f64(), 0.1875);
    }
}
