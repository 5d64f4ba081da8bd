//! Probability vectors over vertex sets.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProbError {
    #[error("probability vector must be non-empty")]
    Empty,
    #[error("entry {index} is {value}, not a finite non-negative weight")]
    BadEntry { index: usize, value: f64 },
    #[error("entries sum to {sum}, outside 1 +/- {tolerance}")]
    NotNormalized { sum: f64, tolerance: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

pub const DEFAULT_NORMALIZATION_TOL: f64 = 1e-12;

/// Non-negative weights summing to one within `tolerance`.
///
/// The tolerance travels with the vector: long evolutions accumulate mass
/// rounding of order steps * 1e-15, and vectors produced by those routines
/// carry a correspondingly relaxed tolerance instead of being renormalized
/// (renormalizing would silently perturb exact identities under test).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    weights: Vec<f64>,
    tolerance: f64,
}

impl ProbVector {
    pub fn new(weights: Vec<f64>) -> Result<Self, ProbError> {
        Self::with_tolerance(weights, DEFAULT_NORMALIZATION_TOL)
    }

    pub fn with_tolerance(weights: Vec<f64>, tolerance: f64) -> Result<Self, ProbError> {
        if weights.is_empty() {
            return Err(ProbError::Empty);
        }
        for (index, &value) in weights.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(ProbError::BadEntry { index, value });
            }
        }
        let sum = neumaier_sum(&weights);
        if (sum - 1.0).abs() > tolerance {
            return Err(ProbError::NotNormalized { sum, tolerance });
        }
        Ok(Self { weights, tolerance })
    }

    /// Scales arbitrary non-negative weights to a probability vector.
    pub fn normalized(raw: Vec<f64>) -> Result<Self, ProbError> {
        if raw.is_empty() {
            return Err(ProbError::Empty);
        }
        for (index, &value) in raw.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(ProbError::BadEntry { index, value });
            }
        }
        let sum = neumaier_sum(&raw);
        if sum <= 0.0 {
            return Err(ProbError::NotNormalized { sum, tolerance: 0.0 });
        }
        let weights = raw.into_iter().map(|w| w / sum).collect();
        Self::with_tolerance(weights, 1e-9)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        Self {
            weights: vec![1.0 / n as f64; n],
            tolerance: 1e-9,
        }
    }

    pub fn dirac(n: usize, x: usize) -> Self {
        assert!(x < n, "dirac atom {x} out of range for {n} vertices");
        let mut weights = vec![0.0; n];
        weights[x] = 1.0;
        Self {
            weights,
            tolerance: DEFAULT_NORMALIZATION_TOL,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn entry(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_entry(&self) -> f64 {
        self.weights.iter().cloned().fold(0.0, f64::max)
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }
}

impl AsRef<[f64]> for ProbVector {
    fn as_ref(&self) -> &[f64] {
        &self.weights
    }
}

/// Total variation distance: half the l1 distance.
pub fn tv(a: &ProbVector, b: &ProbVector) -> Result<f64, ProbError> {
    if a.len() != b.len() {
        return Err(ProbError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(tv_dense(a.as_slice(), b.as_slice()))
}

pub(crate) fn tv_dense(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for (x, y) in a.iter().zip(b) {
        let v = (x - y).abs();
        let t = s + v;
        c += if s.abs() >= v { (s - t) + v } else { (v - t) + s };
        s = t;
    }
    0.5 * (s + c)
}

/// Neumaier-compensated sum in index order; deterministic and accurate for
/// the long mixed-magnitude sums that show up in series accumulation.
pub(crate) fn neumaier_sum(xs: &[f64]) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for &x in xs {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

/// Draws an index from the cumulative distribution of `p` given a uniform
/// variate in [0, 1). Used by trajectory samplers; built once per vector.
pub struct CumulativeSampler {
    cumulative: Vec<f64>,
}

impl CumulativeSampler {
    pub fn new(p: &ProbVector) -> Self {
        let mut cumulative = Vec::with_capacity(p.len());
        let mut acc = 0.0;
        for &w in p.as_slice() {
            acc += w;
            cumulative.push(acc);
        }
        Self { cumulative }
    }

    pub fn index(&self, u: f64) -> usize {
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.cumulative.len() - 1)
    }
}
