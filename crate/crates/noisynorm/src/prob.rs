//! Finite probability spaces with full support.
//!
//! Every norm, divergence and noise operator in this crate is taken with
//! respect to a [`FiniteDist`]. Full support is enforced at construction:
//! zero entries are rejected rather than silently dropped, because the
//! contraction constants downstream are expressed in terms of the minimum
//! probability `μ* = min_x μ(x)` and degenerate inputs would make them
//! meaningless.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DistError {
    #[error("need at least two outcomes, got {0}")]
    EmptyOrSingleton(usize),
    #[error("probability at index {index} is {value}; entries must be strictly positive")]
    NonPositiveEntry { index: usize, value: f64 },
    #[error("probabilities sum to {0}, outside 1 ± 1e-9")]
    SumOutOfTolerance(f64),
    #[error("alphabet size must be at least 2, got {0}")]
    KTooSmall(usize),
}

/// A probability vector over a finite alphabet, renormalized at construction,
/// with the minimum probability cached.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDist {
    probs: Vec<f64>,
    min_prob: f64,
}

impl FiniteDist {
    /// Builds a distribution from raw probabilities.
    ///
    /// Requires length ≥ 2, strictly positive entries and a sum within 1e-9
    /// of 1. The vector is renormalized exactly so downstream sums do not
    /// accumulate drift.
    pub fn new(probs: &[f64]) -> Result<Self, DistError> {
        if probs.len() < 2 {
            return Err(DistError::EmptyOrSingleton(probs.len()));
        }
        for (index, &value) in probs.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(DistError::NonPositiveEntry { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(DistError::SumOutOfTolerance(sum));
        }
        let normalized: Vec<f64> = probs.iter().map(|p| p / sum).collect();
        let min_prob = normalized.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(Self {
            probs: normalized,
            min_prob,
        })
    }

    /// Uniform distribution on `k ≥ 2` points.
    pub fn uniform(k: usize) -> Result<Self, DistError> {
        if k < 2 {
            return Err(DistError::KTooSmall(k));
        }
        let p = 1.0 / k as f64;
        Ok(Self {
            probs: vec![p; k],
            min_prob: p,
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    /// The minimum probability `μ*`; its reciprocal `k = 1/μ*` is the
    /// effective alphabet size.
    pub fn min_prob(&self) -> f64 {
        self.min_prob
    }

    /// Index of a point achieving `μ*`.
    pub fn argmin(&self) -> usize {
        self.probs
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_two_points() {
        let d = FiniteDist::uniform(2).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.5]);
        assert_eq!(d.min_prob(), 0.5);
    }

    #[test]
    fn uniform_three_points() {
        let d = FiniteDist::uniform(3).unwrap();
        assert_eq!(d.alphabet_size(), 3);
        assert!((d.min_prob() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_rejects_singleton() {
        assert_eq!(FiniteDist::uniform(1), Err(DistError::KTooSmall(1)));
    }

    #[test]
    fn explicit_dist_reads_off_min() {
        let d = FiniteDist::new(&[0.2, 0.3, 0.5]).unwrap();
        assert!((d.min_prob() - 0.2).abs() < 1e-15);
        assert_eq!(d.argmin(), 0);
    }

    #[test]
    fn zero_entry_rejected() {
        let err = FiniteDist::new(&[0.5, 0.0, 0.5]).unwrap_err();
        assert_eq!(
            err,
            DistError::NonPositiveEntry {
                index: 1,
                value: 0.0
            }
        );
    }

    #[test]
    fn bad_sum_rejected() {
        assert!(matches!(
            FiniteDist::new(&[0.5, 0.6]),
            Err(DistError::SumOutOfTolerance(_))
        ));
    }

    proptest! {
        // Renormalization leaves the sum within 1e-12 and μ* below 1/|Ω|.
        #[test]
        fn renormalized_sum_and_min(raw in proptest::collection::vec(1e-6..1.0f64, 2..12)) {
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let d = FiniteDist::new(&probs).unwrap();
            let sum: f64 = d.probs().iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!(d.min_prob() <= 1.0 / d.alphabet_size() as f64 + 1e-12);
        }
    }
}
