//! Discrete memoryless channels: k-ary erasure and symmetric channels,
//! generic row-stochastic matrices, Bhattacharyya coefficients, capacities.
//!
//! The Bhattacharyya coefficient is defined through posterior ratios under a
//! uniform input: `Z(W) = max_{x≠x'} E[√(P(x'|Y)/P(x|Y)) | X = x]`. With X
//! uniform, Bayes gives `P(x|y) ∝ W(y|x)`, so the conditional expectation
//! collapses to the symmetric overlap sum
//! `Σ_y W(y|x)·√(W(y|x')/W(y|x)) = Σ_y √(W(y|x)·W(y|x'))`,
//! which is the form computed here (and cross-checked against the posterior
//! form in the tests).

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("parameter {name} = {value} outside [0, 1]")]
    BadParameter { name: &'static str, value: f64 },
    #[error("input alphabet must have at least two symbols, got {0}")]
    InputTooSmall(usize),
    #[error("row {row} sums to {sum}, not 1 ± 1e-9, or has negative entries")]
    NotStochastic { row: usize, sum: f64 },
    #[error("transition matrix has {got} entries, expected {expected}")]
    BadShape { expected: usize, got: usize },
    #[error("capacity is only implemented for erasure and symmetric channels")]
    NotSupported,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    Erasure { lambda: f64 },
    Symmetric { eta: f64 },
    Generic,
}

/// A channel from a k-symbol input alphabet to a finite output alphabet,
/// stored as a row-stochastic k×m matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteChannel {
    k: usize,
    m: usize,
    rows: Vec<f64>,
    kind: ChannelKind,
}

/// k-ary entropy `h_k(γ) = −(1−γ)log_k(1−γ) − γ log_k(γ/(k−1))`, with the
/// convention 0·log 0 = 0.
pub fn hk(k: u32, gamma: f64) -> f64 {
    let lk = (k as f64).ln();
    let mut h = 0.0;
    if gamma < 1.0 {
        h -= (1.0 - gamma) * (1.0 - gamma).ln() / lk;
    }
    if gamma > 0.0 {
        h -= gamma * (gamma / (k as f64 - 1.0)).ln() / lk;
    }
    h
}

impl DiscreteChannel {
    /// k-ary erasure channel: output alphabet is the k symbols plus an
    /// erasure symbol at index k.
    pub fn erasure(k: usize, lambda: f64) -> Result<Self, ChannelError> {
        if k < 2 {
            return Err(ChannelError::InputTooSmall(k));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(ChannelError::BadParameter {
                name: "lambda",
                value: lambda,
            });
        }
        let m = k + 1;
        let mut rows = vec![0.0; k * m];
        for x in 0..k {
            rows[x * m + x] = 1.0 - lambda;
            rows[x * m + k] = lambda;
        }
        Ok(Self {
            k,
            m,
            rows,
            kind: ChannelKind::Erasure { lambda },
        })
    }

    /// k-ary symmetric channel: keeps the symbol with probability 1−η,
    /// otherwise outputs each other symbol with probability η/(k−1).
    pub fn symmetric(k: usize, eta: f64) -> Result<Self, ChannelError> {
        if k < 2 {
            return Err(ChannelError::InputTooSmall(k));
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(ChannelError::BadParameter {
                name: "eta",
                value: eta,
            });
        }
        let off = eta / (k as f64 - 1.0);
        let mut rows = vec![off; k * k];
        for x in 0..k {
            rows[x * k + x] = 1.0 - eta;
        }
        Ok(Self {
            k,
            m: k,
            rows,
            kind: ChannelKind::Symmetric { eta },
        })
    }

    /// Generic channel from an explicit k×m transition matrix (row-major).
    /// Rows must be nonnegative and sum to 1 within 1e-9; they are
    /// renormalized exactly.
    pub fn generic(k: usize, m: usize, entries: &[f64]) -> Result<Self, ChannelError> {
        if k < 2 {
            return Err(ChannelError::InputTooSmall(k));
        }
        if entries.len() != k * m {
            return Err(ChannelError::BadShape {
                expected: k * m,
                got: entries.len(),
            });
        }
        let mut rows = entries.to_vec();
        for x in 0..k {
            let row = &mut rows[x * m..(x + 1) * m];
            let sum: f64 = row.iter().sum();
            if row.iter().any(|v| *v < 0.0) || (sum - 1.0).abs() > 1e-9 {
                return Err(ChannelError::NotStochastic { row: x, sum });
            }
            for v in row.iter_mut() {
                *v /= sum;
            }
        }
        Ok(Self {
            k,
            m,
            rows,
            kind: ChannelKind::Generic,
        })
    }

    pub fn input_size(&self) -> usize {
        self.k
    }

    pub fn output_size(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn transition(&self, x: usize, y: usize) -> f64 {
        self.rows[x * self.m + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.rows[x * self.m..(x + 1) * self.m]
    }

    /// Bhattacharyya coefficient `max_{x≠x'} Σ_y √(W(y|x)·W(y|x'))` ∈ [0,1].
    pub fn bhattacharyya(&self) -> f64 {
        let mut best: f64 = 0.0;
        for x in 0..self.k {
            for xp in (x + 1)..self.k {
                let overlap: f64 = (0..self.m)
                    .map(|y| (self.transition(x, y) * self.transition(xp, y)).sqrt())
                    .sum();
                best = best.max(overlap);
            }
        }
        best.min(1.0)
    }

    /// Shannon capacity in base-k symbols per use: `1−λ` for the erasure
    /// channel, `1−h_k(η)` for the symmetric channel.
    pub fn capacity(&self) -> Result<f64, ChannelError> {
        match self.kind {
            ChannelKind::Erasure { lambda } => Ok(1.0 - lambda),
            ChannelKind::Symmetric { eta } => Ok(1.0 - hk(self.k as u32, eta)),
            ChannelKind::Generic => Err(ChannelError::NotSupported),
        }
    }

    /// Samples an output symbol for input `x` by inverse-CDF walk on the row.
    pub fn sample(&self, x: usize, u: f64) -> usize {
        let row = self.row(x);
        let mut acc = 0.0;
        for (y, w) in row.iter().enumerate() {
            acc += w;
            if u < acc {
                return y;
            }
        }
        self.m - 1
    }
}

/// Closed form for the Bhattacharyya coefficient of the k-ary symmetric
/// channel: `(k−2)η/(k−1) + 2√((1−η)η/(k−1))`.
pub fn bhattacharyya_ksc_closed_form(k: u32, eta: f64) -> f64 {
    let kf = k as f64;
    (kf - 2.0) / (kf - 1.0) * eta + 2.0 * ((1.0 - eta) * eta / (kf - 1.0)).sqrt()
}
