//! Dense real-valued functions on `Ω^n` under a product measure `μ^⊗n`.
//!
//! A [`TensorFn`] stores one value per point of `Ω^n`, indexed in mixed radix
//! with the first coordinate as the most significant digit. On top of that we
//! provide the full norm calculus: plain q-norms for extended exponents,
//! nested (mixed) norms evaluated inner-to-outer, the single-coordinate noise
//! operator `T_{i,ρ} f = ρ f + (1−ρ) E_{X_i} f`, conditional expectations over
//! coordinate subsets, and the subset-averaged log-norm functional
//! `E_{S∼λ} ln ‖E(f|S)‖_q` that appears on the right-hand side of the
//! tensorized contraction inequality.
//!
//! Exponents `q ≤ 0` follow the usual convention: if the function vanishes
//! with positive probability the norm is 0 (and its logarithm −∞).

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::prob::FiniteDist;

/// Hard cap on dense storage: |Ω|^n may not exceed this.
pub const MAX_POINTS: usize = 10_000_000;

/// Largest `n` for which exact 2^n subset enumeration is permitted.
pub const MAX_EXACT_SUBSET_N: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("value vector has length {got}, expected {expected}")]
    BadShape { expected: usize, got: usize },
    #[error("|Ω|^n = {0} exceeds the dense-storage cap of {MAX_POINTS}")]
    TooLarge(u128),
    #[error("coordinate {i} out of range for n = {n}")]
    BadCoordinate { i: usize, n: usize },
    #[error("nested norm spec does not cover every axis exactly once: {0}")]
    AxisCoverage(String),
    #[error("exact subset enumeration requires n ≤ {MAX_EXACT_SUBSET_N}, got {0}")]
    TooLargeForExact(usize),
    #[error("need at least one coordinate")]
    NoCoordinates,
    #[error("Monte Carlo estimation needs at least two trials, got {0}")]
    TooFewTrials(u64),
    #[error("failed to parse value on line {line}: {text:?}")]
    Parse { line: usize, text: String },
}

/// An extended norm exponent: any real number, or +∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(q) => Some(q),
            Exponent::Infinity => None,
        }
    }

    /// Maps `f64::INFINITY` to [`Exponent::Infinity`], anything finite to
    /// [`Exponent::Finite`].
    pub fn from_f64(q: f64) -> Self {
        if q.is_infinite() && q > 0.0 {
            Exponent::Infinity
        } else {
            Exponent::Finite(q)
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(q) => write!(f, "{q}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = std::num::ParseFloatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "Inf" | "INF" | "infinity" => Ok(Exponent::Infinity),
            _ => Ok(Exponent::from_f64(s.parse::<f64>()?)),
        }
    }
}

/// An ordered nested-norm specification. Stage `i` is applied before stage
/// `i+1` (inner to outer); each stage removes a set of coordinate axes at a
/// common exponent.
#[derive(Debug, Clone)]
pub struct NestedNormSpec {
    stages: Vec<(Vec<usize>, Exponent)>,
}

impl NestedNormSpec {
    pub fn new(stages: Vec<(Vec<usize>, Exponent)>) -> Self {
        Self { stages }
    }

    /// All axes at a single exponent, innermost-to-outermost in index order.
    pub fn flat(n: usize, q: Exponent) -> Self {
        Self {
            stages: (0..n).map(|i| (vec![i], q)).collect(),
        }
    }

    pub fn stages(&self) -> &[(Vec<usize>, Exponent)] {
        &self.stages
    }

    fn validate(&self, n: usize) -> Result<(), TensorError> {
        let mut seen = vec![false; n];
        for (axes, _) in &self.stages {
            for &a in axes {
                if a >= n {
                    return Err(TensorError::AxisCoverage(format!(
                        "axis {a} out of range for n = {n}"
                    )));
                }
                if seen[a] {
                    return Err(TensorError::AxisCoverage(format!("axis {a} repeated")));
                }
                seen[a] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(TensorError::AxisCoverage(format!("axis {missing} missing")));
        }
        Ok(())
    }
}

/// A dense function `f : Ω^n → ℝ` under `μ^⊗n`. Values are immutable;
/// operations return new functions.
#[derive(Debug, Clone)]
pub struct TensorFn {
    dist: FiniteDist,
    n: usize,
    values: Vec<f64>,
}

fn checked_len(k: usize, n: usize) -> Result<usize, TensorError> {
    let len = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if len > MAX_POINTS as u128 {
        return Err(TensorError::TooLarge(len));
    }
    Ok(len as usize)
}

impl TensorFn {
    /// Wraps a dense value vector. `values.len()` must equal `|Ω|^n`; the
    /// index order is mixed radix with coordinate 0 most significant.
    pub fn new(dist: FiniteDist, n: usize, values: Vec<f64>) -> Result<Self, TensorError> {
        if n == 0 {
            return Err(TensorError::NoCoordinates);
        }
        let expected = checked_len(dist.alphabet_size(), n)?;
        if values.len() != expected {
            return Err(TensorError::BadShape {
                expected,
                got: values.len(),
            });
        }
        Ok(Self { dist, n, values })
    }

    pub fn constant(dist: FiniteDist, n: usize, c: f64) -> Result<Self, TensorError> {
        let len = checked_len(dist.alphabet_size(), n)?;
        Self::new(dist, n, vec![c; len])
    }

    /// Reads one value per line (blank lines ignored), in the documented
    /// mixed-radix index order.
    pub fn from_reader<R: BufRead>(
        dist: FiniteDist,
        n: usize,
        reader: R,
    ) -> Result<Self, TensorError> {
        let mut values = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|_| TensorError::Parse {
                line: idx + 1,
                text: "<io error>".into(),
            })?;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            let v: f64 = text.parse().map_err(|_| TensorError::Parse {
                line: idx + 1,
                text: text.to_string(),
            })?;
            values.push(v);
        }
        Self::new(dist, n, values)
    }

    pub fn dist(&self) -> &FiniteDist {
        &self.dist
    }

    pub fn coords(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn k(&self) -> usize {
        self.dist.alphabet_size()
    }

    /// Probability of the point with the given dense index.
    fn point_weight(&self, mut index: usize) -> f64 {
        let k = self.k();
        let probs = self.dist.probs();
        let mut w = 1.0;
        for _ in 0..self.n {
            w *= probs[index % k];
            index /= k;
        }
        w
    }

    /// `(E |f|^q)^{1/q}` with the extended-exponent conventions: `q = ∞` is
    /// the maximum of |f|, `q = 0` the geometric mean, and any `q ≤ 0`
    /// evaluates to 0 when f vanishes somewhere.
    pub fn q_norm(&self, q: Exponent) -> f64 {
        match q {
            Exponent::Infinity => self
                .values
                .iter()
                .map(|v| v.abs())
                .fold(0.0, f64::max),
            Exponent::Finite(q) => {
                if q <= 0.0 && self.values.contains(&0.0) {
                    return 0.0;
                }
                if q == 0.0 {
                    let mut acc = 0.0;
                    for (i, v) in self.values.iter().enumerate() {
                        acc += self.point_weight(i) * v.abs().ln();
                    }
                    acc.exp()
                } else {
                    let mut acc = 0.0;
                    for (i, v) in self.values.iter().enumerate() {
                        acc += self.point_weight(i) * v.abs().powf(q);
                    }
                    acc.powf(1.0 / q)
                }
            }
        }
    }

    /// Applies `T_{i,ρ} f = ρ f + (1−ρ) E_{X_i} f` along coordinate `i`
    /// (0-based).
    pub fn noise(&self, i: usize, rho: f64) -> Result<TensorFn, TensorError> {
        if i >= self.n {
            return Err(TensorError::BadCoordinate { i, n: self.n });
        }
        let k = self.k();
        let probs = self.dist.probs();
        let stride = k.pow((self.n - 1 - i) as u32);
        let block = stride * k;
        let mut out = self.values.clone();
        for base in (0..self.values.len()).step_by(block) {
            for inner in 0..stride {
                let avg: f64 = probs
                    .iter()
                    .enumerate()
                    .map(|(d, p)| p * self.values[base + d * stride + inner])
                    .sum();
                for d in 0..k {
                    let idx = base + d * stride + inner;
                    out[idx] = rho * self.values[idx] + (1.0 - rho) * avg;
                }
            }
        }
        Ok(TensorFn {
            dist: self.dist.clone(),
            n: self.n,
            values: out,
        })
    }

    /// Applies a per-coordinate noise vector sequentially in index order.
    /// The single-coordinate operators commute, so the order is immaterial.
    pub fn noise_vec(&self, rhos: &[f64]) -> Result<TensorFn, TensorError> {
        if rhos.len() != self.n {
            return Err(TensorError::BadShape {
                expected: self.n,
                got: rhos.len(),
            });
        }
        let mut f = self.clone();
        for (i, &rho) in rhos.iter().enumerate() {
            f = f.noise(i, rho)?;
        }
        Ok(f)
    }

    /// `T_ρ` with the same ρ on every coordinate.
    pub fn noise_all(&self, rho: f64) -> TensorFn {
        self.noise_vec(&vec![rho; self.n]).expect("lengths match")
    }

    /// Conditional expectation `E(f|S)(x) = E_{X_{S^c}} f(x_S, X_{S^c})`,
    /// returned as a function on the full product space (constant along the
    /// averaged coordinates). `keep` lists the retained coordinates.
    ///
    /// This is a direct two-pass block average, deliberately independent of
    /// the noise-operator path so the identity `E(f|S) = T_{σ(S)} f` can be
    /// cross-checked between the two routes.
    pub fn cond_exp(&self, keep: &[usize]) -> Result<TensorFn, TensorError> {
        let k = self.k();
        let probs = self.dist.probs();
        let mut keep_mask = vec![false; self.n];
        for &i in keep {
            if i >= self.n {
                return Err(TensorError::BadCoordinate { i, n: self.n });
            }
            keep_mask[i] = true;
        }
        // Place values of each axis digit; key zeroes out averaged digits.
        let mut digit_strides = vec![0usize; self.n];
        for (i, s) in digit_strides.iter_mut().enumerate() {
            *s = k.pow((self.n - 1 - i) as u32);
        }
        let mut sums = vec![0.0f64; self.values.len()];
        for (idx, v) in self.values.iter().enumerate() {
            let mut key = idx;
            let mut w = 1.0;
            for i in 0..self.n {
                if !keep_mask[i] {
                    let digit = (idx / digit_strides[i]) % k;
                    key -= digit * digit_strides[i];
                    w *= probs[digit];
                }
            }
            sums[key] += w * v;
        }
        let mut out = vec![0.0f64; self.values.len()];
        for (idx, o) in out.iter_mut().enumerate() {
            let mut key = idx;
            for i in 0..self.n {
                if !keep_mask[i] {
                    let digit = (idx / digit_strides[i]) % k;
                    key -= digit * digit_strides[i];
                }
            }
            *o = sums[key];
        }
        Ok(TensorFn {
            dist: self.dist.clone(),
            n: self.n,
            values: out,
        })
    }

    /// Evaluates a nested norm inner-to-outer. Collapses to [`Self::q_norm`]
    /// when every stage uses the same exponent.
    pub fn nested_norm(&self, spec: &NestedNormSpec) -> Result<f64, TensorError> {
        spec.validate(self.n)?;
        let k = self.k();
        let probs = self.dist.probs();
        // Remaining axes, in original order; values shrink as axes reduce.
        let mut axes: Vec<usize> = (0..self.n).collect();
        let mut values: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        for (stage_axes, q) in spec.stages() {
            let mut stage = stage_axes.clone();
            // Reduce rightmost positions first so earlier positions stay valid.
            stage.sort_by_key(|a| std::cmp::Reverse(axes.iter().position(|x| x == a)));
            for axis in stage {
                let pos = axes.iter().position(|&x| x == axis).expect("validated");
                values = reduce_axis(&values, axes.len(), pos, k, probs, *q);
                axes.remove(pos);
            }
        }
        debug_assert_eq!(values.len(), 1);
        Ok(values[0])
    }

    /// Exact `Σ_S λ^{|S|}(1−λ)^{n−|S|} ln ‖E(f|S)‖_q` over all 2^n subsets
    /// of retained coordinates, in nats. Returns −∞ if some subset of
    /// positive weight has a vanishing norm (possible only for `q ≤ 0`).
    pub fn erasure_log_functional_exact(
        &self,
        q: Exponent,
        lambda: f64,
    ) -> Result<f64, TensorError> {
        if self.n > MAX_EXACT_SUBSET_N {
            return Err(TensorError::TooLargeForExact(self.n));
        }
        let mut acc = 0.0f64;
        for mask in 0u32..(1u32 << self.n) {
            let size = mask.count_ones() as i32;
            let w = lambda.powi(size) * (1.0 - lambda).powi(self.n as i32 - size);
            if w == 0.0 {
                continue;
            }
            let keep: Vec<usize> = (0..self.n).filter(|i| mask >> i & 1 == 1).collect();
            let norm = self.cond_exp(&keep)?.q_norm(q);
            acc += w * norm.ln();
        }
        Ok(acc)
    }

    /// Monte Carlo estimate of the same functional: samples `S ∼ Ber(λ)^n`
    /// with a per-trial RNG stream derived from `(seed, trial)`, and returns
    /// `(estimate, standard error)`.
    pub fn erasure_log_functional_mc(
        &self,
        q: Exponent,
        lambda: f64,
        trials: u64,
        seed: u64,
    ) -> Result<(f64, f64), TensorError> {
        if trials < 2 {
            return Err(TensorError::TooFewTrials(trials));
        }
        let mut sum = 0.0f64;
        let mut sum_sq = 0.0f64;
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let keep: Vec<usize> = (0..self.n)
                .filter(|_| rng.random::<f64>() < lambda)
                .collect();
            let v = self.cond_exp(&keep)?.q_norm(q).ln();
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / trials as f64;
        let var = (sum_sq / trials as f64 - mean * mean).max(0.0);
        Ok((mean, (var / trials as f64).sqrt()))
    }
}

/// Removes one axis from a dense array by taking the weighted q-mean along
/// it. `m` is the current number of axes and `pos` the (0-most-significant)
/// position of the axis to reduce.
fn reduce_axis(
    values: &[f64],
    m: usize,
    pos: usize,
    k: usize,
    probs: &[f64],
    q: Exponent,
) -> Vec<f64> {
    let stride = k.pow((m - 1 - pos) as u32);
    let outer = values.len() / (stride * k);
    let mut out = Vec::with_capacity(outer * stride);
    for o in 0..outer {
        for inner in 0..stride {
            let base = o * stride * k + inner;
            let slice = (0..k).map(|d| values[base + d * stride]);
            out.push(weighted_q_mean(slice, probs, q));
        }
    }
    out
}

fn weighted_q_mean(values: impl Iterator<Item = f64> + Clone, probs: &[f64], q: Exponent) -> f64 {
    match q {
        Exponent::Infinity => values.fold(0.0, f64::max),
        Exponent::Finite(q) => {
            if q <= 0.0 && values.clone().any(|v| v == 0.0) {
                return 0.0;
            }
            if q == 0.0 {
                values
                    .zip(probs)
                    .map(|(v, p)| p * v.ln())
                    .sum::<f64>()
                    .exp()
            } else {
                values
                    .zip(probs)
                    .map(|(v, p)| p * v.powf(q))
                    .sum::<f64>()
                    .powf(1.0 / q)
            }
        }
    }
}
