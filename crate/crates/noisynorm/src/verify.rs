//! Brute-force and randomized falsification harness for the contraction
//! inequalities, their tightness families, the nested-norm exchange
//! inequality, and every monotonicity claim the optimal constants rest on.
//!
//! Reports are reproducible: all randomness is derived from `(seed, trial)`
//! ChaCha streams, and reductions (min margin, violation counts) are
//! order-independent, so a given configuration always produces the same
//! report bit for bit.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::prob::FiniteDist;
use crate::sdpi::{lambda_opt, r_binary, SdpiError};
use crate::tensor::{Exponent, NestedNormSpec, TensorFn, TensorError};

/// Margins below this count as violations of an inequality.
pub const VIOLATION_TOL: f64 = -1e-10;

/// Tight families must sit within this distance of equality.
pub const TIGHTNESS_TOL: f64 = 1e-9;

/// Grids claimed strictly monotone may flat-line at most this much.
pub const MONOTONE_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("n = {0} out of the supported range {1}..={2}")]
    BadN(usize, usize, usize),
    #[error("|Ω|^n = {0} exceeds the per-trial cap of 100000")]
    TooLargePerTrial(u128),
    #[error(transparent)]
    Sdpi(#[from] SdpiError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Outcome of one falsification run. `min_margin` is the smallest observed
/// slack (right-hand side minus left-hand side, in nats); `violations`
/// counts margins below [`VIOLATION_TOL`] (or tight families straying past
/// [`TIGHTNESS_TOL`]), never clipped.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub q: String,
    pub rho: f64,
    pub lambda: Option<f64>,
    pub dist: Vec<f64>,
    pub n: usize,
    pub trials: u64,
    pub tolerance: f64,
    pub min_margin: f64,
    pub violations: u64,
    pub worst_witness: Vec<f64>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct MarginTracker {
    min_margin: f64,
    violations: u64,
    worst: Vec<f64>,
}

impl MarginTracker {
    fn new() -> Self {
        Self {
            min_margin: f64::INFINITY,
            violations: 0,
            worst: Vec::new(),
        }
    }

    fn record(&mut self, margin: f64, witness: &[f64]) {
        if margin < self.min_margin {
            self.min_margin = margin;
            self.worst = witness.to_vec();
        }
        if margin < VIOLATION_TOL {
            self.violations += 1;
        }
    }

    fn record_tight(&mut self, margin: f64, witness: &[f64]) {
        if margin < self.min_margin {
            self.min_margin = margin;
            self.worst = witness.to_vec();
        }
        if margin.abs() > TIGHTNESS_TOL {
            self.violations += 1;
        }
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Random nonnegative test function with unit 1-norm. Three out of four
/// trials are dense i.i.d. Exp(1) draws; every fourth is sparse with 1–3
/// nonzeros, since the extremizers of the contraction inequality are sparse
/// and uniform-random functions never approach tightness.
fn random_unit_f(dist: &FiniteDist, n: usize, rng: &mut ChaCha8Rng, sparse: bool) -> TensorFn {
    let len = dist.alphabet_size().pow(n as u32);
    let mut values = vec![0.0f64; len];
    if sparse {
        let support = rng.random_range(1..=3usize.min(len));
        let mut placed = 0;
        while placed < support {
            let idx = rng.random_range(0..len);
            if values[idx] == 0.0 {
                values[idx] = -(1.0 - rng.random::<f64>()).ln();
                placed += 1;
            }
        }
    } else {
        for v in values.iter_mut() {
            *v = -(1.0 - rng.random::<f64>()).ln();
        }
    }
    let f = TensorFn::new(dist.clone(), n, values).expect("shape is consistent");
    let mass = f.q_norm(Exponent::Finite(1.0));
    let values = f.values().iter().map(|v| v / mass).collect();
    TensorFn::new(dist.clone(), n, values).expect("shape is consistent")
}

/// Single-coordinate contraction check: for random nonnegative f with
/// ‖f‖₁ = 1, the margin `λ·ln‖f‖_q − ln‖T_ρ f‖_q` must be nonnegative.
/// The known tight families (constants, the indicator of a minimum
/// probability point, and for q = ∞ with ρ < 0 the complement of such an
/// indicator) are evaluated deterministically and must sit at equality.
pub fn check_base_case(
    dist: &FiniteDist,
    q: Exponent,
    rho: f64,
    trials: u64,
    seed: u64,
) -> Result<CheckReport, VerifyError> {
    let mu_star = dist.min_prob();
    let lambda = lambda_opt(q, mu_star, rho)?;
    let margin_of = |f: &TensorFn| -> f64 {
        lambda * f.q_norm(q).ln() - f.noise(0, rho).expect("coordinate 0 exists").q_norm(q).ln()
    };
    let mut tracker = MarginTracker::new();

    // Tight families.
    let constant = TensorFn::constant(dist.clone(), 1, 1.0)?;
    tracker.record_tight(margin_of(&constant), constant.values());
    let k = dist.alphabet_size();
    let mut indicator = vec![0.0; k];
    indicator[dist.argmin()] = 1.0 / mu_star;
    let indicator = TensorFn::new(dist.clone(), 1, indicator)?;
    if rho >= 0.0 {
        tracker.record_tight(margin_of(&indicator), indicator.values());
    } else {
        // Negative ρ (q = ∞ only): the indicator is no longer extremal; the
        // tight family is its complement instead.
        tracker.record(margin_of(&indicator), indicator.values());
        let mut complement = vec![1.0 / (1.0 - mu_star); k];
        complement[dist.argmin()] = 0.0;
        let complement = TensorFn::new(dist.clone(), 1, complement)?;
        tracker.record_tight(margin_of(&complement), complement.values());
    }

    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let f = random_unit_f(dist, 1, &mut rng, trial % 4 == 3);
        tracker.record(margin_of(&f), f.values());
    }
    Ok(CheckReport {
        suite: "base".into(),
        q: q.to_string(),
        rho,
        lambda: Some(lambda),
        dist: dist.probs().to_vec(),
        n: 1,
        trials,
        tolerance: VIOLATION_TOL,
        min_margin: tracker.min_margin,
        violations: tracker.violations,
        worst_witness: tracker.worst,
    })
}

/// Tensorized check on `Ω^n`: the margin
/// `E_{S∼λ} ln‖E(f|S)‖_q − ln‖T_ρ f‖_q` over all 2^n retained-coordinate
/// subsets must be nonnegative at the optimal λ. Passing `lambda_override`
/// replaces λ; an undersized λ is expected to be falsified by the
/// deterministic dictator witness (the indicator of a minimum-probability
/// point on coordinate 0), which is tight at the optimum.
pub fn check_tensor(
    dist: &FiniteDist,
    n: usize,
    q: Exponent,
    rho: f64,
    lambda_override: Option<f64>,
    trials: u64,
    seed: u64,
) -> Result<CheckReport, VerifyError> {
    if !(1..=4).contains(&n) {
        return Err(VerifyError::BadN(n, 1, 4));
    }
    let size = (dist.alphabet_size() as u128).pow(n as u32);
    if size > 100_000 {
        return Err(VerifyError::TooLargePerTrial(size));
    }
    let mu_star = dist.min_prob();
    let optimal = lambda_opt(q, mu_star, rho)?;
    let lambda = lambda_override.unwrap_or(optimal);
    let margin_of = |f: &TensorFn| -> Result<f64, VerifyError> {
        let rhs = f.erasure_log_functional_exact(q, lambda)?;
        let lhs = f.noise_all(rho).q_norm(q).ln();
        Ok(rhs - lhs)
    };
    let mut tracker = MarginTracker::new();

    // Dictator witness: indicator of a μ*-point in coordinate 0, constant in
    // the rest. Tight at the optimal λ; negative margin for smaller λ.
    let k = dist.alphabet_size();
    let len = k.pow(n as u32);
    let stride = k.pow((n - 1) as u32);
    let mut dict = vec![0.0f64; len];
    let target = dist.argmin();
    for (idx, v) in dict.iter_mut().enumerate() {
        if idx / stride == target {
            *v = 1.0 / mu_star;
        }
    }
    let dict = TensorFn::new(dist.clone(), n, dict)?;
    if lambda_override.is_none() {
        tracker.record_tight(margin_of(&dict)?, dict.values());
    } else {
        tracker.record(margin_of(&dict)?, dict.values());
    }

    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let f = random_unit_f(dist, n, &mut rng, trial % 4 == 3);
        tracker.record(margin_of(&f)?, f.values());
    }
    Ok(CheckReport {
        suite: "tensor".into(),
        q: q.to_string(),
        rho,
        lambda: Some(lambda),
        dist: dist.probs().to_vec(),
        n,
        trials,
        tolerance: VIOLATION_TOL,
        min_margin: tracker.min_margin,
        violations: tracker.violations,
        worst_witness: tracker.worst,
    })
}

/// Default exponent pairs exercised by the nested-norm exchange check.
pub fn default_minkowski_pairs() -> Vec<(Exponent, Exponent)> {
    let grid = [
        Exponent::Finite(-1.0),
        Exponent::Finite(0.0),
        Exponent::Finite(1.0),
        Exponent::Finite(2.0),
        Exponent::Infinity,
    ];
    let key = |e: &Exponent| match e {
        Exponent::Finite(v) => *v,
        Exponent::Infinity => f64::INFINITY,
    };
    let mut pairs = Vec::new();
    for a in grid {
        for b in grid {
            if key(&a) <= key(&b) {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

/// Nested-norm exchange check: taking the smaller exponent on the inner
/// stage never exceeds the swapped order. Every third trial plants zeros in
/// f to exercise the zero-value convention for exponents ≤ 0.
pub fn check_minkowski(
    dist: &FiniteDist,
    n: usize,
    pairs: &[(Exponent, Exponent)],
    trials: u64,
    seed: u64,
) -> Result<CheckReport, VerifyError> {
    if !(2..=3).contains(&n) {
        return Err(VerifyError::BadN(n, 2, 3));
    }
    let mut tracker = MarginTracker::new();
    let mut total = 0u64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let mut f = random_unit_f(dist, n, &mut rng, false);
        if trial % 3 == 2 {
            // Plant zeros to exercise the q ≤ 0 convention.
            let values: Vec<f64> = f
                .values()
                .iter()
                .map(|v| if rng.random::<f64>() < 0.3 { 0.0 } else { *v })
                .collect();
            f = TensorFn::new(dist.clone(), n, values)?;
        }
        for &(p, q) in pairs {
            let mut inner_first = vec![(vec![0], p), (vec![1], q)];
            let mut swapped = vec![(vec![1], q), (vec![0], p)];
            for rest in 2..n {
                inner_first.push((vec![rest], Exponent::Finite(1.0)));
                swapped.push((vec![rest], Exponent::Finite(1.0)));
            }
            let lo = f.nested_norm(&NestedNormSpec::new(inner_first))?;
            let hi = f.nested_norm(&NestedNormSpec::new(swapped))?;
            tracker.record(hi - lo, f.values());
            total += 1;
        }
    }
    Ok(CheckReport {
        suite: "minkowski".into(),
        q: format!("{} exponent pairs", pairs.len()),
        rho: 0.0,
        lambda: None,
        dist: dist.probs().to_vec(),
        n,
        trials: total,
        tolerance: VIOLATION_TOL,
        min_margin: tracker.min_margin,
        violations: tracker.violations,
        worst_witness: tracker.worst,
    })
}

fn monotone_report(suite: &str, xs: &[f64], ys: &[f64]) -> CheckReport {
    let mut min_margin = f64::INFINITY;
    let mut violations = 0u64;
    let mut worst = Vec::new();
    for i in 1..ys.len() {
        let diff = ys[i] - ys[i - 1];
        if diff < min_margin {
            min_margin = diff;
            worst = vec![xs[i - 1], xs[i], ys[i - 1], ys[i]];
        }
        if diff < -MONOTONE_TOL {
            violations += 1;
        }
    }
    CheckReport {
        suite: format!("monotone:{suite}"),
        q: String::new(),
        rho: 0.0,
        lambda: None,
        dist: Vec::new(),
        n: 0,
        trials: ys.len() as u64,
        tolerance: -MONOTONE_TOL,
        min_margin,
        violations,
        worst_witness: worst,
    }
}

/// Grids every function claimed strictly increasing:
///
/// * `λ_ρ(k) = log_k(1 + (k−1)ρ²)` in k over [1.01, 100];
/// * `R_q(ρ, x, 1/x)` in x over (0, 10] (extremal-variable growth);
/// * `R_q(ρ, x₀, y)` in y over (0, 1/x₀] (reduction to the −1 atom);
/// * `Q(y) = ln(ρy + 1−ρ)/ln y` in y over (1, 1/μ*] (the sup-norm ratio).
///
/// 10³ samples each; strict increase up to 1e-12 ties.
pub fn monotone_suite() -> Vec<CheckReport> {
    let points = 1000usize;
    let mut reports = Vec::new();

    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    let rho = 0.3;
    for j in 0..points {
        let k = 1.01 + (100.0 - 1.01) * j as f64 / (points - 1) as f64;
        xs.push(k);
        ys.push((1.0 + (k - 1.0) * rho * rho).ln() / k.ln());
    }
    reports.push(monotone_report("lambda_in_k", &xs, &ys));

    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for j in 1..=points {
        let x = 10.0 * j as f64 / points as f64;
        xs.push(x);
        ys.push(r_binary(2.0, 0.5, x, 1.0 / x));
    }
    reports.push(monotone_report("extremal_in_alpha", &xs, &ys));

    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let x0 = 2.0;
    for j in 1..=points {
        let y = (1.0 / x0) * j as f64 / points as f64;
        xs.push(y);
        ys.push(r_binary(2.5, 0.6, x0, y));
    }
    reports.push(monotone_report("binary_in_y", &xs, &ys));

    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let (rho, mu_star) = (0.4, 0.2);
    for j in 1..=points {
        let y = 1.0 + (1.0 / mu_star - 1.0) * j as f64 / points as f64;
        xs.push(y);
        ys.push((rho * y + 1.0 - rho).ln() / y.ln());
    }
    reports.push(monotone_report("sup_ratio_in_y", &xs, &ys));

    reports
}
