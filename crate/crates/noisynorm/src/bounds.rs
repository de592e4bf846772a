//! Bounds tying code statistics to channel parameters, the capacity-transfer
//! curve `g_k`, and undetected-error estimates.
//!
//! Everything in this module reports entropies in bits and capacities in
//! base-k symbols; the natural-log internals stay in the other modules.
//!
//! The threshold `z_k(λ)`, the matched error rate `η*(k, λ)` and the curve
//! `g_k` are the finite ingredients of block-length-asymptotic
//! capacity-transfer statements (codes that decode reliably on an erasure
//! channel also decode on any channel whose Bhattacharyya coefficient is
//! below the threshold). Nothing asymptotic is computed or asserted here;
//! only the finite quantities are.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{bhattacharyya_ksc_closed_form, hk};
use crate::code::{CodeError, LinearCode, WeightDistribution};
use crate::sdpi::z_of_lambda;

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("c = {0} is not below 1; the geometric-series bound is vacuous")]
    CNotLessThanOne(f64),
    #[error("no root: lambda must be positive")]
    NoRoot,
    #[error("parameter {name} = {value} out of range")]
    BadParameter { name: &'static str, value: f64 },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// One evaluated bound: its value, the exact quantity when computable, and
/// whether the bound's validity window and inequality hold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    /// "upper" or "lower".
    pub direction: String,
    pub bound_value: f64,
    pub actual_value: Option<f64>,
    pub tolerance: f64,
    /// Whether the bound's parameter window is satisfied.
    pub valid: bool,
    /// `actual ≤ bound + tol` (upper) or `bound ≤ actual + tol` (lower);
    /// `None` when the bound is invalid or no actual value is present.
    pub holds: Option<bool>,
}

impl BoundReport {
    fn new(
        name: &str,
        direction: &str,
        bound_value: f64,
        actual_value: Option<f64>,
        valid: bool,
    ) -> Self {
        let tolerance = 1e-9;
        let holds = match (valid, actual_value) {
            (true, Some(actual)) => Some(if direction == "upper" {
                actual <= bound_value + tolerance
            } else {
                bound_value <= actual + tolerance
            }),
            _ => None,
        };
        Self {
            name: name.to_string(),
            direction: direction.to_string(),
            bound_value,
            actual_value,
            tolerance,
            valid,
            holds,
        }
    }
}

/// Both sides of the weight-distribution bound
/// `log₂ Σ_i a_i z^i ≤ H(X|Y)` for the erasure channel with erasure
/// probability λ, where `z = z_k(λ)`. Returns `(lhs_bits, rhs_bits)`.
pub fn weight_bound_margin(code: &LinearCode, lambda: f64) -> Result<(f64, f64), BoundsError> {
    let k = code.field().order() as u32;
    let z = z_of_lambda(k, lambda);
    let wd = code.weight_distribution()?;
    let sum: f64 = wd
        .counts
        .iter()
        .enumerate()
        .map(|(i, a)| *a as f64 * z.powi(i as i32))
        .sum();
    let lhs = sum.log2();
    let rhs = code.erasure_entropy_exact(lambda)?;
    Ok((lhs, rhs))
}

/// The exponent base `F(k, γ, θ)` of the dual-side weight bound, with its
/// three branches selected by γ against `(k−1)(1∓θ)/k`.
pub fn f_factor(k: u32, gamma: f64, theta: f64) -> f64 {
    let kf = k as f64;
    let low = (kf - 1.0) / kf * (1.0 - theta);
    let high = (kf - 1.0) / kf * (1.0 + theta);
    if gamma < low {
        (1.0 - theta).powf(gamma) * (1.0 + (kf - 1.0) * theta).powf(1.0 - gamma)
    } else if gamma <= high {
        kf.powf(1.0 - hk(k, gamma))
    } else {
        (1.0 + theta).powf(gamma) * (1.0 - (kf - 1.0) * theta).powf(1.0 - gamma)
    }
}

/// Per-weight bounds on the number of codewords of weight i: the primal
/// bound `θ^{−i}·2^{H(X|Y)}` and the dual bound
/// `|𝒞|·2^{H(X^⊥|Y^⊥)} / F(k, i/n, θ)^n`. Returns `(primal, dual)`.
pub fn ai_bounds(code: &LinearCode, lambda: f64, i: usize) -> Result<(f64, f64), BoundsError> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(BoundsError::BadParameter {
            name: "lambda",
            value: lambda,
        });
    }
    let k = code.field().order() as u32;
    let n = code.length();
    let theta = z_of_lambda(k, lambda);
    let h = code.erasure_entropy_exact(lambda)?;
    let primal = theta.powi(-(i as i32)) * 2.0f64.powf(h);
    let h_dual = code.dual().erasure_entropy_exact(lambda)?;
    let gamma = i as f64 / n as f64;
    let dual =
        code.code_size() as f64 * 2.0f64.powf(h_dual) / f_factor(k, gamma, theta).powi(n as i32);
    Ok((primal, dual))
}

/// Block-error bound `2^{H_bits} · c^d / (1−c)` with
/// `c = Z·(k−1)/(k^λ−1)`; requires `c < 1`.
pub fn block_error_bound(
    d: usize,
    z: f64,
    k: u32,
    lambda: f64,
    h_bits: f64,
) -> Result<f64, BoundsError> {
    let c = z * (k as f64 - 1.0) / ((k as f64).powf(lambda) - 1.0);
    if !(c < 1.0) {
        return Err(BoundsError::CNotLessThanOne(c));
    }
    Ok(2.0f64.powf(h_bits) * c.powi(d as i32) / (1.0 - c))
}

/// The error parameter η* at which the symmetric channel's Bhattacharyya
/// coefficient equals `z_k(λ)`, found by bisection on `[0, (k−1)/k]` to
/// 1e-12. The overlap sum is increasing there, so the root is unique.
pub fn eta_star(k: u32, lambda: f64) -> Result<f64, BoundsError> {
    if !(lambda > 0.0) {
        return Err(BoundsError::NoRoot);
    }
    if lambda > 1.0 {
        return Err(BoundsError::BadParameter {
            name: "lambda",
            value: lambda,
        });
    }
    if lambda == 1.0 {
        // z = 1 is attained exactly at the uninformative channel; the
        // overlap sum is tangent there, so bisection cannot sharpen it.
        return Ok((k as f64 - 1.0) / k as f64);
    }
    let target = z_of_lambda(k, lambda);
    let mut lo = 0.0f64;
    let mut hi = (k as f64 - 1.0) / k as f64;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if bhattacharyya_ksc_closed_form(k, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One point of the capacity-transfer curve: for an erasure channel of
/// capacity `c_e`, the guaranteed symmetric-channel capacity
/// `g_k(c_e) = 1 − h_k(η*(k, 1−c_e))`. Returns `(eta_star, g_k)`.
pub fn gk_point(k: u32, c_e: f64) -> Result<(f64, f64), BoundsError> {
    if !(c_e > 0.0 && c_e <= 1.0) {
        return Err(BoundsError::BadParameter {
            name: "c_e",
            value: c_e,
        });
    }
    if c_e >= 1.0 {
        // λ = 0: no erasures, the threshold degenerates to η* = 0.
        return Ok((0.0, 1.0));
    }
    let eta = eta_star(k, 1.0 - c_e)?;
    Ok((eta, 1.0 - hk(k, eta)))
}

/// The curve `(c_e, η*, g_k(c_e))` over a grid of erasure-channel
/// capacities.
pub fn gk_curve(k: u32, grid: &[f64]) -> Result<Vec<(f64, f64, f64)>, BoundsError> {
    grid.iter()
        .map(|&c_e| gk_point(k, c_e).map(|(eta, g)| (c_e, eta, g)))
        .collect()
}

/// Exact undetected-error probability
/// `Σ_{i≥1} a_i (η/(k−1))^i (1−η)^{n−i}` on the k-ary symmetric channel.
pub fn p_ue_exact(wd: &WeightDistribution, k: u32, eta: f64) -> f64 {
    let kf = k as f64;
    wd.counts
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| {
            *a as f64 * (eta / (kf - 1.0)).powi(i as i32) * (1.0 - eta).powi((wd.n - i) as i32)
        })
        .sum()
}

/// The same probability through the dual weight distribution:
/// `(|𝒞|/k^n)·Σ_i b_i α^i − (1−η)^n` with `α = 1 − kη/(k−1)`.
pub fn p_ue_dual_form(dual_wd: &WeightDistribution, code_size: u128, k: u32, eta: f64) -> f64 {
    let kf = k as f64;
    let n = dual_wd.n;
    let alpha = 1.0 - kf * eta / (kf - 1.0);
    let sum: f64 = dual_wd
        .counts
        .iter()
        .enumerate()
        .map(|(i, b)| *b as f64 * alpha.powi(i as i32))
        .sum();
    code_size as f64 / kf.powi(n as i32) * sum - (1.0 - eta).powi(n as i32)
}

/// The undetected-error bound bundle at `(λ, η)`:
///
/// * lower bound `|𝒞|/k^n − (1−η)^n`, valid for `0 ≤ η ≤ (k−1)/k`;
/// * two-norm upper bound `(|𝒞|/k^n)·2^{H(X^⊥|Y^⊥)}`, valid for
///   `1−k^{λ−1} ≤ η ≤ min(1, 1−2/k+k^{λ−1})`;
/// * primal upper bound `|𝒞|/k^n + (1−η)^n·2^{H(X|Y)}`, valid for
///   `0 ≤ η ≤ 1−k^{−λ}`.
///
/// An η outside a bound's window flags that report invalid rather than
/// failing the whole bundle.
pub fn p_ue_bounds(
    code: &LinearCode,
    lambda: f64,
    eta: f64,
) -> Result<Vec<BoundReport>, BoundsError> {
    let k = code.field().order() as f64;
    let n = code.length();
    let rate = code.code_size() as f64 / k.powi(n as i32);
    let wd = code.weight_distribution()?;
    let actual = Some(p_ue_exact(&wd, code.field().order() as u32, eta));

    let lower_valid = (0.0..=(k - 1.0) / k).contains(&eta);
    let lower = BoundReport::new(
        "lower",
        "lower",
        rate - (1.0 - eta).powi(n as i32),
        actual,
        lower_valid,
    );

    let h_dual = code.dual().erasure_entropy_exact(lambda)?;
    let window_lo = 1.0 - k.powf(lambda - 1.0);
    let window_hi = (1.0f64).min(1.0 - 2.0 / k + k.powf(lambda - 1.0));
    let two_norm_valid = eta >= window_lo - 1e-15 && eta <= window_hi + 1e-15;
    let two_norm = BoundReport::new(
        "upper_two_norm",
        "upper",
        rate * 2.0f64.powf(h_dual),
        actual,
        two_norm_valid,
    );

    let h_primal = code.erasure_entropy_exact(lambda)?;
    let primal_valid = (0.0..=1.0 - k.powf(-lambda) + 1e-15).contains(&eta);
    let primal = BoundReport::new(
        "upper_primal",
        "upper",
        rate + (1.0 - eta).powi(n as i32) * 2.0f64.powf(h_primal),
        actual,
        primal_valid,
    );

    Ok(vec![lower, two_norm, primal])
}
