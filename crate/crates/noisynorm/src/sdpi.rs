//! Optimal contraction exponents, Rényi divergences and the extremal
//! random-variable machinery that certifies them.
//!
//! The central quantity is `lambda_opt(q, μ*, ρ)`: the smallest λ for which
//! `‖T_ρ f‖_q ≤ ‖f‖₁^{1−λ} ‖f‖_q^λ` holds for every nonnegative f on a
//! full-support space with minimum probability μ*. Writing `k = 1/μ*`,
//!
//! * finite `q ≥ 2`, `ρ ∈ [0,1]`:
//!   `λ = (1/(q−1)) · log_k((1/k)(1+(k−1)ρ)^q + (1−1/k)(1−ρ)^q)`,
//! * `q = ∞`, `ρ ≥ 0`: `λ = log_k(1+(k−1)ρ)`,
//! * `q = ∞`, `−μ*/(1−μ*) ≤ ρ < 0`: `λ = −ln(1−ρ)/ln(1−μ*)`.
//!
//! The same λ is the strong-data-processing constant for the order-q Rényi
//! divergence under the kernel `ν ↦ ρν + (1−ρ)μ`, and equals the supremum of
//! `ln E(1+ρX)^q / ln E(1+X)^q` over mean-zero random variables with
//! `−1 ≤ X ≤ α = k−1`. [`sup_search`] brute-forces that supremum over binary
//! and ternary supports as an independent falsification check.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::prob::FiniteDist;
use crate::tensor::Exponent;

#[derive(Debug, Error, PartialEq)]
pub enum SdpiError {
    #[error("q = {0} out of range; need q ≥ 2")]
    QOutOfRange(f64),
    #[error("rho = {rho} out of range [{lo}, {hi}]")]
    RhoOutOfRange { rho: f64, lo: f64, hi: f64 },
    #[error("mu_star = {0} out of range (0, 1)")]
    MuStarOutOfRange(f64),
    #[error("Rényi divergence requires q > 1, got {0}")]
    QNotSupported(f64),
    #[error("nu has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("nu is not a probability vector (entry {index} = {value} or bad sum {sum})")]
    NotProbability { index: usize, value: f64, sum: f64 },
    #[error("nu equals mu; the contraction ratio is undefined")]
    NuEqualsMu,
    #[error("random variable is almost surely constant")]
    ConstantRv,
    #[error("random variable has mean {0}, expected 0 ± 1e-9")]
    MeanNotZero(f64),
    #[error("atom {0} lies below -1")]
    AtomBelowMinusOne(f64),
    #[error("alpha = {0} must be positive")]
    AlphaNonPositive(f64),
    #[error("atoms and probabilities differ in length or are empty")]
    BadSupport,
    #[error("probabilities must be positive and sum to 1 ± 1e-9 (sum = {0})")]
    BadProbs(f64),
}

/// Optimal exponent λ(q, μ*, ρ) ∈ [0, 1].
///
/// `mu_star` may be any value in (0, 1); for a genuine distribution on ≥ 2
/// points it is at most 1/2, but the formula is meaningful (and monotone)
/// for every `k = 1/μ* > 1`.
pub fn lambda_opt(q: Exponent, mu_star: f64, rho: f64) -> Result<f64, SdpiError> {
    if !(mu_star > 0.0 && mu_star < 1.0) {
        return Err(SdpiError::MuStarOutOfRange(mu_star));
    }
    let k = 1.0 / mu_star;
    match q {
        Exponent::Finite(q) => {
            if !(q >= 2.0) {
                return Err(SdpiError::QOutOfRange(q));
            }
            if !(0.0..=1.0).contains(&rho) {
                return Err(SdpiError::RhoOutOfRange {
                    rho,
                    lo: 0.0,
                    hi: 1.0,
                });
            }
            // ln(μ*·a^q + (1−μ*)·b^q) evaluated in the log domain so that
            // large q (used to probe the q → ∞ limit) does not overflow.
            let ln_a = (1.0 + (k - 1.0) * rho).ln();
            let ln_b = (1.0 - rho).ln();
            let tail = ((1.0 - mu_star) / mu_star) * (q * (ln_b - ln_a)).exp();
            let ln_inner = mu_star.ln() + q * ln_a + tail.ln_1p();
            Ok(ln_inner / ((q - 1.0) * k.ln()))
        }
        Exponent::Infinity => {
            let lo = -mu_star / (1.0 - mu_star);
            if !(lo..=1.0).contains(&rho) {
                return Err(SdpiError::RhoOutOfRange { rho, lo, hi: 1.0 });
            }
            if rho >= 0.0 {
                Ok((1.0 + (k - 1.0) * rho).ln() / k.ln())
            } else {
                Ok(-(1.0 - rho).ln() / (1.0 - mu_star).ln())
            }
        }
    }
}

/// `z_k(λ) = (k^λ − 1)/(k − 1)`: the noise/Bhattacharyya threshold paired
/// with erasure probability λ.
pub fn z_of_lambda(k: u32, lambda: f64) -> f64 {
    let kf = k as f64;
    (kf.powf(lambda) - 1.0) / (kf - 1.0)
}

/// Rényi divergence `D_q(ν‖μ)` in nats, for `q > 1` or `q = ∞`.
/// ν may contain zeros; μ must have full support.
pub fn renyi_divergence(nu: &[f64], mu: &FiniteDist, q: Exponent) -> Result<f64, SdpiError> {
    if nu.len() != mu.alphabet_size() {
        return Err(SdpiError::LengthMismatch {
            expected: mu.alphabet_size(),
            got: nu.len(),
        });
    }
    let sum: f64 = nu.iter().sum();
    for (index, &value) in nu.iter().enumerate() {
        if value < 0.0 || !value.is_finite() {
            return Err(SdpiError::NotProbability { index, value, sum });
        }
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(SdpiError::NotProbability {
            index: 0,
            value: nu[0],
            sum,
        });
    }
    match q {
        Exponent::Infinity => {
            let max_ratio = nu
                .iter()
                .zip(mu.probs())
                .map(|(n, m)| n / m)
                .fold(0.0, f64::max);
            Ok(max_ratio.ln())
        }
        Exponent::Finite(q) => {
            if !(q > 1.0) {
                return Err(SdpiError::QNotSupported(q));
            }
            // Σ μ(x) (ν(x)/μ(x))^q keeps ν = μ at exactly 1 per term.
            let s: f64 = nu
                .iter()
                .zip(mu.probs())
                .map(|(n, m)| m * (n / m).powf(q))
                .sum();
            Ok(s.ln() / (q - 1.0))
        }
    }
}

/// Contraction ratio `D_q(νT_ρ‖μ) / D_q(ν‖μ)` for the mixture kernel
/// `νT_ρ = ρν + (1−ρ)μ` (which fixes μ). Always at most
/// `lambda_opt(q, μ*, ρ)`.
pub fn sdpi_ratio(nu: &[f64], mu: &FiniteDist, q: Exponent, rho: f64) -> Result<f64, SdpiError> {
    let d_in = renyi_divergence(nu, mu, q)?;
    if d_in <= 0.0 {
        return Err(SdpiError::NuEqualsMu);
    }
    let mixed: Vec<f64> = nu
        .iter()
        .zip(mu.probs())
        .map(|(n, m)| rho * n + (1.0 - rho) * m)
        .collect();
    let d_out = renyi_divergence(&mixed, mu, q)?;
    Ok(d_out / d_in)
}

/// A finitely supported real random variable: atoms with positive
/// probabilities summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteRv {
    atoms: Vec<f64>,
    probs: Vec<f64>,
}

impl FiniteRv {
    pub fn new(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self, SdpiError> {
        if atoms.is_empty() || atoms.len() != probs.len() {
            return Err(SdpiError::BadSupport);
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|p| !(*p > 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return Err(SdpiError::BadProbs(sum));
        }
        let probs = probs.iter().map(|p| p / sum).collect();
        Ok(Self { atoms, probs })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.atoms
            .iter()
            .zip(&self.probs)
            .map(|(a, p)| a * p)
            .sum()
    }

    /// `E (1 + scale·X)^q`.
    pub fn expect_powf(&self, scale: f64, q: f64) -> f64 {
        self.atoms
            .iter()
            .zip(&self.probs)
            .map(|(a, p)| p * (1.0 + scale * a).powf(q))
            .sum()
    }

    fn is_constant(&self) -> bool {
        let lo = self.atoms.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.atoms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo == 0.0
    }

    /// Membership in the extremal class: mean zero (± 1e-9), atoms in
    /// `[−1, α]`, not almost surely constant.
    pub fn in_p_star(&self, alpha: f64) -> bool {
        self.mean().abs() <= 1e-9
            && self
                .atoms
                .iter()
                .all(|a| *a >= -1.0 - 1e-12 && *a <= alpha + 1e-12)
            && !self.is_constant()
    }
}

/// The extremal variable `X_α`: value α with probability 1/(1+α), value −1
/// with probability α/(1+α). Mean zero by construction.
pub fn extremal_rv(alpha: f64) -> Result<FiniteRv, SdpiError> {
    if !(alpha > 0.0) {
        return Err(SdpiError::AlphaNonPositive(alpha));
    }
    FiniteRv::new(
        vec![alpha, -1.0],
        vec![1.0 / (1.0 + alpha), alpha / (1.0 + alpha)],
    )
}

/// `ln E(1+ρX)^q / ln E(1+X)^q` for a mean-zero, nonconstant X bounded
/// below by −1.
pub fn r_ratio(x: &FiniteRv, q: f64, rho: f64) -> Result<f64, SdpiError> {
    if !(q >= 2.0) {
        return Err(SdpiError::QOutOfRange(q));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(SdpiError::RhoOutOfRange {
            rho,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let mean = x.mean();
    if mean.abs() > 1e-9 {
        return Err(SdpiError::MeanNotZero(mean));
    }
    if let Some(&bad) = x.atoms().iter().find(|a| **a < -1.0 - 1e-12) {
        return Err(SdpiError::AtomBelowMinusOne(bad));
    }
    if x.is_constant() {
        return Err(SdpiError::ConstantRv);
    }
    Ok(x.expect_powf(rho, q).ln() / x.expect_powf(1.0, q).ln())
}

/// The same ratio for the binary-support variable parameterized as
/// `P[X = x] = y/(1+y)`, `P[X = −yx] = 1/(1+y)` with `x > 0`,
/// `0 < y ≤ 1/x`. At `y = 1/x` the support is `{x, −1}`.
pub fn r_binary(q: f64, rho: f64, x: f64, y: f64) -> f64 {
    let n = |r: f64| -> f64 {
        y / (1.0 + y) * (1.0 + r * x).powf(q) + 1.0 / (1.0 + y) * (1.0 - r * y * x).powf(q)
    };
    n(rho).ln() / n(1.0).ln()
}

/// Result of a brute-force supremum search over mean-zero random variables
/// bounded in `[−1, α]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupSearchResult {
    pub best: FiniteRv,
    pub best_value: f64,
    pub best_binary: f64,
    pub best_ternary: f64,
}

/// Grid maximization of [`r_ratio`] over (a) binary-support variables with
/// support `{y, α}`, y gridded uniformly over `[−1, −1e-3]` with the exact
/// endpoint −1 included, and (b) a deterministic sample of ternary-support
/// variables with atoms `{y, z, α}`. Ties resolve to the lowest y.
///
/// This is a falsification harness, not an optimizer of record: the maximum
/// is expected at the extremal variable `X_α`.
pub fn sup_search(q: f64, rho: f64, alpha: f64, grid: usize) -> Result<SupSearchResult, SdpiError> {
    if !(alpha > 0.0) {
        return Err(SdpiError::AlphaNonPositive(alpha));
    }
    let grid = grid.max(2);
    let mut best_binary = f64::NEG_INFINITY;
    let mut best_rv: Option<FiniteRv> = None;
    for j in 0..grid {
        let y = -1.0 + (1.0 - 1e-3) * j as f64 / (grid - 1) as f64;
        // Mean-zero probabilities for support {y, α}.
        let p_alpha = -y / (alpha - y);
        let p_y = alpha / (alpha - y);
        let rv = FiniteRv::new(vec![alpha, y], vec![p_alpha, p_y])?;
        let value = r_ratio(&rv, q, rho)?;
        if value > best_binary {
            best_binary = value;
            best_rv = Some(rv);
        }
    }
    let mut best_ternary = f64::NEG_INFINITY;
    let atom_grid = (grid / 8).max(12);
    let prob_grid = (grid / 10).max(10);
    for jy in 0..atom_grid {
        let y = -1.0 + (1.0 - 1e-3) * jy as f64 / (atom_grid - 1) as f64;
        for jz in 1..atom_grid {
            let z = y + (alpha - y) * jz as f64 / atom_grid as f64;
            if z >= alpha - 1e-9 || (z - y).abs() < 1e-9 {
                continue;
            }
            for jp in 1..prob_grid {
                let p_alpha = jp as f64 / prob_grid as f64;
                // Solve the remaining probabilities from E X = 0.
                let p_y = (p_alpha * alpha + (1.0 - p_alpha) * z) / (z - y);
                let p_z = 1.0 - p_alpha - p_y;
                if p_y <= 1e-12 || p_z <= 1e-12 {
                    continue;
                }
                let rv = FiniteRv::new(vec![alpha, z, y], vec![p_alpha, p_z, p_y])?;
                let value = r_ratio(&rv, q, rho)?;
                if value > best_ternary {
                    best_ternary = value;
                }
            }
        }
    }
    let best_value = best_binary.max(best_ternary);
    Ok(SupSearchResult {
        best: best_rv.expect("binary grid is nonempty"),
        best_value,
        best_binary,
        best_ternary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOG2_1_25: f64 = 0.321928094887362; // log₂(1.25)

    #[test]
    fn lambda_q2_uniform_bit() {
        for rho in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let lam = lambda_opt(Exponent::Finite(2.0), 0.5, rho).unwrap();
            let expect = (1.0 + rho * rho).log2();
            assert!((lam - expect).abs() < 1e-12, "rho = {rho}");
        }
        assert!((lambda_opt(Exponent::Finite(2.0), 0.5, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_q2_half_rho_half() {
        let lam = lambda_opt(Exponent::Finite(2.0), 0.5, 0.5).unwrap();
        assert!((lam - LOG2_1_25).abs() < 1e-12);
    }

    #[test]
    fn lambda_inf_substitution() {
        // log₃(1 + 2·0.5) = log₃ 2
        let lam = lambda_opt(Exponent::Infinity, 1.0 / 3.0, 0.5).unwrap();
        assert!((lam - 2.0f64.ln() / 3.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn lambda_inf_negative_rho_branch() {
        let mu_star = 0.25;
        let lo = -mu_star / (1.0 - mu_star);
        let lam = lambda_opt(Exponent::Infinity, mu_star, lo).unwrap();
        assert!((lam - 1.0).abs() < 1e-12);
        assert!(lambda_opt(Exponent::Infinity, mu_star, lo - 1e-6).is_err());
    }

    #[test]
    fn lambda_endpoints_and_range() {
        for q in [
            Exponent::Finite(2.0),
            Exponent::Finite(7.5),
            Exponent::Infinity,
        ] {
            for mu_star in [0.5, 0.2, 0.01] {
                assert!(lambda_opt(q, mu_star, 0.0).unwrap().abs() < 1e-12);
                assert!((lambda_opt(q, mu_star, 1.0).unwrap() - 1.0).abs() < 1e-12);
                for rho in [0.1, 0.5, 0.9] {
                    let lam = lambda_opt(q, mu_star, rho).unwrap();
                    assert!(lam > 0.0 && lam < 1.0);
                }
            }
        }
    }

    #[test]
    fn lambda_rejects_bad_domains() {
        assert!(matches!(
            lambda_opt(Exponent::Finite(1.5), 0.5, 0.5),
            Err(SdpiError::QOutOfRange(_))
        ));
        assert!(matches!(
            lambda_opt(Exponent::Finite(2.0), 0.5, -0.1),
            Err(SdpiError::RhoOutOfRange { .. })
        ));
        assert!(matches!(
            lambda_opt(Exponent::Finite(2.0), 1.0, 0.5),
            Err(SdpiError::MuStarOutOfRange(_))
        ));
    }

    #[test]
    fn lambda_finite_q_approaches_infinity_branch() {
        for mu_star in [0.5, 1.0 / 3.0, 0.1] {
            for rho in [0.1, 0.5, 0.9] {
                let big = lambda_opt(Exponent::Finite(1e6), mu_star, rho).unwrap();
                let inf = lambda_opt(Exponent::Infinity, mu_star, rho).unwrap();
                assert!((big - inf).abs() < 1e-4, "mu* {mu_star} rho {rho}");
            }
        }
    }

    #[test]
    fn one_minus_lambda_is_renyi_entropy() {
        // For integer k, 1 − λ equals the base-k order-q Rényi entropy of
        // {ρ + (1−ρ)/k, (1−ρ)/k, …}; equivalently λ·ln k = D_q(ν ‖ uniform).
        for k in [2usize, 3, 5] {
            for q in [2.0, 3.5] {
                for rho in [0.2, 0.7] {
                    let lam = lambda_opt(Exponent::Finite(q), 1.0 / k as f64, rho).unwrap();
                    let mut nu = vec![(1.0 - rho) / k as f64; k];
                    nu[0] += rho;
                    let mu = FiniteDist::uniform(k).unwrap();
                    let d = renyi_divergence(&nu, &mu, Exponent::Finite(q)).unwrap();
                    assert!((lam * (k as f64).ln() - d).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn z_endpoints_and_value() {
        assert_eq!(z_of_lambda(4, 0.0), 0.0);
        assert!((z_of_lambda(4, 1.0) - 1.0).abs() < 1e-15);
        let expect = (3.0f64.sqrt() - 1.0) / 2.0;
        assert!((z_of_lambda(3, 0.5) - expect).abs() < 1e-12);
    }

    #[test]
    fn z_small_lambda_slope() {
        for k in [2u32, 3, 8, 64] {
            let lam = 1e-6;
            let slope = z_of_lambda(k, lam) / lam;
            let expect = (k as f64).ln() / (k as f64 - 1.0);
            assert!((slope / expect - 1.0).abs() < 1e-5, "k = {k}");
        }
    }

    #[test]
    fn renyi_zero_iff_equal() {
        let mu = FiniteDist::new(&[0.2, 0.3, 0.5]).unwrap();
        let d = renyi_divergence(&[0.2, 0.3, 0.5], &mu, Exponent::Finite(2.0)).unwrap();
        assert!(d.abs() < 1e-12);
        let d2 = renyi_divergence(&[0.25, 0.3, 0.45], &mu, Exponent::Finite(2.0)).unwrap();
        assert!(d2 > 0.0);
    }

    #[test]
    fn renyi_point_mass_values() {
        let mu = FiniteDist::uniform(2).unwrap();
        // q = 2: (1/(q−1)) ln(1/μ(x)) = ln 2.
        let d = renyi_divergence(&[1.0, 0.0], &mu, Exponent::Finite(2.0)).unwrap();
        assert!((d - 2.0f64.ln()).abs() < 1e-12);
        for k in [2usize, 5] {
            let mu = FiniteDist::uniform(k).unwrap();
            let mut nu = vec![0.0; k];
            nu[0] = 1.0;
            let d = renyi_divergence(&nu, &mu, Exponent::Infinity).unwrap();
            assert!((d - (k as f64).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn renyi_rejects_low_q() {
        let mu = FiniteDist::uniform(2).unwrap();
        assert!(matches!(
            renyi_divergence(&[0.6, 0.4], &mu, Exponent::Finite(1.0)),
            Err(SdpiError::QNotSupported(_))
        ));
    }

    #[test]
    fn sdpi_ratio_tight_at_min_probability_point() {
        let mu = FiniteDist::uniform(2).unwrap();
        let ratio = sdpi_ratio(&[1.0, 0.0], &mu, Exponent::Finite(2.0), 0.5).unwrap();
        assert!((ratio - LOG2_1_25).abs() < 1e-12);
    }

    #[test]
    fn sdpi_ratio_identity_and_erasing_kernels() {
        let mu = FiniteDist::new(&[0.3, 0.7]).unwrap();
        let nu = [0.6, 0.4];
        let r1 = sdpi_ratio(&nu, &mu, Exponent::Finite(3.0), 1.0).unwrap();
        assert!((r1 - 1.0).abs() < 1e-12);
        let r0 = sdpi_ratio(&nu, &mu, Exponent::Finite(3.0), 0.0).unwrap();
        assert!(r0.abs() < 1e-12);
    }

    #[test]
    fn sdpi_ratio_rejects_equal_inputs() {
        let mu = FiniteDist::uniform(3).unwrap();
        let nu = [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        assert_eq!(
            sdpi_ratio(&nu, &mu, Exponent::Finite(2.0), 0.5),
            Err(SdpiError::NuEqualsMu)
        );
    }

    #[test]
    fn extremal_rv_shapes() {
        let x1 = extremal_rv(1.0).unwrap();
        assert_eq!(x1.atoms(), &[1.0, -1.0]);
        assert!((x1.probs()[0] - 0.5).abs() < 1e-15);
        let x2 = extremal_rv(2.0).unwrap();
        assert_eq!(x2.atoms(), &[2.0, -1.0]);
        assert!((x2.probs()[0] - 1.0 / 3.0).abs() < 1e-15);
        for alpha in [0.1, 1.0, 7.0] {
            assert!(extremal_rv(alpha).unwrap().mean().abs() < 1e-12);
        }
        assert!(extremal_rv(0.0).is_err());
    }

    #[test]
    fn r_ratio_of_extremal_is_lambda() {
        // E X_α² = α makes the q = 2 ratio ln(1+ρ²α)/ln(1+α).
        let x = extremal_rv(1.0).unwrap();
        let r = r_ratio(&x, 2.0, 0.5).unwrap();
        assert!((r - LOG2_1_25).abs() < 1e-12);
        for q in [2.0, 3.0, 6.5] {
            for alpha in [0.5, 1.0, 3.0] {
                for rho in [0.3, 0.7] {
                    let x = extremal_rv(alpha).unwrap();
                    let lam = lambda_opt(Exponent::Finite(q), 1.0 / (1.0 + alpha), rho).unwrap();
                    let r = r_ratio(&x, q, rho).unwrap();
                    assert!((r - lam).abs() < 1e-12, "q {q} alpha {alpha} rho {rho}");
                }
            }
        }
    }

    #[test]
    fn r_ratio_near_one_approaches_one() {
        let x = extremal_rv(2.0).unwrap();
        let r = r_ratio(&x, 3.0, 1.0).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn r_ratio_validates_input() {
        let bad_mean = FiniteRv::new(vec![1.0, 0.5], vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            r_ratio(&bad_mean, 2.0, 0.5),
            Err(SdpiError::MeanNotZero(_))
        ));
        let below = FiniteRv::new(vec![2.0, -2.0], vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            r_ratio(&below, 2.0, 0.5),
            Err(SdpiError::AtomBelowMinusOne(_))
        ));
        let constant = FiniteRv::new(vec![0.0, 0.0], vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            r_ratio(&constant, 2.0, 0.5),
            Err(SdpiError::ConstantRv)
        ));
    }

    #[test]
    fn r_binary_matches_r_ratio() {
        let (x, y) = (1.5, 0.4);
        let rv = FiniteRv::new(vec![x, -y * x], vec![y / (1.0 + y), 1.0 / (1.0 + y)]).unwrap();
        let a = r_binary(2.5, 0.6, x, y);
        let b = r_ratio(&rv, 2.5, 0.6).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn in_p_star_predicate() {
        let x = extremal_rv(2.0).unwrap();
        assert!(x.in_p_star(2.0));
        assert!(x.in_p_star(2.5));
        assert!(!x.in_p_star(1.5));
    }

    #[test]
    fn sup_search_finds_extremal() {
        let res = sup_search(2.0, 0.5, 1.0, 200).unwrap();
        assert!((res.best_value - LOG2_1_25).abs() < 1e-9);
        assert_eq!(res.best.atoms()[1], -1.0);
        // Ternary candidates never beat the binary maximum.
        assert!(res.best_ternary <= res.best_binary + 1e-9);
    }

    #[test]
    fn extremal_variable_dominates_random_variables() {
        // For any mean-zero X bounded in [−1, α], the contraction ratio is
        // at most that of X_α with α the largest atom.
        use rand::{RngExt, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(0xA17A);
        for _ in 0..500 {
            let alpha = 0.2 + 3.0 * rng.random::<f64>();
            let z = -1.0 + (alpha + 1.0) * rng.random::<f64>() * 0.8;
            let p_alpha = 0.05 + 0.6 * rng.random::<f64>();
            // Solve the remaining probabilities from E X = 0 with atoms
            // {−1, z, α}; keep only valid draws.
            let p_neg = (p_alpha * alpha + (1.0 - p_alpha) * z) / (z + 1.0);
            let p_z = 1.0 - p_alpha - p_neg;
            if p_neg <= 1e-9 || p_z <= 1e-9 || (z - alpha).abs() < 1e-6 || (z + 1.0).abs() < 1e-6
            {
                continue;
            }
            let x = FiniteRv::new(vec![alpha, z, -1.0], vec![p_alpha, p_z, p_neg]).unwrap();
            for (q, rho) in [(2.0, 0.5), (3.5, 0.8)] {
                let r = r_ratio(&x, q, rho).unwrap();
                let cap = r_ratio(&extremal_rv(alpha).unwrap(), q, rho).unwrap();
                assert!(r <= cap + 1e-12, "alpha {alpha} z {z}: {r} vs {cap}");
            }
        }
    }

    #[test]
    fn lambda_strictly_increasing_in_integer_k() {
        for j in 1..=9 {
            let rho = j as f64 / 10.0;
            let mut last = f64::NEG_INFINITY;
            for k in 2..=64u32 {
                let lam = lambda_opt(Exponent::Finite(2.0), 1.0 / k as f64, rho).unwrap();
                assert!(lam > last, "k = {k}, rho = {rho}");
                last = lam;
            }
        }
    }

    #[test]
    fn sdpi_ratio_never_exceeds_lambda() {
        use rand::{RngExt, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5D91);
        for (dist, q, rho) in [
            (FiniteDist::uniform(2).unwrap(), Exponent::Finite(2.0), 0.5),
            (FiniteDist::uniform(4).unwrap(), Exponent::Finite(3.0), 0.3),
            (
                FiniteDist::new(&[0.2, 0.3, 0.5]).unwrap(),
                Exponent::Infinity,
                0.7,
            ),
        ] {
            let lam = lambda_opt(q, dist.min_prob(), rho).unwrap();
            let k = dist.alphabet_size();
            let mut checked = 0u32;
            while checked < 10_000 {
                let mut nu: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
                let total: f64 = nu.iter().sum();
                nu.iter_mut().for_each(|v| *v /= total);
                // Skip near-μ draws where the ratio degenerates to 0/0.
                if renyi_divergence(&nu, &dist, q).unwrap() < 1e-6 {
                    continue;
                }
                let ratio = sdpi_ratio(&nu, &dist, q, rho).unwrap();
                assert!(ratio <= lam + 1e-9, "ratio {ratio} vs lambda {lam}");
                checked += 1;
            }
        }
    }

    #[test]
    fn sup_search_nondecreasing_in_alpha() {
        let mut last = f64::NEG_INFINITY;
        for alpha in [0.5, 1.0, 2.0, 4.0] {
            let res = sup_search(2.0, 0.5, alpha, 150).unwrap();
            assert!(res.best_value >= last - 1e-12, "alpha = {alpha}");
            last = res.best_value;
        }
    }
}
