//! Noise operators, nested norms and optimal contraction constants on finite
//! product probability spaces, together with their coding-theory consequences.
//!
//! The crate is organized around a small set of exact or numerically checked
//! quantities:
//!
//! * [`prob`] — finite full-support distributions, the base space for everything.
//! * [`tensor`] — dense functions on `Ω^n` under a product measure: q-norms,
//!   nested (mixed) norms, noise operators and conditional expectations.
//! * [`sdpi`] — the optimal exponent `λ(q, μ*, ρ)` for the interpolation
//!   inequality `‖T_ρ f‖_q ≤ ‖f‖₁^{1−λ} ‖f‖_q^λ`, Rényi divergences, SDPI
//!   contraction ratios, and the extremal-random-variable search that certifies
//!   optimality.
//! * [`verify`] — randomized falsification harness for every inequality,
//!   tightness and monotonicity claim handled by this crate.
//! * [`gf`] — exact arithmetic and linear algebra over GF(p^ℓ).
//! * [`code`] — linear codes: weight distributions, MacWilliams transform,
//!   Fourier analysis on `𝔽_k^n`, erasure-channel conditional entropy.
//! * [`channel`] — discrete memoryless channels, Bhattacharyya coefficients
//!   and capacities.
//! * [`bounds`] — weight-distribution, block-error and undetected-error bounds
//!   tying code statistics to channel parameters.
//! * [`simulate`] — exact and Monte Carlo MAP block-decoding error
//!   probabilities used to ground-truth the bounds.
//!
//! All logarithms are natural internally; conversions to bits or base-k units
//! happen only at reporting boundaries (`bounds`, CLI output).

pub mod bounds;
pub mod channel;
pub mod code;
pub mod gf;
pub mod prob;
pub mod sdpi;
pub mod simulate;
pub mod tensor;
pub mod verify;

pub use prob::FiniteDist;
pub use tensor::{Exponent, NestedNormSpec, TensorFn};

/// Formats a float with the given number of significant digits, preferring
/// plain decimal notation for moderate magnitudes.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i64;
    let decimals = digits as i64 - 1 - mag;
    if (0..=20).contains(&decimals) {
        format!("{:.*}", decimals as usize, x)
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_sig;

    #[test]
    fn fmt_sig_plain_and_scientific() {
        assert_eq!(fmt_sig(0.5, 12), "0.500000000000");
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(1.0e30, 6), "1.00000e30");
        assert!(fmt_sig(0.321928094887362, 12).starts_with("0.32192809488"));
    }
}
