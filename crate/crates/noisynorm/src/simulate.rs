//! Exact and Monte Carlo evaluation of MAP block-decoding error
//! probabilities, used to ground-truth the analytic bounds.
//!
//! The Monte Carlo decoder is exhaustive MAP: it scores every codeword by
//! its log-likelihood and keeps the best, breaking exact ties toward the
//! lexicographically smallest codeword (the error probability does not
//! depend on the tiebreak, and a test checks that the opposite tiebreak
//! agrees within statistical error). Per-trial randomness comes from a
//! dedicated ChaCha stream derived from `(seed, trial)`, so the estimate is
//! reproducible and trials could be evaluated in any order.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::DiscreteChannel;
use crate::code::{CodeError, LinearCode, MAX_EXACT_ERASURE_N};

/// Cap on exhaustive MAP decoding: `k^dim` candidate codewords per trial.
pub const MAX_MAP_CODEWORDS: u128 = 1 << 16;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("exact erasure analysis requires n ≤ {MAX_EXACT_ERASURE_N}, got {0}")]
    TooLarge(usize),
    #[error("code too large for exhaustive MAP: k^dim = {0} exceeds {MAX_MAP_CODEWORDS}")]
    CodeTooLargeForMap(u128),
    #[error("channel input alphabet ({channel}) does not match the field order ({field})")]
    ChannelMismatch { channel: usize, field: usize },
    #[error("need at least one trial")]
    NoTrials,
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// A Monte Carlo block-error estimate with its binomial standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub p_b_estimate: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
    pub exact: Option<f64>,
}

/// Options for [`monte_carlo_pb_with`]: transmit only the zero codeword
/// (instead of a uniform codeword) and/or flip the MAP tiebreak direction.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimOptions {
    pub transmit_zero_only: bool,
    pub tie_break_largest: bool,
}

/// Exact erasure-channel analysis: enumerates all 2^n survival patterns S
/// (weighted by `(1−λ)^{|S|} λ^{n−|S|}`) and uses the affine structure of
/// the decoding set, whose size given S is `k^{dim𝒞 − dim𝒞_S}`. Returns
/// `(p_ambiguous, p_block_error)`.
pub fn erasure_exact(code: &LinearCode, lambda: f64) -> Result<(f64, f64), SimError> {
    let n = code.length();
    if n > MAX_EXACT_ERASURE_N {
        return Err(SimError::TooLarge(n));
    }
    let k = code.field().order() as f64;
    let keep = 1.0 - lambda;
    let mut p_amb = 0.0f64;
    let mut p_b = 0.0f64;
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as i32;
        let w = keep.powi(size) * lambda.powi(n as i32 - size);
        if w == 0.0 {
            continue;
        }
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let deficiency = code.dim() - code.projected_dim(&s);
        if deficiency > 0 {
            p_amb += w;
        }
        p_b += w * (1.0 - k.powi(-(deficiency as i32)));
    }
    Ok((p_amb, p_b))
}

/// Monte Carlo estimate of the MAP block-error probability with default
/// options (uniform codeword, smallest-codeword tiebreak). The exact value
/// is attached when the channel is an erasure channel at tractable length.
pub fn monte_carlo_pb(
    code: &LinearCode,
    channel: &DiscreteChannel,
    trials: u64,
    seed: u64,
) -> Result<SimResult, SimError> {
    monte_carlo_pb_with(code, channel, trials, seed, SimOptions::default())
}

pub fn monte_carlo_pb_with(
    code: &LinearCode,
    channel: &DiscreteChannel,
    trials: u64,
    seed: u64,
    opts: SimOptions,
) -> Result<SimResult, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let k = code.field().order();
    if channel.input_size() != k {
        return Err(SimError::ChannelMismatch {
            channel: channel.input_size(),
            field: k,
        });
    }
    let count = (k as u128)
        .checked_pow(code.dim() as u32)
        .unwrap_or(u128::MAX);
    if count > MAX_MAP_CODEWORDS {
        return Err(SimError::CodeTooLargeForMap(count));
    }
    let mut codewords: Vec<Vec<usize>> = Vec::with_capacity(count as usize);
    code.for_each_codeword(|cw| codewords.push(cw.to_vec()))?;

    // Log-likelihood table; zero transitions eliminate a candidate outright.
    let m = channel.output_size();
    let mut loglik = vec![f64::NEG_INFINITY; k * m];
    for x in 0..k {
        for y in 0..m {
            let w = channel.transition(x, y);
            if w > 0.0 {
                loglik[x * m + y] = w.ln();
            }
        }
    }

    let n = code.length();
    let mut errors = 0u64;
    let mut received = vec![0usize; n];
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let sent_idx = if opts.transmit_zero_only {
            0
        } else {
            rng.random_range(0..codewords.len())
        };
        let sent = &codewords[sent_idx];
        for (i, &x) in sent.iter().enumerate() {
            received[i] = channel.sample(x, rng.random::<f64>());
        }
        let mut best_idx = 0usize;
        let mut best_score = f64::NEG_INFINITY;
        for (idx, cw) in codewords.iter().enumerate() {
            let mut score = 0.0f64;
            for (i, &x) in cw.iter().enumerate() {
                score += loglik[x * m + received[i]];
                if score == f64::NEG_INFINITY {
                    break;
                }
            }
            let better = score > best_score
                || (score == best_score
                    && best_score > f64::NEG_INFINITY
                    && tie_prefers(cw, &codewords[best_idx], opts.tie_break_largest));
            if better {
                best_score = score;
                best_idx = idx;
            }
        }
        if best_idx != sent_idx {
            errors += 1;
        }
    }
    let p = errors as f64 / trials as f64;
    let stderr = (p * (1.0 - p) / trials as f64).sqrt();
    let exact = match channel.kind() {
        crate::channel::ChannelKind::Erasure { lambda } if n <= MAX_EXACT_ERASURE_N => {
            Some(erasure_exact(code, lambda)?.1)
        }
        _ => None,
    };
    Ok(SimResult {
        p_b_estimate: p,
        stderr,
        trials,
        seed,
        exact,
    })
}

fn tie_prefers(candidate: &[usize], incumbent: &[usize], largest: bool) -> bool {
    if largest {
        candidate > incumbent
    } else {
        candidate < incumbent
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn repetition3() -> LinearCode {
        LinearCode::from_rows(f2(), 3, &[vec![1, 1, 1]]).unwrap()
    }

    fn hamming_7_4() -> LinearCode {
        #[rustfmt::skip]
        let rows = vec![
            vec![1, 0, 0, 0, 1, 1, 0],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ];
        LinearCode::from_rows(f2(), 7, &rows).unwrap()
    }

    #[test]
    fn erasure_exact_repetition_closed_form() {
        // Only the all-erased pattern is ambiguous; the decoding set then
        // has two elements, so p_b = λ³/2.
        let code = repetition3();
        for lambda in [0.1, 0.4, 0.9] {
            let (p_amb, p_b) = erasure_exact(&code, lambda).unwrap();
            assert!((p_amb - lambda.powi(3)).abs() < 1e-15);
            assert!((p_b - lambda.powi(3) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn erasure_exact_endpoints() {
        let code = hamming_7_4();
        assert_eq!(erasure_exact(&code, 0.0).unwrap(), (0.0, 0.0));
        let (p_amb, p_b) = erasure_exact(&code, 1.0).unwrap();
        assert!((p_amb - 1.0).abs() < 1e-15);
        assert!((p_b - (1.0 - 1.0 / 16.0)).abs() < 1e-15);
    }

    #[test]
    fn erasure_exact_amb_pb_ordering() {
        // ((k−1)/k)·p_amb ≤ p_b ≤ p_amb.
        for lambda in [0.2, 0.5, 0.8] {
            for code in [repetition3(), hamming_7_4()] {
                let k = 2.0;
                let (p_amb, p_b) = erasure_exact(&code, lambda).unwrap();
                assert!(p_b <= p_amb + 1e-15);
                assert!(p_b >= (k - 1.0) / k * p_amb - 1e-15);
            }
        }
    }

    #[test]
    fn noiseless_channel_never_errs() {
        let code = repetition3();
        let channel = DiscreteChannel::symmetric(2, 0.0).unwrap();
        let res = monte_carlo_pb(&code, &channel, 2000, 3).unwrap();
        assert_eq!(res.p_b_estimate, 0.0);
    }

    #[test]
    fn erasure_mc_matches_exact() {
        let code = repetition3();
        let channel = DiscreteChannel::erasure(2, 0.5).unwrap();
        let res = monte_carlo_pb(&code, &channel, 100_000, 11).unwrap();
        let exact = res.exact.unwrap();
        assert!((exact - 0.0625).abs() < 1e-15);
        assert!(
            (res.p_b_estimate - exact).abs() <= 4.0 * res.stderr,
            "estimate {} exact {exact} stderr {}",
            res.p_b_estimate,
            res.stderr
        );
    }

    #[test]
    fn same_seed_same_result() {
        let code = hamming_7_4();
        let channel = DiscreteChannel::symmetric(2, 0.05).unwrap();
        let a = monte_carlo_pb(&code, &channel, 5000, 99).unwrap();
        let b = monte_carlo_pb(&code, &channel, 5000, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tie_break_direction_is_immaterial_statistically() {
        let code = repetition3();
        let channel = DiscreteChannel::erasure(2, 0.6).unwrap();
        let trials = 60_000;
        let small = monte_carlo_pb_with(&code, &channel, trials, 5, SimOptions::default())
            .unwrap();
        let large = monte_carlo_pb_with(
            &code,
            &channel,
            trials,
            6,
            SimOptions {
                tie_break_largest: true,
                ..Default::default()
            },
        )
        .unwrap();
        let spread = (small.stderr.powi(2) + large.stderr.powi(2)).sqrt();
        assert!(
            (small.p_b_estimate - large.p_b_estimate).abs() <= 4.0 * spread,
            "{} vs {}",
            small.p_b_estimate,
            large.p_b_estimate
        );
    }

    #[test]
    fn zero_codeword_conditional_error_matches_uniform() {
        // On a symmetric channel the conditional error probability is
        // codeword independent for linear codes.
        let code = hamming_7_4();
        let channel = DiscreteChannel::symmetric(2, 0.08).unwrap();
        let trials = 60_000;
        let uniform = monte_carlo_pb(&code, &channel, trials, 21).unwrap();
        let zero_only = monte_carlo_pb_with(
            &code,
            &channel,
            trials,
            22,
            SimOptions {
                transmit_zero_only: true,
                ..Default::default()
            },
        )
        .unwrap();
        let spread = (uniform.stderr.powi(2) + zero_only.stderr.powi(2)).sqrt();
        assert!(
            (uniform.p_b_estimate - zero_only.p_b_estimate).abs() <= 4.0 * spread,
            "{} vs {}",
            uniform.p_b_estimate,
            zero_only.p_b_estimate
        );
    }

    #[test]
    fn union_bound_dominates_estimate() {
        // Estimate ≤ Σ_{i≥d} a_i Z^i + 4·stderr whenever the sum is small.
        let code = hamming_7_4();
        let wd = code.weight_distribution().unwrap();
        for eta in [0.01, 0.03] {
            let channel = DiscreteChannel::symmetric(2, eta).unwrap();
            let z = channel.bhattacharyya();
            let union: f64 = wd
                .counts
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| *a as f64 * z.powi(i as i32))
                .sum();
            if union >= 1.0 {
                continue;
            }
            let res = monte_carlo_pb(&code, &channel, 40_000, 17).unwrap();
            assert!(
                res.p_b_estimate <= union + 4.0 * res.stderr,
                "eta = {eta}: {} vs {union}",
                res.p_b_estimate
            );
        }
    }

    #[test]
    fn mismatched_channel_rejected() {
        let code = repetition3();
        let channel = DiscreteChannel::symmetric(3, 0.1).unwrap();
        assert!(matches!(
            monte_carlo_pb(&code, &channel, 100, 1),
            Err(SimError::ChannelMismatch { .. })
        ));
    }
}
