//! Linear codes over GF(p^ℓ): weight distributions, the MacWilliams
//! transform, Fourier analysis on `𝔽_k^n`, projected dimensions and
//! erasure-channel conditional entropy.
//!
//! Weight distributions are computed by exhaustive codeword enumeration in
//! Gray order over the message space (one digit of the message changes per
//! step, so each codeword is an O(n) update of the previous one). The
//! MacWilliams transform is carried out in exact big-integer arithmetic via
//! the Krawtchouk expansion; floating point never enters that path.

use num_bigint::BigInt;
use num_complex::Complex64;
use thiserror::Error;

use crate::gf::{Field, GfError, Matrix};

/// Cap on exhaustive codeword enumeration: `k^dim` may not exceed this.
pub const MAX_CODEWORDS: u128 = 1 << 24;

/// Cap on dense functions over `𝔽_k^n` (Fourier transforms, indicator
/// densities).
pub const MAX_AMBIENT: u128 = 1_000_000;

/// Largest block length for exact 2^n erasure-pattern enumeration.
pub const MAX_EXACT_ERASURE_N: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum CodeError {
    #[error("generator has no rows")]
    EmptyGenerator,
    #[error("code too large: k^dim = {0} exceeds {MAX_CODEWORDS}")]
    CodeTooLarge(u128),
    #[error("ambient space too large: k^n = {0} exceeds {MAX_AMBIENT}")]
    AmbientTooLarge(u128),
    #[error("minimum distance undefined for the zero-dimensional code")]
    ZeroDimensional,
    #[error("exact erasure enumeration requires n ≤ {MAX_EXACT_ERASURE_N}, got {0}")]
    TooLargeForExact(usize),
    #[error("MacWilliams transform produced a non-integer or negative count at weight {0}")]
    NonIntegerResult(usize),
    #[error("dual weight count at weight {0} overflows u128")]
    CountOverflow(usize),
    #[error("value vector has length {got}, expected {expected}")]
    BadShape { expected: usize, got: usize },
    #[error("Monte Carlo estimation needs at least two trials, got {0}")]
    TooFewTrials(u64),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// Number of codewords of each Hamming weight: `counts[i]` is the number of
/// codewords of weight i, so `counts[0] = 1` and the counts sum to `k^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDistribution {
    pub counts: Vec<u128>,
    pub n: usize,
    pub code_size: u128,
}

/// A linear code given by a generator matrix, canonicalized to reduced row
/// echelon form with full row rank.
#[derive(Debug, Clone)]
pub struct LinearCode {
    field: Field,
    n: usize,
    generator: Matrix,
    dim: usize,
}

impl LinearCode {
    /// Builds a code from generator rows (dependent rows collapse).
    pub fn from_rows(field: Field, n: usize, rows: &[Vec<usize>]) -> Result<Self, CodeError> {
        if rows.is_empty() || n == 0 {
            return Err(CodeError::EmptyGenerator);
        }
        let mut entries = Vec::with_capacity(rows.len() * n);
        for row in rows {
            if row.len() != n {
                return Err(CodeError::BadShape {
                    expected: n,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        let m = Matrix::new(field, rows.len(), n, entries)?;
        Self::from_generator(m)
    }

    /// Builds a code from any generator matrix.
    pub fn from_generator(generator: Matrix) -> Result<Self, CodeError> {
        if generator.rows() == 0 || generator.cols() == 0 {
            return Err(CodeError::EmptyGenerator);
        }
        let field = generator.field().clone();
        let n = generator.cols();
        let (rref, rank) = generator.rref();
        // Keep the nonzero rows of the rref as the canonical generator.
        let mut entries = Vec::with_capacity(rank * n);
        for r in 0..rank {
            entries.extend_from_slice(rref.row(r));
        }
        let canonical = Matrix::new(field.clone(), rank, n, entries)?;
        Ok(Self {
            field,
            n,
            generator: canonical,
            dim: rank,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn code_size(&self) -> u128 {
        (self.field.order() as u128).pow(self.dim as u32)
    }

    /// The dual code `{x : ⟨x, c⟩ = 0 for all c}`.
    pub fn dual(&self) -> LinearCode {
        let ns = self.generator.null_space();
        if ns.rows() == 0 {
            // Dual of the full space is the zero code; a zero generator row
            // collapses to dimension 0.
            let zero = Matrix::zero(self.field.clone(), 1, self.n);
            return LinearCode::from_generator(zero).expect("zero generator is valid");
        }
        LinearCode::from_generator(ns).expect("null space basis is a valid generator")
    }

    /// Visits every codeword exactly once. Enumeration follows a modular
    /// Gray sequence over messages: each step changes one message digit, so
    /// the codeword update is one scaled generator row.
    pub fn for_each_codeword<F: FnMut(&[usize])>(&self, mut visit: F) -> Result<(), CodeError> {
        let k = self.field.order();
        let total = (k as u128).checked_pow(self.dim as u32).unwrap_or(u128::MAX);
        if total > MAX_CODEWORDS {
            return Err(CodeError::CodeTooLarge(total));
        }
        let f = &self.field;
        let mut gray = vec![0usize; self.dim.max(1)];
        let mut cw = vec![0usize; self.n];
        visit(&cw);
        for t in 1..total {
            // The digit that changes at step t is the multiplicity of k in t.
            let mut pos = 0usize;
            let mut tt = t;
            while tt % k as u128 == 0 {
                pos += 1;
                tt /= k as u128;
            }
            let old = gray[pos];
            let new = (old + 1) % k;
            gray[pos] = new;
            let delta = f.sub(new, old);
            let row = self.generator.row(pos);
            for (c, &g) in row.iter().enumerate() {
                cw[c] = f.add(cw[c], f.mul(delta, g));
            }
            visit(&cw);
        }
        Ok(())
    }

    /// Exact weight distribution by exhaustive enumeration.
    pub fn weight_distribution(&self) -> Result<WeightDistribution, CodeError> {
        let mut counts = vec![0u128; self.n + 1];
        self.for_each_codeword(|cw| {
            let w = cw.iter().filter(|x| **x != 0).count();
            counts[w] += 1;
        })?;
        Ok(WeightDistribution {
            counts,
            n: self.n,
            code_size: self.code_size(),
        })
    }

    /// Minimum nonzero codeword weight.
    pub fn min_distance(&self) -> Result<usize, CodeError> {
        if self.dim == 0 {
            return Err(CodeError::ZeroDimensional);
        }
        let wd = self.weight_distribution()?;
        Ok(wd
            .counts
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, c)| **c > 0)
            .map(|(i, _)| i)
            .expect("a nonzero codeword exists"))
    }

    /// Rank of the generator restricted to the columns in `s`.
    pub fn projected_dim(&self, s: &[usize]) -> usize {
        if s.is_empty() || self.dim == 0 {
            return 0;
        }
        self.generator.select_columns(s).rank()
    }

    /// Conditional entropy `H(X|Y)` in bits of a uniform codeword X given
    /// the output Y of a k-ary erasure channel with erasure probability λ:
    /// `log₂(k) · (dim − E_{S∼1−λ} dim 𝒞_S)` where S is the set of surviving
    /// coordinates.
    pub fn erasure_entropy_exact(&self, lambda: f64) -> Result<f64, CodeError> {
        if self.n > MAX_EXACT_ERASURE_N {
            return Err(CodeError::TooLargeForExact(self.n));
        }
        let keep = 1.0 - lambda;
        let mut expected_dim = 0.0f64;
        for mask in 0u32..(1u32 << self.n) {
            let size = mask.count_ones() as i32;
            let w = keep.powi(size) * lambda.powi(self.n as i32 - size);
            if w == 0.0 {
                continue;
            }
            let s: Vec<usize> = (0..self.n).filter(|i| mask >> i & 1 == 1).collect();
            expected_dim += w * self.projected_dim(&s) as f64;
        }
        Ok((self.field.order() as f64).log2() * (self.dim as f64 - expected_dim))
    }

    /// Seeded Monte Carlo estimate of the same entropy; returns
    /// `(estimate, standard error)` in bits.
    pub fn erasure_entropy_mc(
        &self,
        lambda: f64,
        trials: u64,
        seed: u64,
    ) -> Result<(f64, f64), CodeError> {
        use rand::{RngExt, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        if trials < 2 {
            return Err(CodeError::TooFewTrials(trials));
        }
        let mut sum = 0.0f64;
        let mut sum_sq = 0.0f64;
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let s: Vec<usize> = (0..self.n)
                .filter(|_| rng.random::<f64>() >= lambda)
                .collect();
            let d = self.projected_dim(&s) as f64;
            sum += d;
            sum_sq += d * d;
        }
        let mean = sum / trials as f64;
        let var = (sum_sq / trials as f64 - mean * mean).max(0.0);
        let log2k = (self.field.order() as f64).log2();
        Ok((
            log2k * (self.dim as f64 - mean),
            log2k * (var / trials as f64).sqrt(),
        ))
    }

    /// Membership test: reduces the word by the rref generator rows.
    pub fn contains(&self, word: &[usize]) -> bool {
        if word.len() != self.n {
            return false;
        }
        let f = &self.field;
        let mut w: Vec<usize> = word.to_vec();
        for r in 0..self.dim {
            let Some(pc) = self.generator.row(r).iter().position(|&v| v != 0) else {
                continue;
            };
            let coeff = w[pc];
            if coeff != 0 {
                for (c, wc) in w.iter_mut().enumerate() {
                    *wc = f.sub(*wc, f.mul(coeff, self.generator.get(r, c)));
                }
            }
        }
        w.iter().all(|v| *v == 0)
    }

    /// The normalized indicator `f_𝒞 = (k^n/|𝒞|)·1_𝒞` as a dense value
    /// vector over `𝔽_k^n` in the mixed-radix index order (coordinate 0 most
    /// significant).
    pub fn indicator_density(&self) -> Result<Vec<f64>, CodeError> {
        let k = self.field.order();
        let ambient = (k as u128).checked_pow(self.n as u32).unwrap_or(u128::MAX);
        if ambient > MAX_AMBIENT {
            return Err(CodeError::AmbientTooLarge(ambient));
        }
        let mut values = vec![0.0f64; ambient as usize];
        let scale = ambient as f64 / self.code_size() as f64;
        let strides: Vec<usize> = (0..self.n)
            .map(|i| k.pow((self.n - 1 - i) as u32))
            .collect();
        self.for_each_codeword(|cw| {
            let idx: usize = cw.iter().zip(&strides).map(|(d, s)| d * s).sum();
            values[idx] = scale;
        })?;
        Ok(values)
    }
}

/// MacWilliams transform: the weight distribution of the dual code, from the
/// exact polynomial identity
/// `Σ_j b_j α^j = (1/|𝒞|) Σ_i a_i (1−α)^i (1+(k−1)α)^{n−i}`,
/// evaluated by exact integer Krawtchouk-coefficient extraction.
pub fn macwilliams(wd: &WeightDistribution, k: u64) -> Result<WeightDistribution, CodeError> {
    let n = wd.n;
    // Pascal's triangle up to n.
    let mut binom = vec![vec![BigInt::from(0); n + 1]; n + 1];
    for row in binom.iter_mut() {
        row[0] = BigInt::from(1);
    }
    for i in 1..=n {
        for j in 1..=i {
            let v = &binom[i - 1][j - 1] + &binom[i - 1][j];
            binom[i][j] = v;
        }
    }
    let km1 = BigInt::from(k - 1);
    let mut km1_pow = vec![BigInt::from(1); n + 1];
    for j in 1..=n {
        km1_pow[j] = &km1_pow[j - 1] * &km1;
    }
    let code_size = BigInt::from(wd.code_size);
    let zero = BigInt::from(0);
    let mut counts = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut acc = BigInt::from(0);
        for (i, &a_i) in wd.counts.iter().enumerate() {
            if a_i == 0 {
                continue;
            }
            // Krawtchouk K_j(i) = Σ_s (−1)^s (k−1)^{j−s} C(i,s) C(n−i, j−s).
            let mut kraw = BigInt::from(0);
            for s in 0..=j.min(i) {
                if j - s > n - i {
                    continue;
                }
                let term = &km1_pow[j - s] * &binom[i][s] * &binom[n - i][j - s];
                if s % 2 == 0 {
                    kraw += term;
                } else {
                    kraw -= term;
                }
            }
            acc += BigInt::from(a_i) * kraw;
        }
        let rem = &acc % &code_size;
        let quot = &acc / &code_size;
        if rem != zero || quot < zero {
            return Err(CodeError::NonIntegerResult(j));
        }
        let b_j: u128 = quot.try_into().map_err(|_| CodeError::CountOverflow(j))?;
        counts.push(b_j);
    }
    let dual_size = counts.iter().sum();
    Ok(WeightDistribution {
        counts,
        n,
        code_size: dual_size,
    })
}

/// Discrete Fourier transform on `𝔽_k^n`: coefficients
/// `f̂(α) = E_x f(x)·χ̄_α(x)` for the characters
/// `χ_α(x) = exp((2πi/p)·Φ(Σ α_i x_i))`, with Φ the absolute trace into the
/// prime subfield. Evaluated axis by axis, so the cost is `O(n·k^{n+1})`
/// rather than `k^{2n}`.
pub fn fourier(field: &Field, n: usize, values: &[Complex64]) -> Result<Vec<Complex64>, CodeError> {
    fourier_with_phi(field, n, values, &|a| field.trace(a))
}

/// Same transform with an arbitrary additive homomorphism Φ; any nontrivial
/// choice yields the same coefficient magnitudes for code indicators.
fn fourier_with_phi(
    field: &Field,
    n: usize,
    values: &[Complex64],
    phi: &dyn Fn(usize) -> u32,
) -> Result<Vec<Complex64>, CodeError> {
    let k = field.order();
    let ambient = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if ambient > MAX_AMBIENT {
        return Err(CodeError::AmbientTooLarge(ambient));
    }
    if values.len() != ambient as usize {
        return Err(CodeError::BadShape {
            expected: ambient as usize,
            got: values.len(),
        });
    }
    let p = field.p() as f64;
    // conj(χ_a(x)) = ω^{−Φ(a·x)} with ω = e^{2πi/p}.
    let mut char_conj = vec![Complex64::new(0.0, 0.0); k * k];
    for a in 0..k {
        for x in 0..k {
            let t = phi(field.mul(a, x)) as f64;
            let angle = -2.0 * std::f64::consts::PI * t / p;
            char_conj[a * k + x] = Complex64::new(angle.cos(), angle.sin());
        }
    }
    let mut cur = values.to_vec();
    let scale = 1.0 / k as f64;
    for axis in 0..n {
        let stride = k.pow((n - 1 - axis) as u32);
        let block = stride * k;
        let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
        for base in (0..cur.len()).step_by(block) {
            for inner in 0..stride {
                for a in 0..k {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for x in 0..k {
                        acc += char_conj[a * k + x] * cur[base + x * stride + inner];
                    }
                    next[base + a * stride + inner] = acc * scale;
                }
            }
        }
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn repetition(field: &Field, n: usize) -> LinearCode {
        LinearCode::from_rows(field.clone(), n, &[vec![1; n]]).unwrap()
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

    fn random_code(field: &Field, n: usize, rows: usize, rng: &mut ChaCha8Rng) -> LinearCode {
        let k = field.order();
        loop {
            let gen: Vec<Vec<usize>> = (0..rows)
                .map(|_| (0..n).map(|_| rng.random_range(0..k)).collect())
                .collect();
            let code = LinearCode::from_rows(field.clone(), n, &gen).unwrap();
            if code.dim() > 0 {
                return code;
            }
        }
    }

    #[test]
    fn repetition_code_basics() {
        let c = repetition(&f2(), 3);
        assert_eq!(c.dim(), 1);
        let wd = c.weight_distribution().unwrap();
        assert_eq!(wd.counts, vec![1, 0, 0, 1]);
        assert_eq!(c.min_distance().unwrap(), 3);
    }

    #[test]
    fn dependent_rows_collapse() {
        let c = LinearCode::from_rows(f2(), 3, &[vec![1, 1, 0], vec![1, 1, 0]]).unwrap();
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn hamming_weight_distribution_and_distance() {
        let c = hamming_7_4();
        assert_eq!(c.dim(), 4);
        let wd = c.weight_distribution().unwrap();
        assert_eq!(wd.counts, vec![1, 0, 0, 7, 7, 0, 0, 1]);
        assert_eq!(c.min_distance().unwrap(), 3);
    }

    #[test]
    fn trivial_code_weight_distribution() {
        let c = LinearCode::from_rows(f2(), 4, &[vec![0, 0, 0, 0]]).unwrap();
        assert_eq!(c.dim(), 0);
        let wd = c.weight_distribution().unwrap();
        assert_eq!(wd.counts, vec![1, 0, 0, 0, 0]);
        assert_eq!(c.min_distance(), Err(CodeError::ZeroDimensional));
    }

    #[test]
    fn full_space_min_distance_one() {
        let c = LinearCode::from_generator(Matrix::identity(f2(), 4)).unwrap();
        assert_eq!(c.min_distance().unwrap(), 1);
    }

    #[test]
    fn repetition_over_larger_fields() {
        let f = Field::new(3, 1).unwrap();
        let c = repetition(&f, 4);
        assert_eq!(c.min_distance().unwrap(), 4);
        let wd = c.weight_distribution().unwrap();
        assert_eq!(wd.counts, vec![1, 0, 0, 0, 2]);
    }

    #[test]
    fn dual_dimensions_add_up() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, ell) in [(2u32, 1u32), (3, 1), (2, 2)] {
            let field = Field::new(p, ell).unwrap();
            for _ in 0..30 {
                let n = rng.random_range(2..8);
                let code = random_code(&field, n, rng.random_range(1..=n), &mut rng);
                let dual = code.dual();
                assert_eq!(code.dim() + dual.dim(), n);
                dual.for_each_codeword(|w| {
                    let prod = code.generator().mul_vec(w);
                    assert!(prod.iter().all(|v| *v == 0));
                })
                .unwrap();
            }
        }
    }

    #[test]
    fn macwilliams_repetition_to_parity() {
        // ½((1+α)³ + (1−α)³) = 1 + 3α².
        let c = repetition(&f2(), 3);
        let wd = c.weight_distribution().unwrap();
        let dual_wd = macwilliams(&wd, 2).unwrap();
        assert_eq!(dual_wd.counts, vec![1, 0, 3, 0]);
    }

    #[test]
    fn macwilliams_hamming_to_simplex() {
        let c = hamming_7_4();
        let wd = c.weight_distribution().unwrap();
        let via_transform = macwilliams(&wd, 2).unwrap();
        assert_eq!(via_transform.counts, vec![1, 0, 0, 0, 7, 0, 0, 0]);
        let via_enumeration = c.dual().weight_distribution().unwrap();
        assert_eq!(via_transform.counts, via_enumeration.counts);
    }

    #[test]
    fn macwilliams_involution_and_dual_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (p, ell) in [(2u32, 1u32), (3, 1), (2, 2)] {
            let field = Field::new(p, ell).unwrap();
            let k = field.order() as u64;
            for _ in 0..35 {
                let n = rng.random_range(2..8);
                let code = random_code(&field, n, rng.random_range(1..=n), &mut rng);
                let wd = code.weight_distribution().unwrap();
                let dual_wd = macwilliams(&wd, k).unwrap();
                assert_eq!(
                    dual_wd.counts,
                    code.dual().weight_distribution().unwrap().counts
                );
                let back = macwilliams(&dual_wd, k).unwrap();
                assert_eq!(back.counts, wd.counts);
            }
        }
    }

    #[test]
    fn macwilliams_rejects_invalid_distribution() {
        let bogus = WeightDistribution {
            counts: vec![1, 2, 0],
            n: 2,
            code_size: 3,
        };
        assert!(matches!(
            macwilliams(&bogus, 2),
            Err(CodeError::NonIntegerResult(_))
        ));
    }

    #[test]
    fn projected_dim_cases() {
        let c = repetition(&f2(), 3);
        assert_eq!(c.projected_dim(&[]), 0);
        assert_eq!(c.projected_dim(&[0]), 1);
        assert_eq!(c.projected_dim(&[0, 2]), 1);
    }

    #[test]
    fn rank_duality_identity() {
        // dim (𝒞^⊥)_S = |S| − dim𝒞 + dim𝒞_{S^c} on random codes and subsets.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (p, ell) in [(2u32, 1u32), (3, 1), (2, 2)] {
            let field = Field::new(p, ell).unwrap();
            for _ in 0..40 {
                let n = rng.random_range(2..9);
                let code = random_code(&field, n, rng.random_range(1..=n), &mut rng);
                let dual = code.dual();
                let mask: u32 = rng.random_range(0..(1u32 << n));
                let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let sc: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
                assert_eq!(
                    dual.projected_dim(&s) as i64,
                    s.len() as i64 - code.dim() as i64 + code.projected_dim(&sc) as i64,
                    "n = {n}, S = {s:?}"
                );
            }
        }
    }

    #[test]
    fn erasure_entropy_edge_cases() {
        let c = hamming_7_4();
        assert!(c.erasure_entropy_exact(0.0).unwrap().abs() < 1e-12);
        let full = c.erasure_entropy_exact(1.0).unwrap();
        assert!((full - 4.0).abs() < 1e-12);
    }

    #[test]
    fn erasure_entropy_repetition_closed_form() {
        // dim 𝒞_S = 1 unless S = ∅, so H = λ³ bits.
        let c = repetition(&f2(), 3);
        for lambda in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let h = c.erasure_entropy_exact(lambda).unwrap();
            assert!((h - lambda.powi(3)).abs() < 1e-12, "lambda = {lambda}");
        }
    }

    #[test]
    fn erasure_entropy_mc_matches_exact() {
        let c = hamming_7_4();
        let exact = c.erasure_entropy_exact(0.4).unwrap();
        let (est, se) = c.erasure_entropy_mc(0.4, 20_000, 7).unwrap();
        assert!((est - exact).abs() <= 4.0 * se);
        let (est2, _) = c.erasure_entropy_mc(0.4, 20_000, 7).unwrap();
        assert_eq!(est, est2);
    }

    #[test]
    fn indicator_density_and_membership() {
        let c = repetition(&f2(), 3);
        let density = c.indicator_density().unwrap();
        assert_eq!(density[0], 4.0); // 000
        assert_eq!(density[7], 4.0); // 111
        assert_eq!(density.iter().filter(|v| **v != 0.0).count(), 2);
        assert!(c.contains(&[1, 1, 1]));
        assert!(!c.contains(&[1, 0, 1]));
    }

    #[test]
    fn fourier_of_constant_is_delta() {
        let field = Field::new(3, 1).unwrap();
        let values = vec![Complex64::new(1.0, 0.0); 9];
        let hat = fourier(&field, 2, &values).unwrap();
        assert!((hat[0].re - 1.0).abs() < 1e-12);
        for v in &hat[1..] {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn fourier_of_code_indicator_is_dual_indicator() {
        // 𝒞 = {00, 11} ⊂ 𝔽_2² is self-dual.
        let c = LinearCode::from_rows(f2(), 2, &[vec![1, 1]]).unwrap();
        let density: Vec<Complex64> = c
            .indicator_density()
            .unwrap()
            .iter()
            .map(|v| Complex64::new(*v, 0.0))
            .collect();
        let hat = fourier(c.field(), 2, &density).unwrap();
        for (idx, v) in hat.iter().enumerate() {
            let expect = if idx == 0 || idx == 3 { 1.0 } else { 0.0 };
            assert!((v.re - expect).abs() < 1e-10 && v.im.abs() < 1e-10);
        }
    }

    #[test]
    fn fourier_indicator_identity_across_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for (p, ell) in [(2u32, 1u32), (3, 1), (2, 2), (5, 1)] {
            let field = Field::new(p, ell).unwrap();
            for _ in 0..10 {
                let n = rng.random_range(2..5);
                let code = random_code(&field, n, rng.random_range(1..=n), &mut rng);
                let density: Vec<Complex64> = code
                    .indicator_density()
                    .unwrap()
                    .iter()
                    .map(|v| Complex64::new(*v, 0.0))
                    .collect();
                let hat = fourier(&field, n, &density).unwrap();
                let dual_density = code.dual().indicator_density().unwrap();
                let dual_size = code.dual().code_size() as f64;
                let k = field.order();
                let ambient = (k as f64).powi(n as i32);
                for (idx, v) in hat.iter().enumerate() {
                    // f̂_𝒞 = 1_{𝒞^⊥}: rescale the dual density back to 0/1.
                    let expect = dual_density[idx] * dual_size / ambient;
                    assert!(
                        (v.re - expect).abs() < 1e-10 && v.im.abs() < 1e-10,
                        "GF({p}^{ell}), n = {n}, index {idx}"
                    );
                }
            }
        }
    }

    #[test]
    fn fourier_parseval() {
        let field = Field::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 2;
        let len = field.order().pow(n as u32);
        let values: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let hat = fourier(&field, n, &values).unwrap();
        let norm_sq: f64 = values.iter().map(|v| v.norm_sqr()).sum::<f64>() / len as f64;
        let coeff_sq: f64 = hat.iter().map(|v| v.norm_sqr()).sum();
        assert!((norm_sq - coeff_sq).abs() < 1e-10);
    }

    #[test]
    fn fourier_phi_choice_does_not_change_magnitudes() {
        // On GF(4) both the trace and the coefficient-0 projection are
        // nontrivial additive maps; magnitudes of the transform of a code
        // indicator agree.
        let field = Field::new(2, 2).unwrap();
        let code = LinearCode::from_rows(field.clone(), 2, &[vec![1, 2]]).unwrap();
        let density: Vec<Complex64> = code
            .indicator_density()
            .unwrap()
            .iter()
            .map(|v| Complex64::new(*v, 0.0))
            .collect();
        let via_trace = fourier_with_phi(&field, 2, &density, &|a| field.trace(a)).unwrap();
        let via_coeff = fourier_with_phi(&field, 2, &density, &|a| (a % 2) as u32).unwrap();
        for (a, b) in via_trace.iter().zip(&via_coeff) {
            assert!((a.norm() - b.norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn noised_indicator_two_norm_matches_dual_weights() {
        // ‖T_ρ f_𝒞‖₂² = Σ_i b_i ρ^{2i} with (b_i) the dual weight counts.
        use crate::prob::FiniteDist;
        use crate::tensor::{Exponent, TensorFn};
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for (p, ell) in [(2u32, 1u32), (3, 1)] {
            let field = Field::new(p, ell).unwrap();
            let k = field.order();
            for _ in 0..10 {
                let n = rng.random_range(2..6);
                let code = random_code(&field, n, rng.random_range(1..=n), &mut rng);
                let dual_wd = code.dual().weight_distribution().unwrap();
                let dist = FiniteDist::uniform(k).unwrap();
                let f = TensorFn::new(dist, n, code.indicator_density().unwrap()).unwrap();
                for rho in [0.3, 0.8] {
                    let lhs = f.noise_all(rho).q_norm(Exponent::Finite(2.0)).powi(2);
                    let rhs: f64 = dual_wd
                        .counts
                        .iter()
                        .enumerate()
                        .map(|(i, b)| *b as f64 * rho.powi(2 * i as i32))
                        .sum();
                    assert!(
                        (lhs - rhs).abs() < 1e-9,
                        "GF({p}^{ell}), n = {n}, rho = {rho}"
                    );
                }
            }
        }
    }

    #[test]
    fn conditional_expectation_of_indicator_takes_two_values() {
        // E(f_𝒞|S) ∈ {k^{|S|−dim𝒞_S}, 0} and its sup norm is the former.
        use crate::prob::FiniteDist;
        use crate::tensor::{Exponent, TensorFn};
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let field = f2();
        for _ in 0..15 {
            let n = rng.random_range(2..6);
            let code = random_code(&field, n, rng.random_range(1..=n), &mut rng);
            let dist = FiniteDist::uniform(2).unwrap();
            let f = TensorFn::new(dist, n, code.indicator_density().unwrap()).unwrap();
            let mask: u32 = rng.random_range(0..(1u32 << n));
            let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let g = f.cond_exp(&s).unwrap();
            let expect = 2.0f64.powi(s.len() as i32 - code.projected_dim(&s) as i32);
            for v in g.values() {
                assert!(
                    v.abs() < 1e-10 || (v - expect).abs() < 1e-10,
                    "value {v}, expected 0 or {expect}"
                );
            }
            assert!((g.q_norm(Exponent::Infinity) - expect).abs() < 1e-10);
        }
    }
}
