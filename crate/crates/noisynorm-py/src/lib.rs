//! Python bindings for the main noisynorm types and operations.
//!
//! Extended exponents cross the boundary as plain floats: `float('inf')`
//! selects the sup-norm branch. Errors surface as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use noisynorm::bounds;
use noisynorm::channel::DiscreteChannel;
use noisynorm::code;
use noisynorm::gf::Field;
use noisynorm::prob::FiniteDist;
use noisynorm::sdpi;
use noisynorm::simulate;
use noisynorm::tensor;
use noisynorm::verify;
use noisynorm::Exponent;

fn value_error<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn exponent(q: f64) -> Exponent {
    Exponent::from_f64(q)
}

/// Optimal contraction exponent λ(q, μ*, ρ); pass `q = float('inf')` for the
/// sup norm.
#[pyfunction]
fn lambda_opt(q: f64, mu_star: f64, rho: f64) -> PyResult<f64> {
    sdpi::lambda_opt(exponent(q), mu_star, rho).map_err(value_error)
}

/// z_k(λ) = (k^λ − 1)/(k − 1).
#[pyfunction]
fn z_of_lambda(k: u32, lam: f64) -> f64 {
    sdpi::z_of_lambda(k, lam)
}

/// Rényi divergence D_q(ν‖μ) in nats (q > 1 or infinite).
#[pyfunction]
fn renyi_divergence(nu: Vec<f64>, mu: Vec<f64>, q: f64) -> PyResult<f64> {
    let mu = FiniteDist::new(&mu).map_err(value_error)?;
    sdpi::renyi_divergence(&nu, &mu, exponent(q)).map_err(value_error)
}

/// Contraction ratio D_q(ρν+(1−ρ)μ ‖ μ) / D_q(ν‖μ).
#[pyfunction]
fn sdpi_ratio(nu: Vec<f64>, mu: Vec<f64>, q: f64, rho: f64) -> PyResult<f64> {
    let mu = FiniteDist::new(&mu).map_err(value_error)?;
    sdpi::sdpi_ratio(&nu, &mu, exponent(q), rho).map_err(value_error)
}

/// ln E(1+ρX)^q / ln E(1+X)^q for a mean-zero variable given by atoms and
/// probabilities.
#[pyfunction]
fn r_ratio(atoms: Vec<f64>, probs: Vec<f64>, q: f64, rho: f64) -> PyResult<f64> {
    let rv = sdpi::FiniteRv::new(atoms, probs).map_err(value_error)?;
    sdpi::r_ratio(&rv, q, rho).map_err(value_error)
}

/// Grid supremum of the contraction ratio over binary/ternary-support
/// variables bounded in [−1, α]. Returns (best_value, atoms, probs).
#[pyfunction]
fn sup_search(q: f64, rho: f64, alpha: f64, grid: usize) -> PyResult<(f64, Vec<f64>, Vec<f64>)> {
    let res = sdpi::sup_search(q, rho, alpha, grid).map_err(value_error)?;
    Ok((
        res.best_value,
        res.best.atoms().to_vec(),
        res.best.probs().to_vec(),
    ))
}

/// η at which the k-ary symmetric channel's Bhattacharyya coefficient
/// equals z_k(λ).
#[pyfunction]
fn eta_star(k: u32, lam: f64) -> PyResult<f64> {
    bounds::eta_star(k, lam).map_err(value_error)
}

/// Capacity-transfer curve rows (c_e, eta_star, g_k) on a uniform grid.
#[pyfunction]
fn gk_curve(k: u32, points: usize) -> PyResult<Vec<(f64, f64, f64)>> {
    let grid: Vec<f64> = (1..=points).map(|j| j as f64 / points as f64).collect();
    bounds::gk_curve(k, &grid).map_err(value_error)
}

/// Block-error bound 2^H · c^d/(1−c) with c = z(k−1)/(k^λ−1).
#[pyfunction]
fn block_error_bound(d: usize, z: f64, k: u32, lam: f64, h_bits: f64) -> PyResult<f64> {
    bounds::block_error_bound(d, z, k, lam, h_bits).map_err(value_error)
}

/// Single-coordinate contraction falsification run. Returns
/// (min_margin, violations).
#[pyfunction]
fn check_base_case(probs: Vec<f64>, q: f64, rho: f64, trials: u64, seed: u64) -> PyResult<(f64, u64)> {
    let dist = FiniteDist::new(&probs).map_err(value_error)?;
    let report =
        verify::check_base_case(&dist, exponent(q), rho, trials, seed).map_err(value_error)?;
    Ok((report.min_margin, report.violations))
}

/// Monotonicity grid suite. Returns (name, min_step, violations) triples.
#[pyfunction]
fn monotone_suite() -> Vec<(String, f64, u64)> {
    verify::monotone_suite()
        .into_iter()
        .map(|r| (r.suite, r.min_margin, r.violations))
        .collect()
}

/// Dense function on Ω^n under a product measure, indexed in mixed radix
/// with coordinate 0 most significant.
#[pyclass]
struct TensorFn {
    inner: tensor::TensorFn,
}

#[pymethods]
impl TensorFn {
    #[new]
    fn new(probs: Vec<f64>, n: usize, values: Vec<f64>) -> PyResult<Self> {
        let dist = FiniteDist::new(&probs).map_err(value_error)?;
        let inner = tensor::TensorFn::new(dist, n, values).map_err(value_error)?;
        Ok(Self { inner })
    }

    fn q_norm(&self, q: f64) -> f64 {
        self.inner.q_norm(exponent(q))
    }

    fn noise(&self, i: usize, rho: f64) -> PyResult<TensorFn> {
        Ok(TensorFn {
            inner: self.inner.noise(i, rho).map_err(value_error)?,
        })
    }

    fn noise_all(&self, rho: f64) -> TensorFn {
        TensorFn {
            inner: self.inner.noise_all(rho),
        }
    }

    fn cond_exp(&self, keep: Vec<usize>) -> PyResult<TensorFn> {
        Ok(TensorFn {
            inner: self.inner.cond_exp(&keep).map_err(value_error)?,
        })
    }

    /// Nested norm from (axes, exponent) stages, applied inner to outer.
    fn nested_norm(&self, stages: Vec<(Vec<usize>, f64)>) -> PyResult<f64> {
        let spec = tensor::NestedNormSpec::new(
            stages
                .into_iter()
                .map(|(axes, q)| (axes, exponent(q)))
                .collect(),
        );
        self.inner.nested_norm(&spec).map_err(value_error)
    }

    /// Exact Σ_S λ^{|S|}(1−λ)^{n−|S|} ln‖E(f|S)‖_q over all coordinate
    /// subsets, in nats.
    fn erasure_log_functional(&self, q: f64, lam: f64) -> PyResult<f64> {
        self.inner
            .erasure_log_functional_exact(exponent(q), lam)
            .map_err(value_error)
    }

    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    fn __repr__(&self) -> String {
        format!(
            "TensorFn(n={}, alphabet={})",
            self.inner.coords(),
            self.inner.dist().alphabet_size()
        )
    }
}

/// A linear code over GF(p^ℓ) built from generator rows (element codes in
/// [0, p^ℓ)).
#[pyclass]
struct LinearCode {
    inner: code::LinearCode,
}

#[pymethods]
impl LinearCode {
    #[new]
    fn new(p: u32, ell: u32, n: usize, rows: Vec<Vec<usize>>) -> PyResult<Self> {
        let field = Field::new(p, ell).map_err(value_error)?;
        let inner = code::LinearCode::from_rows(field, n, &rows).map_err(value_error)?;
        Ok(Self { inner })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn length(&self) -> usize {
        self.inner.length()
    }

    fn field_order(&self) -> usize {
        self.inner.field().order()
    }

    fn min_distance(&self) -> PyResult<usize> {
        self.inner.min_distance().map_err(value_error)
    }

    fn weight_distribution(&self) -> PyResult<Vec<u64>> {
        let wd = self.inner.weight_distribution().map_err(value_error)?;
        wd.counts
            .iter()
            .map(|c| u64::try_from(*c).map_err(value_error))
            .collect()
    }

    fn dual_weight_distribution(&self) -> PyResult<Vec<u64>> {
        let wd = self.inner.weight_distribution().map_err(value_error)?;
        let dual = code::macwilliams(&wd, self.inner.field().order() as u64)
            .map_err(value_error)?;
        dual.counts
            .iter()
            .map(|c| u64::try_from(*c).map_err(value_error))
            .collect()
    }

    fn dual(&self) -> LinearCode {
        LinearCode {
            inner: self.inner.dual(),
        }
    }

    fn projected_dim(&self, s: Vec<usize>) -> usize {
        self.inner.projected_dim(&s)
    }

    /// Conditional entropy H(X|Y) in bits on the k-ary erasure channel.
    fn erasure_entropy(&self, lam: f64) -> PyResult<f64> {
        self.inner.erasure_entropy_exact(lam).map_err(value_error)
    }

    /// Exact undetected-error probability on the k-ary symmetric channel.
    fn p_ue(&self, eta: f64) -> PyResult<f64> {
        let wd = self.inner.weight_distribution().map_err(value_error)?;
        Ok(bounds::p_ue_exact(
            &wd,
            self.inner.field().order() as u32,
            eta,
        ))
    }

    /// Undetected-error bound bundle as (name, bound, valid, holds) tuples.
    #[allow(clippy::type_complexity)]
    fn p_ue_bounds(&self, lam: f64, eta: f64) -> PyResult<Vec<(String, f64, bool, Option<bool>)>> {
        let reports = bounds::p_ue_bounds(&self.inner, lam, eta).map_err(value_error)?;
        Ok(reports
            .into_iter()
            .map(|r| (r.name, r.bound_value, r.valid, r.holds))
            .collect())
    }

    /// Both sides of the weight-distribution bound, in bits.
    fn weight_bound(&self, lam: f64) -> PyResult<(f64, f64)> {
        bounds::weight_bound_margin(&self.inner, lam).map_err(value_error)
    }

    /// Per-weight codeword-count bounds (primal, dual).
    fn ai_bounds(&self, lam: f64, i: usize) -> PyResult<(f64, f64)> {
        bounds::ai_bounds(&self.inner, lam, i).map_err(value_error)
    }

    /// Exact erasure-channel decoding: (p_ambiguous, p_block_error).
    fn erasure_exact(&self, lam: f64) -> PyResult<(f64, f64)> {
        simulate::erasure_exact(&self.inner, lam).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "LinearCode(n={}, dim={}, k={})",
            self.inner.length(),
            self.inner.dim(),
            self.inner.field().order()
        )
    }
}

/// A discrete memoryless channel.
#[pyclass]
struct Channel {
    inner: DiscreteChannel,
}

#[pymethods]
impl Channel {
    /// k-ary erasure channel with erasure probability λ.
    #[staticmethod]
    fn erasure(k: usize, lam: f64) -> PyResult<Channel> {
        Ok(Channel {
            inner: DiscreteChannel::erasure(k, lam).map_err(value_error)?,
        })
    }

    /// k-ary symmetric channel with error probability η.
    #[staticmethod]
    fn symmetric(k: usize, eta: f64) -> PyResult<Channel> {
        Ok(Channel {
            inner: DiscreteChannel::symmetric(k, eta).map_err(value_error)?,
        })
    }

    /// Generic channel from a row-stochastic transition matrix.
    #[staticmethod]
    fn generic(rows: Vec<Vec<f64>>) -> PyResult<Channel> {
        let k = rows.len();
        let m = rows.first().map(|r| r.len()).unwrap_or(0);
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        Ok(Channel {
            inner: DiscreteChannel::generic(k, m, &flat).map_err(value_error)?,
        })
    }

    fn bhattacharyya(&self) -> f64 {
        self.inner.bhattacharyya()
    }

    fn capacity(&self) -> PyResult<f64> {
        self.inner.capacity().map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "Channel(inputs={}, outputs={})",
            self.inner.input_size(),
            self.inner.output_size()
        )
    }
}

/// Monte Carlo MAP block-error estimate. Returns a dict with keys
/// `p_b_estimate`, `stderr`, `trials`, `seed`, `exact`.
#[pyfunction]
fn monte_carlo_pb(
    py: Python<'_>,
    code: &LinearCode,
    channel: &Channel,
    trials: u64,
    seed: u64,
) -> PyResult<Py<pyo3::types::PyDict>> {
    use pyo3::types::PyDict;
    let res =
        simulate::monte_carlo_pb(&code.inner, &channel.inner, trials, seed).map_err(value_error)?;
    let dict = PyDict::new(py);
    dict.set_item("p_b_estimate", res.p_b_estimate)?;
    dict.set_item("stderr", res.stderr)?;
    dict.set_item("trials", res.trials)?;
    dict.set_item("seed", res.seed)?;
    dict.set_item("exact", res.exact)?;
    Ok(dict.into())
}

#[pymodule]
fn noisynorm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<TensorFn>()?;
    m.add_class::<LinearCode>()?;
    m.add_class::<Channel>()?;
    m.add_function(wrap_pyfunction!(lambda_opt, m)?)?;
    m.add_function(wrap_pyfunction!(z_of_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(renyi_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(sdpi_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(r_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(sup_search, m)?)?;
    m.add_function(wrap_pyfunction!(eta_star, m)?)?;
    m.add_function(wrap_pyfunction!(gk_curve, m)?)?;
    m.add_function(wrap_pyfunction!(block_error_bound, m)?)?;
    m.add_function(wrap_pyfunction!(check_base_case, m)?)?;
    m.add_function(wrap_pyfunction!(monotone_suite, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_pb, m)?)?;
    Ok(())
}
