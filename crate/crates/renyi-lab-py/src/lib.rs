//! Python bindings for the core operator, divergence, testing, compression
//! and channel operations. Operators cross the boundary as nested
//! `(re, im)` float lists, matching the JSON wire format; validation is the
//! same as the loaders'.

// the useless_conversion hits are a pyo3 macro-expansion artifact
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use renyi_lab::channel::{Channel, ChiNewConfig, InputDist};
use renyi_lab::divergence::DivergenceFamily;
use renyi_lab::io::OperatorJson;
use renyi_lab::operator::{DensityOp, PSDOp};
use renyi_lab::stein::HypothesisFamily;

type Mat = Vec<Vec<f64>>;

fn err(e: renyi_lab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn psd(re: &Mat, im: &Mat) -> PyResult<PSDOp> {
    let json = OperatorJson { dim: re.len(), re: re.clone(), im: im.clone() };
    json.to_psd().map_err(err)
}

fn density(re: &Mat, im: &Mat) -> PyResult<DensityOp> {
    let json = OperatorJson { dim: re.len(), re: re.clone(), im: im.clone() };
    json.to_density().map_err(err)
}

fn split(m: &renyi_lab::linalg::CMatrix) -> (Mat, Mat) {
    let json = OperatorJson::from_matrix(m);
    (json.re, json.im)
}

fn family_from_str(family: &str) -> PyResult<DivergenceFamily> {
    family.parse().map_err(err)
}

/// Trace norm of a Hermitian operator.
#[pyfunction]
fn trace_norm(re: Mat, im: Mat) -> PyResult<f64> {
    let json = OperatorJson { dim: re.len(), re, im };
    let op = json.to_hermitian().map_err(err)?;
    Ok(renyi_lab::operator::trace_norm(&op))
}

/// Fidelity of two positive semidefinite operators.
#[pyfunction]
fn fidelity(re_a: Mat, im_a: Mat, re_b: Mat, im_b: Mat) -> PyResult<f64> {
    renyi_lab::operator::fidelity(&psd(&re_a, &im_a)?, &psd(&re_b, &im_b)?).map_err(err)
}

/// Support-restricted power `A^alpha` as `(re, im)` lists.
#[pyfunction]
fn support_power(re: Mat, im: Mat, alpha: f64) -> PyResult<(Mat, Mat)> {
    let a = psd(&re, &im)?;
    Ok(split(renyi_lab::operator::support_power(&a, alpha).matrix()))
}

#[pyfunction]
fn q_old(re_rho: Mat, im_rho: Mat, re_sigma: Mat, im_sigma: Mat, alpha: f64) -> PyResult<f64> {
    renyi_lab::divergence::q_old(&psd(&re_rho, &im_rho)?, &psd(&re_sigma, &im_sigma)?, alpha)
        .map_err(err)
}

#[pyfunction]
fn q_new(re_rho: Mat, im_rho: Mat, re_sigma: Mat, im_sigma: Mat, alpha: f64) -> PyResult<f64> {
    renyi_lab::divergence::q_new(&psd(&re_rho, &im_rho)?, &psd(&re_sigma, &im_sigma)?, alpha)
        .map_err(err)
}

/// Rényi divergence for `family` in {"old", "new"}; `alpha` may be
/// `float("inf")`; `+inf` results come back as `float("inf")`.
#[pyfunction]
fn d_renyi(
    re_rho: Mat,
    im_rho: Mat,
    re_sigma: Mat,
    im_sigma: Mat,
    alpha: f64,
    family: &str,
) -> PyResult<f64> {
    let fam = family_from_str(family)?;
    renyi_lab::divergence::d_renyi(
        &psd(&re_rho, &im_rho)?,
        &psd(&re_sigma, &im_sigma)?,
        alpha,
        fam,
    )
    .map(|v| v.to_f64())
    .map_err(err)
}

#[pyfunction]
fn umegaki(re_rho: Mat, im_rho: Mat, re_sigma: Mat, im_sigma: Mat) -> PyResult<f64> {
    renyi_lab::divergence::umegaki(&psd(&re_rho, &im_rho)?, &psd(&re_sigma, &im_sigma)?)
        .map(|v| v.to_f64())
        .map_err(err)
}

#[pyfunction]
fn d_max(re_rho: Mat, im_rho: Mat, re_sigma: Mat, im_sigma: Mat) -> PyResult<f64> {
    renyi_lab::divergence::d_max(&psd(&re_rho, &im_rho)?, &psd(&re_sigma, &im_sigma)?)
        .map(|v| v.to_f64())
        .map_err(err)
}

#[pyfunction]
fn renyi_entropy(re: Mat, im: Mat, alpha: f64) -> PyResult<f64> {
    renyi_lab::divergence::renyi_entropy(&psd(&re, &im)?, alpha).map_err(err)
}

/// Runs the default inequality audit suite; one dict per inequality id.
#[pyfunction]
#[pyo3(signature = (dims, samples, seed, tolerance = 1e-9))]
fn run_audits(
    py: Python<'_>,
    dims: Vec<usize>,
    samples: usize,
    seed: u64,
    tolerance: f64,
) -> PyResult<Vec<Py<PyDict>>> {
    let reports = renyi_lab::audit::run_default_suite(&dims, samples, seed, tolerance);
    let mut out = Vec::with_capacity(reports.len());
    for r in reports {
        let d = PyDict::new_bound(py);
        d.set_item("inequality_id", r.inequality_id)?;
        d.set_item("samples", r.samples)?;
        d.set_item("worst_slack", r.worst_slack)?;
        d.set_item("failures", r.failures)?;
        d.set_item("alpha_grid", r.alpha_grid)?;
        d.set_item("dims", r.dims)?;
        d.set_item("seed", r.seed)?;
        d.set_item("tolerance", r.tolerance)?;
        out.push(d.into());
    }
    Ok(out)
}

/// The fixed two-argument-mixture counterexample reproduces `(0, inf, inf)`.
#[pyfunction]
fn counterexample_regression() -> bool {
    renyi_lab::audit::counterexample_regression()
}

/// Exact Neyman–Pearson point at block length `n` and threshold `a` for a
/// null family (list of `(re, im)` states) against `sigma`; returns errors,
/// universal bounds and the exponent values.
#[pyfunction]
fn stein_point(
    py: Python<'_>,
    null_states: Vec<(Mat, Mat)>,
    re_sigma: Mat,
    im_sigma: Mat,
    a: f64,
    n: usize,
) -> PyResult<Py<PyDict>> {
    let null: Vec<DensityOp> = null_states
        .iter()
        .map(|(re, im)| density(re, im))
        .collect::<PyResult<_>>()?;
    let sigma = psd(&re_sigma, &im_sigma)?;
    let family = HypothesisFamily::new(null, sigma).map_err(err)?;
    let rhos: Vec<PSDOp> = family
        .null_states()
        .iter()
        .map(|r| r.as_psd().clone())
        .collect();
    let test = renyi_lab::stein::np_test(&rhos, family.sigma(), a, n).map_err(err)?;
    let errors = renyi_lab::stein::error_pair(&test, &family, n).map_err(err)?;
    let ef = renyi_lab::stein::exponent_functions(&family);
    let bounds = ef.finite_n_bounds(a, n, family.null_states().len(), 0.0);
    let d = PyDict::new_bound(py);
    d.set_item("type_i", errors.type_i)?;
    d.set_item("type_ii", errors.type_ii)?;
    d.set_item("bound_type_i", bounds.bound_type_i)?;
    d.set_item("bound_type_ii", bounds.bound_type_ii)?;
    d.set_item("phi", ef.phi(a))?;
    d.set_item("phi_hat", ef.phi_hat(a))?;
    d.set_item("d1", family.d1())?;
    Ok(d.into())
}

/// Compression point for a single source state: rate and both fidelities.
#[pyfunction]
fn compression_point(
    py: Python<'_>,
    re_rho: Mat,
    im_rho: Mat,
    a: f64,
    n: usize,
) -> PyResult<Py<PyDict>> {
    let rho = density(&re_rho, &im_rho)?;
    let scheme =
        renyi_lab::compress::build_scheme(std::slice::from_ref(&rho), a, n).map_err(err)?;
    let fid = renyi_lab::compress::scheme_fidelity(&scheme, &rho).map_err(err)?;
    let d = PyDict::new_bound(py);
    d.set_item("rate", renyi_lab::compress::compression_rate(&scheme))?;
    d.set_item("rank", scheme.rank())?;
    d.set_item("f_e", fid.entanglement)?;
    d.set_item("f", fid.plain)?;
    Ok(d.into())
}

fn channel_from_lists(outputs: Vec<(Mat, Mat)>, probs: Vec<f64>) -> PyResult<(Channel, InputDist)> {
    let states: Vec<DensityOp> = outputs
        .iter()
        .map(|(re, im)| density(re, im))
        .collect::<PyResult<_>>()?;
    let alphabet: Vec<String> = (0..states.len()).map(|i| format!("s{i}")).collect();
    let w = Channel::new(alphabet, states).map_err(err)?;
    let p = InputDist::new(w.alphabet().to_vec(), probs).map_err(err)?;
    Ok((w, p))
}

/// Traditional α-Holevo quantity (closed form); `alpha = 1` is the Holevo
/// quantity itself.
#[pyfunction]
fn chi_old(outputs: Vec<(Mat, Mat)>, probs: Vec<f64>, alpha: f64) -> PyResult<f64> {
    let (w, p) = channel_from_lists(outputs, probs)?;
    renyi_lab::channel::chi_old(&w, &p, alpha).map_err(err)
}

/// Sandwiched α-Holevo quantity via descent over the output states.
#[pyfunction]
fn chi_new(outputs: Vec<(Mat, Mat)>, probs: Vec<f64>, alpha: f64) -> PyResult<f64> {
    let (w, p) = channel_from_lists(outputs, probs)?;
    renyi_lab::channel::chi_new(&w, &p, alpha, &ChiNewConfig::default())
        .map(|r| r.value)
        .map_err(err)
}

#[pyfunction]
fn holevo(outputs: Vec<(Mat, Mat)>, probs: Vec<f64>) -> PyResult<f64> {
    let (w, p) = channel_from_lists(outputs, probs)?;
    renyi_lab::channel::holevo(&w, &p).map_err(err)
}

/// `κ(c, α)` of the random-coding bound.
#[pyfunction]
fn hn_kappa(c: f64, alpha: f64) -> f64 {
    renyi_lab::channel::hn_kappa(c, alpha)
}

/// Current tensor-dimension cap.
#[pyfunction]
fn dim_cap() -> usize {
    renyi_lab::dim_cap()
}

#[pyfunction]
fn set_dim_cap(cap: usize) {
    renyi_lab::set_dim_cap(cap)
}

#[pymodule]
fn renyi_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(trace_norm, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(support_power, m)?)?;
    m.add_function(wrap_pyfunction!(q_old, m)?)?;
    m.add_function(wrap_pyfunction!(q_new, m)?)?;
    m.add_function(wrap_pyfunction!(d_renyi, m)?)?;
    m.add_function(wrap_pyfunction!(umegaki, m)?)?;
    m.add_function(wrap_pyfunction!(d_max, m)?)?;
    m.add_function(wrap_pyfunction!(renyi_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(run_audits, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_regression, m)?)?;
    m.add_function(wrap_pyfunction!(stein_point, m)?)?;
    m.add_function(wrap_pyfunction!(compression_point, m)?)?;
    m.add_function(wrap_pyfunction!(chi_old, m)?)?;
    m.add_function(wrap_pyfunction!(chi_new, m)?)?;
    m.add_function(wrap_pyfunction!(holevo, m)?)?;
    m.add_function(wrap_pyfunction!(hn_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(dim_cap, m)?)?;
    m.add_function(wrap_pyfunction!(set_dim_cap, m)?)?;
    Ok(())
}
