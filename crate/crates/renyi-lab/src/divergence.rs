//! The two quantum Rényi divergence families and their α-limits.
//!
//! For non-zero positive semidefinite `ρ, σ` and `α ∈ (0,∞)\{1}` the
//! traditional (Petz-type) divergence is
//!
//! ```text
//! D_α^old(ρ‖σ) = (log Tr ρ^α σ^{1-α} - log Tr ρ) / (α-1)
//! ```
//!
//! and the sandwiched divergence is
//!
//! ```text
//! D_α^new(ρ‖σ) = (log Tr (σ^{(1-α)/2α} ρ σ^{(1-α)/2α})^α - log Tr ρ) / (α-1),
//! ```
//!
//! both finite for `α ∈ (0,1)` or when `supp ρ ⊆ supp σ`, and `+∞` otherwise.
//! The `α → 1` limit of both families is Umegaki's relative entropy; the
//! `α → ∞` limit of the sandwiched family is the max-relative entropy
//! [`d_max`], and of the traditional family the log of the largest eigenvalue
//! ratio across overlapping spectral projections. Powers are always
//! support-restricted. All logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::extreal::ExtReal;
use crate::linalg::{hermitian_eigen, trace_product_re, CMatrix};
use crate::operator::{
    support_contained, support_power, PSDOp,
};
use crate::{Error, Result};

/// Proxy evaluation point for the `α → 0` limit of the sandwiched family,
/// for which no closed form is available; results there are flagged
/// approximate.
pub const NEW_FAMILY_ALPHA_ZERO_PROXY: f64 = 1e-4;

/// Which quantum extension of the Rényi divergence to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivergenceFamily {
    /// The traditional (Petz-type) divergence from `Tr ρ^α σ^{1-α}`.
    Old,
    /// The sandwiched divergence from `Tr (σ^{(1-α)/2α} ρ σ^{(1-α)/2α})^α`.
    New,
}

impl std::str::FromStr for DivergenceFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "old" => Ok(DivergenceFamily::Old),
            "new" => Ok(DivergenceFamily::New),
            other => Err(Error::InvalidInput(format!(
                "unknown divergence family {other:?}; expected \"old\" or \"new\""
            ))),
        }
    }
}

/// A divergence value together with an approximation flag; only the
/// sandwiched family at `α = 0` is approximate (numeric limit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceEval {
    pub value: ExtReal,
    pub approximate: bool,
}

/// `Q_α^old(ρ‖σ) = Tr ρ^α σ^{1-α}` with support-restricted powers.
///
/// For `α > 1` without `supp ρ ⊆ supp σ` this is the finite support-restricted
/// value; the companion divergence flags `+∞` in that case.
pub fn q_old(rho: &PSDOp, sigma: &PSDOp, alpha: f64) -> Result<f64> {
    Ok(log_q_old(rho, sigma, alpha)?.exp())
}

/// `log Q_α^old(ρ‖σ)`, evaluated through the eigenvalue-overlap kernel
/// `Σ_{ij} λ_i^α μ_j^{1-α} Tr(P_i Q_j)` fully in the log domain, so extreme
/// exponents never overflow. `-∞` on orthogonal supports.
pub fn log_q_old(rho: &PSDOp, sigma: &PSDOp, alpha: f64) -> Result<f64> {
    check_alpha_positive(alpha)?;
    rho.check_same_dim(sigma)?;
    let rp = rho.eigen();
    let sp = sigma.eigen();
    let r_thr = rp.support_threshold();
    let s_thr = sp.support_threshold();
    let cross = rp.vectors.adjoint() * &sp.vectors;
    let mut logs = Vec::new();
    for (i, &lam) in rp.values.iter().enumerate() {
        if lam <= r_thr {
            continue;
        }
        for (j, &mu) in sp.values.iter().enumerate() {
            if mu <= s_thr {
                continue;
            }
            let w = cross[(i, j)].norm_sqr();
            if w > 0.0 {
                logs.push(alpha * lam.ln() + (1.0 - alpha) * mu.ln() + w.ln());
            }
        }
    }
    Ok(log_sum_exp(&logs))
}

/// `Q_α^new(ρ‖σ) = Tr (σ^{(1-α)/2α} ρ σ^{(1-α)/2α})^α`, equal to
/// `Tr (ρ^{1/2} σ^{(1-α)/α} ρ^{1/2})^α`.
pub fn q_new(rho: &PSDOp, sigma: &PSDOp, alpha: f64) -> Result<f64> {
    check_alpha_positive(alpha)?;
    rho.check_same_dim(sigma)?;
    Ok(QNewEvaluator::new(rho, sigma).q(alpha))
}

/// `log Q_α^new(ρ‖σ)` (best effort at extreme gradings; see
/// [`QNewEvaluator`]). `-∞` when the sandwiched operator vanishes.
pub fn log_q_new(rho: &PSDOp, sigma: &PSDOp, alpha: f64) -> Result<f64> {
    check_alpha_positive(alpha)?;
    rho.check_same_dim(sigma)?;
    Ok(QNewEvaluator::new(rho, sigma).log_q(alpha))
}

/// `log Σ e^{x_i}` with the usual max shift; `-∞` on an empty or all-`-∞`
/// list.
pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return f64::NEG_INFINITY;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

/// Repeated-evaluation helper for `Q_α^new(ρ‖σ)` that caches the spectral
/// data of `σ` (and `ρ` rotated into the support eigenbasis of `σ`) across
/// α values.
///
/// The sandwiched operator `σ^c ρ σ^c` with `c = (1-α)/2α` becomes extremely
/// graded as `α → 0`. Two evaluation paths keep `log Q` accurate:
///
/// - when the grading `2|c|·log(μ_max/μ_min)` is moderate, a direct
///   eigendecomposition of `D R D` (with `D = diag(μ̃^c)` and `R` the rotated
///   `ρ`);
/// - when it is steep, the graded-limit formula
///   `Q ≈ Σ_i μ̃_i^{1-α} (ℓ_i²)^α` built from the Cholesky diagonal `ℓ_i` of
///   `R` taken in `μ̃`-descending order, evaluated fully in the log domain.
pub struct QNewEvaluator {
    /// σ support eigenvalues divided by the largest one, descending.
    mu_tilde: Vec<f64>,
    /// log of the largest σ eigenvalue.
    log_mu_max: f64,
    /// ρ rotated into the σ support eigenbasis (r × r).
    r_mat: CMatrix,
    tr_rho: f64,
    /// Squared Cholesky diagonal of `r_mat` in the μ̃-descending order, when
    /// `r_mat` is numerically positive definite.
    chol_diag_sq: Option<Vec<f64>>,
}

const DIRECT_SPREAD_LIMIT: f64 = 23.0; // ln(1e10)

impl QNewEvaluator {
    pub fn new(rho: &PSDOp, sigma: &PSDOp) -> Self {
        let pairs = sigma.eigen();
        let thr = pairs.support_threshold();
        let support: Vec<usize> = (0..pairs.values.len())
            .filter(|&i| pairs.values[i] > thr)
            .collect();
        let mu_max = pairs.values[support[0]];
        let mu_tilde: Vec<f64> = support.iter().map(|&i| pairs.values[i] / mu_max).collect();
        let d = pairs.values.len();
        let mut basis = CMatrix::zeros(d, support.len());
        for (k, &i) in support.iter().enumerate() {
            basis.set_column(k, &pairs.vectors.column(i));
        }
        let r_mat = basis.adjoint() * rho.matrix() * &basis;
        let chol_diag_sq = nalgebra::Cholesky::new(r_mat.clone())
            .map(|ch| {
                let l = ch.l();
                (0..r_mat.nrows()).map(|i| l[(i, i)].norm_sqr()).collect()
            });
        QNewEvaluator {
            mu_tilde,
            log_mu_max: mu_max.ln(),
            r_mat,
            tr_rho: rho.trace(),
            chol_diag_sq,
        }
    }

    /// `log Q_α^new(ρ‖σ)` for `α > 0`, or `None` when the evaluation would
    /// be numerically untrustworthy (steep grading with a rank-deficient
    /// `ρ` on the support of `σ`).
    pub fn log_q_checked(&self, alpha: f64) -> Option<f64> {
        let c = (1.0 - alpha) / (2.0 * alpha);
        let log_spread = 2.0 * c.abs() * (-self.mu_tilde.last().unwrap().ln());
        if log_spread <= DIRECT_SPREAD_LIMIT {
            Some(self.log_q_direct(alpha, c))
        } else {
            self.log_q_graded(alpha)
        }
    }

    /// Best-effort `log Q_α^new(ρ‖σ)`: falls back to the direct path when the
    /// graded path is unavailable. `-∞` when the sandwiched operator
    /// vanishes.
    pub fn log_q(&self, alpha: f64) -> f64 {
        let c = (1.0 - alpha) / (2.0 * alpha);
        self.log_q_checked(alpha)
            .unwrap_or_else(|| self.log_q_direct(alpha, c))
    }

    /// `Q_α^new(ρ‖σ)` for `α > 0`.
    pub fn q(&self, alpha: f64) -> f64 {
        self.log_q(alpha).exp()
    }

    fn log_q_direct(&self, alpha: f64, c: f64) -> f64 {
        let r = self.mu_tilde.len();
        let mut m = self.r_mat.clone();
        for i in 0..r {
            for j in 0..r {
                m[(i, j)] *= crate::linalg::cr(self.mu_tilde[i].powf(c) * self.mu_tilde[j].powf(c));
            }
        }
        let pairs = hermitian_eigen(&m);
        let top = pairs.max_value();
        if top <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let cut = 1e-13 * top;
        let logs: Vec<f64> = pairs
            .values
            .iter()
            .filter(|&&v| v > cut)
            .map(|&v| alpha * v.ln())
            .collect();
        (1.0 - alpha) * self.log_mu_max + log_sum_exp(&logs)
    }

    fn log_q_graded(&self, alpha: f64) -> Option<f64> {
        let diag = self.chol_diag_sq.as_ref()?;
        let logs: Vec<f64> = self
            .mu_tilde
            .iter()
            .zip(diag)
            .map(|(&mu, &dsq)| (1.0 - alpha) * mu.ln() + alpha * dsq.ln())
            .collect();
        Some((1.0 - alpha) * self.log_mu_max + log_sum_exp(&logs))
    }

    /// `D_α^new(ρ‖σ)` for `α ∈ (0,∞)\{1}`, assuming any required support
    /// condition was already checked by the caller.
    pub fn d(&self, alpha: f64) -> ExtReal {
        let lq = self.log_q(alpha);
        if !lq.is_finite() {
            return ExtReal::Infinity;
        }
        ExtReal::Finite((lq - self.tr_rho.ln()) / (alpha - 1.0))
    }
}

/// `D_α(ρ‖σ)` for `α ∈ [0, +∞]` (pass `f64::INFINITY` for `α = ∞`).
///
/// `ρ = 0` is rejected (the limit does not exist); the zero-`σ` convention
/// `D(ρ‖0) = +∞` is reachable through [`PSDOp`] only as the support branch.
/// `α = 1` evaluates Umegaki's relative entropy; `α = ∞` evaluates the
/// family's closed-form limit. For the sandwiched family at `α = 0` the
/// value is the numeric proxy at [`NEW_FAMILY_ALPHA_ZERO_PROXY`]; use
/// [`d_renyi_eval`] to observe the approximation flag.
pub fn d_renyi(
    rho: &PSDOp,
    sigma: &PSDOp,
    alpha: f64,
    family: DivergenceFamily,
) -> Result<ExtReal> {
    Ok(d_renyi_eval(rho, sigma, alpha, family)?.value)
}

/// As [`d_renyi`], returning the approximation flag alongside the value.
pub fn d_renyi_eval(
    rho: &PSDOp,
    sigma: &PSDOp,
    alpha: f64,
    family: DivergenceFamily,
) -> Result<DivergenceEval> {
    rho.check_same_dim(sigma)?;
    if !alpha.is_finite() {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(Error::AlphaRange { alpha, range: "[0, +inf]" });
        }
        let value = match family {
            DivergenceFamily::Old => d_infinity_old(rho, sigma),
            DivergenceFamily::New => d_max(rho, sigma)?,
        };
        return Ok(exact(value));
    }
    if alpha < 0.0 {
        return Err(Error::AlphaRange { alpha, range: "[0, +inf]" });
    }
    if alpha == 1.0 {
        return Ok(exact(umegaki(rho, sigma)?));
    }
    if alpha == 0.0 {
        return match family {
            DivergenceFamily::Old => {
                // (log Tr ρ⁰σ - log Tr ρ) / (0 - 1)
                let proj = support_power(rho, 0.0);
                let q = trace_product_re(proj.matrix(), sigma.matrix()).max(0.0);
                if q <= 0.0 {
                    Ok(exact(ExtReal::Infinity))
                } else {
                    Ok(exact(ExtReal::Finite(rho.trace().ln() - q.ln())))
                }
            }
            DivergenceFamily::New => {
                let eval =
                    d_renyi_eval(rho, sigma, NEW_FAMILY_ALPHA_ZERO_PROXY, DivergenceFamily::New)?;
                Ok(DivergenceEval { value: eval.value, approximate: true })
            }
        };
    }
    if alpha > 1.0 && !support_contained(rho, sigma) {
        return Ok(exact(ExtReal::Infinity));
    }
    let log_q = match family {
        DivergenceFamily::Old => log_q_old(rho, sigma, alpha)?,
        DivergenceFamily::New => log_q_new(rho, sigma, alpha)?,
    };
    if !log_q.is_finite() {
        // orthogonal supports: Q = 0 and α < 1 force the +∞ branch
        return Ok(exact(ExtReal::Infinity));
    }
    Ok(exact(ExtReal::Finite((log_q - rho.trace().ln()) / (alpha - 1.0))))
}

fn exact(value: ExtReal) -> DivergenceEval {
    DivergenceEval { value, approximate: false }
}

/// Umegaki's relative entropy `(1/Tr ρ) Tr ρ (log ρ - log σ)` on matching
/// supports, `+∞` otherwise. This is the `α → 1` limit of both families.
pub fn umegaki(rho: &PSDOp, sigma: &PSDOp) -> Result<ExtReal> {
    rho.check_same_dim(sigma)?;
    if !support_contained(rho, sigma) {
        return Ok(ExtReal::Infinity);
    }
    let rp = rho.eigen();
    let thr = rp.support_threshold();
    let tr_rho_log_rho: f64 = rp
        .values
        .iter()
        .filter(|&&v| v > thr)
        .map(|&v| v * v.ln())
        .sum();
    let sp = sigma.eigen();
    let log_sigma = sp.map_on_support(sp.support_threshold(), |x| x.ln());
    let tr_rho_log_sigma = trace_product_re(rho.matrix(), &log_sigma);
    Ok(ExtReal::Finite(
        (tr_rho_log_rho - tr_rho_log_sigma) / rho.trace(),
    ))
}

/// The Rényi entropy `S_α(ρ) = (log Tr ρ^α - log Tr ρ)/(1-α)` for
/// `α ∈ [0, +∞]`; `α = 1` is the von Neumann entropy and `α = 0` the log of
/// the rank for states.
pub fn renyi_entropy(rho: &PSDOp, alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::AlphaRange { alpha, range: "[0, +inf]" });
    }
    let pairs = rho.eigen();
    let thr = pairs.support_threshold();
    let support: Vec<f64> = pairs.values.iter().copied().filter(|&v| v > thr).collect();
    let tr: f64 = support.iter().sum();
    if !alpha.is_finite() {
        return Ok(-support[0].ln());
    }
    if alpha == 1.0 {
        let s: f64 = support.iter().map(|&v| v * v.ln()).sum();
        return Ok(-s / tr);
    }
    let q: f64 = support.iter().map(|&v| v.powf(alpha)).sum();
    Ok((q.ln() - tr.ln()) / (1.0 - alpha))
}

/// Max-relative entropy `D_max(ρ‖σ) = log inf{γ : ρ ≤ γσ}`, the `α → ∞`
/// limit of the sandwiched family: the log of the largest eigenvalue of
/// `σ^{-1/2} ρ σ^{-1/2}` on the support of `σ`, `+∞` on support violation.
pub fn d_max(rho: &PSDOp, sigma: &PSDOp) -> Result<ExtReal> {
    rho.check_same_dim(sigma)?;
    if !support_contained(rho, sigma) {
        return Ok(ExtReal::Infinity);
    }
    let inv_sqrt = support_power(sigma, -0.5);
    let m = inv_sqrt.matrix() * rho.matrix() * inv_sqrt.matrix();
    let top = hermitian_eigen(&m).max_value();
    if top <= 0.0 {
        return Ok(ExtReal::Infinity);
    }
    Ok(ExtReal::Finite(top.ln()))
}

/// `α → ∞` limit of the traditional family: the log of the largest ratio
/// `r/s` over strictly positive eigenvalues `r` of `ρ` and `s` of `σ` whose
/// spectral projections overlap (`Tr P_ρ({r}) P_σ({s}) > 0`).
fn d_infinity_old(rho: &PSDOp, sigma: &PSDOp) -> ExtReal {
    if !support_contained(rho, sigma) {
        return ExtReal::Infinity;
    }
    let rg = crate::linalg::grouped_eigen(rho.matrix());
    let sg = crate::linalg::grouped_eigen(sigma.matrix());
    let r_thr = crate::ZERO_THRESHOLD * rg.values[0].abs().max(f64::MIN_POSITIVE);
    let s_thr = crate::ZERO_THRESHOLD * sg.values[0].abs().max(f64::MIN_POSITIVE);
    let overlap_tol = 1e-12 * rho.dim() as f64;
    let mut best: Option<f64> = None;
    for (i, &r) in rg.values.iter().enumerate() {
        if r <= r_thr {
            continue;
        }
        for (j, &s) in sg.values.iter().enumerate() {
            if s <= s_thr {
                continue;
            }
            let t = trace_product_re(&rg.projectors[i], &sg.projectors[j]);
            if t > overlap_tol {
                let ratio = r / s;
                best = Some(best.map_or(ratio, |b: f64| b.max(ratio)));
            }
        }
    }
    match best {
        Some(b) => ExtReal::Finite(b.ln()),
        None => ExtReal::Infinity,
    }
}

/// `(α-1)·log s(σ, α)`, the σ-dependent term of the comparison lower bound
/// relating the two families, with `s` the eigenvalue of `σ` that the norm
/// `‖σ^{(1-α)/α}‖` picks out: the largest for `α < 1` and the smallest
/// support eigenvalue for `α > 1` (a negative exponent swaps which
/// eigenvalue is extremal).
pub fn comparison_sigma_term(sigma: &PSDOp, alpha: f64) -> f64 {
    let pairs = sigma.eigen();
    let thr = pairs.support_threshold();
    let support: Vec<f64> = pairs.values.iter().copied().filter(|&v| v > thr).collect();
    let s = if alpha < 1.0 {
        support[0]
    } else {
        *support.last().unwrap()
    };
    (alpha - 1.0) * s.ln()
}

/// Lower bound on `D_α^new(ρ‖σ)` in terms of `D_α^old(ρ‖σ)` from the
/// Araki–Lieb–Thirring inequality and its Audenaert converse:
///
/// ```text
/// D_new ≥ α D_old + log Tr ρ - log Tr ρ^α + (α-1) log s(σ, α)
/// ```
///
/// with `s(σ, α)` as in [`comparison_sigma_term`]. Together with
/// `D_old ≥ D_new` this makes the two families interchangeable near `α = 1`.
/// `+∞` is returned when `D_old` itself is `+∞` (the chain holds trivially).
pub fn comparison_lower_bound(rho: &PSDOp, sigma: &PSDOp, alpha: f64) -> Result<ExtReal> {
    if alpha.is_nan() || alpha < 0.0 || alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::AlphaRange { alpha, range: "[0,1) U (1,+inf)" });
    }
    let d_old = match d_renyi(rho, sigma, alpha, DivergenceFamily::Old)? {
        ExtReal::Finite(v) => v,
        ExtReal::Infinity => return Ok(ExtReal::Infinity),
    };
    let pairs = rho.eigen();
    let thr = pairs.support_threshold();
    let tr_rho_alpha: f64 = pairs
        .values
        .iter()
        .filter(|&&v| v > thr)
        .map(|&v| v.powf(alpha))
        .sum();
    Ok(ExtReal::Finite(
        alpha * d_old + rho.trace().ln() - tr_rho_alpha.ln() + comparison_sigma_term(sigma, alpha),
    ))
}

/// Dimension-only comparison lower bound for density operators,
/// `α D_old - |α-1| log dim`, valid for `α ∈ [0, 1)`. For `α > 1` no
/// dimension-only bound holds (the σ-dependent term of
/// [`comparison_lower_bound`] is unavoidable there), so this returns an
/// error outside `[0, 1)`.
pub fn states_comparison_lower_bound(d_old: f64, alpha: f64, dim: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::AlphaRange { alpha, range: "[0,1)" });
    }
    Ok(alpha * d_old - (alpha - 1.0).abs() * (dim as f64).ln())
}

/// Quantitative two-sided envelopes for both divergence families on a
/// punctured neighbourhood `(1-δ, 1) ∪ (1, 1+δ)` of `α = 1`, built from
/// `η = 1 + Tr ρ^{3/2}σ^{-1/2} + Tr ρ^{1/2}σ^{1/2}` and
/// `δ = min(1/2, c / (2 log η))`.
pub struct TcrEnvelope {
    pub eta: f64,
    pub delta: f64,
    /// `D₁(ρ‖σ)`, the common limit the curves pinch at `α → 1`.
    pub d1: f64,
    log_eta_sq_cosh_c: f64,
    tr_rho: f64,
    log_sigma_norm: f64,
    rho_support_eigs: Vec<f64>,
}

/// Builds the envelope record; errors when `supp ρ ⊄ supp σ`.
pub fn tcr_envelope(rho: &PSDOp, sigma: &PSDOp, c: f64) -> Result<TcrEnvelope> {
    rho.check_same_dim(sigma)?;
    if !(c > 0.0) {
        return Err(Error::InvalidInput(format!("c must be positive, got {c}")));
    }
    if !support_contained(rho, sigma) {
        return Err(Error::SupportViolation);
    }
    let t1 = trace_product_re(
        support_power(rho, 1.5).matrix(),
        support_power(sigma, -0.5).matrix(),
    );
    let t2 = trace_product_re(
        support_power(rho, 0.5).matrix(),
        support_power(sigma, 0.5).matrix(),
    );
    let eta = 1.0 + t1 + t2;
    let delta = 0.5f64.min(c / (2.0 * eta.ln()));
    let d1 = match umegaki(rho, sigma)? {
        ExtReal::Finite(v) => v,
        ExtReal::Infinity => return Err(Error::SupportViolation),
    };
    let pairs = rho.eigen();
    let thr = pairs.support_threshold();
    Ok(TcrEnvelope {
        eta,
        delta,
        d1,
        log_eta_sq_cosh_c: eta.ln().powi(2) * c.cosh(),
        tr_rho: rho.trace(),
        log_sigma_norm: sigma.max_eigenvalue().ln(),
        rho_support_eigs: pairs.values.into_iter().filter(|&v| v > thr).collect(),
    })
}

impl TcrEnvelope {
    fn check_alpha(&self, alpha: f64) -> Result<()> {
        if alpha > 1.0 - self.delta && alpha < 1.0 + self.delta && alpha != 1.0 {
            Ok(())
        } else {
            Err(Error::AlphaRange { alpha, range: "(1-delta,1) U (1,1+delta)" })
        }
    }

    fn correction(&self, alpha: f64) -> f64 {
        4.0 * (1.0 - alpha) * self.log_eta_sq_cosh_c
    }

    fn log_tr_rho_alpha(&self, alpha: f64) -> f64 {
        self.rho_support_eigs
            .iter()
            .map(|&v| v.powf(alpha))
            .sum::<f64>()
            .ln()
    }

    /// Upper bound curve for `D_α^old`.
    pub fn upper_old(&self, alpha: f64) -> Result<f64> {
        self.check_alpha(alpha)?;
        Ok(if alpha < 1.0 { self.d1 } else { self.d1 - self.correction(alpha) })
    }

    /// Lower bound curve for `D_α^old`.
    pub fn lower_old(&self, alpha: f64) -> Result<f64> {
        self.check_alpha(alpha)?;
        Ok(if alpha < 1.0 { self.d1 - self.correction(alpha) } else { self.d1 })
    }

    /// Upper bound curve for `D_α^new`.
    pub fn upper_new(&self, alpha: f64) -> Result<f64> {
        self.upper_old(alpha)
    }

    /// Lower bound curve for `D_α^new`.
    pub fn lower_new(&self, alpha: f64) -> Result<f64> {
        self.check_alpha(alpha)?;
        Ok(if alpha < 1.0 {
            alpha * self.d1 - alpha * self.correction(alpha) + self.tr_rho.ln()
                - self.log_tr_rho_alpha(alpha)
                + (alpha - 1.0) * self.log_sigma_norm
        } else {
            self.d1
        })
    }
}

fn check_alpha_positive(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::AlphaRange { alpha, range: "(0, +inf)" });
    }
    Ok(())
}
