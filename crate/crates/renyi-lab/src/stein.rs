//! Composite quantum hypothesis testing on tensor powers.
//!
//! The null hypothesis is a finite family of states `N`, the alternative a
//! positive semidefinite `σ` (a state in hypothesis testing proper; a general
//! PSD operator, e.g. the identity, reuses this machinery for compression).
//! The Neyman–Pearson projection
//!
//! ```text
//! S_{n,a} = { e^{-na} Σ_{ρ∈N} ρ^{⊗n} - σ^{⊗n} > 0 }
//! ```
//!
//! trades worst-case type-I error against type-II error. Exact finite-`n`
//! error pairs are computed spectrally and compared to the universal bounds
//!
//! ```text
//! type-I  ≤ |N| e^{-n φ̂(a)} + n δ,     type-II ≤ |N| e^{-n φ(a)},
//! ```
//!
//! where `φ(a) = sup_{0<t≤1} {a t - ψ(t)}` is the Legendre–Fenchel transform
//! of `ψ(t) = sup_ρ log Q_t^new(ρ‖σ)` on `(0,1]`, `φ̂ = φ - a`, and `δ` is
//! the covering radius of the finite net used for an infinite family.

use crate::divergence::{log_q_old, umegaki, QNewEvaluator};
use crate::extreal::ExtReal;
use crate::linalg::CMatrix;
use crate::operator::{
    positive_part_projection, psd_tensor_power, support_contained, trace_distance, DensityOp,
    HermitianOp, PSDOp,
};
use crate::{Error, Result};

/// A finite null family `N` together with the alternative operator `σ`;
/// every null state must satisfy `supp ρ ⊆ supp σ`.
#[derive(Debug, Clone)]
pub struct HypothesisFamily {
    null_states: Vec<DensityOp>,
    sigma: PSDOp,
}

impl HypothesisFamily {
    pub fn new(null_states: Vec<DensityOp>, sigma: PSDOp) -> Result<Self> {
        if null_states.is_empty() {
            return Err(Error::EmptyInput("null-hypothesis family"));
        }
        for rho in &null_states {
            rho.check_same_dim(&sigma)?;
            if !support_contained(rho, &sigma) {
                return Err(Error::SupportViolation);
            }
        }
        Ok(HypothesisFamily { null_states, sigma })
    }

    pub fn null_states(&self) -> &[DensityOp] {
        &self.null_states
    }

    pub fn sigma(&self) -> &PSDOp {
        &self.sigma
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    /// `D₁(N‖σ) = min_ρ D₁(ρ‖σ)`, the optimal type-II rate.
    pub fn d1(&self) -> f64 {
        self.null_states
            .iter()
            .map(|rho| {
                umegaki(rho, &self.sigma)
                    .expect("dims checked")
                    .finite()
                    .expect("support condition holds")
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// A binary test `0 ≤ T ≤ I`; the Neyman–Pearson tests used here are
/// projections.
#[derive(Debug, Clone)]
pub struct TestOp {
    op: HermitianOp,
}

impl TestOp {
    pub fn new(op: HermitianOp) -> Result<Self> {
        let eig = op.eigen();
        let max = eig.max_value();
        let min = *eig.values.last().unwrap();
        if min < -1e-10 || max > 1.0 + 1e-10 {
            return Err(Error::InvalidInput(format!(
                "test operator eigenvalues must lie in [0,1], got [{min}, {max}]"
            )));
        }
        Ok(TestOp { op })
    }

    pub fn operator(&self) -> &HermitianOp {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

/// Worst-case type-I error over the null family and type-II error against
/// the alternative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPair {
    pub type_i: f64,
    pub type_ii: f64,
}

/// The Neyman–Pearson projection
/// `S_{n,a} = { e^{-na} Σ_i ρ_i^{⊗n} - σ^{⊗n} > 0 }`.
pub fn np_test(rhos: &[PSDOp], sigma: &PSDOp, a: f64, n: usize) -> Result<TestOp> {
    if rhos.is_empty() {
        return Err(Error::EmptyInput("null-state list"));
    }
    let sigma_n = psd_tensor_power(sigma, n)?;
    let dim = sigma_n.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for rho in rhos {
        rho.check_same_dim(sigma)?;
        acc += psd_tensor_power(rho, n)?.matrix();
    }
    let shifted = acc.scale((-(n as f64) * a).exp()) - sigma_n.matrix();
    let projection = positive_part_projection(&HermitianOp::wrap(shifted));
    Ok(TestOp { op: projection })
}

/// Exact error pair of a test at block length `n`: worst-case
/// `Tr ρ^{⊗n}(I - T)` over the family and `Tr σ^{⊗n} T`.
pub fn error_pair(test: &TestOp, family: &HypothesisFamily, n: usize) -> Result<ErrorPair> {
    let dim_n = family
        .dim()
        .checked_pow(n as u32)
        .ok_or(Error::DimCapExceeded { requested: usize::MAX, cap: crate::dim_cap() })?;
    if dim_n != test.dim() {
        return Err(Error::DimensionMismatch(dim_n, test.dim()));
    }
    let id = CMatrix::identity(test.dim(), test.dim());
    let complement = &id - test.op.matrix();
    let mut type_i: f64 = 0.0;
    for rho in family.null_states() {
        let rho_n = psd_tensor_power(rho, n)?;
        let miss = crate::linalg::trace_product_re(rho_n.matrix(), &complement);
        type_i = type_i.max(miss.clamp(0.0, 1.0));
    }
    let sigma_n = psd_tensor_power(family.sigma(), n)?;
    let type_ii = crate::linalg::trace_product_re(sigma_n.matrix(), test.op.matrix()).max(0.0);
    Ok(ErrorPair { type_i, type_ii })
}

/// The exponent functions of a hypothesis family:
/// `ψ(t) = sup_ρ log Q_t^new(ρ‖σ)` on `(0,1]`, its Legendre–Fenchel
/// transform `φ(a) = sup_{0<t≤1} {a t - ψ(t)}`, and `φ̂(a) = φ(a) - a`
/// (so `φ(a) ≥ a` always, and `φ̂(a) > 0` strictly below `D₁(N‖σ)`).
pub struct ExponentFunctions {
    evaluators: Vec<QNewEvaluator>,
    family_size: usize,
}

/// Smallest `t` probed when taking the supremum over `(0, 1]`; the open
/// endpoint is approached through the grid, not attained.
pub const T_FLOOR: f64 = 1e-6;

const GOLDEN_TOL: f64 = 1e-8;
const GRID_POINTS: usize = 1024;

impl ExponentFunctions {
    /// `ψ(t)` for `t > 0`, or `None` when no family member admits a
    /// trustworthy evaluation at this `t` (extreme grading; skipping such
    /// `t` only loosens the resulting bounds).
    pub fn psi_checked(&self, t: f64) -> Option<f64> {
        let mut best: Option<f64> = None;
        for ev in &self.evaluators {
            if let Some(lq) = ev.log_q_checked(t) {
                if lq.is_finite() {
                    best = Some(best.map_or(lq, |b: f64| b.max(lq)));
                }
            }
        }
        best
    }

    /// `ψ(t)`; `NaN` when untrustworthy (prefer [`Self::psi_checked`]).
    pub fn psi(&self, t: f64) -> f64 {
        self.psi_checked(t).unwrap_or(f64::NAN)
    }

    fn objective(&self, a: f64, t: f64) -> f64 {
        match self.psi_checked(t) {
            Some(p) => a * t - p,
            None => f64::NEG_INFINITY,
        }
    }

    /// `φ(a) = sup_{0<t≤1} {a t - ψ(t)}`: golden-section on the concave
    /// objective plus a dense-grid cross-check; the larger value wins.
    pub fn phi(&self, a: f64) -> f64 {
        let g = |t: f64| self.objective(a, t);
        let mut best = f64::NEG_INFINITY;
        let mut lo = T_FLOOR;
        let mut first_valid = None;
        for i in 0..=GRID_POINTS {
            let t = T_FLOOR + (1.0 - T_FLOOR) * (i as f64) / (GRID_POINTS as f64);
            let v = g(t);
            if v.is_finite() && first_valid.is_none() {
                first_valid = Some(t);
            }
            best = best.max(v);
        }
        if let Some(t0) = first_valid {
            lo = t0;
        }
        best.max(golden_max(&g, lo, 1.0, GOLDEN_TOL))
    }

    /// `φ̂(a) = φ(a) - a`.
    pub fn phi_hat(&self, a: f64) -> f64 {
        self.phi(a) - a
    }

    /// Right-hand sides of the universal finite-`n` bounds for a net of
    /// `net_size` states with covering radius `net_radius` (pass the family
    /// size and 0 when the finite family is used directly).
    pub fn finite_n_bounds(
        &self,
        a: f64,
        n: usize,
        net_size: usize,
        net_radius: f64,
    ) -> FiniteNBounds {
        let phi = self.phi(a);
        let phi_hat = phi - a;
        let m = net_size as f64;
        FiniteNBounds {
            bound_type_i: m * (-(n as f64) * phi_hat).exp() + (n as f64) * net_radius,
            bound_type_ii: m * (-(n as f64) * phi).exp(),
        }
    }

    pub fn family_size(&self) -> usize {
        self.family_size
    }
}

/// Golden-section maximization of a concave function on `[lo, hi]`. The
/// stopping width is `tol` relative to the interval magnitude (plain `tol`
/// near the origin), with an iteration cap so ULP-width brackets at large
/// magnitudes cannot stall the loop.
pub(crate) fn golden_max(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    let mut iterations = 0;
    while (b - a) > tol * 1.0f64.max(a.abs()).max(b.abs()) && iterations < 300 {
        iterations += 1;
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    gc.max(gd).max(g(lo)).max(g(hi))
}

/// Builds the exponent functions of a family (σ spectral data is cached
/// across `t`).
pub fn exponent_functions(family: &HypothesisFamily) -> ExponentFunctions {
    ExponentFunctions {
        evaluators: family
            .null_states()
            .iter()
            .map(|rho| QNewEvaluator::new(rho, family.sigma()))
            .collect(),
        family_size: family.null_states().len(),
    }
}

/// Universal finite-`n` error bounds.
#[derive(Debug, Clone, Copy)]
pub struct FiniteNBounds {
    pub bound_type_i: f64,
    pub bound_type_ii: f64,
}

/// `(|N(n)| e^{-nφ̂(a)} + n δ, |N(n)| e^{-nφ(a)})` for the given family.
pub fn finite_n_bounds(
    family: &HypothesisFamily,
    a: f64,
    n: usize,
    net_size: usize,
    net_radius: f64,
) -> FiniteNBounds {
    exponent_functions(family).finite_n_bounds(a, n, net_size, net_radius)
}

/// Greedy maximal δ-separated subset of a finite candidate pool in trace
/// norm. Every pool element lies within `< δ` of the returned net, and the
/// net size obeys `(1 + 2/δ)^D` with `D` the real dimension of the ambient
/// operator space (`dim²` for Hermitian matrices).
pub fn build_net(pool: &[DensityOp], delta: f64) -> Result<Vec<DensityOp>> {
    if pool.is_empty() {
        return Err(Error::EmptyInput("net candidate pool"));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!("delta must be positive, got {delta}")));
    }
    let mut net: Vec<DensityOp> = Vec::new();
    for cand in pool {
        let separated = net.iter().all(|kept| {
            trace_distance(cand.as_hermitian(), kept.as_hermitian()).is_ok_and(|d| d >= delta)
        });
        if separated {
            net.push(cand.clone());
        }
    }
    Ok(net)
}

/// Covering radius of a net over a pool: `sup_pool inf_net ‖ρ - ρ'‖₁`.
pub fn covering_radius(pool: &[DensityOp], net: &[DensityOp]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for cand in pool {
        let mut nearest = f64::INFINITY;
        for kept in net {
            nearest = nearest.min(trace_distance(cand.as_hermitian(), kept.as_hermitian())?);
        }
        worst = worst.max(nearest);
    }
    Ok(worst)
}

/// Cardinality bound `(1 + 2/δ)^D` on a maximal δ-separated subset of the
/// unit ball of a `D`-dimensional real normed space.
pub fn net_size_bound(delta: f64, real_dim: usize) -> f64 {
    (1.0 + 2.0 / delta).powi(real_dim as i32)
}

/// Configuration of the strong-converse optimization over `t > 1`.
#[derive(Debug, Clone)]
pub struct StrongConverseConfig {
    /// Upper end of the `t` search interval.
    pub t_max: f64,
    /// Log-spaced grid size on `t - 1`.
    pub grid: usize,
}

impl Default for StrongConverseConfig {
    fn default() -> Self {
        StrongConverseConfig { t_max: 50.0, grid: 300 }
    }
}

/// Strong-converse exponent bound
/// `inf_{t>1} ((t-1)/t) [ -r + inf_ρ D_t^new(ρ‖σ) ]`: the worst-case success
/// probability of any test sequence whose type-II error decays at rate `r`
/// is bounded by `e^{n·(this value)}`, so a negative value certifies
/// exponential decay; strictly negative whenever `r > D₁(N‖σ)`.
pub fn strong_converse_bound(family: &HypothesisFamily, r: f64) -> ExtReal {
    strong_converse_bound_with(family, r, &StrongConverseConfig::default())
}

pub fn strong_converse_bound_with(
    family: &HypothesisFamily,
    r: f64,
    config: &StrongConverseConfig,
) -> ExtReal {
    let evaluators: Vec<QNewEvaluator> = family
        .null_states()
        .iter()
        .map(|rho| QNewEvaluator::new(rho, family.sigma()))
        .collect();
    let objective = |t: f64| -> f64 {
        let d_min = evaluators
            .iter()
            .map(|ev| ev.d(t).to_f64())
            .fold(f64::INFINITY, f64::min);
        (t - 1.0) / t * (d_min - r)
    };
    let lo = 1e-6f64.ln();
    let hi = (config.t_max - 1.0).ln();
    let mut best = f64::INFINITY;
    let mut best_i = 0;
    for i in 0..=config.grid {
        let s = (lo + (hi - lo) * i as f64 / config.grid as f64).exp();
        let v = objective(1.0 + s);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    // local refinement between the grid neighbours of the best point
    let s_at = |i: i64| (lo + (hi - lo) * i as f64 / config.grid as f64).exp();
    let left = s_at((best_i as i64 - 1).max(0));
    let right = s_at((best_i as i64 + 1).min(config.grid as i64));
    let neg = |s: f64| -objective(1.0 + s);
    best = best.min(-golden_max(&neg, left, right, 1e-10));
    ExtReal::Finite(best)
}

/// One block length of a correlated (non-i.i.d.) testing problem: the `r`
/// null states and the alternative live directly on the `n`-th space, no
/// tensor-power structure is assumed.
#[derive(Debug, Clone)]
pub struct CorrelatedPoint {
    pub n: usize,
    pub errors: ErrorPair,
    /// `min_t e^{-na(t-1)} Σ_i Q_t^new(ρ_{i,n}‖σ_n)` over the supplied grid.
    pub bound_type_i: f64,
    /// `min_t e^{-nat} Σ_i Q_t^new(ρ_{i,n}‖σ_n)` over the supplied grid.
    pub bound_type_ii: f64,
    /// `(1/n) log Q_t^new(ρ_{i,n}‖σ_n)` indexed `[i][t]`.
    pub exponents: Vec<Vec<f64>>,
}

/// Report of [`correlated_bounds`].
#[derive(Debug, Clone)]
pub struct CorrelatedReport {
    pub points: Vec<CorrelatedPoint>,
    /// Left-derivative estimates `∂⁻ψ_i^old(1)` from the largest block
    /// length, one per null-state index (their minimum lower-bounds the
    /// achievable rate).
    pub left_derivatives: Vec<f64>,
}

/// Finite-`n` Neyman–Pearson analysis of a correlated testing problem.
///
/// `sequences[j]` holds the null states `{ρ_{i,n_j}}` and `sigmas[j]` the
/// alternative at block length `n_values[j]`. For every block length the
/// exact error pair of `S_{n,a} = {e^{-na} Σ_i ρ_{i,n} - σ_n > 0}` is
/// computed along with the per-`t` bounds and empirical exponents; the left
/// derivative `∂⁻ψ_i^old(1)` is estimated by a second-order one-sided
/// difference at `h = 1e-4`.
pub fn correlated_bounds(
    n_values: &[usize],
    sequences: &[Vec<DensityOp>],
    sigmas: &[PSDOp],
    a: f64,
    t_grid: &[f64],
) -> Result<CorrelatedReport> {
    if n_values.is_empty() || sequences.len() != n_values.len() || sigmas.len() != n_values.len() {
        return Err(Error::InvalidInput(
            "n_values, sequences and sigmas must have equal non-zero length".into(),
        ));
    }
    let r = sequences[0].len();
    if r == 0 {
        return Err(Error::EmptyInput("correlated null family"));
    }
    for (seq, sigma) in sequences.iter().zip(sigmas) {
        if seq.len() != r {
            return Err(Error::InvalidInput(
                "every block length must supply the same number of null states".into(),
            ));
        }
        for rho in seq {
            rho.check_same_dim(sigma)?;
        }
    }
    for &t in t_grid {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::AlphaRange { alpha: t, range: "(0,1)" });
        }
    }

    let mut points = Vec::new();
    for ((&n, seq), sigma) in n_values.iter().zip(sequences).zip(sigmas) {
        let nf = n as f64;
        let dim = sigma.dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for rho in seq {
            acc += rho.matrix();
        }
        let shifted = acc.scale((-nf * a).exp()) - sigma.matrix();
        let test = TestOp { op: positive_part_projection(&HermitianOp::wrap(shifted)) };
        let id = CMatrix::identity(dim, dim);
        let complement = &id - test.op.matrix();
        let mut type_i: f64 = 0.0;
        for rho in seq {
            type_i = type_i
                .max(crate::linalg::trace_product_re(rho.matrix(), &complement).clamp(0.0, 1.0));
        }
        let type_ii = crate::linalg::trace_product_re(sigma.matrix(), test.op.matrix()).max(0.0);

        let mut exponents = vec![vec![0.0; t_grid.len()]; r];
        let mut bound_type_i = f64::INFINITY;
        let mut bound_type_ii = f64::INFINITY;
        for (k, &t) in t_grid.iter().enumerate() {
            let mut q_sum = 0.0;
            for (i, rho) in seq.iter().enumerate() {
                let ev = QNewEvaluator::new(rho, sigma);
                let lq = ev.log_q(t);
                exponents[i][k] = lq / nf;
                q_sum += lq.exp();
            }
            bound_type_ii = bound_type_ii.min((-nf * a * t).exp() * q_sum);
            bound_type_i = bound_type_i.min((-nf * a * (t - 1.0)).exp() * q_sum);
        }
        points.push(CorrelatedPoint {
            n,
            errors: ErrorPair { type_i, type_ii },
            bound_type_i,
            bound_type_ii,
            exponents,
        });
    }

    // ∂⁻ψ_i^old(1) ≈ (3ψ(1) - 4ψ(1-h) + ψ(1-2h)) / 2h at the largest n
    let last = n_values
        .iter()
        .enumerate()
        .max_by_key(|&(_, &n)| n)
        .map(|(j, _)| j)
        .unwrap();
    let nf = n_values[last] as f64;
    let h = 1e-4;
    let mut left_derivatives = Vec::with_capacity(r);
    for rho in &sequences[last] {
        let sigma = &sigmas[last];
        let psi = |t: f64| log_q_old(rho, sigma, t).map(|v| v / nf);
        let p1 = psi(1.0)?;
        let ph = psi(1.0 - h)?;
        let p2h = psi(1.0 - 2.0 * h)?;
        left_derivatives.push((3.0 * p1 - 4.0 * ph + p2h) / (2.0 * h));
    }

    Ok(CorrelatedReport { points, left_derivatives })
}

/// Finite averaged-i.i.d. mixture `Σ_i γ_i ρ_i^{⊗n}`.
pub fn averaged_mixture(rhos: &[DensityOp], gammas: &[f64], n: usize) -> Result<PSDOp> {
    check_weights(rhos.len(), gammas)?;
    let dim_n = rhos[0].dim().pow(n as u32);
    crate::check_dim_cap(dim_n)?;
    let mut acc = CMatrix::zeros(dim_n, dim_n);
    for (rho, &g) in rhos.iter().zip(gammas) {
        if g == 0.0 {
            continue;
        }
        acc += psd_tensor_power(rho, n)?.matrix().clone().scale(g);
    }
    Ok(PSDOp::wrap(acc))
}

/// The optimal testing rate of a finitely supported averaged hypothesis:
/// `min_i D₁(ρ_i‖σ)` over components with positive weight.
pub fn averaged_d_star(rhos: &[DensityOp], gammas: &[f64], sigma: &PSDOp) -> Result<ExtReal> {
    check_weights(rhos.len(), gammas)?;
    let mut best = ExtReal::Infinity;
    for (rho, &g) in rhos.iter().zip(gammas) {
        if g > 0.0 {
            let d = umegaki(rho, sigma)?;
            if d < best {
                best = d;
            }
        }
    }
    Ok(best)
}

fn check_weights(len: usize, gammas: &[f64]) -> Result<()> {
    if gammas.len() != len {
        return Err(Error::BadWeights(format!("{} weights for {} states", gammas.len(), len)));
    }
    if gammas.iter().any(|&g| g < 0.0) {
        return Err(Error::BadWeights("negative weight".into()));
    }
    let total: f64 = gammas.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::BadWeights(format!("weights sum to {total}, expected 1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::{d_renyi, DivergenceFamily};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag_family() -> HypothesisFamily {
        HypothesisFamily::new(
            vec![DensityOp::from_diag(&[0.75, 0.25]).unwrap()],
            PSDOp::from_diag(&[0.5, 0.5]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn family_rejects_support_violation() {
        let rho = DensityOp::from_diag(&[0.5, 0.5]).unwrap();
        let sigma = PSDOp::from_diag(&[1.0, 0.0]).unwrap();
        assert!(matches!(
            HypothesisFamily::new(vec![rho], sigma),
            Err(Error::SupportViolation)
        ));
    }

    #[test]
    fn np_test_diagonal_example() {
        let fam = diag_family();
        let t = np_test(&[fam.null_states()[0].as_psd().clone()], fam.sigma(), 0.0, 1).unwrap();
        assert!((t.operator().matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(t.operator().matrix()[(1, 1)].norm() < 1e-12);
        let errs = error_pair(&t, &fam, 1).unwrap();
        assert!((errs.type_i - 0.25).abs() < 1e-12);
        assert!((errs.type_ii - 0.5).abs() < 1e-12);
    }

    #[test]
    fn np_test_threshold_limits() {
        let fam = diag_family();
        let rhos = [fam.null_states()[0].as_psd().clone()];
        // a → -∞ accepts everything
        let t = np_test(&rhos, fam.sigma(), -50.0, 1).unwrap();
        assert!((t.operator().trace() - 2.0).abs() < 1e-12);
        // a → +∞ with full-rank σ rejects everything
        let t = np_test(&rhos, fam.sigma(), 50.0, 1).unwrap();
        assert!(t.operator().trace().abs() < 1e-12);
    }

    #[test]
    fn error_pair_extreme_tests() {
        let fam = diag_family();
        let id = TestOp::new(HermitianOp::identity(2)).unwrap();
        let e = error_pair(&id, &fam, 1).unwrap();
        assert!(e.type_i.abs() < 1e-12);
        assert!((e.type_ii - 1.0).abs() < 1e-12);
        let zero = TestOp::new(HermitianOp::zero(2)).unwrap();
        let e = error_pair(&zero, &fam, 1).unwrap();
        assert!((e.type_i - 1.0).abs() < 1e-12);
        assert!(e.type_ii.abs() < 1e-12);
    }

    #[test]
    fn test_op_rejects_out_of_range() {
        assert!(TestOp::new(HermitianOp::from_diag(&[1.5, 0.0])).is_err());
        assert!(TestOp::new(HermitianOp::from_diag(&[-0.2, 0.5])).is_err());
    }

    #[test]
    fn exponent_functions_of_sigma_itself() {
        // N = {σ}: ψ ≡ 0, φ(a) = max(a, 0), φ̂(a) = max(-a, 0)
        let sigma = DensityOp::from_diag(&[0.6, 0.4]).unwrap();
        let fam = HypothesisFamily::new(vec![sigma.clone()], sigma.as_psd().clone()).unwrap();
        let ef = exponent_functions(&fam);
        for &t in &[0.1, 0.5, 1.0] {
            assert!(ef.psi(t).abs() < 1e-12, "psi({t}) = {}", ef.psi(t));
        }
        for &a in &[-0.7, -0.1, 0.0, 0.2, 1.3] {
            assert!((ef.phi(a) - a.max(0.0)).abs() < 1e-5, "phi({a}) = {}", ef.phi(a));
            assert!((ef.phi_hat(a) - (-a).max(0.0)).abs() < 1e-5);
        }
    }

    #[test]
    fn phi_matches_scalar_grid_oracle_in_commuting_case() {
        let fam = diag_family();
        let ef = exponent_functions(&fam);
        // dense-grid Legendre oracle on scalars
        let p = [0.75f64, 0.25];
        let q = [0.5f64, 0.5];
        let psi_scalar = |t: f64| -> f64 {
            p.iter()
                .zip(&q)
                .map(|(&pi, &qi)| (t * pi.ln() + (1.0 - t) * qi.ln()).exp())
                .sum::<f64>()
                .ln()
        };
        for &a in &[0.05, 0.1, 0.2] {
            let mut oracle = f64::NEG_INFINITY;
            let m = 2_000_000;
            for i in 1..=m {
                let t = i as f64 / m as f64;
                oracle = oracle.max(a * t - psi_scalar(t));
            }
            assert!(
                (ef.phi(a) - oracle).abs() < 1e-6,
                "a = {a}: {} vs {oracle}",
                ef.phi(a)
            );
        }
    }

    #[test]
    fn phi_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let sigma = sample::density(&mut rng, 2, 2);
        let fam = HypothesisFamily::new(
            vec![sample::density(&mut rng, 2, 2), sample::density(&mut rng, 2, 2)],
            sigma.as_psd().clone(),
        )
        .unwrap();
        let ef = exponent_functions(&fam);
        let d1 = fam.d1();
        let grid: Vec<f64> = (0..15).map(|i| -0.4 + 0.15 * i as f64).collect();
        let phis: Vec<f64> = grid.iter().map(|&a| ef.phi(a)).collect();
        for (i, &a) in grid.iter().enumerate() {
            // φ(a) ≥ a, and φ̂ > 0 strictly below D₁
            assert!(phis[i] >= a - 1e-9);
            if a > 0.0 && a < 0.9 * d1 {
                assert!(ef.phi_hat(a) > 0.0, "phi_hat({a}) = {}", ef.phi_hat(a));
            }
        }
        // convexity of φ on the sampled grid (Legendre transforms are convex)
        for w in phis.windows(3) {
            assert!(w[1] <= 0.5 * (w[0] + w[2]) + 1e-9);
        }
    }

    #[test]
    fn finite_n_bounds_hold_exactly() {
        let fam = diag_family();
        let d1 = fam.d1();
        let ef = exponent_functions(&fam);
        for &a in &[0.5 * d1, 0.9 * d1] {
            for n in 1..=6 {
                let rhos: Vec<PSDOp> =
                    fam.null_states().iter().map(|r| r.as_psd().clone()).collect();
                let test = np_test(&rhos, fam.sigma(), a, n).unwrap();
                let errs = error_pair(&test, &fam, n).unwrap();
                let bounds = ef.finite_n_bounds(a, n, fam.null_states().len(), 0.0);
                assert!(
                    errs.type_i <= bounds.bound_type_i + 1e-12,
                    "n {n} a {a}: {} vs {}",
                    errs.type_i,
                    bounds.bound_type_i
                );
                assert!(errs.type_ii <= bounds.bound_type_ii + 1e-12);
            }
        }
    }

    #[test]
    fn np_type_ii_monotone_in_threshold() {
        let fam = diag_family();
        let rhos: Vec<PSDOp> = fam.null_states().iter().map(|r| r.as_psd().clone()).collect();
        let mut last = f64::INFINITY;
        for i in 0..12 {
            let a = -1.0 + 0.25 * i as f64;
            let t = np_test(&rhos, fam.sigma(), a, 3).unwrap();
            let e = error_pair(&t, &fam, 3).unwrap();
            assert!(e.type_ii <= last + 1e-12);
            last = e.type_ii;
        }
    }

    #[test]
    fn net_construction_properties() {
        // singleton pool is its own net
        let single = vec![DensityOp::from_diag(&[0.3, 0.7]).unwrap()];
        assert_eq!(build_net(&single, 0.5).unwrap().len(), 1);

        // qubit diagonal segment: pairwise separation and covering hold
        let pool: Vec<DensityOp> = (0..101)
            .map(|i| {
                let p = i as f64 / 100.0;
                DensityOp::from_diag(&[p, 1.0 - p]).unwrap()
            })
            .collect();
        let delta = 0.5;
        let net = build_net(&pool, delta).unwrap();
        for (i, a) in net.iter().enumerate() {
            for b in net.iter().skip(i + 1) {
                assert!(
                    trace_distance(a.as_hermitian(), b.as_hermitian()).unwrap() >= delta - 1e-12
                );
            }
        }
        assert!(covering_radius(&pool, &net).unwrap() < delta);
        assert!((net.len() as f64) <= net_size_bound(delta, 4));
    }

    #[test]
    fn net_rejects_bad_input() {
        assert!(matches!(build_net(&[], 0.5), Err(Error::EmptyInput(_))));
        let pool = vec![DensityOp::from_diag(&[1.0, 0.0]).unwrap()];
        assert!(build_net(&pool, 0.0).is_err());
    }

    #[test]
    fn strong_converse_on_trivial_family() {
        // N = {σ}: D_t ≡ 0, bound = -r (t_max → ∞)
        let sigma = DensityOp::from_diag(&[0.5, 0.5]).unwrap();
        let fam = HypothesisFamily::new(vec![sigma.clone()], sigma.as_psd().clone()).unwrap();
        for &r in &[0.3, 1.0] {
            let cfg = StrongConverseConfig { t_max: 1e6, grid: 400 };
            let b = strong_converse_bound_with(&fam, r, &cfg).finite().unwrap();
            assert!((b + r).abs() < 1e-4, "r {r}: {b}");
        }
    }

    #[test]
    fn strong_converse_vanishes_at_the_optimal_rate() {
        // r = D₁(N‖σ): the objective tends to 0 at the t → 1 endpoint and
        // stays nonnegative, so the bound sits at 0 up to grid resolution
        let fam = diag_family();
        let b = strong_converse_bound(&fam, fam.d1()).finite().unwrap();
        assert!(b.abs() < 1e-3, "bound {b}");
        assert!(b >= -1e-9);
    }

    #[test]
    fn strong_converse_negative_above_rate() {
        let fam = diag_family();
        let r = fam.d1() + 0.1;
        let b = strong_converse_bound(&fam, r).finite().unwrap();
        assert!(b < 0.0, "bound {b}");
        // commuting oracle: scalar grid over t
        let p = [0.75f64, 0.25];
        let q = [0.5f64, 0.5];
        let mut oracle = f64::INFINITY;
        let m = 4_000_000;
        for i in 1..=m {
            let t = 1.0 + 49.0 * i as f64 / m as f64;
            let qv: f64 = p
                .iter()
                .zip(&q)
                .map(|(&pi, &qi)| (t * pi.ln() + (1.0 - t) * qi.ln()).exp())
                .sum();
            let d = qv.ln() / (t - 1.0);
            oracle = oracle.min((t - 1.0) / t * (d - r));
        }
        assert!((b - oracle).abs() < 1e-6, "{b} vs {oracle}");
    }

    #[test]
    fn correlated_reduces_to_iid_quantities() {
        // i.i.d. sequences: (1/n) log Q_t(ρ^{⊗n}‖σ^{⊗n}) = log Q_t(ρ‖σ)
        let rho = DensityOp::from_diag(&[0.75, 0.25]).unwrap();
        let sigma = PSDOp::from_diag(&[0.5, 0.5]).unwrap();
        let n_values = [1usize, 2, 3];
        let sequences: Vec<Vec<DensityOp>> = n_values
            .iter()
            .map(|&n| {
                vec![DensityOp::new(psd_tensor_power(&rho, n).unwrap()).unwrap()]
            })
            .collect();
        let sigmas: Vec<PSDOp> =
            n_values.iter().map(|&n| psd_tensor_power(&sigma, n).unwrap()).collect();
        let t_grid = [0.3, 0.5, 0.7];
        let rep = correlated_bounds(&n_values, &sequences, &sigmas, 0.05, &t_grid).unwrap();
        let single = QNewEvaluator::new(&rho, &sigma);
        for point in &rep.points {
            for (k, &t) in t_grid.iter().enumerate() {
                assert!(
                    (point.exponents[0][k] - single.log_q(t)).abs() < 1e-9,
                    "n {} t {t}",
                    point.n
                );
            }
            // finite-n error bounds from the per-t chain hold exactly
            assert!(point.errors.type_i <= point.bound_type_i + 1e-12);
            assert!(point.errors.type_ii <= point.bound_type_ii + 1e-12);
        }
        // ∂⁻ψ_old(1) ≈ D₁ for the i.i.d. commuting instance
        let d1 = umegaki(&rho, &sigma).unwrap().finite().unwrap();
        assert!(
            (rep.left_derivatives[0] - d1).abs() <= 1e-3,
            "{} vs {d1}",
            rep.left_derivatives[0]
        );
    }

    #[test]
    fn averaged_mixture_examples() {
        let rho = DensityOp::from_diag(&[0.75, 0.25]).unwrap();
        let tau = DensityOp::from_diag(&[0.4, 0.6]).unwrap();
        // single component
        let single = averaged_mixture(std::slice::from_ref(&rho), &[1.0], 2).unwrap();
        let direct = psd_tensor_power(&rho, 2).unwrap();
        assert!((single.matrix() - direct.matrix()).norm() < 1e-12);
        // two commuting components, n = 2: explicit diagonal
        let mix = averaged_mixture(&[rho.clone(), tau.clone()], &[0.3, 0.7], 2).unwrap();
        let expect = [
            0.3 * 0.5625 + 0.7 * 0.16,
            0.3 * 0.1875 + 0.7 * 0.24,
            0.3 * 0.1875 + 0.7 * 0.24,
            0.3 * 0.0625 + 0.7 * 0.36,
        ];
        for (i, &e) in expect.iter().enumerate() {
            assert!((mix.matrix()[(i, i)].re - e).abs() < 1e-12);
        }
        // trace identity: Σ γ_i (Tr ρ_i)^n
        assert!((mix.trace() - 1.0).abs() < 1e-12);
        // D* = min_i D₁(ρ_i‖σ) over positive weights
        let sigma = PSDOp::from_diag(&[0.5, 0.5]).unwrap();
        let d_star = averaged_d_star(&[rho.clone(), tau.clone()], &[0.3, 0.7], &sigma)
            .unwrap()
            .finite()
            .unwrap();
        let d_rho = umegaki(&rho, &sigma).unwrap().finite().unwrap();
        let d_tau = umegaki(&tau, &sigma).unwrap().finite().unwrap();
        assert!((d_star - d_rho.min(d_tau)).abs() < 1e-12);
        // zero-weight components are ignored
        let d_star2 = averaged_d_star(&[rho, tau], &[1.0, 0.0], &sigma)
            .unwrap()
            .finite()
            .unwrap();
        assert!((d_star2 - d_rho).abs() < 1e-12);
    }

    #[test]
    fn averaged_mixture_rejects_bad_weights() {
        let rho = DensityOp::from_diag(&[0.5, 0.5]).unwrap();
        assert!(matches!(
            averaged_mixture(std::slice::from_ref(&rho), &[0.4], 1),
            Err(Error::BadWeights(_))
        ));
        assert!(matches!(
            averaged_mixture(&[rho], &[0.5, 0.5], 1),
            Err(Error::BadWeights(_))
        ));
    }

    #[test]
    fn sandwiched_divergence_monotone_below_d1() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sigma = sample::density(&mut rng, 2, 2);
        let rho = sample::density(&mut rng, 2, 2);
        let fam = HypothesisFamily::new(vec![rho.clone()], sigma.as_psd().clone()).unwrap();
        let ef = exponent_functions(&fam);
        let d1 = fam.d1();
        assert!(ef.phi_hat(0.7 * d1) > 0.0);
        let d_low = d_renyi(&rho, sigma.as_psd(), 0.6, DivergenceFamily::New)
            .unwrap()
            .finite()
            .unwrap();
        let d_high = d_renyi(&rho, sigma.as_psd(), 0.95, DivergenceFamily::New)
            .unwrap()
            .finite()
            .unwrap();
        assert!(d_low <= d_high + 1e-12 && d_high <= d1 + 1e-9);
    }
}
