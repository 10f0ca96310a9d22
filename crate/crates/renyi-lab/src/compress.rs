//! Universal state compression from Neyman–Pearson projections.
//!
//! The compression map keeps the subspace picked out by
//! `S = S_{n,a} = { e^{-na} Σ_ρ ρ^{⊗n} - I > 0 }` (the hypothesis-testing
//! projection with the identity in place of the alternative state) and dumps
//! the rejected component onto a fixed unit vector `ψ` in the range of `S`:
//!
//! ```text
//! C(X) = S X S + |ψ⟩⟨ψ| Tr X (I - S),
//! ```
//!
//! a channel with Kraus operators `{S} ∪ {|ψ⟩⟨f_i|}` over an orthonormal
//! basis `{f_i}` of the rejected subspace. Decompression is the identity
//! embedding; the compression rate is `(1/n) log Tr S`. Meaningful
//! thresholds are negative: eigenvalues of `Σ ρ^{⊗n}` above `e^{na}`
//! survive, so `a` plays the role of a negated entropy rate.

use crate::linalg::{CMatrix, CVector};
use crate::operator::{
    fidelity, positive_part_projection, psd_tensor_power, DensityOp, HermitianOp, PSDOp,
};
use crate::{ExtReal, Error, Result};

/// A compression scheme: the keep-projection `S`, the dump vector `ψ` in
/// its range, and the block length.
#[derive(Debug, Clone)]
pub struct CompressionScheme {
    s: HermitianOp,
    psi: CVector,
    n: usize,
    rank: usize,
}

impl CompressionScheme {
    /// Validates `S² = S`, `‖ψ‖ = 1` and `Sψ = ψ` (all within `1e-10`).
    pub fn new(s: HermitianOp, psi: CVector, n: usize) -> Result<Self> {
        if psi.len() != s.dim() {
            return Err(Error::DimensionMismatch(psi.len(), s.dim()));
        }
        let m = s.matrix();
        if (m * m - m).norm() > 1e-10 {
            return Err(Error::InvalidInput("S is not a projection".into()));
        }
        if (psi.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput("psi is not a unit vector".into()));
        }
        if (m * &psi - &psi).norm() > 1e-10 {
            return Err(Error::InvalidInput("psi is not in the range of S".into()));
        }
        let rank = s.trace().round() as usize;
        Ok(CompressionScheme { s, psi, n, rank })
    }

    pub fn projection(&self) -> &HermitianOp {
        &self.s
    }

    pub fn psi(&self) -> &CVector {
        &self.psi
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    /// Dimension of the kept subspace.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Applies the compression channel `C(X) = SXS + |ψ⟩⟨ψ| Tr X(I-S)`.
    pub fn apply(&self, x: &HermitianOp) -> Result<HermitianOp> {
        if x.dim() != self.s.dim() {
            return Err(Error::DimensionMismatch(x.dim(), self.s.dim()));
        }
        let s = self.s.matrix();
        let kept = s * x.matrix() * s;
        let dumped = x.trace() - crate::linalg::trace_product_re(x.matrix(), s);
        let psi_proj = &self.psi * self.psi.adjoint();
        Ok(HermitianOp::wrap(kept + psi_proj.scale(dumped)))
    }

    /// Entanglement fidelity of a state on the coded space under the
    /// channel, from the Kraus closed form
    /// `F_e² = (Tr ρS)² + ⟨ψ|ρ(I-S)ρ|ψ⟩`.
    pub fn entanglement_fidelity(&self, rho: &DensityOp) -> Result<f64> {
        if rho.dim() != self.s.dim() {
            return Err(Error::DimensionMismatch(rho.dim(), self.s.dim()));
        }
        let s = self.s.matrix();
        let kept = crate::linalg::trace_product_re(rho.matrix(), s);
        let rho_psi = rho.matrix() * &self.psi;
        let projected = s * &rho_psi;
        let rejected = &rho_psi - projected;
        let cross = rho_psi.dotc(&rejected).re.max(0.0);
        Ok((kept * kept + cross).sqrt().min(1.0))
    }
}

/// Builds the scheme for the family `{ρ^{⊗n}}` at threshold `a`:
/// `S = {e^{-na} Σ_ρ ρ^{⊗n} - I > 0}`, with `ψ` the eigenvector of the
/// thresholded operator carrying its largest eigenvalue (a deterministic
/// choice inside the range of `S`).
pub fn build_scheme(states: &[DensityOp], a: f64, n: usize) -> Result<CompressionScheme> {
    if states.is_empty() {
        return Err(Error::EmptyInput("source state list"));
    }
    let dim_n = states[0].dim().pow(n as u32);
    crate::check_dim_cap(dim_n)?;
    let mut acc = CMatrix::zeros(dim_n, dim_n);
    for rho in states {
        if rho.dim() != states[0].dim() {
            return Err(Error::DimensionMismatch(rho.dim(), states[0].dim()));
        }
        acc += psd_tensor_power(rho, n)?.matrix();
    }
    let shifted =
        HermitianOp::wrap(acc.scale((-(n as f64) * a).exp()) - CMatrix::identity(dim_n, dim_n));
    let s = positive_part_projection(&shifted);
    if s.trace().round() < 1.0 {
        return Err(Error::DegenerateScheme);
    }
    // ψ: eigenvector with the largest eigenvalue of the thresholded operator
    let pairs = shifted.eigen();
    let psi = CVector::from_column_slice(pairs.vectors.column(0).as_slice());
    CompressionScheme::new(s, psi, n)
}

/// Entanglement fidelity and plain fidelity of `ρ^{⊗n}` under the scheme.
#[derive(Debug, Clone, Copy)]
pub struct SchemeFidelity {
    pub entanglement: f64,
    pub plain: f64,
}

/// `F_e(ρ^{⊗n}, C)` and `F(ρ^{⊗n}, C(ρ^{⊗n}))`, exact; `F_e ≤ F` always.
pub fn scheme_fidelity(scheme: &CompressionScheme, rho: &DensityOp) -> Result<SchemeFidelity> {
    let rho_n = DensityOp::new(psd_tensor_power(rho, scheme.block_length())?)?;
    let entanglement = scheme.entanglement_fidelity(&rho_n)?;
    let image = scheme.apply(rho_n.as_hermitian())?;
    let plain = fidelity(rho_n.as_psd(), &PSDOp::wrap(image.matrix().clone()))?;
    Ok(SchemeFidelity { entanglement, plain })
}

/// Compression rate `(1/n) log Tr S`, the log-dimension rate of the kept
/// subspace.
pub fn compression_rate(scheme: &CompressionScheme) -> f64 {
    (scheme.rank() as f64).ln() / scheme.block_length() as f64
}

/// Converse bound: any scheme sequence whose fidelity stays high must have
/// rate at least the largest Rényi entropy of the source family;
/// quantitatively the fidelity obeys
/// `limsup (1/n) log F̂ ≤ inf_{t>1} ((t-1)/t) [R - sup_ρ S_t(ρ)]`,
/// evaluated here with the supplied finite-`n` rates standing in for the
/// limsup (their maximum is used) over the given `t` grid.
pub fn converse_bound(rates: &[f64], states: &[DensityOp], t_grid: &[f64]) -> Result<ExtReal> {
    if rates.is_empty() {
        return Err(Error::EmptyInput("rate sequence"));
    }
    if states.is_empty() {
        return Err(Error::EmptyInput("source state list"));
    }
    for &t in t_grid {
        if !(t > 1.0) {
            return Err(Error::AlphaRange { alpha: t, range: "(1, +inf)" });
        }
    }
    let rate = rates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut best = f64::INFINITY;
    for &t in t_grid {
        let sup_entropy = states
            .iter()
            .map(|rho| crate::divergence::renyi_entropy(rho, t).expect("t > 1 is valid"))
            .fold(f64::NEG_INFINITY, f64::max);
        best = best.min((t - 1.0) / t * (rate - sup_entropy));
    }
    Ok(ExtReal::Finite(best))
}

/// Ensemble fidelity `Σ_x p(x) F_e(ρ_x, C)` for weighted sources on the
/// coded space.
pub fn ensemble_fidelity(
    sources: &[(f64, DensityOp)],
    scheme: &CompressionScheme,
) -> Result<f64> {
    if sources.is_empty() {
        return Err(Error::EmptyInput("source ensemble"));
    }
    let total: f64 = sources.iter().map(|(w, _)| w).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::BadWeights(format!("weights sum to {total}, expected 1")));
    }
    let mut acc = 0.0;
    for (w, rho) in sources {
        if *w < 0.0 {
            return Err(Error::BadWeights("negative weight".into()));
        }
        acc += w * scheme.entanglement_fidelity(rho)?;
    }
    Ok(acc)
}
