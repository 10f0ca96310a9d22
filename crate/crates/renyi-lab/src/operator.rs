//! Operator domain types and the dense operator calculus.
//!
//! [`HermitianOp`] is the base type: a validated `dim × dim` complex
//! Hermitian matrix. [`PSDOp`] refines it to non-zero positive semidefinite
//! operators and [`DensityOp`] further to unit trace. Powers of positive
//! semidefinite operators are always taken on the support only, so negative
//! and zero exponents are well defined.

use std::ops::Deref;

use crate::linalg::{
    self, cr, hermitian_eigen, hermitize, kron, trace_product_re, trace_re, CMatrix, CVector,
    EigenPairs,
};
use crate::{check_dim_cap, Error, Result, ZERO_THRESHOLD};

const HERMITICITY_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// A validated complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    dim: usize,
    mat: CMatrix,
}

impl HermitianOp {
    /// Validates squareness and Hermiticity (relative tolerance `1e-12`),
    /// then stores the symmetrized matrix.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare(mat.nrows(), mat.ncols()));
        }
        if mat.nrows() == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        let dev = linalg::hermiticity_deviation(&mat);
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self::wrap(hermitize(&mat)))
    }

    /// Wraps a matrix that is Hermitian by construction.
    pub(crate) fn wrap(mat: CMatrix) -> Self {
        Self { dim: mat.nrows(), mat }
    }

    pub fn zero(dim: usize) -> Self {
        Self::wrap(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::wrap(CMatrix::identity(dim, dim))
    }

    /// Diagonal operator with the given real entries.
    pub fn from_diag(entries: &[f64]) -> Self {
        Self::wrap(CMatrix::from_diagonal(&CVector::from_iterator(
            entries.len(),
            entries.iter().map(|&x| cr(x)),
        )))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        trace_re(&self.mat)
    }

    /// Largest eigenvalue magnitude (operator norm).
    pub fn operator_norm(&self) -> f64 {
        let pairs = hermitian_eigen(&self.mat);
        pairs.values.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Largest eigenvalue.
    pub fn max_eigenvalue(&self) -> f64 {
        hermitian_eigen(&self.mat).max_value()
    }

    pub fn eigen(&self) -> EigenPairs {
        hermitian_eigen(&self.mat)
    }

    pub fn scale(&self, s: f64) -> HermitianOp {
        Self::wrap(self.mat.clone().scale(s))
    }

    pub fn add(&self, other: &HermitianOp) -> Result<HermitianOp> {
        self.check_same_dim(other)?;
        Ok(Self::wrap(&self.mat + &other.mat))
    }

    pub fn sub(&self, other: &HermitianOp) -> Result<HermitianOp> {
        self.check_same_dim(other)?;
        Ok(Self::wrap(&self.mat - &other.mat))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.mat.iter().all(|z| z.norm() <= tol)
    }

    pub(crate) fn check_same_dim(&self, other: &HermitianOp) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }
}

/// A non-zero positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PSDOp {
    op: HermitianOp,
}

impl PSDOp {
    /// Validates positivity: every eigenvalue must be `≥ -1e-10·λ_max`, and
    /// the operator must be non-zero.
    pub fn new(op: HermitianOp) -> Result<Self> {
        let pairs = op.eigen();
        let max = pairs.max_value();
        if max <= 0.0 {
            if pairs.values.iter().all(|&v| v.abs() < 1e-300) {
                return Err(Error::ZeroOperator);
            }
            return Err(Error::NotPsd(*pairs.values.last().unwrap()));
        }
        let min = *pairs.values.last().unwrap();
        if min < -PSD_TOL * max {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { op })
    }

    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        Self::new(HermitianOp::new(mat)?)
    }

    pub fn from_diag(entries: &[f64]) -> Result<Self> {
        Self::new(HermitianOp::from_diag(entries))
    }

    pub fn identity(dim: usize) -> Self {
        Self { op: HermitianOp::identity(dim) }
    }

    /// Rank-1 projector onto the given (non-zero) vector.
    pub fn projector(v: &CVector) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::ZeroOperator);
        }
        let u = v.clone().unscale(n);
        Ok(Self { op: HermitianOp::wrap(&u * u.adjoint()) })
    }

    pub(crate) fn wrap(mat: CMatrix) -> Self {
        Self { op: HermitianOp::wrap(mat) }
    }

    pub fn as_hermitian(&self) -> &HermitianOp {
        &self.op
    }

    pub fn into_hermitian(self) -> HermitianOp {
        self.op
    }
}

impl Deref for PSDOp {
    type Target = HermitianOp;
    fn deref(&self) -> &HermitianOp {
        &self.op
    }
}

/// A density operator: positive semidefinite with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp {
    psd: PSDOp,
}

impl DensityOp {
    pub fn new(psd: PSDOp) -> Result<Self> {
        let tr = psd.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace(tr));
        }
        Ok(Self { psd })
    }

    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        Self::new(PSDOp::from_matrix(mat)?)
    }

    pub fn from_diag(entries: &[f64]) -> Result<Self> {
        Self::new(PSDOp::from_diag(entries)?)
    }

    /// Normalizes a PSD operator to unit trace.
    pub fn normalized(psd: &PSDOp) -> Self {
        let tr = psd.trace();
        Self { psd: PSDOp::wrap(psd.matrix().clone().unscale(tr)) }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { psd: PSDOp::wrap(CMatrix::identity(dim, dim).unscale(dim as f64)) }
    }

    /// Pure state `|v⟩⟨v|` from a (non-zero) vector, normalized.
    pub fn pure(v: &CVector) -> Result<Self> {
        Ok(Self { psd: PSDOp::projector(v)? })
    }

    pub fn as_psd(&self) -> &PSDOp {
        &self.psd
    }

    pub fn into_psd(self) -> PSDOp {
        self.psd
    }
}

impl Deref for DensityOp {
    type Target = PSDOp;
    fn deref(&self) -> &PSDOp {
        &self.psd
    }
}

/// Spectral decomposition with near-degenerate eigenvalues grouped.
///
/// Projectors are orthogonal idempotents summing to the identity; the
/// eigenvalue list is descending and includes zero/negative clusters.
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub projectors: Vec<HermitianOp>,
}

impl SpectralDecomposition {
    pub fn of(op: &HermitianOp) -> Self {
        let g = linalg::grouped_eigen(op.matrix());
        SpectralDecomposition {
            eigenvalues: g.values,
            projectors: g.projectors.into_iter().map(HermitianOp::wrap).collect(),
        }
    }

    /// Reconstruction `Σ λ_i P_i`.
    pub fn reconstruct(&self) -> HermitianOp {
        let dim = self.projectors[0].dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for (lam, p) in self.eigenvalues.iter().zip(&self.projectors) {
            acc += p.matrix().clone().scale(*lam);
        }
        HermitianOp::wrap(acc)
    }
}

/// `A^α` on the support of `A`: `Σ λ_i^α P_i` over eigenvalues
/// `λ_i > ZERO_THRESHOLD · λ_max`. `α = 0` yields the support projection.
/// Negative `α` is valid because powers act on the support only.
pub fn support_power(a: &PSDOp, alpha: f64) -> PSDOp {
    let pairs = a.eigen();
    PSDOp::wrap(pairs.map_on_support(pairs.support_threshold(), |x| x.powf(alpha)))
}

/// The support projection `A^0`.
pub fn support_projection(a: &PSDOp) -> HermitianOp {
    HermitianOp::wrap(support_power(a, 0.0).into_hermitian().mat)
}

/// Rank of the support (number of eigenvalues above the zero threshold).
pub fn support_rank(a: &PSDOp) -> usize {
    let pairs = a.eigen();
    let thr = pairs.support_threshold();
    pairs.values.iter().filter(|&&v| v > thr).count()
}

/// `{X > 0}`: the spectral projection of `X` onto the positive half-line.
///
/// Idempotent, commutes with `X`, and `Tr X{X>0} = Tr X₊`.
pub fn positive_part_projection(x: &HermitianOp) -> HermitianOp {
    let pairs = x.eigen();
    let scale = pairs.values.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let thr = ZERO_THRESHOLD * scale;
    HermitianOp::wrap(pairs.map_on_support(thr, |_| 1.0))
}

/// Trace norm `‖X‖₁ = Tr |X|`, the sum of absolute eigenvalues.
pub fn trace_norm(x: &HermitianOp) -> f64 {
    x.eigen().values.iter().map(|v| v.abs()).sum()
}

/// Trace distance between operators of equal dimension, `‖X - Y‖₁`.
pub fn trace_distance(x: &HermitianOp, y: &HermitianOp) -> Result<f64> {
    Ok(trace_norm(&x.sub(y)?))
}

/// Kronecker product. Errors when the result dimension exceeds the cap.
pub fn tensor(a: &HermitianOp, b: &HermitianOp) -> Result<HermitianOp> {
    check_dim_cap(a.dim() * b.dim())?;
    Ok(HermitianOp::wrap(kron(a.matrix(), b.matrix())))
}

/// `A^{⊗n}` for `n ≥ 1`.
pub fn tensor_power(a: &HermitianOp, n: usize) -> Result<HermitianOp> {
    if n == 0 {
        return Err(Error::InvalidInput("tensor power needs n >= 1".into()));
    }
    let mut dim = a.dim();
    for _ in 1..n {
        dim = dim
            .checked_mul(a.dim())
            .ok_or(Error::DimCapExceeded { requested: usize::MAX, cap: crate::dim_cap() })?;
    }
    check_dim_cap(dim)?;
    let mut acc = a.matrix().clone();
    for _ in 1..n {
        acc = kron(&acc, a.matrix());
    }
    Ok(HermitianOp::wrap(acc))
}

pub fn psd_tensor_power(a: &PSDOp, n: usize) -> Result<PSDOp> {
    Ok(PSDOp::wrap(tensor_power(a.as_hermitian(), n)?.mat))
}

/// Which tensor factor [`partial_trace`] traces out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TracedFactor {
    /// Trace out the first (left) factor, keeping the second.
    First,
    /// Trace out the second (right) factor, keeping the first.
    Second,
}

/// Partial trace of an operator on a bipartite space of dimensions
/// `(d_a, d_b)`. The overall trace is preserved.
pub fn partial_trace(
    x: &HermitianOp,
    dims: (usize, usize),
    traced: TracedFactor,
) -> Result<HermitianOp> {
    let (da, db) = dims;
    if da * db != x.dim() {
        return Err(Error::DimensionMismatch(da * db, x.dim()));
    }
    let m = x.matrix();
    let out = match traced {
        TracedFactor::First => {
            let mut y = CMatrix::zeros(db, db);
            for b in 0..db {
                for b2 in 0..db {
                    let mut acc = cr(0.0);
                    for a in 0..da {
                        acc += m[(a * db + b, a * db + b2)];
                    }
                    y[(b, b2)] = acc;
                }
            }
            y
        }
        TracedFactor::Second => {
            let mut y = CMatrix::zeros(da, da);
            for a in 0..da {
                for a2 in 0..da {
                    let mut acc = cr(0.0);
                    for b in 0..db {
                        acc += m[(a * db + b, a2 * db + b)];
                    }
                    y[(a, a2)] = acc;
                }
            }
            y
        }
    };
    Ok(HermitianOp::wrap(out))
}

/// Fidelity `F(A, B) = Tr (A^{1/2} B A^{1/2})^{1/2}` of positive
/// semidefinite operators. Symmetric on states, and `F(ρ, ρ) = 1` for
/// density operators.
pub fn fidelity(a: &PSDOp, b: &PSDOp) -> Result<f64> {
    a.check_same_dim(b)?;
    let sa = support_power(a, 0.5);
    let inner = sa.matrix() * b.matrix() * sa.matrix();
    let pairs = hermitian_eigen(&inner);
    Ok(pairs.values.iter().filter(|&&v| v > 0.0).map(|v| v.sqrt()).sum())
}

/// Entanglement fidelity of a state under the CPTP map given by Kraus
/// operators, via the canonical purification `|ψ_ρ⟩ = Σ √λ_i |e_i⟩|e_i⟩` in
/// the eigenbasis of `ρ`. The value is purification independent and equals
/// `√(Σ_k |Tr(ρ K_k)|²)`.
pub fn entanglement_fidelity(rho: &DensityOp, kraus: &[CMatrix]) -> Result<f64> {
    let d = rho.dim();
    if kraus.is_empty() {
        return Err(Error::EmptyInput("Kraus operator list"));
    }
    let mut sum = CMatrix::zeros(d, d);
    for k in kraus {
        if k.nrows() != d || k.ncols() != d {
            return Err(Error::DimensionMismatch(k.nrows(), d));
        }
        sum += k.adjoint() * k;
    }
    let dev = (&sum - CMatrix::identity(d, d)).norm();
    if dev > 1e-10 * (d as f64) {
        return Err(Error::NotTracePreserving(dev));
    }

    // |ψ_ρ⟩ = Σ √λ_i |e_i⟩ ⊗ |e_i⟩
    let pairs = rho.eigen();
    let mut psi = CVector::zeros(d * d);
    for i in 0..d {
        let lam = pairs.values[i].max(0.0).sqrt();
        for a in 0..d {
            for b in 0..d {
                psi[a * d + b] += pairs.vectors[(a, i)] * pairs.vectors[(b, i)] * cr(lam);
            }
        }
    }

    // F(|ψ⟩⟨ψ|, (id ⊗ Φ)|ψ⟩⟨ψ|)² = Σ_k |⟨ψ|(I ⊗ K_k)|ψ⟩|²
    let id = CMatrix::identity(d, d);
    let mut total = 0.0;
    for k in kraus {
        let lifted = kron(&id, k);
        let image = &lifted * &psi;
        let amp = psi.dotc(&image);
        total += amp.norm_sqr();
    }
    Ok(total.sqrt())
}

/// Whether `supp ρ ⊆ supp σ`, decided by `Tr((I - σ⁰) ρ) ≤ tol · Tr ρ`.
pub fn support_contained(rho: &PSDOp, sigma: &PSDOp) -> bool {
    let proj = support_projection(sigma);
    let d = rho.dim();
    let complement = CMatrix::identity(d, d) - proj.matrix();
    let leak = trace_product_re(&complement, rho.matrix());
    leak <= 1e-9 * rho.trace().max(f64::MIN_POSITIVE)
}
