//! # renyi-lab
//!
//! Numerics for the two quantum Rényi divergence families: the traditional
//! (Petz-type) divergence built from `Tr ρ^α σ^{1-α}` and the sandwiched
//! divergence built from `Tr (σ^{(1-α)/2α} ρ σ^{(1-α)/2α})^α`: together with
//! the machinery needed to exercise them:
//!
//! - dense Hermitian linear algebra with support-restricted matrix powers,
//!   spectral projections, tensor calculus and fidelities ([`operator`]);
//! - both divergence families, their α-limits (Umegaki, max-relative entropy)
//!   and quantitative two-sided envelopes around α = 1 ([`divergence`]);
//! - a randomized audit engine that checks the trace inequalities relating
//!   the two families on sampled operator ensembles ([`audit`]);
//! - composite quantum hypothesis testing with Neyman–Pearson tests on tensor
//!   powers, exact error pairs, Legendre-transform error exponents and
//!   strong-converse evaluation ([`stein`]);
//! - universal state compression built from the same Neyman–Pearson
//!   projections ([`compress`]);
//! - classical-quantum channels, α-Holevo quantities for both families, the
//!   Sibson decomposition, random-coding error bounds and compound-channel
//!   rate certificates ([`channel`]).
//!
//! Everything is exact dense linear algebra at desk scale: operators are
//! `dim × dim` complex matrices and tensor powers are formed explicitly, so
//! error probabilities, ranks and fidelities are computed without asymptotic
//! approximation. A configurable dimension cap (default 4096, override with
//! `RENYI_LAB_DIM_CAP`) guards tensor blow-up.
//!
//! All logarithms are natural.

// `!(x > 0.0)` style guards are deliberate: they reject NaN along with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

pub mod audit;
pub mod channel;
pub mod compress;
pub mod divergence;
pub mod extreal;
pub mod io;
pub mod linalg;
pub mod operator;
pub mod sample;
pub mod stein;

pub use extreal::ExtReal;
pub use operator::{DensityOp, HermitianOp, PSDOp, SpectralDecomposition};

/// Errors produced by operator construction, divergence evaluation and the
/// simulation front ends.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("operator is not Hermitian (relative deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("operator is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("operator is zero but a non-zero operator is required")]
    ZeroOperator,

    #[error("trace is not 1 (got {0})")]
    NotUnitTrace(f64),

    #[error("dimension {requested} exceeds the tensor cap {cap}; set RENYI_LAB_DIM_CAP to raise it")]
    DimCapExceeded { requested: usize, cap: usize },

    #[error("undefined input: {0}")]
    UndefinedInput(String),

    #[error("alpha = {alpha} outside the valid range {range}")]
    AlphaRange { alpha: f64, range: &'static str },

    #[error("support of rho is not contained in the support of sigma")]
    SupportViolation,

    #[error("Kraus operators are not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("compression scheme is degenerate: the Neyman-Pearson projection has empty range")]
    DegenerateScheme,

    #[error("symbol {0:?} is not in the channel alphabet")]
    UnknownSymbol(String),

    #[error("invalid weights: {0}")]
    BadWeights(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default cap on the dimension of tensor products.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Relative threshold below which eigenvalues are treated as zero when
/// determining supports and grouping near-degenerate spectra.
pub const ZERO_THRESHOLD: f64 = 1e-10;

static DIM_CAP: AtomicUsize = AtomicUsize::new(0);

/// Current cap on tensor-product dimensions.
///
/// Initialized lazily from the `RENYI_LAB_DIM_CAP` environment variable,
/// falling back to [`DEFAULT_DIM_CAP`].
pub fn dim_cap() -> usize {
    let v = DIM_CAP.load(Ordering::Relaxed);
    if v != 0 {
        return v;
    }
    let v = std::env::var("RENYI_LAB_DIM_CAP")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_DIM_CAP);
    DIM_CAP.store(v, Ordering::Relaxed);
    v
}

/// Override the tensor dimension cap for this process.
pub fn set_dim_cap(cap: usize) {
    DIM_CAP.store(cap.max(1), Ordering::Relaxed);
}

pub(crate) fn check_dim_cap(requested: usize) -> Result<()> {
    let cap = dim_cap();
    if requested > cap {
        Err(Error::DimCapExceeded { requested, cap })
    } else {
        Ok(())
    }
}
