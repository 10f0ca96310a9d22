//! Random operator ensembles for the audit engine and the simulators.
//!
//! States are drawn as `ρ = GG†/Tr GG†` with `G` a `d × k` standard complex
//! Gaussian matrix; `k` tunes the typical rank. Sampling is deterministic
//! under a fixed seed, with one ChaCha substream per sample index so that
//! samples can be evaluated in any order (or in parallel) without changing
//! the results.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, CVector};
use crate::operator::{DensityOp, PSDOp};

/// Parameters of a randomized operator ensemble.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    /// In `[0,1]`: 0 samples full-rank states, 1 samples (near-)pure states.
    pub purity_bias: f64,
}

impl Ensemble {
    pub fn new(dim: usize, count: usize, seed: u64) -> Self {
        Ensemble { dim, count, seed, purity_bias: 0.0 }
    }

    /// Gaussian factor width implied by the purity bias.
    pub fn gaussian_columns(&self) -> usize {
        let k = ((1.0 - self.purity_bias) * self.dim as f64).ceil() as usize;
        k.clamp(1, self.dim)
    }

    /// Deterministic RNG for one sample of this ensemble.
    pub fn substream(&self, index: u64) -> ChaCha8Rng {
        substream(self.seed, index)
    }
}

/// ChaCha substream `index` of a seed; distinct indices are independent.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian_c64(rng: &mut impl Rng) -> Complex<f64> {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A `d × k` standard complex Gaussian matrix.
pub fn gaussian_matrix(rng: &mut impl Rng, d: usize, k: usize) -> CMatrix {
    CMatrix::from_fn(d, k, |_, _| gaussian_c64(rng))
}

/// A random non-zero positive semidefinite operator `GG†` (unnormalized).
pub fn psd(rng: &mut impl Rng, dim: usize, k: usize) -> PSDOp {
    loop {
        let g = gaussian_matrix(rng, dim, k.clamp(1, dim));
        let m = &g * g.adjoint();
        if crate::linalg::trace_re(&m) > 1e-12 {
            return PSDOp::wrap(m);
        }
    }
}

/// A random density operator `GG†/Tr GG†`.
pub fn density(rng: &mut impl Rng, dim: usize, k: usize) -> DensityOp {
    DensityOp::normalized(&psd(rng, dim, k))
}

/// A Haar-ish random unit vector (Gaussian direction).
pub fn unit_vector(rng: &mut impl Rng, dim: usize) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| gaussian_c64(rng));
        let n = v.norm();
        if n > 1e-9 {
            return v.unscale(n);
        }
    }
}

/// A random probability vector from the flat Dirichlet distribution.
pub fn simplex_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let mut w: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
        let total: f64 = w.iter().sum();
        if total > 1e-12 {
            w.iter_mut().for_each(|x| *x /= total);
            if w.iter().all(|&x| x > 1e-12) {
                return w;
            }
        }
    }
}

/// Random states for every symbol of an alphabet (a random cq channel).
pub fn channel_outputs(rng: &mut impl Rng, alphabet: usize, dim: usize, k: usize) -> Vec<DensityOp> {
    (0..alphabet).map(|_| density(rng, dim, k)).collect()
}
