//! Complex dense linear algebra helpers shared by the operator layer.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Trace of a square complex matrix.
pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Real part of the trace (the trace of a Hermitian matrix is real).
pub fn trace_re(m: &CMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// Real part of `Tr(A B)` without forming the product.
pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..a.ncols() {
            let p = a[(i, k)] * b[(k, i)];
            acc += p.re;
        }
    }
    acc
}

/// `(M + M†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Max-entry deviation `max |M - M†|` relative to `max(1, max |M|)`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            scale = scale.max(m[(i, j)].norm());
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev / scale
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Eigen-pairs of a Hermitian matrix, eigenvalues sorted descending and the
/// eigenvector columns permuted to match.
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized first so that callers may pass products like
/// `σ^c ρ σ^c` that are Hermitian only up to rounding.
pub fn hermitian_eigen(m: &CMatrix) -> EigenPairs {
    let d = m.nrows();
    assert_eq!(d, m.ncols(), "hermitian_eigen needs a square matrix");
    let se = nalgebra::SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].partial_cmp(&se.eigenvalues[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(d, d);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &se.eigenvectors.column(i));
    }
    EigenPairs { values, vectors }
}

impl EigenPairs {
    /// `Σ f(λ_k) v_k v_k†` over all eigenvalues.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let d = self.values.len();
        let mut scaled = self.vectors.clone();
        for k in 0..d {
            let fv = cr(f(self.values[k]));
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= fv);
        }
        &scaled * self.vectors.adjoint()
    }

    /// `Σ f(λ_k) v_k v_k†` restricted to eigenvalues with `λ_k > threshold`.
    pub fn map_on_support(&self, threshold: f64, f: impl Fn(f64) -> f64) -> CMatrix {
        let d = self.values.len();
        let mut scaled = CMatrix::zeros(d, d);
        for k in 0..d {
            if self.values[k] > threshold {
                let fv = cr(f(self.values[k]));
                for i in 0..d {
                    scaled[(i, k)] = self.vectors[(i, k)] * fv;
                }
            }
        }
        &scaled * self.vectors.adjoint()
    }

    pub fn max_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Threshold separating the support from numerical zeros:
    /// `ZERO_THRESHOLD * max |λ_k|`.
    pub fn support_threshold(&self) -> f64 {
        let scale = self
            .values
            .iter()
            .fold(0.0f64, |acc, &v| acc.max(v.abs()));
        crate::ZERO_THRESHOLD * scale
    }
}

/// Eigenvalues grouped into near-degenerate clusters with their spectral
/// projectors. Two consecutive (sorted) eigenvalues land in the same cluster
/// when their gap is below `ZERO_THRESHOLD * max|λ|`.
pub struct GroupedEigen {
    pub values: Vec<f64>,
    pub projectors: Vec<CMatrix>,
}

pub fn grouped_eigen(m: &CMatrix) -> GroupedEigen {
    let pairs = hermitian_eigen(m);
    group_pairs(&pairs)
}

pub fn group_pairs(pairs: &EigenPairs) -> GroupedEigen {
    let d = pairs.values.len();
    let scale = pairs
        .values
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let gap = crate::ZERO_THRESHOLD * scale.max(f64::MIN_POSITIVE);
    let mut values = Vec::new();
    let mut projectors = Vec::new();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (pairs.values[end - 1] - pairs.values[end]).abs() < gap {
            end += 1;
        }
        let block = pairs.vectors.columns(start, end - start);
        projectors.push(block * block.adjoint());
        let mean = pairs.values[start..end].iter().sum::<f64>() / (end - start) as f64;
        values.push(mean);
        start = end;
    }
    GroupedEigen { values, projectors }
}
