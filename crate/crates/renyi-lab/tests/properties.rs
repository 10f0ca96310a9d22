//! Property-based invariants over randomly generated operators.

use proptest::prelude::*;

use renyi_lab::divergence::{d_renyi, DivergenceFamily};
use renyi_lab::io::OperatorJson;
use renyi_lab::linalg::{c, hermitize, trace_re, CMatrix};
use renyi_lab::operator::{
    fidelity, partial_trace, support_power, tensor, trace_norm, DensityOp, HermitianOp, PSDOp,
    TracedFactor,
};

fn psd_from_entries(entries: &[f64], dim: usize) -> PSDOp {
    let g = CMatrix::from_fn(dim, dim, |i, j| {
        c(entries[2 * (i * dim + j)], entries[2 * (i * dim + j) + 1])
    });
    PSDOp::from_matrix(&g * g.adjoint()).expect("Gram matrices are PSD")
}

fn density_from_entries(entries: &[f64], dim: usize) -> DensityOp {
    DensityOp::normalized(&psd_from_entries(entries, dim))
}

fn entry_vec(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_power_group_law(entries in entry_vec(3), x in -1.0f64..2.0, y in -1.0f64..2.0) {
        let a = psd_from_entries(&entries, 3);
        let lhs = support_power(&a, x).matrix() * support_power(&a, y).matrix();
        let rhs = support_power(&a, x + y);
        prop_assert!((lhs - rhs.matrix()).norm() < 1e-8);
    }

    #[test]
    fn tensor_then_partial_trace_recovers_factors(ea in entry_vec(2), eb in entry_vec(3)) {
        let a = psd_from_entries(&ea, 2);
        let b = psd_from_entries(&eb, 3);
        let t = tensor(a.as_hermitian(), b.as_hermitian()).unwrap();
        let left = partial_trace(&t, (2, 3), TracedFactor::Second).unwrap();
        let scaled = a.matrix().clone().scale(b.trace());
        prop_assert!((left.matrix() - &scaled).norm() < 1e-9 * (1.0 + scaled.norm()));
        prop_assert!((t.trace() - a.trace() * b.trace()).abs() < 1e-9 * (1.0 + t.trace().abs()));
    }

    #[test]
    fn trace_norm_triangle_and_scaling(ea in entry_vec(2), eb in entry_vec(2), s in -3.0f64..3.0) {
        let x = hermitize(&CMatrix::from_fn(2, 2, |i, j| c(ea[2*(i*2+j)], ea[2*(i*2+j)+1])));
        let y = hermitize(&CMatrix::from_fn(2, 2, |i, j| c(eb[2*(i*2+j)], eb[2*(i*2+j)+1])));
        let x = HermitianOp::new(x).unwrap();
        let y = HermitianOp::new(y).unwrap();
        let sum = x.add(&y).unwrap();
        prop_assert!(trace_norm(&sum) <= trace_norm(&x) + trace_norm(&y) + 1e-10);
        prop_assert!((trace_norm(&x.scale(s)) - s.abs() * trace_norm(&x)).abs() < 1e-10);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded_on_states(ea in entry_vec(3), eb in entry_vec(3)) {
        let a = density_from_entries(&ea, 3);
        let b = density_from_entries(&eb, 3);
        let f_ab = fidelity(&a, &b).unwrap();
        let f_ba = fidelity(&b, &a).unwrap();
        prop_assert!((f_ab - f_ba).abs() < 1e-9);
        prop_assert!((-1e-10..=1.0 + 1e-9).contains(&f_ab));
    }

    #[test]
    fn divergences_nonnegative_and_ordered(ea in entry_vec(2), eb in entry_vec(2), alpha in 0.1f64..3.0) {
        prop_assume!((alpha - 1.0).abs() > 1e-3);
        let rho = density_from_entries(&ea, 2);
        let sigma = density_from_entries(&eb, 2);
        let d_old = d_renyi(&rho, &sigma, alpha, DivergenceFamily::Old).unwrap().finite().unwrap();
        let d_new = d_renyi(&rho, &sigma, alpha, DivergenceFamily::New).unwrap().finite().unwrap();
        prop_assert!(d_old >= -1e-9);
        prop_assert!(d_new >= -1e-9);
        prop_assert!(d_old >= d_new - 1e-8);
    }

    #[test]
    fn operator_json_roundtrip(entries in entry_vec(3)) {
        let a = psd_from_entries(&entries, 3);
        let json = OperatorJson::from_matrix(a.matrix());
        let text = serde_json::to_string(&json).unwrap();
        let back: OperatorJson = serde_json::from_str(&text).unwrap();
        let restored = back.to_psd().unwrap();
        prop_assert!((restored.matrix() - a.matrix()).norm() < 1e-12 * (1.0 + a.matrix().norm()));
        prop_assert!((trace_re(restored.matrix()) - a.trace()).abs() < 1e-12 * (1.0 + a.trace()));
    }
}
