use extremal_core::bounds::{
    bound_altinisik, bound_corollary, bound_mattila, bound_theorem_main, c_exact, c_upper_closed_form,
};
use extremal_core::exact::verify_inner_sum_identity;
use extremal_core::hp::{eigenvalues_sym, lambda_max_psd, lambda_max_sym, RealSymMatrix};
use extremal_core::matrices::{build_z, frobenius_sq_closed_form, frobenius_sq_direct, frobenius_sq_recurrence};
use extremal_core::oracle::{kn_size, TriBitMatrix};
use extremal_core::{ExactInt, ExactRational, HpReal, IntSymMatrix, Precision};
use proptest::prelude::*;

const P: Precision = Precision::bits(192);

fn sym_matrix() -> impl Strategy<Value = IntSymMatrix> {
    (1usize..=5).prop_flat_map(|n| {
        proptest::collection::vec(-9i64..=9, n * n).prop_map(move |v| {
            IntSymMatrix::from_upper_fn(n, |i, j| ExactInt::from(v[(i - 1) * n + (j - 1)])).unwrap()
        })
    })
}

fn tri_bits() -> impl Strategy<Value = TriBitMatrix> {
    (1usize..=8).prop_flat_map(|n| (0..kn_size(n)).prop_map(move |w| TriBitMatrix::new(n, w).unwrap()))
}

fn near(a: &HpReal, b: &HpReal, rel: f64) -> bool {
    let scale = a.abs().max(&b.abs()).max(&HpReal::one(a.precision()));
    ((a - b).abs() / scale).to_f64() <= rel
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_is_permutation_invariant(m in sym_matrix(), seed in any::<u64>()) {
        let n = m.dim();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for k in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (s >> 33) as usize % (k + 1));
        }
        let a = eigenvalues_sym(&m, P, &P.default_tolerance()).unwrap();
        let b = eigenvalues_sym(&m.permuted(&perm), P, &P.default_tolerance()).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!(near(x, y, 1e-40));
        }
    }

    #[test]
    fn eigenvalues_reproduce_trace_and_determinant(m in sym_matrix()) {
        let eig = eigenvalues_sym(&m, P, &P.default_tolerance()).unwrap();
        let sum = eig.eigenvalues.iter().fold(HpReal::zero(P), |a, b| &a + b);
        let prod = eig.eigenvalues.iter().fold(HpReal::one(P), |a, b| &a * b);
        prop_assert!(near(&sum, &HpReal::from_int(&m.trace(), P), 1e-40));
        prop_assert!(near(&prod, &HpReal::from_int(&m.determinant(), P), 1e-35));
    }

    #[test]
    fn power_iteration_matches_jacobi_on_gram_matrices(x in tri_bits()) {
        let g = x.gram();
        let jac = eigenvalues_sym(&g, P, &P.default_tolerance()).unwrap();
        let pow = lambda_max_psd(&RealSymMatrix::from_int(&g, P), &P.default_tolerance()).unwrap();
        prop_assert!(near(&pow, jac.max(), 1e-40));
    }

    #[test]
    fn gram_spectrum_lies_between_the_extremal_constants(x in tri_bits()) {
        let n = x.dim();
        let eig = eigenvalues_sym(&x.gram(), P, &P.default_tolerance()).unwrap();
        let c = c_exact(n, 30).unwrap().value.with_precision(P);
        let upper = c_upper_closed_form(n, P).unwrap();
        let slack = HpReal::from_f64(1e-40, P);
        let one = HpReal::one(P);
        prop_assert!(eig.min() >= &(&c * &(&one - &slack)));
        prop_assert!(eig.max() <= &(&upper * &(&one + &slack)));
        // XXᵀ and XᵀX share their spectrum
        let t = eigenvalues_sym(&x.gram_transposed(), P, &P.default_tolerance()).unwrap();
        for (a, b) in eig.eigenvalues.iter().zip(&t.eigenvalues) {
            prop_assert!(near(a, b, 1e-40));
        }
    }

    #[test]
    fn lower_bounds_never_exceed_c(n in 1usize..=40) {
        let c = c_exact(n, 40).unwrap().value.with_precision(P);
        let main = bound_theorem_main(n, P).unwrap();
        prop_assert!(main <= c);
        prop_assert!(bound_altinisik(n, P).unwrap() <= c);
        prop_assert!(bound_mattila(n, P).unwrap() <= c);
        prop_assert_eq!(bound_corollary(n, P).unwrap(), main);
    }

    #[test]
    fn inner_sum_closed_form(i in 2i64..=120, d in 0i64..=118) {
        let j = 2 + d % (i - 1);
        prop_assert!(verify_inner_sum_identity(i, j).unwrap());
    }

    #[test]
    fn frobenius_closed_form_is_exact(n in 1usize..=120) {
        let direct = frobenius_sq_direct(n).unwrap();
        prop_assert_eq!(ExactRational::from_integer(direct), frobenius_sq_closed_form(n).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn c_is_stable_under_precision_doubling(n in 1usize..=25) {
        let lo = c_exact(n, 25).unwrap();
        let hi = c_exact(n, 60).unwrap();
        prop_assert!(hi.precision >= lo.precision);
        prop_assert!(near(&lo.value.with_precision(P), &hi.value.with_precision(P), 1e-25));
    }
}

#[test]
fn frobenius_recurrence_matches_direct_sum() {
    let rec = frobenius_sq_recurrence(60);
    for (k, v) in rec.iter().enumerate() {
        assert_eq!(v, &frobenius_sq_direct(k + 1).unwrap(), "n = {}", k + 1);
    }
}

#[test]
fn z_is_unimodular_and_reciprocal_to_c() {
    for n in 1..=12 {
        let z = build_z(n).unwrap();
        assert_eq!(z.determinant(), ExactInt::from(1), "n = {n}");
        let lam = lambda_max_sym(&z, P, &P.default_tolerance()).unwrap();
        let c = c_exact(n, 40).unwrap().value.with_precision(P);
        assert!(near(&(&lam * &c), &HpReal::one(P), 1e-40));
    }
}
