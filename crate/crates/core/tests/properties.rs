mod common;

use boolsdr::extract::{extract_boolean, extract_spin, Tolerances};
use boolsdr::matrix::SymMatrix;
use boolsdr::problem::{augment, boolean_to_spin, spin_to_boolean, BooleanQpInstance};
use boolsdr::relax::{restore_unit_diagonal, PenaltyParams};
use boolsdr::sdp::eig_sym;
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sym(order: usize, range: f64) -> impl Strategy<Value = SymMatrix> {
    prop::collection::vec(-range..range, order * order)
        .prop_map(move |v| SymMatrix::from_lower_fn(order, |i, j| v[i * order + j]))
}

fn psd(order: usize) -> impl Strategy<Value = SymMatrix> {
    prop::collection::vec(-3.0..3.0f64, order * order).prop_map(move |g| {
        SymMatrix::from_lower_fn(order, |i, j| {
            (0..order)
                .map(|k| g[i * order + k] * g[j * order + k])
                .sum()
        })
    })
}

fn instance_and_point() -> impl Strategy<Value = (BooleanQpInstance, Vec<u8>)> {
    (1usize..=8, 1usize..=6).prop_flat_map(|(n, m)| {
        (
            sym(n, 5.0),
            prop::collection::vec(-5.0..5.0f64, n),
            prop::collection::vec(-5.0..5.0f64, m * n),
            prop::collection::vec(-10.0..10.0f64, m),
            0.1..10.0f64,
            prop::collection::vec(0u8..=1, n),
        )
            .prop_map(move |(c, d, a, b, mu, x)| {
                (BooleanQpInstance::new(c, d, m, a, b, mu).unwrap(), x)
            })
    })
}

fn spins(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop::bool::ANY, len)
        .prop_map(|v| v.into_iter().map(|b| if b { 1.0 } else { -1.0 }).collect())
}

proptest! {
    #[test]
    fn homogenized_and_spin_forms_agree((inst, x) in instance_and_point()) {
        homogenization_identity(&inst, &x).map_err(TestCaseError::fail)?;
        spin_identity(&inst, &x).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn boolean_spin_round_trip(x in prop::collection::vec(0u8..=1, 0..40)) {
        let z = boolean_to_spin(&x).unwrap();
        prop_assert!(z.iter().zip(&x).all(|(&z, &x)| i16::from(z) == 2 * i16::from(x) - 1));
        prop_assert_eq!(spin_to_boolean(&z).unwrap(), x);
    }

    #[test]
    fn psd_projection_idempotent_and_nonexpansive(
        (m1, m2) in (1usize..=7).prop_flat_map(|n| (sym(n, 10.0), sym(n, 10.0)))
    ) {
        projection_properties(&m1, &m2).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn psd_inputs_are_fixed_points_of_projection(x in (1usize..=7).prop_flat_map(psd)) {
        let p = boolsdr::sdp::project_psd(&x).unwrap();
        prop_assert!(p.distance(&x) <= 1e-8 * (1.0 + x.frobenius_norm()));
    }

    #[test]
    fn spin_feasible_energy_is_bounded(m in (2usize..=9).prop_flat_map(|n| sym(n, 5.0))) {
        energy_bound(&unit_diagonal_psd(&m), false).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn rank_one_spin_lifts_attain_the_energy_bound(z in (2usize..=12).prop_flat_map(spins)) {
        energy_bound(&SymMatrix::outer(&z), true).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn eigen_penalty_is_nonnegative_and_vanishes_on_binary_spectra(
        k in 0usize..8,
        fractions in prop::collection::vec(0.0..=1.0f64, 1..=8),
        snapped in prop::bool::ANY,
        seed in any::<u64>(),
    ) {
        let h = (k + 1) as f64;
        let v: Vec<f64> = fractions
            .iter()
            .map(|&f| if snapped { h * f.round() } else { h * f })
            .collect();
        let x = with_spectrum(&mut ChaCha8Rng::seed_from_u64(seed), &v);
        penalty_nonnegativity(&x, &v, h, snapped).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn psd_inner_product_inequality((a, b) in (1usize..=7).prop_flat_map(|n| (psd(n), psd(n)))) {
        inner_product_inequality(&a, &b).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn kbe_objective_expands_to_penalized_form(
        (q, prev, x) in (1usize..=7).prop_flat_map(|n| (sym(n, 10.0), psd(n), psd(n))),
        lambda in 1e-6..1.0f64,
        k in 0usize..6,
    ) {
        let n = q.order().saturating_sub(1).max(k);
        let params = PenaltyParams::new(n, Some(k), lambda, 1e-6).unwrap();
        kbe_objective_identity(&q, &prev, &x, &params).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn boolean_extraction_round_trip(x in prop::collection::vec(0u8..=1, 1..=12)) {
        let r = extract_boolean(&SymMatrix::outer(&augment(&x)), &Tolerances::default()).unwrap();
        prop_assert!(r.rank1 && r.certified);
        prop_assert_eq!(r.binarity_defect, 0.0);
        prop_assert_eq!(r.rounded, Some(x));
    }

    #[test]
    fn spin_extraction_round_trip_and_sign_invariance(z in (2usize..=12).prop_flat_map(spins)) {
        let tol = Tolerances::default();
        let r = extract_spin(&SymMatrix::outer(&z), &tol).unwrap();
        let want: Vec<u8> = z[1..].iter().map(|&v| u8::from(v * z[0] > 0.0)).collect();
        prop_assert!(r.rank1 && r.certified);
        prop_assert_eq!(r.rounded.as_ref(), Some(&want));
        let neg: Vec<f64> = z.iter().map(|v| -v).collect();
        prop_assert_eq!(extract_spin(&SymMatrix::outer(&neg), &tol).unwrap(), r);
    }

    #[test]
    fn certified_extraction_reproduces_the_matrix(
        (x, noise) in (1usize..=8).prop_flat_map(|n| {
            (prop::collection::vec(0u8..=1, n), sym(n + 1, 1.0))
        }),
        eps in 0.0..2e-3f64,
    ) {
        let tol = Tolerances::default();
        let mut m = SymMatrix::outer(&augment(&x));
        m.axpy(eps, &noise);
        let r = extract_boolean(&m, &tol).unwrap();
        if let (true, Some(rounded)) = (r.rank1, &r.rounded) {
            let lifted = SymMatrix::outer(&augment(rounded));
            prop_assert!(lifted.distance(&m) <= 10.0 * tol.binarity);
        }
    }

    #[test]
    fn unit_diagonal_restoration_stays_psd(m in (2usize..=8).prop_flat_map(psd)) {
        let z = restore_unit_diagonal(&m);
        prop_assert!((0..z.order()).all(|i| z.get(i, i) == 1.0 || m.get(i, i) <= 0.0));
        let lmin = eig_sym(&z).unwrap().min_eigenvalue();
        prop_assert!(lmin >= -1e-9);
    }
}

#[test]
fn two_dimensional_energy_peaks_at_the_boundary() {
    two_d_energy_grid(1000).unwrap();
}
