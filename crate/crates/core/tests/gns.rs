mod common;

use common::*;
use emcov::currents::{ClassicalCurrent, Source};
use emcov::gns::{
    covariance_residual, from_rows, gram_matrix, numerical_rank, pivoted_cholesky,
    positivity_report, weyl_consistency, Matrix, CHOLESKY_THRESHOLD,
};
use emcov::sampling::Sampler;
use emcov::testfn::{Polarization, Profile, ProfileKind, TestFunction};
use emcov::{CorrelationKernel, Error, Greens, C64};
use proptest::prelude::*;

#[test]
fn identity_is_positive() {
    let r = positivity_report(&Matrix::identity(4, 4), 1e-8).unwrap();
    assert!(r.verdict);
    assert_eq!(r.min_eig, 1.0);
    assert_eq!(r.dimension, 4);
}

#[test]
fn indefinite_two_by_two() {
    let g = from_rows(&[
        vec![c(1.0, 0.0), c(2.0, 0.0)],
        vec![c(2.0, 0.0), c(1.0, 0.0)],
    ])
    .unwrap();
    let r = positivity_report(&g, 1e-8).unwrap();
    assert!((r.min_eig + 1.0).abs() < 1e-14);
    assert!((r.max_eig - 3.0).abs() < 1e-14);
    assert!(!r.verdict);
}

#[test]
fn ragged_rows_are_rejected() {
    let err = from_rows(&[vec![c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap_err();
    assert!(matches!(err, Error::NotSquare { .. }));
    let err = positivity_report(&Matrix::zeros(2, 3), 1e-8).unwrap_err();
    assert!(matches!(err, Error::NotSquare { rows: 2, cols: 3 }));
}

#[test]
fn small_families() {
    let grid = default_grid();
    let k = CorrelationKernel::free(grid.clone());
    let g = gram_matrix(&k, &[TestFunction::zero()]).unwrap();
    assert_eq!(g, Matrix::from_element(1, 1, c(1.0, 0.0)));
    let f = Sampler::new(1).test_function(0.5);
    let g = gram_matrix(&k, &[TestFunction::zero(), f.clone()]).unwrap();
    let f0 = k.corr(&f, &TestFunction::zero()).unwrap();
    assert_eq!(g[(0, 0)], c(1.0, 0.0));
    assert!((g[(1, 1)] - c(1.0, 0.0)).norm() < 1e-15);
    assert_eq!(g[(0, 1)], f0);
    assert!((g[(1, 0)] - f0.conj()).norm() < 1e-15);
}

#[test]
fn random_free_gram_is_positive() {
    let grid = default_grid();
    let k = CorrelationKernel::free(grid.clone());
    let fam = Sampler::new(2).family(8, 0.3);
    let g = gram_matrix(&k, &fam).unwrap();
    assert!(positivity_report(&g, 1e-8).unwrap().verdict);
    let x = pivoted_cholesky(&g, CHOLESKY_THRESHOLD).unwrap();
    let defect = (x.adjoint() * &x - &g)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(defect < 1e-9, "{defect}");
}

#[test]
fn covariance_trivial_cases() {
    let grid = default_grid();
    let kernels = [
        CorrelationKernel::free(grid.clone()),
        CorrelationKernel::classical(pulse_current(1.0), grid.clone()),
    ];
    let mut s = Sampler::new(3);
    let (f, g, h) = (
        s.test_function(0.5),
        s.test_function(0.5),
        s.test_function(0.5),
    );
    for k in &kernels {
        assert!(covariance_residual(k, &f, &g, &TestFunction::zero()).unwrap() <= 1e-15);
        assert!(covariance_residual(k, &f, &f, &h).unwrap() <= 1e-12);
    }
}

#[test]
fn weyl_trivial_shifts() {
    let grid = default_grid();
    let k = CorrelationKernel::free(grid.clone());
    let mut s = Sampler::new(4);
    let base = s.family(4, 0.3);
    let zero = TestFunction::zero();
    assert!(weyl_consistency(&k, &base, &zero, &zero).unwrap() <= 1e-12);
    let h = s.test_function(0.3);
    assert!(weyl_consistency(&k, &base, &h, &h.scale(-1.0)).unwrap() <= 1e-8);
}

#[test]
fn weyl_holds_for_classical_kernel() {
    let grid = default_grid();
    let k = CorrelationKernel::classical(pulse_current(1.0), grid.clone());
    let mut s = Sampler::new(5);
    let base = s.family(3, 0.3);
    let (h1, h2) = (s.test_function(0.3), s.test_function(0.3));
    assert!(weyl_consistency(&k, &base, &h1, &h2).unwrap() <= 1e-8);
}

fn null_pair() -> (ClassicalCurrent, TestFunction, TestFunction) {
    let pj = Profile::new(
        ProfileKind::GaussianWindowedBump,
        [1.5, 0.0, 0.0, 1.0],
        [1.2; 4],
        c(1.0, 0.0),
    )
    .unwrap();
    let cur = ClassicalCurrent::new(
        Source::pulse([c(1.0, 0.0), c(0.3, 0.0), c(0.0, 0.0)], pj),
        Greens::Retarded,
    )
    .unwrap();
    let pf = Profile::new(
        ProfileKind::GaussianWindowedBump,
        [1.4, 0.2, 0.0, 1.1],
        [1.0; 4],
        c(1.0, 0.0),
    )
    .unwrap();
    let f = TestFunction::single(Polarization::NullGauge, pf).translate(&[0.0, 4.0, 0.0, 0.0]);
    let shifted = f.translate(&[0.0, 100.0, 0.0, 0.0]);
    (cur, f, shifted)
}

#[test]
fn null_pair_is_parallel_in_both_kernels() {
    let grid = default_grid();
    let (cur, f, shifted) = null_pair();
    let family = [f.clone(), shifted.clone()];
    let free = gram_matrix(&CorrelationKernel::free(grid.clone()), &family).unwrap();
    assert_eq!(numerical_rank(&free, CHOLESKY_THRESHOLD).unwrap(), 1);
    assert!((free[(0, 1)] - c(1.0, 0.0)).norm() < 1e-12);

    let k = CorrelationKernel::classical(cur.clone(), grid.clone());
    let g = gram_matrix(&k, &family).unwrap();
    assert_eq!(numerical_rank(&g, CHOLESKY_THRESHOLD).unwrap(), 1);
    let theta = cur.acl_smear(&f, &grid).unwrap() - cur.acl_smear(&shifted, &grid).unwrap();
    assert!(theta.abs() > 1e-3);
    assert!(
        (g[(0, 1)] - C64::from_polar(1.0, theta)).norm() < 1e-9,
        "{} vs {theta}",
        g[(0, 1)]
    );
}

fn hermitian_psd(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        let a = Matrix::from_fn(n, n, |i, j| {
            let (re, im) = v[i * n + j];
            c(re, im)
        });
        a.adjoint() * a
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cholesky_reconstructs_psd_matrices(g in hermitian_psd(6)) {
        let x = pivoted_cholesky(&g, 1e-14).unwrap();
        let scale = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let defect = (x.adjoint() * &x - &g).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(defect <= 1e-10 * scale.max(1.0));
        prop_assert!(positivity_report(&g, 1e-10).unwrap().verdict);
    }

    #[test]
    fn rank_of_low_rank_products(rank in 1usize..5, seed in 0u64..1000) {
        let mut s = Sampler::new(seed);
        let b = Matrix::from_fn(rank, 6, |_, _| s.complex(1.0));
        let g = b.adjoint() * b;
        prop_assert_eq!(numerical_rank(&g, 1e-10).unwrap(), rank);
    }
}
