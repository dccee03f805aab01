mod common;

use std::f64::consts::PI;

use common::*;
use emcov::currents::{
    ahom_smear, ir_diagnostic, y_far_future, ClassicalCurrent, IrVerdict, OnShellSource,
    QuantumCurrent, Source, SyntheticAmplitude,
};
use emcov::hilbert::scalar_product;
use emcov::minkowski;
use emcov::sampling::Sampler;
use emcov::testfn::{restrict_to_shell, FourierField, Profile, ProfileKind, TestFunction};
use emcov::{Error, Greens, GridSpec};

#[test]
fn zero_inputs_give_zero_potentials() {
    let grid = default_grid();
    let zero = TestFunction::zero();
    assert_eq!(pulse_current(1.0).acl_smear(&zero, &grid).unwrap(), 0.0);
    assert_eq!(
        ClassicalCurrent::coulomb(1.0)
            .acl_smear(&zero, &grid)
            .unwrap(),
        0.0
    );
    assert_eq!(ahom_smear(&pulse_current(1.0), &zero, &grid).unwrap(), 0.0);
    let qc = quantum_current(&grid, 3);
    assert_eq!(qc.y_functional(&zero).unwrap(), c(0.0, 0.0));
    assert_eq!(qc.x_functional(&zero).unwrap(), c(0.0, 0.0));
}

#[test]
fn coulomb_ignores_functions_without_static_slice() {
    let grid = default_grid();
    let one = c(1.0, 0.0);
    let z = c(0.0, 0.0);
    let f = coulomb_probe(
        [1.5, 0.0, 0.0, 1.5],
        [0.9; 4],
        [one, z, z, z],
        [z, one, z, z],
        one,
    );
    assert_eq!(
        ClassicalCurrent::coulomb(1.0).acl_smear(&f, &grid).unwrap(),
        0.0
    );
}

#[test]
fn coulomb_rejects_static_support_outside_shell() {
    let grid = default_grid();
    let one = c(1.0, 0.0);
    let z = c(0.0, 0.0);
    let f = coulomb_probe(
        [0.0, 2.5, 0.0, 0.0],
        [0.5, 1.0, 0.5, 0.5],
        [one, z, z, z],
        [z, z, one, z],
        one,
    );
    let err = ClassicalCurrent::coulomb(1.0)
        .acl_smear(&f, &grid)
        .unwrap_err();
    assert!(matches!(err, Error::SupportOutsideGrid(_)), "{err:?}");
}

#[test]
fn pulse_potential_is_real_and_linear_in_charge() {
    let grid = default_grid();
    let f = probe([1.4, 0.1, 0.0, 1.4], [0.2, 1.0, 0.0], c(0.5, 0.2));
    let a = pulse_current(1.0).acl_smear_complex(&f, &grid).unwrap();
    let b = pulse_current(3.0).acl_smear_complex(&f, &grid).unwrap();
    assert!(a.im.abs() <= 1e-10 * a.norm(), "{a}");
    assert!((b - 3.0 * a).norm() <= 1e-12 * b.norm());
}

#[test]
fn pulse_currents_are_conserved() {
    let j = match &pulse_current(2.0).source {
        Source::Pulse(j) => j.clone(),
        _ => unreachable!(),
    };
    let mut s = Sampler::new(17);
    for _ in 0..200 {
        let k = [
            s.uniform(0.6, 2.4),
            s.uniform(-0.9, 0.9),
            s.uniform(-0.9, 0.9),
            s.uniform(0.6, 2.4),
        ];
        let v = j.evaluate(&k);
        let scale = minkowski::euclid(&k) * v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(
            minkowski::dot_real(&k, &v).norm() <= 1e-12 * scale.max(1e-300),
            "{k:?} {v:?} {}",
            minkowski::dot_real(&k, &v)
        );
    }
}

#[test]
fn unconserved_pulse_is_rejected() {
    let p = Profile::new(
        ProfileKind::SeparableBump,
        [1.5, 0.0, 0.0, 1.5],
        [0.9; 4],
        c(1.0, 0.0),
    )
    .unwrap();
    let f = TestFunction::single(
        emcov::Polarization::Fixed([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
        p,
    );
    let err = ClassicalCurrent::new(Source::Pulse(f), Greens::Retarded).unwrap_err();
    assert!(matches!(err, Error::NonTransverse { .. }), "{err:?}");
}

#[test]
fn static_charge_has_no_radiation_field() {
    let grid = default_grid();
    let err = ClassicalCurrent::coulomb(1.0)
        .on_shell_amplitude(&grid)
        .unwrap_err();
    assert_eq!(err, Error::StaticCurrent);
}

#[test]
fn pulse_amplitude_is_transverse_on_shell() {
    let grid = default_grid();
    let a = pulse_current(1.0).on_shell_amplitude(&grid).unwrap();
    assert!(
        a.transversality_residual() <= 1e-10,
        "{}",
        a.transversality_residual()
    );
    assert!(a.values().iter().any(|v| minkowski::euclid_c(v) > 0.0));
}

#[test]
fn alpha_amplitude_matches_direct_evaluation() {
    let grid = default_grid();
    let qc = quantum_current(&grid, 3);
    let a = qc.on_shell_amplitude(&grid).unwrap();
    for (i, n) in grid.nodes().iter().enumerate().step_by(997) {
        let direct = qc.alpha.evaluate(&minkowski::on_shell(&n.k));
        for mu in 0..4 {
            assert!(
                (a.values()[i][mu] * (2.0 * PI).sqrt() - direct[mu]).norm()
                    <= 1e-14 * (1.0 + direct[mu].norm())
            );
        }
    }
}

#[test]
fn advanced_potential_vanishes_in_the_far_future() {
    let grid = default_grid();
    let f = far_future(
        &probe([1.4, 0.1, 0.0, 1.4], [0.2, 1.0, 0.0], c(0.5, 0.2)),
        20.0,
    );
    let ret = pulse_current(1.0).acl_smear(&f, &grid).unwrap();
    let adv = pulse_current(1.0)
        .with_greens(Greens::Advanced)
        .acl_smear(&f, &grid)
        .unwrap();
    assert!(adv.abs() <= 1e-4 * ret.abs(), "{adv} vs {ret}");
}

#[test]
fn feynman_potential_carries_the_same_radiation_data() {
    let grid = default_grid();
    let f = far_future(
        &probe([1.4, 0.1, 0.0, 1.4], [0.2, 1.0, 0.0], c(0.5, 0.2)),
        20.0,
    );
    let ret = pulse_current(1.0);
    let eps = 1e-6 * grid.k_max() * grid.k_max();
    let feyn = ret.clone().with_greens(Greens::Feynman { epsilon: eps });
    let hom = ahom_smear(&ret, &f, &grid).unwrap();
    let a = feyn.acl_smear(&f, &grid).unwrap();
    assert!((a - hom).abs() <= 1e-3 * hom.abs(), "{a} vs {hom}");
    assert!((ret.acl_smear(&f, &grid).unwrap() - 2.0 * a).abs() <= 1e-3 * hom.abs());
}

#[test]
fn y_is_real_linear() {
    let grid = default_grid();
    let qc = quantum_current(&grid, 3);
    let mut s = Sampler::new(23);
    let (f, g) = (s.test_function(1.0), s.test_function(1.0));
    let (yf, yg) = (qc.y_functional(&f).unwrap(), qc.y_functional(&g).unwrap());
    let sum = qc.y_functional(&f.add(&g)).unwrap();
    assert!((sum - yf - yg).norm() <= 1e-12 * (yf.norm() + yg.norm()));
    let scaled = qc.y_functional(&f.scale(-2.5)).unwrap();
    assert!((scaled + 2.5 * yf).norm() <= 1e-12 * yf.norm());
}

#[test]
fn y_vanishes_without_alpha() {
    let grid = default_grid();
    let qc = quantum_current(&grid, 3);
    let empty = QuantumCurrent::new(
        QuantumCurrent::alpha_from_vector_fields(&[]),
        qc.fx1.clone(),
        qc.fx2.clone(),
        Greens::Retarded,
        grid.clone(),
    )
    .unwrap();
    let f = Sampler::new(5).test_function(1.0);
    assert_eq!(empty.y_functional(&f).unwrap(), c(0.0, 0.0));
}

#[test]
fn y_matches_light_cone_route_in_far_future() {
    let grid = default_grid();
    let qc = quantum_current(&grid, 3);
    let f = far_future(
        &probe([1.5, 0.1, 0.0, 1.3], [0.4, 1.0, 0.2], c(0.3, 0.6)),
        18.0,
    );
    let y = qc.y_functional(&f).unwrap();
    let route = y_far_future(&qc, &f, &grid).unwrap();
    assert!((y - route).norm() <= 1e-3 * y.norm(), "{y} vs {route}");
}

#[test]
fn coupling_norm_above_one_is_rejected() {
    let grid = default_grid();
    let qc = quantum_current(&grid, 3);
    let big = qc.fx1.scale(2.0);
    let err = QuantumCurrent::new(
        qc.alpha.clone(),
        big.clone(),
        big.rotate(c(0.0, 1.0)),
        Greens::Retarded,
        grid.clone(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::CouplingNorm { .. }), "{err:?}");
}

#[test]
fn x_is_bounded_by_the_shell_norm() {
    let grid = default_grid();
    let qc = quantum_current(&grid, 3);
    let mut s = Sampler::new(29);
    for _ in 0..40 {
        let f = s.test_function(1.0);
        let phi = restrict_to_shell(&f, &grid).unwrap();
        let x = qc.x_from_wave(&phi).unwrap();
        assert!(x.norm_sqr() <= scalar_product(&phi, &phi).unwrap().re * (1.0 + 1e-10));
    }
    let x1 = qc.x_functional(&qc.fx1).unwrap();
    assert!((x1.re - qc.coupling_norm() / 2.0).abs() <= 1e-12, "{x1}");
}

#[test]
fn infrared_verdicts() {
    let res = GridSpec::new(16, 8, 16, 0.1, 1.0);
    let flat = ir_diagnostic(&SyntheticAmplitude::new(-1.0), 6, 1.0, &res).unwrap();
    assert_eq!(flat.verdict, IrVerdict::Divergent);
    let smooth = ir_diagnostic(&SyntheticAmplitude::new(1.0), 6, 1.0, &res).unwrap();
    assert_eq!(smooth.verdict, IrVerdict::Finite);
    assert!(
        (smooth.fitted_exponent - 4.0).abs() < 1e-9,
        "{}",
        smooth.fitted_exponent
    );
    let silent = SyntheticAmplitude {
        power: 1.0,
        strength: 0.0,
    };
    let r = ir_diagnostic(&silent, 4, 1.0, &res).unwrap();
    assert_eq!(r.verdict, IrVerdict::Finite);
    assert!(r.shell_integrals.iter().all(|&(_, v)| v == 0.0));
}

#[test]
fn infrared_needs_two_shells() {
    let err =
        ir_diagnostic(&SyntheticAmplitude::new(1.0), 1, 1.0, &GridSpec::default()).unwrap_err();
    assert!(matches!(err, Error::InvalidArgument(_)));
}
