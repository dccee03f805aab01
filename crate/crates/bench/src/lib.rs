//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use emcov::hilbert::scalar_product;
use emcov::sampling::Sampler;
use emcov::testfn::restrict_to_shell;
use emcov::{
    Greens, Grid, GridSpec, Polarization, Profile, ProfileKind, QuantumCurrent, TestFunction, C64,
};

pub fn grid(spec: GridSpec) -> Arc<Grid> {
    Arc::new(spec.build().expect("valid grid"))
}

pub fn family(seed: u64, n: usize) -> Vec<TestFunction> {
    Sampler::new(seed).family(n, 0.3)
}

/// Quantum current with coupling norm 0.36 on `grid`.
pub fn quantum_current(grid: &Arc<Grid>) -> QuantumCurrent {
    let profile = Profile::new(
        ProfileKind::GaussianWindowedBump,
        [1.5, 0.0, 0.0, 1.2],
        [1.3, 2.5, 2.5, 2.5],
        C64::new(1.0, 0.5),
    )
    .expect("valid profile");
    let alpha = QuantumCurrent::alpha_from_vector_fields(&[(
        [C64::new(1.0, 0.2), C64::new(0.0, 0.7), C64::new(0.1, 0.0)],
        profile,
        [0.0; 4],
    )]);
    let fx1 = Sampler::new(9).test_function(1.0);
    let phi = restrict_to_shell(&fx1, grid).expect("restrictable");
    let n = scalar_product(&phi, &phi).expect("same grid").re;
    let fx1 = fx1.scale(0.6 / (2.0 * n).sqrt());
    let fx2 = fx1.rotate(C64::i());
    QuantumCurrent::new(alpha, fx1, fx2, Greens::Retarded, grid.clone())
        .expect("coupling within bound")
}

/// A single far-future probe along +z.
pub fn probe() -> TestFunction {
    let p = Profile::new(
        ProfileKind::GaussianWindowedBump,
        [1.4, 0.1, 0.0, 1.4],
        [0.9; 4],
        C64::new(0.5, 0.2),
    )
    .expect("valid profile");
    TestFunction::single(
        Polarization::from_vector_field([
            C64::new(0.2, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ]),
        p,
    )
    .translate(&[18.0, 0.0, 0.0, 18.0])
}
