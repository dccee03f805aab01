#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use emcov::currents::{ClassicalCurrent, Greens, QuantumCurrent, Source};
use emcov::hilbert::scalar_product;
use emcov::kspace::gauss_legendre_on;
use emcov::sampling::Sampler;
use emcov::testfn::{restrict_to_shell, Polarization, Profile, ProfileKind, TestFunction};
use emcov::{Grid, GridSpec, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn default_grid() -> Arc<Grid> {
    Arc::new(GridSpec::default().build().unwrap())
}

pub fn norm(f: &TestFunction, grid: &Arc<Grid>) -> f64 {
    let p = restrict_to_shell(f, grid).unwrap();
    scalar_product(&p, &p).unwrap().re
}

/// Light-like translation `T(1, ẑ)` into the far future.
pub fn far_future(f: &TestFunction, t: f64) -> TestFunction {
    f.translate(&[t, 0.0, 0.0, t])
}

/// Time-localized current radiating along +ẑ.
pub fn pulse_current(strength: f64) -> ClassicalCurrent {
    let p = Profile::new(
        ProfileKind::GaussianWindowedBump,
        [1.5, 0.0, 0.0, 1.5],
        [0.9; 4],
        c(strength, 0.0),
    )
    .unwrap();
    ClassicalCurrent::new(
        Source::pulse([c(1.0, 0.0), c(0.3, 0.0), c(0.0, 0.0)], p),
        Greens::Retarded,
    )
    .unwrap()
}

/// Probe function overlapping the pulse's light-cone data.
pub fn probe(center: [f64; 4], v: [f64; 3], amplitude: C64) -> TestFunction {
    let p = Profile::new(
        ProfileKind::GaussianWindowedBump,
        center,
        [0.9; 4],
        amplitude,
    )
    .unwrap();
    TestFunction::single(
        Polarization::from_vector_field([c(v[0], 0.0), c(v[1], 0.0), c(v[2], 0.0)]),
        p,
    )
}

pub fn broad_alpha_profile() -> Profile {
    Profile::new(
        ProfileKind::GaussianWindowedBump,
        [1.5, 0.0, 0.0, 1.2],
        [1.3, 2.5, 2.5, 2.5],
        c(1.0, 0.5),
    )
    .unwrap()
}

/// Quantum current with complex-linear coupling `x(f) = ⟨φ₁|φ⟩` of norm² 0.36.
pub fn quantum_current(grid: &Arc<Grid>, seed: u64) -> QuantumCurrent {
    let mut s = Sampler::new(seed);
    let alpha = QuantumCurrent::alpha_from_vector_fields(&[(
        [c(1.0, 0.2), c(0.0, 0.7), c(0.1, 0.0)],
        broad_alpha_profile(),
        [0.0; 4],
    )]);
    let fx1 = s.test_function(1.0);
    let fx1 = fx1.scale(0.6 / (2.0 * norm(&fx1, grid)).sqrt());
    let fx2 = fx1.rotate(C64::i());
    QuantumCurrent::new(alpha, fx1, fx2, Greens::Retarded, grid.clone()).unwrap()
}

/// Static-charge probe: conserved mode with `f̃⁰(0, k)` supported in the shell.
pub fn coulomb_probe(
    center: [f64; 4],
    half: [f64; 4],
    u: [C64; 4],
    v: [C64; 4],
    amp: C64,
) -> TestFunction {
    let p = Profile::new(ProfileKind::GaussianWindowedBump, center, half, amp).unwrap();
    TestFunction::single(Polarization::Conserved { u, v }, p)
}

/// Position-space value of `∫ d⁴q f⁰(q) c/|q|` for a single conserved mode
/// without translation.
///
/// The time integral of `f⁰(q0, q)` is `(2π)^{-1} G(q)` with
/// `G(q) = ∫ d³k f̃⁰(0,k) e^{ik·q}`. At `k0 = 0` the time component is a sum of
/// separable terms `Π_i h_i(k_i)`, so `G` is a sum of products of 1D
/// transforms `H_i(q_i)` tabulated on a position grid. `1/|q|` is written as
/// `(2/√π) ∫₀^∞ e^{−t²|q|²} dt`, which makes the 3D position integral a product
/// of 1D integrals `J_i(t) = ∫ H_i(q) e^{−t²q²} dq`.
pub fn coulomb_position_space(f: &TestFunction, charge: f64) -> f64 {
    assert_eq!(f.modes.len(), 1);
    let m = &f.modes[0];
    assert_eq!(m.shift, [0.0; 4]);
    let (u, v) = match &m.polarization {
        Polarization::Conserved { u, v } => (*u, *v),
        _ => panic!("oracle handles conserved modes only"),
    };
    let prof = &m.profile;
    let b0 = prof.axis_factor(0, 0.0);
    // e0(0,k) = (k·u) v0 − (k·v) u0 = Σ_j k_j (v_j u0 − u_j v0)  (k·u = −k_s·u_s at k0 = 0)
    let w: [C64; 3] = std::array::from_fn(|j| v[j + 1] * u[0] - u[j + 1] * v[0]);

    // Half-step grids in q and a Gauss rule over each axis' k-support.
    let dq = 0.05;
    let q_max = 300.0;
    let nq = (2.0 * q_max / dq) as usize + 1;
    let qs: Vec<f64> = (0..nq).map(|i| -q_max + i as f64 * dq).collect();
    let axis_nodes: Vec<Vec<(f64, f64)>> = (0..3)
        .map(|i| {
            let (lo, hi) = (
                prof.center[i + 1] - prof.half_width[i + 1],
                prof.center[i + 1] + prof.half_width[i + 1],
            );
            gauss_legendre_on(400, lo, hi)
        })
        .collect();
    // H(q) = ∫ h(x) e^{ixq} dx with h(x) = x^p b_i(x) (mirror: h(x) = x^p b_i(−x)).
    let transform = |axis: usize, power: i32, mirrored: bool| -> Vec<C64> {
        qs.iter()
            .map(|&q| {
                axis_nodes[axis]
                    .iter()
                    .map(|&(x, wx)| {
                        let xs = if mirrored { -x } else { x };
                        let h = xs.powi(power) * prof.axis_factor(axis + 1, x);
                        C64::from_polar(wx * h, xs * q)
                    })
                    .sum()
            })
            .collect()
    };
    // Terms of f̃⁰(0,k) = ½[m(0,k) + conj(m(0,−k))]:
    //   m(0,k)        = Σ_j w_j A b0 k_j Π_i b_i(k_i)
    //   conj(m(0,−k)) = Σ_j −conj(w_j A) b0 k_j Π_i b_i(−k_i)
    let amp = prof.amplitude;
    let mut terms: Vec<(C64, [Vec<C64>; 3], [(i32, bool); 3])> = Vec::new();
    let mut cache = std::collections::HashMap::new();
    for j in 0..3 {
        for mirrored in [false, true] {
            let coeff = if mirrored {
                -(w[j] * amp).conj()
            } else {
                w[j] * amp
            } * (0.5 * b0);
            if coeff.norm() == 0.0 {
                continue;
            }
            let hs = std::array::from_fn(|i| {
                cache
                    .entry((i, (i == j) as i32, mirrored))
                    .or_insert_with(|| transform(i, (i == j) as i32, mirrored))
                    .clone()
            });
            let key: [(i32, bool); 3] = std::array::from_fn(|i| ((i == j) as i32, mirrored));
            terms.push((coeff, hs, key));
        }
    }
    let j_q = |h: &[C64], t: f64| -> C64 {
        let reach = ((7.0 / t).min(q_max) / dq) as usize;
        let (lo, hi) = (nq / 2 - reach, nq / 2 + reach);
        h[lo..=hi]
            .iter()
            .zip(&qs[lo..=hi])
            .map(|(v, &q)| v * (-(t * q) * (t * q)).exp())
            .sum::<C64>()
            * dq
    };
    // Same integral carried out over the axis support once the Gaussian is
    // too narrow for the position grid: ∫ h(x) (√π/t) e^{−x²/4t²} dx.
    let j_k = |axis: usize, power: i32, mirrored: bool, t: f64| -> C64 {
        axis_nodes[axis]
            .iter()
            .map(|&(x, wx)| {
                let xs = if mirrored { -x } else { x };
                let h = xs.powi(power) * prof.axis_factor(axis + 1, x);
                C64::from(wx * h * PI.sqrt() / t * (-(x * x) / (4.0 * t * t)).exp())
            })
            .sum()
    };
    // ∫₀^∞ dt Π J_i(t): trapezoid in ln t, asymptotic tail
    // J_i(t) ≈ √π H_i(0)/t beyond t_c.
    let t_switch = 2.0;
    let t_c = 3000.0f64;
    let (u_lo, n_u) = (-14.0f64, 1400usize);
    let du = (t_c.ln() - u_lo) / n_u as f64;
    let mut total = C64::new(0.0, 0.0);
    for (coeff, hs, key) in &terms {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..=n_u {
            let t = (u_lo + i as f64 * du).exp();
            let wgt = if i == 0 || i == n_u { 0.5 } else { 1.0 };
            let prod: C64 = if t <= t_switch {
                hs.iter().map(|h| j_q(h, t)).product()
            } else {
                (0..3).map(|i| j_k(i, key[i].0, key[i].1, t)).product()
            };
            acc += wgt * t * du * prod;
        }
        let h0: C64 = hs.iter().map(|h| h[nq / 2]).product();
        acc += PI.powf(1.5) * h0 / (2.0 * t_c * t_c);
        total += coeff * acc;
    }
    (charge / (2.0 * PI) * 2.0 / PI.sqrt() * total).re
}
