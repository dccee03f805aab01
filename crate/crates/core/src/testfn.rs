//! Test functions in 4D Fourier space.
//!
//! A [`TestFunction`] is a finite sum of modes `e(k) · b(k) · e^{i k·a}` with a
//! compactly supported profile `b`, a polarization `e(k)` and a translation
//! `a`. Evaluation symmetrizes each mode as `½[m(k) + conj(m(−k))]`, so the
//! reality condition `conj(f̃(k)) = f̃(−k)` holds identically.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::WaveFunction;
use crate::kspace::Grid;
use crate::minkowski::{self, CVec4, Vec4, C64, ZERO4};

/// Residual floor for relative continuity residuals of the zero function.
pub const RESIDUAL_FLOOR: f64 = 1e-300;
/// Default relative half-width of the excluded light-cone neighbourhood.
pub const DEFAULT_CONE_BAND: f64 = 1e-3;
/// Continuity tolerance required of a test function before restriction.
pub const RESTRICTION_TOL: f64 = 1e-8;
/// Gaussian sharpness inside the window of [`ProfileKind::GaussianWindowedBump`].
pub const GAUSS_SHARPNESS: f64 = 4.0;

/// `exp(1 − 1/(1 − x²))` on `|x| < 1`, zero outside. Smooth, peak value 1.
#[inline]
pub fn bump(x: f64) -> f64 {
    let t = 1.0 - x * x;
    if t <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / t).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// Product of smooth bumps along each axis.
    SeparableBump,
    /// Separable Gaussian `exp(−4x²)` inside the smooth bump window.
    GaussianWindowedBump,
}

/// Axis-aligned box in 4D wavevector space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box4 {
    pub lo: Vec4,
    pub hi: Vec4,
}

impl Box4 {
    pub fn mirror(&self) -> Box4 {
        Box4 {
            lo: minkowski::neg(&self.hi),
            hi: minkowski::neg(&self.lo),
        }
    }

    pub fn intersect(&self, other: &Box4) -> Option<Box4> {
        let mut lo = [0.0; 4];
        let mut hi = [0.0; 4];
        for i in 0..4 {
            lo[i] = self.lo[i].max(other.lo[i]);
            hi[i] = self.hi[i].min(other.hi[i]);
            if hi[i] <= lo[i] {
                return None;
            }
        }
        Some(Box4 { lo, hi })
    }

    pub fn hull(&self, other: &Box4) -> Box4 {
        let mut lo = self.lo;
        let mut hi = self.hi;
        for i in 0..4 {
            lo[i] = lo[i].min(other.lo[i]);
            hi[i] = hi[i].max(other.hi[i]);
        }
        Box4 { lo, hi }
    }

    pub fn contains(&self, k: &Vec4) -> bool {
        (0..4).all(|i| k[i] >= self.lo[i] && k[i] <= self.hi[i])
    }

    pub fn width(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    /// Range of `|k|` over the spatial part of the box.
    pub fn spatial_radius_range(&self) -> (f64, f64) {
        let mut near = 0.0;
        let mut far = 0.0;
        for i in 1..4 {
            let (a, b) = (self.lo[i], self.hi[i]);
            let closest = if a > 0.0 {
                a
            } else if b < 0.0 {
                b
            } else {
                0.0
            };
            near += closest * closest;
            far += a.abs().max(b.abs()).powi(2);
        }
        (near.sqrt(), far.sqrt())
    }

    /// Interval of `κ` for which `(±κ, k)` with `|k| = κ` may lie in the box,
    /// restricted to positive frequencies.
    pub fn cone_range(&self) -> Option<(f64, f64)> {
        let (rmin, rmax) = self.spatial_radius_range();
        let lo = rmin.max(self.lo[0]);
        let hi = rmax.min(self.hi[0]);
        (hi > lo && hi > 0.0).then_some((lo.max(0.0), hi))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub kind: ProfileKind,
    pub center: Vec4,
    pub half_width: Vec4,
    pub amplitude: C64,
}

impl Profile {
    pub fn new(kind: ProfileKind, center: Vec4, half_width: Vec4, amplitude: C64) -> Result<Self> {
        if half_width.iter().any(|&h| !(h.is_finite() && h > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "profile half-widths must be positive, got {half_width:?}"
            )));
        }
        if center.iter().any(|c| !c.is_finite()) || !amplitude.is_finite() {
            return Err(Error::InvalidArgument(
                "non-finite profile parameter".into(),
            ));
        }
        Ok(Self {
            kind,
            center,
            half_width,
            amplitude,
        })
    }

    /// Real one-dimensional factor along `axis` at coordinate `x`.
    #[inline]
    pub fn axis_factor(&self, axis: usize, x: f64) -> f64 {
        let u = (x - self.center[axis]) / self.half_width[axis];
        match self.kind {
            ProfileKind::SeparableBump => bump(u),
            ProfileKind::GaussianWindowedBump => {
                let w = bump(u);
                if w == 0.0 {
                    0.0
                } else {
                    w * (-GAUSS_SHARPNESS * u * u).exp()
                }
            }
        }
    }

    #[inline]
    pub fn eval(&self, k: &Vec4) -> C64 {
        let mut prod = 1.0;
        for axis in 0..4 {
            let u = (k[axis] - self.center[axis]) / self.half_width[axis];
            if u.abs() >= 1.0 {
                return C64::new(0.0, 0.0);
            }
            prod *= self.axis_factor(axis, k[axis]);
        }
        self.amplitude * prod
    }

    pub fn support(&self) -> Box4 {
        let mut lo = [0.0; 4];
        let mut hi = [0.0; 4];
        for i in 0..4 {
            lo[i] = self.center[i] - self.half_width[i];
            hi[i] = self.center[i] + self.half_width[i];
        }
        Box4 { lo, hi }
    }
}

/// Polarization of a mode, possibly depending on the wavevector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarization {
    /// Constant complex four-vector; satisfies continuity only where `k·e = 0`.
    Fixed(CVec4),
    /// `(k·u) v − (k·v) u`: conserved for every `k`.
    Conserved { u: CVec4, v: CVec4 },
    /// Pure gauge `k`.
    Gradient,
    /// `k − (k·k) k̄ / (k·k̄)` with `k̄ = (k0, −k)`: conserved everywhere and
    /// longitudinal on the light cone.
    NullGauge,
}

impl Polarization {
    #[inline]
    pub fn at(&self, k: &Vec4) -> CVec4 {
        match self {
            Polarization::Fixed(e) => *e,
            Polarization::Conserved { u, v } => {
                let ku = minkowski::dot_real(k, u);
                let kv = minkowski::dot_real(k, v);
                [
                    ku * v[0] - kv * u[0],
                    ku * v[1] - kv * u[1],
                    ku * v[2] - kv * u[2],
                    ku * v[3] - kv * u[3],
                ]
            }
            Polarization::Gradient => minkowski::to_complex(k),
            Polarization::NullGauge => {
                let kk = minkowski::dot_rr(k, k);
                let kkbar = k.iter().map(|x| x * x).sum::<f64>();
                if kkbar == 0.0 {
                    return ZERO4;
                }
                let c = kk / kkbar;
                let kbar = [k[0], -k[1], -k[2], -k[3]];
                let mut out = [C64::new(0.0, 0.0); 4];
                for i in 0..4 {
                    out[i] = C64::from(k[i] - c * kbar[i]);
                }
                out
            }
        }
    }

    /// Time-like `u = (1,0,0,0)` with spatial `v`: the polarization
    /// `(k·V, k0 V)` of a current built from a vector field `V`.
    pub fn from_vector_field(v: [C64; 3]) -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Polarization::Conserved {
            u: [one, zero, zero, zero],
            v: [zero, v[0], v[1], v[2]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub polarization: Polarization,
    pub profile: Profile,
    /// Spacetime translation `a`; contributes the phase `e^{i k·a}`.
    pub shift: Vec4,
}

impl Mode {
    pub fn new(polarization: Polarization, profile: Profile) -> Self {
        Self {
            polarization,
            profile,
            shift: [0.0; 4],
        }
    }

    /// Unsymmetrized value `e(k) b(k) e^{i k·a}`.
    #[inline]
    pub fn raw(&self, k: &Vec4) -> CVec4 {
        let b = self.profile.eval(k);
        if b == C64::new(0.0, 0.0) {
            return ZERO4;
        }
        let phase = if self.shift == [0.0; 4] {
            b
        } else {
            b * C64::from_polar(1.0, minkowski::dot_rr(k, &self.shift))
        };
        minkowski::scale(&self.polarization.at(k), phase)
    }

    fn scaled(&self, t: C64) -> Mode {
        let mut m = self.clone();
        m.profile.amplitude *= t;
        m
    }
}

/// Anything evaluable as a complex four-vector field on wavevector space.
pub trait FourierField {
    fn evaluate(&self, k: &Vec4) -> CVec4;
    /// Boxes outside of which the field vanishes.
    fn supports(&self) -> Vec<Box4>;
    /// Per-axis bound on the phase rate `|a_i|` of translated components.
    fn phase_rates(&self) -> Vec4 {
        [0.0; 4]
    }
}

/// Real spacetime test function, stored in Fourier space.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub modes: Vec<Mode>,
}

impl TestFunction {
    pub fn zero() -> Self {
        Self { modes: Vec::new() }
    }

    pub fn new(modes: Vec<Mode>) -> Self {
        Self { modes }
    }

    pub fn single(polarization: Polarization, profile: Profile) -> Self {
        Self::new(vec![Mode::new(polarization, profile)])
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// `τ_a f`, i.e. `f(q − a)`; multiplies `f̃(k)` by `e^{i k·a}`.
    pub fn translate(&self, a: &Vec4) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|m| {
                let mut m = m.clone();
                for i in 0..4 {
                    m.shift[i] += a[i];
                }
                m
            })
            .collect();
        Self { modes }
    }

    /// Real multiple `t f`.
    pub fn scale(&self, t: f64) -> Self {
        if t == 0.0 {
            return Self::zero();
        }
        Self {
            modes: self.modes.iter().map(|m| m.scaled(C64::from(t))).collect(),
        }
    }

    pub fn add(&self, other: &TestFunction) -> Self {
        let mut modes = self.modes.clone();
        modes.extend(other.modes.iter().cloned());
        Self { modes }
    }

    pub fn sub(&self, other: &TestFunction) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Multiplies every mode amplitude by a complex phase. The result is a
    /// different real test function whose positive-frequency data is
    /// multiplied by `z`.
    pub fn rotate(&self, z: C64) -> Self {
        Self {
            modes: self.modes.iter().map(|m| m.scaled(z)).collect(),
        }
    }
}

impl FourierField for TestFunction {
    fn evaluate(&self, k: &Vec4) -> CVec4 {
        let mk = minkowski::neg(k);
        let mut out = ZERO4;
        for m in &self.modes {
            let a = m.raw(k);
            let b = m.raw(&mk);
            for i in 0..4 {
                out[i] += 0.5 * (a[i] + b[i].conj());
            }
        }
        out
    }

    fn supports(&self) -> Vec<Box4> {
        self.modes
            .iter()
            .flat_map(|m| {
                let b = m.profile.support();
                [b, b.mirror()]
            })
            .collect()
    }

    fn phase_rates(&self) -> Vec4 {
        phase_rates(&self.modes)
    }
}

fn phase_rates(modes: &[Mode]) -> Vec4 {
    let mut r = [0.0f64; 4];
    for m in modes {
        for i in 0..4 {
            r[i] = r[i].max(m.shift[i].abs());
        }
    }
    r
}

/// Complex field `Σ_m e_m(k) b_m(k) e^{i k·a_m}` without reality symmetrization.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexField {
    pub modes: Vec<Mode>,
}

impl ComplexField {
    pub fn new(modes: Vec<Mode>) -> Self {
        Self { modes }
    }
}

impl FourierField for ComplexField {
    fn evaluate(&self, k: &Vec4) -> CVec4 {
        let mut out = ZERO4;
        for m in &self.modes {
            let a = m.raw(k);
            for i in 0..4 {
                out[i] += a[i];
            }
        }
        out
    }

    fn supports(&self) -> Vec<Box4> {
        self.modes.iter().map(|m| m.profile.support()).collect()
    }

    fn phase_rates(&self) -> Vec4 {
        phase_rates(&self.modes)
    }
}

/// One symmetrization half of a single mode: `w·m(k)` or `w·conj(m(−k))`.
#[derive(Debug, Clone, Copy)]
pub struct Piece<'a> {
    pub mode: &'a Mode,
    pub mirrored: bool,
    pub weight: f64,
}

impl Piece<'_> {
    #[inline]
    pub fn eval(&self, k: &Vec4) -> CVec4 {
        if self.mirrored {
            let v = self.mode.raw(&minkowski::neg(k));
            minkowski::scale(&minkowski::conj(&v), C64::from(self.weight))
        } else {
            minkowski::scale(&self.mode.raw(k), C64::from(self.weight))
        }
    }

    pub fn support(&self) -> Box4 {
        let b = self.mode.profile.support();
        if self.mirrored {
            b.mirror()
        } else {
            b
        }
    }

    pub fn phase_rates(&self) -> Vec4 {
        self.mode.shift.map(f64::abs)
    }
}

/// Fields that are finite sums of single-box pieces.
pub trait Decomposable {
    fn pieces(&self) -> Vec<Piece<'_>>;
}

impl Decomposable for TestFunction {
    fn pieces(&self) -> Vec<Piece<'_>> {
        self.modes
            .iter()
            .flat_map(|mode| {
                [false, true].map(|mirrored| Piece {
                    mode,
                    mirrored,
                    weight: 0.5,
                })
            })
            .collect()
    }
}

impl Decomposable for ComplexField {
    fn pieces(&self) -> Vec<Piece<'_>> {
        self.modes
            .iter()
            .map(|mode| Piece {
                mode,
                mirrored: false,
                weight: 1.0,
            })
            .collect()
    }
}

/// Positive light-cone samples `(|k|, k)` at the grid nodes.
pub fn cone_samples(grid: &Grid) -> Vec<Vec4> {
    grid.nodes()
        .iter()
        .map(|n| minkowski::on_shell(&n.k))
        .collect()
}

/// `max |k^μ f̃_μ(k)| / (|k| · max|f̃| + floor)` over the samples.
pub fn verify_continuity<F: FourierField + ?Sized>(f: &F, samples: &[Vec4]) -> f64 {
    let mut max_val = 0.0f64;
    let mut worst = Vec::with_capacity(samples.len());
    for k in samples {
        let v = f.evaluate(k);
        max_val = max_val.max(minkowski::euclid_c(&v));
        worst.push((minkowski::dot_real(k, &v).norm(), minkowski::euclid(k)));
    }
    worst
        .into_iter()
        .map(|(res, kn)| res / (kn * max_val + RESIDUAL_FLOOR))
        .fold(0.0, f64::max)
}

/// Continuity-projected evaluator for a test function.
#[derive(Debug, Clone)]
pub struct Projected<'a> {
    pub source: &'a TestFunction,
    pub cone_band: f64,
}

/// Value of a projected test function with its regularization flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedValue {
    pub value: CVec4,
    pub regularized: bool,
}

pub fn project_continuity(f: &TestFunction, cone_band: f64) -> Result<Projected<'_>> {
    if !(cone_band >= 0.0 && cone_band.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "cone band must be non-negative, got {cone_band}"
        )));
    }
    Ok(Projected {
        source: f,
        cone_band,
    })
}

impl Projected<'_> {
    /// Off the band: `f̃ − k χ̃` with `χ̃ = k·f̃ / (k·k)`. Inside the band the
    /// longitudinal part is removed along `k̄ = (k0, −k)` instead, which keeps
    /// `k·result = 0` exactly; such values are flagged as regularized.
    pub fn evaluate_flagged(&self, k: &Vec4) -> ProjectedValue {
        let f = self.source.evaluate(k);
        let kk = minkowski::dot_rr(k, k);
        let e2 = k.iter().map(|x| x * x).sum::<f64>();
        if e2 == 0.0 {
            return ProjectedValue {
                value: f,
                regularized: false,
            };
        }
        let kf = minkowski::dot_real(k, &f);
        if kk.abs() >= self.cone_band * e2 && kk != 0.0 {
            let chi = kf / kk;
            let mut out = f;
            for i in 0..4 {
                out[i] -= chi * k[i];
            }
            ProjectedValue {
                value: out,
                regularized: false,
            }
        } else {
            // k·k̄ = |k|²_E
            let c = kf / e2;
            let kbar = [k[0], -k[1], -k[2], -k[3]];
            let mut out = f;
            for i in 0..4 {
                out[i] -= c * kbar[i];
            }
            ProjectedValue {
                value: out,
                regularized: true,
            }
        }
    }

    /// Probes `χ̃ = k·f̃/(k·k)` at frequencies `k0 = |k|(1 ± δ)` for shrinking
    /// `δ` around the given light-cone samples. Returns the growth factor of
    /// `max|χ̃|` between the widest and narrowest probe; errors when it grows
    /// like `1/δ` with non-negligible magnitude.
    pub fn gauge_check(&self, cone: &[Vec4]) -> Result<f64> {
        let band = if self.cone_band > 0.0 {
            self.cone_band
        } else {
            DEFAULT_CONE_BAND
        };
        let deltas = [band, band / 10.0, band / 100.0];
        let mut fmax = 0.0f64;
        let mut chi_max = [0.0f64; 3];
        for k in cone {
            for (j, d) in deltas.iter().enumerate() {
                for s in [1.0, -1.0] {
                    let kk = [k[0] * (1.0 + s * d), k[1], k[2], k[3]];
                    let f = self.source.evaluate(&kk);
                    fmax = fmax.max(minkowski::euclid_c(&f));
                    let sq = minkowski::dot_rr(&kk, &kk);
                    let chi = minkowski::dot_real(&kk, &f).norm() / sq.abs();
                    chi_max[j] = chi_max[j].max(chi * minkowski::euclid(&kk));
                }
            }
        }
        let significant = chi_max[2] > 1e-8 * fmax;
        let growth = if chi_max[0] > 0.0 {
            chi_max[2] / chi_max[0]
        } else {
            1.0
        };
        if significant && growth > 10.0 {
            return Err(Error::GaugeSingular { growth });
        }
        Ok(growth)
    }
}

impl FourierField for Projected<'_> {
    fn evaluate(&self, k: &Vec4) -> CVec4 {
        self.evaluate_flagged(k).value
    }

    fn supports(&self) -> Vec<Box4> {
        self.source.supports()
    }

    fn phase_rates(&self) -> Vec4 {
        self.source.phase_rates()
    }
}

/// Checks that every support box meeting the positive light cone lies within
/// the grid shell.
pub fn check_shell_coverage<F: FourierField + ?Sized>(f: &F, grid: &Grid) -> Result<()> {
    for b in f.supports() {
        if let Some((lo, hi)) = b.cone_range() {
            if lo < grid.k_min() * (1.0 - 1e-12) || hi > grid.k_max() * (1.0 + 1e-12) {
                return Err(Error::SupportOutsideGrid(format!(
                    "light-cone radii [{lo:.4}, {hi:.4}] exceed shell [{}, {}]",
                    grid.k_min(),
                    grid.k_max()
                )));
            }
        }
    }
    Ok(())
}

/// Classical wave function `φ_α(k) = √(2π) f̃_α(|k|, k)`.
pub fn restrict_to_shell<F: FourierField + ?Sized>(
    f: &F,
    grid: &Arc<Grid>,
) -> Result<WaveFunction> {
    check_shell_coverage(f, grid)?;
    let root = (2.0 * PI).sqrt();
    let nodes = grid.nodes();
    let mut values = Vec::with_capacity(nodes.len());
    let mut max_val = 0.0f64;
    let mut max_res = 0.0f64;
    for n in nodes {
        let k = minkowski::on_shell(&n.k);
        let v = f.evaluate(&k);
        max_val = max_val.max(minkowski::euclid_c(&v));
        max_res = max_res.max(minkowski::dot_real(&k, &v).norm() / minkowski::euclid(&k));
        values.push(v);
    }
    let residual = max_res / (max_val + RESIDUAL_FLOOR);
    if residual > RESTRICTION_TOL {
        return Err(Error::NonTransverse {
            residual,
            tol: RESTRICTION_TOL,
        });
    }
    let mut spatial = Vec::with_capacity(values.len());
    let mut phi0_res = 0.0f64;
    for (n, v) in nodes.iter().zip(&values) {
        let s = [v[1] * root, v[2] * root, v[3] * root];
        let derived = (s[0] * n.k[0] + s[1] * n.k[1] + s[2] * n.k[2]) / n.norm;
        phi0_res = phi0_res.max((derived - v[0] * root).norm());
        spatial.push(s);
    }
    let phi0_residual = phi0_res / (root * max_val + RESIDUAL_FLOOR);
    Ok(WaveFunction::from_parts(
        grid.clone(),
        spatial,
        phi0_residual,
    ))
}

/// `τ_a f`.
pub fn translate(f: &TestFunction, a: &Vec4) -> TestFunction {
    f.translate(a)
}
