//! Current sources, their smeared potentials and radiation data.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{pairing, same_grid, scalar_product, ShellVector, WaveFunction};
use crate::kspace::{Grid, GridSpec};
use crate::minkowski::{self, CVec4, Vec4, C64};
use crate::quad4::propagator_pairing;
pub use crate::quad4::{Greens, Rule};
use crate::testfn::{
    restrict_to_shell, verify_continuity, ComplexField, FourierField, Mode, Polarization, Profile,
    TestFunction,
};

/// Relative tolerance for conservation of constructed currents.
pub const CONSERVATION_TOL: f64 = 1e-10;

/// Mode of a conserved current built from a vector field `V`:
/// `j̃ = i (k·Ṽ, k0 Ṽ)`.
pub fn vector_field_mode(v: [C64; 3], profile: Profile) -> Mode {
    let mut profile = profile;
    profile.amplitude *= C64::i();
    Mode::new(Polarization::from_vector_field(v), profile)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Static point charge with potential `c/|q|`.
    Coulomb { charge: f64 },
    /// Real, conserved, compactly supported current in Fourier space.
    Pulse(TestFunction),
}

impl Source {
    pub fn pulse(v: [C64; 3], profile: Profile) -> Self {
        Source::Pulse(TestFunction::new(vec![vector_field_mode(v, profile)]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCurrent {
    pub source: Source,
    pub greens: Greens,
    pub rule: Rule,
}

impl ClassicalCurrent {
    pub fn new(source: Source, greens: Greens) -> Result<Self> {
        greens.validate()?;
        if let Source::Pulse(j) = &source {
            check_conserved(j)?;
        }
        Ok(Self {
            source,
            greens,
            rule: Rule::default(),
        })
    }

    pub fn coulomb(charge: f64) -> Self {
        Self {
            source: Source::Coulomb { charge },
            greens: Greens::Retarded,
            rule: Rule::default(),
        }
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_greens(mut self, greens: Greens) -> Self {
        self.greens = greens;
        self
    }

    pub fn is_zero(&self) -> bool {
        match &self.source {
            Source::Coulomb { charge } => *charge == 0.0,
            Source::Pulse(j) => j.is_zero(),
        }
    }

    /// Complex value of the smeared potential. Real for the retarded and
    /// advanced prescriptions.
    pub fn acl_smear_complex(&self, f: &TestFunction, grid: &Grid) -> Result<C64> {
        if f.is_zero() || self.is_zero() {
            return Ok(C64::new(0.0, 0.0));
        }
        match &self.source {
            Source::Coulomb { charge } => coulomb_smear(*charge, f, grid),
            Source::Pulse(j) => propagator_pairing(&self.rule, f, j, self.greens),
        }
    }

    /// `A^cl(f)`.
    pub fn acl_smear(&self, f: &TestFunction, grid: &Grid) -> Result<f64> {
        Ok(self.acl_smear_complex(f, grid)?.re)
    }
}

fn check_conserved<F: FourierField + ?Sized>(j: &F) -> Result<()> {
    let samples = box_samples(&j.supports(), 6);
    let residual = verify_continuity(j, &samples);
    if residual > CONSERVATION_TOL {
        return Err(Error::NonTransverse {
            residual,
            tol: CONSERVATION_TOL,
        });
    }
    Ok(())
}

/// Deterministic interior sample points of each box, `m` per axis.
fn box_samples(boxes: &[crate::testfn::Box4], m: usize) -> Vec<Vec4> {
    let mut out = Vec::new();
    let t = |i: usize| (i as f64 + 0.5) / m as f64;
    for b in boxes {
        for i0 in 0..m {
            for i1 in 0..m {
                for i2 in 0..m {
                    for i3 in 0..m {
                        let u = [t(i0), t(i1), t(i2), t(i3)];
                        out.push(std::array::from_fn(|a| {
                            b.lo[a] + u[a] * (b.hi[a] - b.lo[a])
                        }));
                    }
                }
            }
        }
    }
    out
}

/// `∫ f⁰(q) c/|q| d⁴q = 2c ∫ d³k f̃⁰(0, k) / |k|²`, integrated over the grid shell.
fn coulomb_smear(charge: f64, f: &TestFunction, grid: &Grid) -> Result<C64> {
    for b in f.supports() {
        if b.lo[0] < 0.0 && b.hi[0] > 0.0 {
            let (near, far) = b.spatial_radius_range();
            if near < grid.k_min() || far > grid.k_max() {
                return Err(Error::SupportOutsideGrid(format!(
                    "static slice radii [{near:.4}, {far:.4}] exceed shell [{}, {}]",
                    grid.k_min(),
                    grid.k_max()
                )));
            }
        }
    }
    let total = grid.integrate_fn(|n| {
        let v = f.evaluate(&[0.0, n.k[0], n.k[1], n.k[2]]);
        v[0] / (n.norm * n.norm)
    });
    Ok(total * (2.0 * charge))
}

/// Light-cone data `a_μ(k)` of a current on the nodes of a grid.
#[derive(Debug, Clone)]
pub struct OnShellAmplitude {
    grid: Arc<Grid>,
    values: Vec<CVec4>,
    transversality_residual: f64,
}

impl OnShellAmplitude {
    pub fn values(&self) -> &[CVec4] {
        &self.values
    }

    /// `max |k^μ a_μ| / (|k| max|a|)` over the nodes.
    pub fn transversality_residual(&self) -> f64 {
        self.transversality_residual
    }

    pub fn scaled(&self, z: C64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| minkowski::scale(v, z)).collect(),
            transversality_residual: self.transversality_residual,
        }
    }
}

impl ShellVector for OnShellAmplitude {
    fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    fn four_vector(&self, i: usize) -> CVec4 {
        self.values[i]
    }
}

/// Anything with light-cone radiation data.
pub trait OnShellSource {
    /// `a_μ(k)` at the on-shell point `(|k|, k)`.
    fn amplitude_at(&self, k: &[f64; 3]) -> Result<CVec4>;

    fn on_shell_amplitude(&self, grid: &Arc<Grid>) -> Result<OnShellAmplitude> {
        let mut values = Vec::with_capacity(grid.len());
        let mut max_a = 0.0f64;
        let mut max_res = 0.0f64;
        for n in grid.nodes() {
            let a = self.amplitude_at(&n.k)?;
            let k = minkowski::on_shell(&n.k);
            max_a = max_a.max(minkowski::euclid_c(&a));
            max_res = max_res.max(minkowski::dot_real(&k, &a).norm() / minkowski::euclid(&k));
            values.push(a);
        }
        Ok(OnShellAmplitude {
            grid: grid.clone(),
            values,
            transversality_residual: max_res / (max_a + crate::testfn::RESIDUAL_FLOOR),
        })
    }
}

impl OnShellSource for ClassicalCurrent {
    fn amplitude_at(&self, k: &[f64; 3]) -> Result<CVec4> {
        match &self.source {
            Source::Coulomb { .. } => Err(Error::StaticCurrent),
            Source::Pulse(j) => Ok(minkowski::scale(
                &j.evaluate(&minkowski::on_shell(k)),
                C64::from(1.0 / (2.0 * PI).sqrt()),
            )),
        }
    }
}

/// Radiated field smeared with `f`: `2π Im⟨φ|a⟩`. For `f` supported in the
/// far future the retarded potential is twice this value.
pub fn ahom_smear<S: OnShellSource + ?Sized>(
    source: &S,
    f: &TestFunction,
    grid: &Arc<Grid>,
) -> Result<f64> {
    let phi = restrict_to_shell(f, grid)?;
    let a = source.on_shell_amplitude(grid)?;
    Ok(2.0 * PI * pairing(&phi, &a)?.im)
}

/// Transverse amplitude `(ẑ × k̂)|k|^p` with vanishing time component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticAmplitude {
    pub power: f64,
    pub strength: f64,
}

impl SyntheticAmplitude {
    pub fn new(power: f64) -> Self {
        Self {
            power,
            strength: 1.0,
        }
    }

    /// `∫_{r1}^{r2}` of the shell integral in closed form:
    /// `(4π/3) s² ∫ r^{1+2p} dr`.
    pub fn shell_integral(&self, r1: f64, r2: f64) -> f64 {
        let e = 2.0 + 2.0 * self.power;
        let radial = if e.abs() < 1e-15 {
            (r2 / r1).ln()
        } else {
            (r2.powf(e) - r1.powf(e)) / e
        };
        4.0 * PI / 3.0 * self.strength * self.strength * radial
    }
}

impl OnShellSource for SyntheticAmplitude {
    fn amplitude_at(&self, k: &[f64; 3]) -> Result<CVec4> {
        let r = minkowski::spatial_norm(k);
        let m = self.strength * r.powf(self.power - 1.0);
        let z = C64::new(0.0, 0.0);
        Ok([z, C64::from(-k[1] * m), C64::from(k[0] * m), z])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IrVerdict {
    Finite,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrReport {
    /// `(lower shell radius, shell integral)` for each dyadic shell.
    pub shell_integrals: Vec<(f64, f64)>,
    /// Exponent `γ` in `I_n ∝ (k_top 2^{-n})^γ` from the least-squares fit.
    pub fitted_exponent: f64,
    /// Fitted ratio `I_{n+1} / I_n`.
    pub ratio: f64,
    pub verdict: IrVerdict,
}

/// Shell integrals of `⟨a|a⟩` over `[k_top 2^{-n-1}, k_top 2^{-n}]` and their
/// decay rate towards `k = 0`. Each shell uses the angular resolution of
/// `resolution`.
pub fn ir_diagnostic<S: OnShellSource + ?Sized>(
    source: &S,
    n_shells: usize,
    k_top: f64,
    resolution: &GridSpec,
) -> Result<IrReport> {
    if n_shells < 2 || !(k_top > 0.0) {
        return Err(Error::InvalidArgument(
            "IR diagnostic needs at least two shells and k_top > 0".into(),
        ));
    }
    let mut shells = Vec::with_capacity(n_shells);
    for n in 0..n_shells {
        let hi = k_top * 0.5f64.powi(n as i32);
        let lo = 0.5 * hi;
        let grid = Arc::new(
            GridSpec::new(resolution.n_r, resolution.n_theta, resolution.n_phi, lo, hi).build()?,
        );
        let a = source.on_shell_amplitude(&grid)?;
        shells.push((lo, pairing(&a, &a)?.re));
    }
    let (ratio, verdict) = if shells.iter().any(|&(_, v)| v.abs() == 0.0) {
        (0.0, IrVerdict::Finite)
    } else {
        let ys: Vec<f64> = shells.iter().map(|&(_, v)| v.abs().ln()).collect();
        let slope = least_squares_slope(&ys);
        let ratio = slope.exp();
        let verdict = if ratio >= 1.0 - 1e-3 {
            IrVerdict::Divergent
        } else if ratio <= 1.0 - 1e-2 {
            IrVerdict::Finite
        } else {
            IrVerdict::Inconclusive
        };
        (ratio, verdict)
    };
    Ok(IrReport {
        shell_integrals: shells,
        fitted_exponent: -ratio.ln() / 2f64.ln(),
        ratio,
        verdict,
    })
}

fn least_squares_slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let xm = (n - 1.0) / 2.0;
    let ym = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - xm;
        sxy += dx * (y - ym);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// Quantum current with complex profile `α̃` and coupling test functions.
#[derive(Debug, Clone)]
pub struct QuantumCurrent {
    pub alpha: ComplexField,
    pub fx1: TestFunction,
    pub fx2: TestFunction,
    pub greens: Greens,
    pub rule: Rule,
    grid: Arc<Grid>,
    phi1: WaveFunction,
    phi2: WaveFunction,
    coupling_norm: f64,
}

impl QuantumCurrent {
    /// Builds the model and checks `s(fx1,fx1) + s(fx2,fx2) ≤ 1` on `grid`.
    pub fn new(
        alpha: ComplexField,
        fx1: TestFunction,
        fx2: TestFunction,
        greens: Greens,
        grid: Arc<Grid>,
    ) -> Result<Self> {
        greens.validate()?;
        check_conserved(&alpha)?;
        let phi1 = restrict_to_shell(&fx1, &grid)?;
        let phi2 = restrict_to_shell(&fx2, &grid)?;
        let norm = scalar_product(&phi1, &phi1)?.re + scalar_product(&phi2, &phi2)?.re;
        if norm > 1.0 {
            return Err(Error::CouplingNorm { norm });
        }
        Ok(Self {
            alpha,
            fx1,
            fx2,
            greens,
            rule: Rule::default(),
            grid,
            phi1,
            phi2,
            coupling_norm: norm,
        })
    }

    /// Current `α` built from vector-field modes `(V, profile, shift)`.
    pub fn alpha_from_vector_fields(fields: &[([C64; 3], Profile, Vec4)]) -> ComplexField {
        ComplexField::new(
            fields
                .iter()
                .map(|(v, p, a)| {
                    let mut m = vector_field_mode(*v, p.clone());
                    m.shift = *a;
                    m
                })
                .collect(),
        )
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coupling_norm(&self) -> f64 {
        self.coupling_norm
    }

    /// `y(f) = ∫ d⁴k f̃(−k) · (−α̃(k) / (k·k + prescription))`.
    pub fn y_functional(&self, f: &TestFunction) -> Result<C64> {
        if f.is_zero() || self.alpha.modes.is_empty() {
            return Ok(C64::new(0.0, 0.0));
        }
        propagator_pairing(&self.rule, f, &self.alpha, self.greens)
    }

    /// `x(f) = s(fx1, f) + i s(fx2, f)` from the shell restriction of `f`.
    pub fn x_from_wave(&self, phi: &WaveFunction) -> Result<C64> {
        same_grid(&self.grid, phi.grid())?;
        let a = scalar_product(&self.phi1, phi)?.re;
        let b = scalar_product(&self.phi2, phi)?.re;
        Ok(C64::new(a, b))
    }

    pub fn x_functional(&self, f: &TestFunction) -> Result<C64> {
        self.x_from_wave(&restrict_to_shell(f, &self.grid)?)
    }
}

impl OnShellSource for QuantumCurrent {
    fn amplitude_at(&self, k: &[f64; 3]) -> Result<CVec4> {
        Ok(minkowski::scale(
            &self.alpha.evaluate(&minkowski::on_shell(k)),
            C64::from(1.0 / (2.0 * PI).sqrt()),
        ))
    }
}

/// Light-cone data of `α` on the negative-frequency sheet, conjugated:
/// `conj(α̃(−|k|, −k)) / √(2π)`.
#[derive(Debug, Clone, Copy)]
pub struct MirroredAlpha<'a>(pub &'a QuantumCurrent);

impl OnShellSource for MirroredAlpha<'_> {
    fn amplitude_at(&self, k: &[f64; 3]) -> Result<CVec4> {
        let kk = minkowski::neg(&minkowski::on_shell(k));
        Ok(minkowski::scale(
            &minkowski::conj(&self.0.alpha.evaluate(&kk)),
            C64::from(1.0 / (2.0 * PI).sqrt()),
        ))
    }
}

/// Light-cone route to `y(f)` for far-future `f` under the retarded
/// prescription: `−2πi (⟨φ|a₊⟩ − conj⟨φ|a₋⟩)`.
pub fn y_far_future(qc: &QuantumCurrent, f: &TestFunction, grid: &Arc<Grid>) -> Result<C64> {
    let phi = restrict_to_shell(f, grid)?;
    let plus = qc.on_shell_amplitude(grid)?;
    let minus = MirroredAlpha(qc).on_shell_amplitude(grid)?;
    let p = pairing(&phi, &plus)?;
    let m = pairing(&phi, &minus)?;
    Ok(C64::new(0.0, -2.0 * PI) * (p - m.conj()))
}
