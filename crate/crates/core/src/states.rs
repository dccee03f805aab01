//! Correlation kernels: free vacuum, classical current and the quasi-free
//! product kernel of a quantum current, with moment extraction.

use std::sync::Arc;

use crate::currents::{ClassicalCurrent, QuantumCurrent};
use crate::error::Result;
use crate::hilbert::{scalar_product, WaveFunction};
use crate::kspace::Grid;
use crate::minkowski::C64;
use crate::testfn::{restrict_to_shell, TestFunction};

/// Finite-difference step for moment extraction.
pub const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone)]
pub enum KernelVariant {
    FreeVacuum,
    Classical(ClassicalCurrent),
    Quantum(QuantumCurrent),
}

/// Everything a kernel needs to know about one test function. All entries
/// are real-linear in the test function.
#[derive(Debug, Clone)]
pub struct Features {
    pub phi: WaveFunction,
    pub acl: f64,
    pub y: C64,
    pub x: C64,
}

impl Features {
    pub fn zero(grid: Arc<Grid>) -> Self {
        Self {
            phi: WaveFunction::zero(grid),
            acl: 0.0,
            y: C64::new(0.0, 0.0),
            x: C64::new(0.0, 0.0),
        }
    }

    /// `self + t·other`.
    pub fn combine(&self, t: f64, other: &Features) -> Result<Features> {
        Ok(Features {
            phi: self.phi.axpy(C64::from(t), &other.phi)?,
            acl: self.acl + t * other.acl,
            y: self.y + t * other.y,
            x: self.x + t * other.x,
        })
    }

    pub fn scaled(&self, t: f64) -> Features {
        Features {
            phi: self.phi.scaled(C64::from(t)),
            acl: t * self.acl,
            y: t * self.y,
            x: t * self.x,
        }
    }
}

/// Symplectic and symmetric parts of a quasi-free kernel, `σ` and `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Forms {
    pub sigma: f64,
    pub s: f64,
}

#[derive(Debug, Clone)]
pub struct CorrelationKernel {
    pub variant: KernelVariant,
    grid: Arc<Grid>,
}

impl CorrelationKernel {
    pub fn free(grid: Arc<Grid>) -> Self {
        Self {
            variant: KernelVariant::FreeVacuum,
            grid,
        }
    }

    pub fn classical(current: ClassicalCurrent, grid: Arc<Grid>) -> Self {
        Self {
            variant: KernelVariant::Classical(current),
            grid,
        }
    }

    pub fn quantum(qc: QuantumCurrent) -> Self {
        let grid = qc.grid().clone();
        Self {
            variant: KernelVariant::Quantum(qc),
            grid,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn name(&self) -> &'static str {
        match self.variant {
            KernelVariant::FreeVacuum => "free-vacuum",
            KernelVariant::Classical(_) => "classical-current",
            KernelVariant::Quantum(_) => "quantum-current",
        }
    }

    pub fn features(&self, f: &TestFunction) -> Result<Features> {
        let phi = restrict_to_shell(f, &self.grid)?;
        let mut out = Features {
            acl: 0.0,
            y: C64::new(0.0, 0.0),
            x: C64::new(0.0, 0.0),
            phi,
        };
        match &self.variant {
            KernelVariant::FreeVacuum => {}
            KernelVariant::Classical(current) => out.acl = current.acl_smear(f, &self.grid)?,
            KernelVariant::Quantum(qc) => {
                out.y = qc.y_functional(f)?;
                out.x = qc.x_from_wave(&out.phi)?;
            }
        }
        Ok(out)
    }

    pub fn corr(&self, f: &TestFunction, g: &TestFunction) -> Result<C64> {
        self.corr_from_features(&self.features(f)?, &self.features(g)?)
    }

    pub fn corr_from_features(&self, a: &Features, b: &Features) -> Result<C64> {
        let free = free_vacuum_from_features(a, b)?;
        Ok(match &self.variant {
            KernelVariant::FreeVacuum => free,
            KernelVariant::Classical(_) => free * C64::from_polar(1.0, b.acl - a.acl),
            KernelVariant::Quantum(_) => product_from_features(a, a, b, b)?,
        })
    }

    /// The kernel's own symplectic form: `σ` for the free and classical
    /// kernels, `σ^I` for the quantum diagonal.
    pub fn sigma_star(&self, a: &Features, b: &Features) -> Result<f64> {
        Ok(match &self.variant {
            KernelVariant::Quantum(_) => cross_forms(a, a, b, b)?.sigma,
            _ => scalar_product(&a.phi, &b.phi)?.im,
        })
    }

    /// `i d/dt F(t f, 0)` at `t = 0`.
    pub fn mean_field(&self, f: &TestFunction) -> Result<f64> {
        let a = self.features(f)?;
        let zero = Features::zero(self.grid.clone());
        let d = |h: f64| -> Result<C64> {
            let p = self.corr_from_features(&a.scaled(h), &zero)?;
            let m = self.corr_from_features(&a.scaled(-h), &zero)?;
            Ok((p - m) / (2.0 * h))
        };
        let r = (4.0 * d(FD_STEP / 2.0)? - d(FD_STEP)?) / 3.0;
        Ok((C64::i() * r).re)
    }

    /// `∂_t ∂_u F(t f, u g)` at `t = u = 0`, i.e. `⟨A(g) A(f)⟩`.
    pub fn second_moment_fd(&self, f: &TestFunction, g: &TestFunction) -> Result<C64> {
        let a = self.features(f)?;
        let b = self.features(g)?;
        let d = |h: f64| -> Result<C64> {
            let v = |t: f64, u: f64| self.corr_from_features(&a.scaled(t), &b.scaled(u));
            Ok((v(h, h)? - v(h, -h)? - v(-h, h)? + v(-h, -h)?) / (4.0 * h * h))
        };
        Ok((4.0 * d(FD_STEP / 2.0)? - d(FD_STEP)?) / 3.0)
    }
}

fn free_vacuum_from_features(a: &Features, b: &Features) -> Result<C64> {
    let sigma = scalar_product(&a.phi, &b.phi)?.im;
    let diff = a.phi.axpy(C64::from(-1.0), &b.phi)?;
    let s = scalar_product(&diff, &diff)?.re;
    Ok(C64::from_polar((-0.5 * s).exp(), sigma))
}

/// `e^{iσ(f,g)} e^{−½ s(f−g, f−g)}`.
pub fn free_vacuum_corr(f: &TestFunction, g: &TestFunction, grid: &Arc<Grid>) -> Result<C64> {
    CorrelationKernel::free(grid.clone()).corr(f, g)
}

/// `exp(i A^cl(g − f))`.
pub fn classical_corr_j(
    current: &ClassicalCurrent,
    f: &TestFunction,
    g: &TestFunction,
    grid: &Grid,
) -> Result<C64> {
    let acl = current.acl_smear(&g.sub(f), grid)?;
    Ok(C64::from_polar(1.0, acl))
}

/// Free vacuum kernel times the classical current phase.
pub fn interacting_corr_classical(
    current: &ClassicalCurrent,
    f: &TestFunction,
    g: &TestFunction,
    grid: &Arc<Grid>,
) -> Result<C64> {
    Ok(free_vacuum_corr(f, g, grid)? * classical_corr_j(current, f, g, grid)?)
}

/// `σ^j(f,g) = Im(conj(y_f) y_g)`, `s^j(f,g) = Re(conj(y_f) y_g)`.
pub fn current_forms(yf: C64, yg: C64) -> Forms {
    let z = yf.conj() * yg;
    Forms {
        sigma: z.im,
        s: z.re,
    }
}

/// `exp(iσ^j(f,g)) exp(−½ |y_f − y_g|²)`.
pub fn quantum_corr_j_from_y(yf: C64, yg: C64) -> C64 {
    C64::from_polar(
        (-0.5 * (yf - yg).norm_sqr()).exp(),
        current_forms(yf, yg).sigma,
    )
}

pub fn quantum_corr_j(qc: &QuantumCurrent, f: &TestFunction, g: &TestFunction) -> Result<C64> {
    Ok(quantum_corr_j_from_y(
        qc.y_functional(f)?,
        qc.y_functional(g)?,
    ))
}

/// `σ×` and `s×` of the pairs `(f, f')` and `(g, g')`; the field entries are
/// read from `phi`/`x` of `f`, `g` and the current entries from `y` of `f'`, `g'`.
pub fn cross_forms(f: &Features, fp: &Features, g: &Features, gp: &Features) -> Result<Forms> {
    let field = scalar_product(&f.phi, &g.phi)?;
    let cur = current_forms(fp.y, gp.y);
    let c1 = f.x * gp.y.conj();
    let c2 = fp.y * g.x.conj();
    Ok(Forms {
        sigma: field.im + cur.sigma + c1.im + c2.im,
        s: field.re + cur.s - c1.re - c2.re,
    })
}

/// `exp(iσ×(f,f';g,g')) exp(−½ s×(f−g, f'−g'; f−g, f'−g'))`.
pub fn product_from_features(
    f: &Features,
    fp: &Features,
    g: &Features,
    gp: &Features,
) -> Result<C64> {
    let sigma = cross_forms(f, fp, g, gp)?.sigma;
    let h = f.combine(-1.0, g)?;
    let hp = fp.combine(-1.0, gp)?;
    let s = cross_forms(&h, &hp, &h, &hp)?.s;
    Ok(C64::from_polar((-0.5 * s).exp(), sigma))
}

pub fn product_corr(
    qc: &QuantumCurrent,
    f: &TestFunction,
    fp: &TestFunction,
    g: &TestFunction,
    gp: &TestFunction,
) -> Result<C64> {
    let k = CorrelationKernel::quantum(qc.clone());
    product_from_features(
        &k.features(f)?,
        &k.features(fp)?,
        &k.features(g)?,
        &k.features(gp)?,
    )
}

pub fn interacting_corr_quantum(
    qc: &QuantumCurrent,
    f: &TestFunction,
    g: &TestFunction,
) -> Result<C64> {
    CorrelationKernel::quantum(qc.clone()).corr(f, g)
}

/// `σ^I(f,g) = σ×(f,f;g,g)`.
pub fn sigma_i(qc: &QuantumCurrent, f: &TestFunction, g: &TestFunction) -> Result<f64> {
    let k = CorrelationKernel::quantum(qc.clone());
    let (a, b) = (k.features(f)?, k.features(g)?);
    Ok(cross_forms(&a, &a, &b, &b)?.sigma)
}

/// `⟨φ|ψ⟩ − conj(x_f) y_g − conj(y_f) x_g + conj(y_f) y_g`.
pub fn second_moment_from_features(a: &Features, b: &Features) -> Result<C64> {
    Ok(scalar_product(&a.phi, &b.phi)? - a.x.conj() * b.y - a.y.conj() * b.x + a.y.conj() * b.y)
}

pub fn second_moment_quantum(
    qc: &QuantumCurrent,
    f: &TestFunction,
    g: &TestFunction,
) -> Result<C64> {
    let k = CorrelationKernel::quantum(qc.clone());
    second_moment_from_features(&k.features(f)?, &k.features(g)?)
}

/// `|F^I(f,g) − e^{2i Im⟨φ−ψ|ξ⟩} F(f,g)|` for the classical current kernel,
/// with `ξ` the shell restriction of the candidate displacer `v`.
pub fn coherent_radiation_check(
    current: &ClassicalCurrent,
    f: &TestFunction,
    g: &TestFunction,
    v: &TestFunction,
    grid: &Arc<Grid>,
) -> Result<f64> {
    let kernel = CorrelationKernel::classical(current.clone(), grid.clone());
    let fi = kernel.corr(f, g)?;
    let free = free_vacuum_corr(f, g, grid)?;
    let xi = restrict_to_shell(v, grid)?;
    let diff = restrict_to_shell(&f.sub(g), grid)?;
    let phase = 2.0 * scalar_product(&diff, &xi)?.im;
    Ok((fi - C64::from_polar(1.0, phase) * free).norm())
}

/// Norms and mean fields of a test function and a translated copy.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ShiftReport {
    pub norm: f64,
    pub shifted_norm: f64,
    pub moment: f64,
    pub shifted_moment: f64,
}

pub fn shift_to_zero(
    kernel: &CorrelationKernel,
    f: &TestFunction,
    a: &crate::Vec4,
) -> Result<ShiftReport> {
    let shifted = f.translate(a);
    let phi = restrict_to_shell(f, kernel.grid())?;
    let phis = restrict_to_shell(&shifted, kernel.grid())?;
    Ok(ShiftReport {
        norm: scalar_product(&phi, &phi)?.re,
        shifted_norm: scalar_product(&phis, &phis)?.re,
        moment: kernel.mean_field(f)?,
        shifted_moment: kernel.mean_field(&shifted)?,
    })
}
