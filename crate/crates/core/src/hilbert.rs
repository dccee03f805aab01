//! Photon wave functions on the light cone and their degenerate scalar product.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kspace::{pairwise_sum, Grid, Node};
use crate::minkowski::{self, CVec4, C64};
use crate::testfn::{restrict_to_shell, TestFunction};

/// Spatial components of a wave function at every node of a [`Grid`]. The
/// time component is always derived as `k̂·φ`.
#[derive(Debug, Clone)]
pub struct WaveFunction {
    grid: Arc<Grid>,
    spatial: Vec<[C64; 3]>,
    phi0_residual: f64,
}

impl WaveFunction {
    pub fn new(grid: Arc<Grid>, spatial: Vec<[C64; 3]>) -> Result<Self> {
        if spatial.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                found: spatial.len(),
            });
        }
        if spatial.iter().flatten().any(|z| !z.is_finite()) {
            return Err(Error::InvalidArgument(
                "non-finite wave function value".into(),
            ));
        }
        Ok(Self::from_parts(grid, spatial, 0.0))
    }

    pub(crate) fn from_parts(grid: Arc<Grid>, spatial: Vec<[C64; 3]>, phi0_residual: f64) -> Self {
        Self {
            grid,
            spatial,
            phi0_residual,
        }
    }

    pub fn zero(grid: Arc<Grid>) -> Self {
        let n = grid.len();
        Self::from_parts(grid, vec![[C64::new(0.0, 0.0); 3]; n], 0.0)
    }

    /// Builds `φ_α(k) = v(node)` from a closure over grid nodes.
    pub fn from_fn(grid: Arc<Grid>, mut v: impl FnMut(&Node) -> [C64; 3]) -> Result<Self> {
        let spatial = grid.nodes().iter().map(&mut v).collect();
        Self::new(grid, spatial)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn spatial(&self) -> &[[C64; 3]] {
        &self.spatial
    }

    /// Mismatch between the derived `k̂·φ` and the directly evaluated time
    /// component at restriction, relative to the largest value.
    pub fn phi0_residual(&self) -> f64 {
        self.phi0_residual
    }

    pub fn time_component(&self, i: usize) -> C64 {
        let n = &self.grid.nodes()[i];
        let s = &self.spatial[i];
        (s[0] * n.k[0] + s[1] * n.k[1] + s[2] * n.k[2]) / n.norm
    }

    fn check_same(&self, other: &WaveFunction) -> Result<()> {
        same_grid(&self.grid, &other.grid)
    }

    pub fn axpy(&self, a: C64, other: &WaveFunction) -> Result<WaveFunction> {
        self.check_same(other)?;
        let spatial = self
            .spatial
            .iter()
            .zip(&other.spatial)
            .map(|(x, y)| [x[0] + a * y[0], x[1] + a * y[1], x[2] + a * y[2]])
            .collect();
        Ok(Self::from_parts(self.grid.clone(), spatial, 0.0))
    }

    pub fn scaled(&self, a: C64) -> WaveFunction {
        let spatial = self
            .spatial
            .iter()
            .map(|x| [a * x[0], a * x[1], a * x[2]])
            .collect();
        Self::from_parts(self.grid.clone(), spatial, self.phi0_residual)
    }

    /// `∫ d³k |φ|²_E / (2|k|)`, the Euclidean magnitude against which
    /// degenerate-form values are compared.
    pub fn magnitude_scale(&self) -> f64 {
        self.grid
            .nodes()
            .iter()
            .zip(&self.spatial)
            .map(|(n, s)| n.weight * s.iter().map(|z| z.norm_sqr()).sum::<f64>() / n.norm)
            .sum::<f64>()
    }
}

pub(crate) fn same_grid(a: &Arc<Grid>, b: &Arc<Grid>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a.spec() == b.spec() {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Four-vector valued data on the nodes of a shell grid.
pub trait ShellVector {
    fn grid(&self) -> &Arc<Grid>;
    fn four_vector(&self, i: usize) -> CVec4;
}

impl ShellVector for WaveFunction {
    fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    fn four_vector(&self, i: usize) -> CVec4 {
        let s = &self.spatial[i];
        [self.time_component(i), s[0], s[1], s[2]]
    }
}

/// The scalar-product form `−∫ d³k (1/2|k|) conj(a^μ) b_μ` for arbitrary
/// four-vector data, without assuming the time component is derived.
pub fn pairing<A, B>(a: &A, b: &B) -> Result<C64>
where
    A: ShellVector + ?Sized,
    B: ShellVector + ?Sized,
{
    same_grid(a.grid(), b.grid())?;
    let terms: Vec<C64> = a
        .grid()
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            -minkowski::dot_conj(&a.four_vector(i), &b.four_vector(i)) * (n.weight / (2.0 * n.norm))
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

fn integrate_pairs(
    phi: &WaveFunction,
    psi: &WaveFunction,
    density: impl Fn(&Node, &[C64; 3], &[C64; 3]) -> C64,
) -> Result<C64> {
    phi.check_same(psi)?;
    let terms: Vec<C64> = phi
        .grid
        .nodes()
        .iter()
        .zip(phi.spatial.iter().zip(&psi.spatial))
        .map(|(n, (a, b))| density(n, a, b) * n.weight)
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `⟨φ|ψ⟩ = −∫ d³k (1/2|k|) (conj(φ_0)ψ_0 − Σ_α conj(φ_α)ψ_α)`.
pub fn scalar_product(phi: &WaveFunction, psi: &WaveFunction) -> Result<C64> {
    integrate_pairs(phi, psi, |n, a, b| {
        let a0 = (a[0] * n.k[0] + a[1] * n.k[1] + a[2] * n.k[2]) / n.norm;
        let b0 = (b[0] * n.k[0] + b[1] * n.k[1] + b[2] * n.k[2]) / n.norm;
        let spatial = a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2];
        -(a0.conj() * b0 - spatial) / (2.0 * n.norm)
    })
}

/// Same form written with the transverse projector
/// `(δ_{αβ}|k|² − k_α k_β) / (2|k|³)`.
pub fn scalar_product_transverse(phi: &WaveFunction, psi: &WaveFunction) -> Result<C64> {
    integrate_pairs(phi, psi, |n, a, b| {
        let k2 = n.norm * n.norm;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                let p = if i == j { k2 } else { 0.0 } - n.k[i] * n.k[j];
                acc += a[i].conj() * b[j] * p;
            }
        }
        acc / (2.0 * k2 * n.norm)
    })
}

/// `Im⟨φ_f|φ_g⟩`.
pub fn sigma(f: &TestFunction, g: &TestFunction, grid: &Arc<Grid>) -> Result<f64> {
    Ok(restricted_product(f, g, grid)?.im)
}

/// `Re⟨φ_f|φ_g⟩`.
pub fn s_form(f: &TestFunction, g: &TestFunction, grid: &Arc<Grid>) -> Result<f64> {
    Ok(restricted_product(f, g, grid)?.re)
}

fn restricted_product(f: &TestFunction, g: &TestFunction, grid: &Arc<Grid>) -> Result<C64> {
    let phi = restrict_to_shell(f, grid)?;
    let psi = restrict_to_shell(g, grid)?;
    scalar_product(&phi, &psi)
}

/// Whether `φ` lies in the null space of the form, relative to its own
/// Euclidean magnitude.
pub fn null_space_check(phi: &WaveFunction, tol: f64) -> bool {
    let norm = scalar_product(phi, phi).map(|z| z.re).unwrap_or(f64::NAN);
    norm <= tol * phi.magnitude_scale()
}
