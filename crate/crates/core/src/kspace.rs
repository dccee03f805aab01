//! Spherical quadrature over a momentum shell `k_min <= |k| <= k_max`.
//!
//! Radial and polar (`cos θ`) directions use Gauss–Legendre rules, the azimuth
//! a uniform trapezoid rule. Each composite node carries the full measure
//! weight `w_r · r² · w_ct · w_phi`, so `Σ w_i g(k_i) ≈ ∫ g d³k`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::C64;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, cached by order.
pub fn gauss_legendre(n: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap());
            let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            Arc::new(pairs)
        })
        .clone()
}

/// Gauss–Legendre nodes and weights mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    gauss_legendre(n)
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect()
}

/// Pairwise summation; the reduction tree depends only on the length.
pub fn pairwise_sum(values: &[C64]) -> C64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut acc = C64::new(0.0, 0.0);
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn pairwise_sum_real(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_real(&values[..mid]) + pairwise_sum_real(&values[mid..])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_r: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub k_min: f64,
    pub k_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_r: 64,
            n_theta: 32,
            n_phi: 64,
            k_min: 0.05,
            k_max: 3.0,
        }
    }
}

impl GridSpec {
    pub fn new(n_r: usize, n_theta: usize, n_phi: usize, k_min: f64, k_max: f64) -> Self {
        Self {
            n_r,
            n_theta,
            n_phi,
            k_min,
            k_max,
        }
    }

    /// Uniform resolution multiplier, used for convergence studies.
    pub fn scaled(&self, factor: f64) -> Self {
        let s = |n: usize| ((n as f64) * factor).round().max(1.0) as usize;
        Self {
            n_r: s(self.n_r),
            n_theta: s(self.n_theta),
            n_phi: s(self.n_phi),
            ..*self
        }
    }

    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.n_r, self.n_theta, self.n_phi, self.k_min, self.k_max)
    }
}

/// One composite quadrature node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub k: [f64; 3],
    /// `|k|`
    pub norm: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    spec: GridSpec,
    pub r_nodes: Vec<f64>,
    pub r_weights: Vec<f64>,
    pub ct_nodes: Vec<f64>,
    pub ct_weights: Vec<f64>,
    pub phi_nodes: Vec<f64>,
    pub phi_weights: Vec<f64>,
    nodes: Vec<Node>,
}

impl Grid {
    pub fn new(n_r: usize, n_theta: usize, n_phi: usize, k_min: f64, k_max: f64) -> Result<Self> {
        if n_r < 2 || n_theta < 2 {
            return Err(Error::InvalidGrid(format!(
                "n_r and n_theta must be >= 2 (got {n_r}, {n_theta})"
            )));
        }
        if n_phi < 4 {
            return Err(Error::InvalidGrid(format!(
                "n_phi must be >= 4 (got {n_phi})"
            )));
        }
        if !(k_min.is_finite() && k_max.is_finite()) || k_min <= 0.0 || k_max <= k_min {
            return Err(Error::InvalidGrid(format!(
                "need 0 < k_min < k_max (got {k_min}, {k_max})"
            )));
        }

        let (r_nodes, r_weights): (Vec<f64>, Vec<f64>) =
            gauss_legendre_on(n_r, k_min, k_max).into_iter().unzip();
        let (ct_nodes, ct_weights): (Vec<f64>, Vec<f64>) =
            gauss_legendre(n_theta).iter().copied().unzip();
        let dphi = 2.0 * PI / n_phi as f64;
        let phi_nodes: Vec<f64> = (0..n_phi).map(|j| (j as f64 + 0.5) * dphi).collect();
        let phi_weights = vec![dphi; n_phi];

        let mut nodes = Vec::with_capacity(n_r * n_theta * n_phi);
        for (&r, &wr) in r_nodes.iter().zip(&r_weights) {
            for (&ct, &wct) in ct_nodes.iter().zip(&ct_weights) {
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                for (&phi, &wphi) in phi_nodes.iter().zip(&phi_weights) {
                    nodes.push(Node {
                        k: [r * st * phi.cos(), r * st * phi.sin(), r * ct],
                        norm: r,
                        weight: wr * r * r * wct * wphi,
                    });
                }
            }
        }

        Ok(Self {
            spec: GridSpec::new(n_r, n_theta, n_phi, k_min, k_max),
            r_nodes,
            r_weights,
            ct_nodes,
            ct_weights,
            phi_nodes,
            phi_weights,
            nodes,
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn k_min(&self) -> f64 {
        self.spec.k_min
    }

    pub fn k_max(&self) -> f64 {
        self.spec.k_max
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Volume of the shell, `(4π/3)(k_max³ − k_min³)`.
    pub fn shell_volume(&self) -> f64 {
        4.0 * PI / 3.0 * (self.spec.k_max.powi(3) - self.spec.k_min.powi(3))
    }

    /// `Σ_i w_i · samples_i`.
    pub fn integrate(&self, samples: &[C64]) -> Result<C64> {
        if samples.len() != self.nodes.len() {
            return Err(Error::ShapeMismatch {
                expected: self.nodes.len(),
                found: samples.len(),
            });
        }
        let weighted: Vec<C64> = samples
            .iter()
            .zip(&self.nodes)
            .map(|(s, n)| s * n.weight)
            .collect();
        Ok(pairwise_sum(&weighted))
    }

    pub fn integrate_fn<F>(&self, mut integrand: F) -> C64
    where
        F: FnMut(&Node) -> C64,
    {
        let weighted: Vec<C64> = self.nodes.iter().map(|n| integrand(n) * n.weight).collect();
        pairwise_sum(&weighted)
    }
}
