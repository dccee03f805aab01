//! Tensor-product Gauss quadrature over 4D wavevector boxes, including
//! propagator pairings with the light-cone poles treated analytically.
//!
//! For a fixed spatial `k` the frequency integral of `N(k0) / (k0² − |k|²)`
//! is split by partial fractions into two Cauchy integrals. Each one is
//! computed as a regular Gauss sum of `(N(x) − N(p)) / (x − p)` plus the
//! exact logarithm `N(p) ∫ dx/(x − p)`; the side of the real axis on which a
//! pole sits is carried by the sign of its (possibly zero) imaginary part.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kspace::{gauss_legendre_on, pairwise_sum};
use crate::minkowski::{self, Vec4, C64};
use crate::testfn::{Box4, Decomposable};

/// Boundary condition of the Green's function used to smear a current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Greens {
    Retarded,
    Advanced,
    /// `1/(k·k + iε)`; `ε = 0` is the boundary value `ε → 0⁺`.
    Feynman {
        epsilon: f64,
    },
}

impl Greens {
    /// Poles of `1/(k0² − κ² + prescription)` in the complex `k0` plane.
    pub fn poles(&self, kappa: f64) -> (C64, C64) {
        match *self {
            Greens::Retarded => (C64::new(kappa, -0.0), C64::new(-kappa, -0.0)),
            Greens::Advanced => (C64::new(kappa, 0.0), C64::new(-kappa, 0.0)),
            Greens::Feynman { epsilon } if epsilon == 0.0 => {
                (C64::new(kappa, -0.0), C64::new(-kappa, 0.0))
            }
            Greens::Feynman { epsilon } => {
                let p = C64::new(kappa * kappa, -epsilon).sqrt();
                (p, -p)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Greens::Feynman { epsilon } if !(epsilon >= 0.0 && epsilon.is_finite()) => Err(
                Error::InvalidArgument(format!("Feynman epsilon must be >= 0, got {epsilon}")),
            ),
            _ => Ok(()),
        }
    }
}

/// Node-count policy for the tensor rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub base_nodes: usize,
    /// Extra nodes per radian of phase accumulated across a cell.
    pub nodes_per_radian: f64,
}

impl Default for Rule {
    fn default() -> Self {
        Self {
            base_nodes: 24,
            nodes_per_radian: 0.6,
        }
    }
}

impl Rule {
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            base_nodes: ((self.base_nodes as f64) * factor).round().max(2.0) as usize,
            nodes_per_radian: self.nodes_per_radian * factor,
        }
    }

    fn nodes(&self, width: f64, rate: f64) -> usize {
        self.base_nodes + (self.nodes_per_radian * rate * width).ceil() as usize
    }
}

/// A spatial cell with the frequency range to integrate over it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    pub k0: (f64, f64),
}

/// Splits the union of `boxes` into spatially disjoint cells. Along the
/// frequency axis each cell spans the hull of the boxes covering it, so
/// integrands vanishing outside the boxes vanish at both frequency ends.
pub fn disjoint_cells(boxes: &[Box4]) -> Vec<Cell> {
    let mut cuts: [Vec<f64>; 3] = Default::default();
    for b in boxes {
        for a in 0..3 {
            cuts[a].push(b.lo[a + 1]);
            cuts[a].push(b.hi[a + 1]);
        }
    }
    for c in cuts.iter_mut() {
        c.sort_by(f64::total_cmp);
        c.dedup();
    }
    let mut cells = Vec::new();
    for x in cuts[0].windows(2) {
        for y in cuts[1].windows(2) {
            for z in cuts[2].windows(2) {
                let lo = [x[0], y[0], z[0]];
                let hi = [x[1], y[1], z[1]];
                let mid = [
                    0.5 * (x[0] + x[1]),
                    0.5 * (y[0] + y[1]),
                    0.5 * (z[0] + z[1]),
                ];
                let mut k0: Option<(f64, f64)> = None;
                for b in boxes {
                    if (0..3).all(|a| mid[a] > b.lo[a + 1] && mid[a] < b.hi[a + 1]) {
                        k0 = Some(match k0 {
                            None => (b.lo[0], b.hi[0]),
                            Some((l, h)) => (l.min(b.lo[0]), h.max(b.hi[0])),
                        });
                    }
                }
                if let Some(k0) = k0 {
                    cells.push(Cell { lo, hi, k0 });
                }
            }
        }
    }
    cells
}

/// Pairwise intersections of two box families.
pub fn overlaps(a: &[Box4], b: &[Box4]) -> Vec<Box4> {
    a.iter()
        .flat_map(|x| b.iter().filter_map(move |y| x.intersect(y)))
        .collect()
}

fn spatial_nodes(rule: &Rule, cell: &Cell, rates: &Vec4) -> [Vec<(f64, f64)>; 3] {
    std::array::from_fn(|a| {
        let w = cell.hi[a] - cell.lo[a];
        gauss_legendre_on(rule.nodes(w, rates[a + 1]), cell.lo[a], cell.hi[a])
    })
}

/// `∫ g(k) d⁴k` over the union of `boxes`, assuming `g` vanishes outside it.
pub fn integrate_boxes(
    rule: &Rule,
    boxes: &[Box4],
    rates: &Vec4,
    mut g: impl FnMut(&Vec4) -> C64,
) -> C64 {
    let mut parts = Vec::new();
    for cell in disjoint_cells(boxes) {
        let [xs, ys, zs] = spatial_nodes(rule, &cell, rates);
        let (a, b) = cell.k0;
        let ts = gauss_legendre_on(rule.nodes(b - a, rates[0]), a, b);
        let mut acc = Vec::with_capacity(xs.len() * ys.len() * zs.len());
        for &(x, wx) in &xs {
            for &(y, wy) in &ys {
                for &(z, wz) in &zs {
                    let mut line = C64::new(0.0, 0.0);
                    for &(t, wt) in &ts {
                        line += g(&[t, x, y, z]) * wt;
                    }
                    acc.push(line * (wx * wy * wz));
                }
            }
        }
        parts.push(pairwise_sum(&acc));
    }
    pairwise_sum(&parts)
}

/// `∫_a^b dx / (x − p)`, with the sign of a zero imaginary part selecting
/// the side of the real axis.
pub fn cauchy_log(a: f64, b: f64, p: C64) -> C64 {
    let (da, db) = (a - p.re, b - p.re);
    let im = -p.im;
    let re = 0.5 * ((db * db + im * im).ln() - (da * da + im * im).ln());
    C64::new(re, im.atan2(db) - im.atan2(da))
}

/// `∫_a^b N(x) / (x − p) dx` with nodes `ts` on `[a, b]`.
fn cauchy_integral(
    ts: &[(f64, f64)],
    values: &[C64],
    a: f64,
    b: f64,
    p: C64,
    mut n_at: impl FnMut(f64) -> C64,
) -> C64 {
    let near = p.re > a && p.re < b && p.im.abs() < (b - a);
    if !near {
        return ts
            .iter()
            .zip(values)
            .map(|(&(t, w), v)| v * w / (C64::from(t) - p))
            .sum();
    }
    let np = n_at(p.re);
    let h = 1e-7 * (b - a);
    let mut acc = C64::new(0.0, 0.0);
    for (&(t, w), v) in ts.iter().zip(values) {
        let d = C64::from(t) - p;
        if d.norm() == 0.0 {
            acc += w * (n_at(t + h) - n_at(t - h)) / (2.0 * h);
        } else {
            acc += w * (v - np) / d;
        }
    }
    acc + np * cauchy_log(a, b, p)
}

/// `∫ d⁴k f̃(−k) · Ã(k)` with `Ã(k) = −j̃(k) / (k·k + prescription)`.
///
/// The integral is bilinear, so it is summed over pairs of single-box pieces;
/// each pair is integrated over the intersection of its two boxes, on which
/// the integrand vanishes smoothly at every face.
pub fn propagator_pairing<F, J>(rule: &Rule, f: &F, j: &J, greens: Greens) -> Result<C64>
where
    F: Decomposable + ?Sized,
    J: Decomposable + ?Sized,
{
    greens.validate()?;
    let mut parts = Vec::new();
    for p in f.pieces() {
        let fbox = p.support().mirror();
        for q in j.pieces() {
            if let Some(cell) = fbox.intersect(&q.support()) {
                let (rp, rq) = (p.phase_rates(), q.phase_rates());
                let rates: Vec4 = std::array::from_fn(|i| rp[i] + rq[i]);
                let numerator = |k: &Vec4| -minkowski::dot(&p.eval(&minkowski::neg(k)), &q.eval(k));
                parts.push(pair_cell(rule, &cell, &rates, greens, numerator)?);
            }
        }
    }
    Ok(pairwise_sum(&parts))
}

fn pair_cell(
    rule: &Rule,
    cell: &Box4,
    rates: &Vec4,
    greens: Greens,
    numerator: impl Fn(&Vec4) -> C64,
) -> Result<C64> {
    let axes: [Vec<(f64, f64)>; 4] = std::array::from_fn(|a| {
        gauss_legendre_on(rule.nodes(cell.width(a), rates[a]), cell.lo[a], cell.hi[a])
    });
    let [ts, xs, ys, zs] = &axes;
    let (a, b) = (cell.lo[0], cell.hi[0]);
    let mut acc = Vec::with_capacity(xs.len() * ys.len() * zs.len());
    let mut values = vec![C64::new(0.0, 0.0); ts.len()];
    for &(x, wx) in xs {
        for &(y, wy) in ys {
            for &(z, wz) in zs {
                let line = |t: f64| numerator(&[t, x, y, z]);
                for (v, &(t, _)) in values.iter_mut().zip(ts) {
                    *v = line(t);
                }
                if values.iter().all(|v| *v == C64::new(0.0, 0.0)) {
                    continue;
                }
                let kappa = (x * x + y * y + z * z).sqrt();
                let (p1, p2) = greens.poles(kappa);
                let denom = p1 - p2;
                if denom.norm() == 0.0 {
                    return Err(Error::SingularIntegrand(
                        "double pole at the origin of wavevector space".into(),
                    ));
                }
                let i1 = cauchy_integral(ts, &values, a, b, p1, line);
                let i2 = cauchy_integral(ts, &values, a, b, p2, line);
                acc.push((i1 - i2) / denom * (wx * wy * wz));
            }
        }
    }
    Ok(pairwise_sum(&acc))
}
