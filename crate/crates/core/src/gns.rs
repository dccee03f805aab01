//! Finite GNS data: Gram matrices of coherent vectors `v_f = W(f)*Ω`,
//! positivity, covariance and the projective Weyl relations.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::C64;
use crate::states::{CorrelationKernel, Features};
use crate::testfn::TestFunction;

/// Drop threshold for null directions in the pivoted Cholesky factorization.
pub const CHOLESKY_THRESHOLD: f64 = 1e-10;
/// Gram matrices with `min_eig < −SEVERE·max_eig` indicate a broken kernel.
pub const SEVERE_INDEFINITENESS: f64 = 1e-6;

pub type Matrix = DMatrix<C64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub dimension: usize,
    pub eigenvalues: Vec<f64>,
    pub min_eig: f64,
    pub max_eig: f64,
    pub verdict: bool,
    pub tolerance: f64,
}

/// `G[m][n] = F(f_n, f_m) = ⟨v_m|v_n⟩`.
pub fn gram_matrix(kernel: &CorrelationKernel, family: &[TestFunction]) -> Result<Matrix> {
    let feats = family
        .iter()
        .map(|f| kernel.features(f))
        .collect::<Result<Vec<_>>>()?;
    gram_from_features(kernel, &feats)
}

pub fn gram_from_features(kernel: &CorrelationKernel, feats: &[Features]) -> Result<Matrix> {
    let n = feats.len();
    let mut g = Matrix::zeros(n, n);
    for m in 0..n {
        for k in 0..n {
            g[(m, k)] = kernel.corr_from_features(&feats[k], &feats[m])?;
        }
    }
    Ok(g)
}

pub fn from_rows(rows: &[Vec<C64>]) -> Result<Matrix> {
    let n = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: r.len(),
        });
    }
    Ok(Matrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn hermitian_part(g: &Matrix) -> Result<Matrix> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            rows: g.nrows(),
            cols: g.ncols(),
        });
    }
    Ok((g + g.adjoint()) * C64::from(0.5))
}

/// Sorted eigenvalues of the Hermitian part of `g`.
pub fn eigenvalues(g: &Matrix) -> Result<Vec<f64>> {
    let h = hermitian_part(g)?;
    if h.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Verdict `min_eig ≥ −tol·max(|max_eig|, 1)`.
pub fn positivity_report(g: &Matrix, tol: f64) -> Result<GramReport> {
    let eigenvalues = eigenvalues(g)?;
    let min_eig = eigenvalues.first().copied().unwrap_or(0.0);
    let max_eig = eigenvalues.last().copied().unwrap_or(0.0);
    Ok(GramReport {
        dimension: g.nrows(),
        verdict: min_eig >= -tol * max_eig.abs().max(1.0),
        eigenvalues,
        min_eig,
        max_eig,
        tolerance: tol,
    })
}

/// Coordinates `X` (rank × n) with `X†X ≈ G`, from a diagonally pivoted
/// Cholesky factorization that stops once the largest remaining pivot falls
/// below `threshold · max diag`.
pub fn pivoted_cholesky(g: &Matrix, threshold: f64) -> Result<Matrix> {
    let mut a = hermitian_part(g)?;
    let n = a.nrows();
    let scale = (0..n).map(|i| a[(i, i)].re).fold(0.0, f64::max);
    let mut rows: Vec<Vec<C64>> = Vec::new();
    let mut used = vec![false; n];
    loop {
        let pivot = (0..n)
            .filter(|&i| !used[i])
            .max_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
        let Some(p) = pivot else { break };
        let d = a[(p, p)].re;
        if !(d > threshold * scale) {
            break;
        }
        used[p] = true;
        let root = d.sqrt();
        // Row of X: X[r][j] = A[p][j] / sqrt(A[p][p]).
        let row: Vec<C64> = (0..n).map(|j| a[(p, j)] / root).collect();
        for i in 0..n {
            for j in 0..n {
                let delta = row[i].conj() * row[j];
                a[(i, j)] -= delta;
            }
        }
        rows.push(row);
    }
    Ok(Matrix::from_fn(rows.len(), n, |r, j| rows[r][j]))
}

pub fn numerical_rank(g: &Matrix, threshold: f64) -> Result<usize> {
    Ok(pivoted_cholesky(g, threshold)?.nrows())
}

/// `|F(f+h, g+h) − e^{iσ*(f−g,h)} F(f,g)| / |F(f,g)|`.
pub fn covariance_residual(
    kernel: &CorrelationKernel,
    f: &TestFunction,
    g: &TestFunction,
    h: &TestFunction,
) -> Result<f64> {
    let (ff, fg, fh) = (
        kernel.features(f)?,
        kernel.features(g)?,
        kernel.features(h)?,
    );
    let (ffh, fgh) = (kernel.features(&f.add(h))?, kernel.features(&g.add(h))?);
    covariance_residual_from_features(kernel, &ff, &fg, &fh, &ffh, &fgh)
}

/// Same residual from precomputed features of `f`, `g`, `h`, `f+h` and `g+h`.
pub fn covariance_residual_from_features(
    kernel: &CorrelationKernel,
    ff: &Features,
    fg: &Features,
    fh: &Features,
    ffh: &Features,
    fgh: &Features,
) -> Result<f64> {
    let shifted = kernel.corr_from_features(ffh, fgh)?;
    let base = kernel.corr_from_features(ff, fg)?;
    let sigma = kernel.sigma_star(&ff.combine(-1.0, fg)?, fh)?;
    Ok((shifted - C64::from_polar(1.0, sigma) * base).norm() / base.norm())
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Representation residual of `U(h) = W(h)*`, acting as
/// `U(h) v_f = e^{−iσ*(f,h)} v_{f+h}`, on the span of a base family.
///
/// Returns the larger of the isometry defect `‖Y†Y − X†X‖` of each `U(h)`
/// on its domain and the product defect
/// `‖U(h2) U(h1) X − e^{−iσ*(h1,h2)} U(h1+h2) X‖`.
pub fn weyl_consistency(
    kernel: &CorrelationKernel,
    base: &[TestFunction],
    h1: &TestFunction,
    h2: &TestFunction,
) -> Result<f64> {
    let h12 = h1.add(h2);
    let shifts = [TestFunction::zero(), h1.clone(), h2.clone(), h12.clone()];
    let family: Vec<TestFunction> = shifts
        .iter()
        .flat_map(|s| base.iter().map(move |f| f.add(s)))
        .collect();
    let feats = family
        .iter()
        .map(|f| kernel.features(f))
        .collect::<Result<Vec<_>>>()?;
    let gram = gram_from_features(kernel, &feats)?;
    let report = positivity_report(&gram, 0.0)?;
    if report.min_eig < -SEVERE_INDEFINITENESS * report.max_eig.abs().max(1.0) {
        return Err(Error::InconsistentKernel {
            min_eig: report.min_eig,
            max_eig: report.max_eig,
        });
    }
    let x = pivoted_cholesky(&gram, CHOLESKY_THRESHOLD)?;
    let nb = base.len();
    let block = |b: usize| x.columns(b * nb, nb).into_owned();
    let (hf1, hf2, hf12) = (
        kernel.features(h1)?,
        kernel.features(h2)?,
        kernel.features(&h12)?,
    );

    // Columns of `src` block mapped to `dst` block with phases e^{−iσ*(f,h)}.
    let image = |src: usize, dst: usize, h: &Features| -> Result<Matrix> {
        let mut y = block(dst);
        for j in 0..nb {
            let s = kernel.sigma_star(&feats[src * nb + j], h)?;
            let phase = C64::from_polar(1.0, -s);
            for v in y.column_mut(j).iter_mut() {
                *v *= phase;
            }
        }
        Ok(y)
    };
    let hcat = |a: &Matrix, b: &Matrix| {
        let mut m = Matrix::zeros(a.nrows(), a.ncols() + b.ncols());
        m.columns_mut(0, a.ncols()).copy_from(a);
        m.columns_mut(a.ncols(), b.ncols()).copy_from(b);
        m
    };
    let operator = |dom: &Matrix, img: &Matrix| -> Result<(Matrix, f64)> {
        let pinv = dom
            .clone()
            .pseudo_inverse(CHOLESKY_THRESHOLD.sqrt())
            .map_err(|e| Error::InvalidArgument(e.into()))?;
        let iso = max_abs(&(img.adjoint() * img - dom.adjoint() * dom));
        Ok((img * pinv, iso))
    };

    let xb = block(0);
    let (m1, iso1) = operator(&xb, &image(0, 1, &hf1)?)?;
    let (m12, iso12) = operator(&xb, &image(0, 3, &hf12)?)?;
    let dom2 = hcat(&xb, &block(1));
    let img2 = hcat(&image(0, 2, &hf2)?, &image(1, 3, &hf2)?);
    let (m2, iso2) = operator(&dom2, &img2)?;

    let phase = C64::from_polar(1.0, -kernel.sigma_star(&hf1, &hf2)?);
    let product = &m2 * (&m1 * &xb) - (&m12 * &xb) * phase;
    Ok(max_abs(&product).max(iso1).max(iso2).max(iso12))
}
