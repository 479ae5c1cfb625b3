//! Dense linear-algebra kernels: Hermitian eigendecomposition, SVD, and
//! polynomial least squares, backed by `faer`.
//!
//! Matrices cross the boundary as `ndarray` arrays; faer is an internal
//! detail. Hermitian solves detect purely real input and run in `f64`,
//! which roughly halves the work for the large real-symmetric sectors.

use crate::{C64, Error, Result};
use faer::{Mat, Side};
use ndarray::{Array1, Array2};

/// Imaginary parts below this make a matrix "real" for solver dispatch.
const REAL_DETECT_TOL: f64 = 1e-14;

fn to_faer_c64(a: &Array2<C64>) -> Mat<faer::c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn to_faer_f64(a: &Array2<C64>) -> Mat<f64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].re)
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending,
/// eigenvectors as matching columns.
pub fn hermitian_eigen(a: &Array2<C64>) -> Result<(Vec<f64>, Array2<C64>)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "eigensolve of non-square {:?}",
            a.dim()
        )));
    }
    if n == 0 {
        return Ok((Vec::new(), Array2::zeros((0, 0))));
    }
    let is_real = a.iter().all(|z| z.im.abs() < REAL_DETECT_TOL);
    if is_real {
        let evd = to_faer_f64(a)
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
        let energies: Vec<f64> = (0..n).map(|i| evd.S()[i]).collect();
        let u = evd.U();
        let vectors = Array2::from_shape_fn((n, n), |(i, j)| C64::new(u[(i, j)], 0.0));
        Ok((energies, vectors))
    } else {
        let evd = to_faer_c64(a)
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
        let energies: Vec<f64> = (0..n).map(|i| evd.S()[i].re).collect();
        let u = evd.U();
        let vectors = Array2::from_shape_fn((n, n), |(i, j)| u[(i, j)]);
        Ok((energies, vectors))
    }
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &Array2<C64>) -> Result<Vec<f64>> {
    let is_real = a.iter().all(|z| z.im.abs() < REAL_DETECT_TOL);
    if is_real {
        to_faer_f64(a)
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigensolver(format!("{e:?}")))
    } else {
        to_faer_c64(a)
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigensolver(format!("{e:?}")))
    }
}

/// Singular values, nonincreasing.
pub fn singular_values(a: &Array2<C64>) -> Result<Vec<f64>> {
    to_faer_c64(a)
        .singular_values()
        .map_err(|e| Error::Eigensolver(format!("svd: {e:?}")))
}

/// Full SVD of a real matrix: `a = u * diag(s) * v^T` with square `u`, `v`.
pub fn svd_real_full(a: &Array2<f64>) -> Result<(Array2<f64>, Vec<f64>, Array2<f64>)> {
    let (m, n) = a.dim();
    let fa = Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)]);
    let svd = fa
        .svd()
        .map_err(|e| Error::Eigensolver(format!("svd: {e:?}")))?;
    let k = m.min(n);
    let s: Vec<f64> = (0..k).map(|i| svd.S()[i]).collect();
    let u = Array2::from_shape_fn((m, m), |(i, j)| svd.U()[(i, j)]);
    let v = Array2::from_shape_fn((n, n), |(i, j)| svd.V()[(i, j)]);
    Ok((u, s, v))
}

/// Full SVD of a complex matrix: square `u` (m x m) and `v` (n x n).
pub fn svd_complex_full(a: &Array2<C64>) -> Result<(Array2<C64>, Vec<f64>, Array2<C64>)> {
    let (m, n) = a.dim();
    let svd = to_faer_c64(a)
        .svd()
        .map_err(|e| Error::Eigensolver(format!("svd: {e:?}")))?;
    let k = m.min(n);
    let s: Vec<f64> = (0..k).map(|i| svd.S()[i].re).collect();
    let u = Array2::from_shape_fn((m, m), |(i, j)| svd.U()[(i, j)]);
    let v = Array2::from_shape_fn((n, n), |(i, j)| svd.V()[(i, j)]);
    Ok((u, s, v))
}

/// Thin SVD of a complex matrix: `a = u * diag(s) * v^H`.
pub fn svd_thin(a: &Array2<C64>) -> Result<(Array2<C64>, Vec<f64>, Array2<C64>)> {
    let (m, n) = a.dim();
    let svd = to_faer_c64(a)
        .thin_svd()
        .map_err(|e| Error::Eigensolver(format!("svd: {e:?}")))?;
    let k = m.min(n);
    let s: Vec<f64> = (0..k).map(|i| svd.S()[i].re).collect();
    let u = Array2::from_shape_fn((m, k), |(i, j)| svd.U()[(i, j)]);
    let vh = Array2::from_shape_fn((k, n), |(i, j)| svd.V()[(j, i)].conj());
    Ok((u, s, vh))
}

/// Least-squares polynomial fit with internal rescaling of the abscissa to
/// `[-1, 1]`. Coefficients apply to the scaled variable; use
/// [`PolyFit::eval`] rather than reading them directly.
#[derive(Debug, Clone)]
pub struct PolyFit {
    coeffs: Vec<f64>,
    x_mid: f64,
    x_half: f64,
    /// Degree actually used (reduced when the design matrix is rank-deficient).
    pub degree: usize,
}

impl PolyFit {
    pub fn eval(&self, x: f64) -> f64 {
        let t = (x - self.x_mid) / self.x_half;
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

/// Fit `y ~ p(x)` with `degree + 1` coefficients, solving via SVD. The
/// degree is lowered automatically while the scaled Vandermonde matrix is
/// numerically rank-deficient.
pub fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Result<PolyFit> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::InvalidArgument("polyfit needs matching nonempty data".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in x {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let x_mid = 0.5 * (lo + hi);
    let x_half = if hi > lo { 0.5 * (hi - lo) } else { 1.0 };

    let mut degree = degree.min(x.len().saturating_sub(1));
    loop {
        let cols = degree + 1;
        let mut a = Array2::<f64>::zeros((x.len(), cols));
        for (r, &xv) in x.iter().enumerate() {
            let t = (xv - x_mid) / x_half;
            let mut p = 1.0;
            for c in 0..cols {
                a[(r, c)] = p;
                p *= t;
            }
        }
        let (u, s, v) = svd_real_full(&a)?;
        let rank_ok = s.iter().all(|&sv| sv > 1e-10 * s[0]);
        if !rank_ok {
            if degree == 1 {
                return Err(Error::Eigensolver(
                    "polynomial fit ill-conditioned even at degree 1".into(),
                ));
            }
            degree -= 1;
            continue;
        }
        // coeffs = V * diag(1/s) * U^T * y (thin part of the full factors)
        let mut uty = vec![0.0; cols];
        for c in 0..cols {
            for (r, &yv) in y.iter().enumerate() {
                uty[c] += u[(r, c)] * yv;
            }
        }
        let mut coeffs = vec![0.0; cols];
        for i in 0..cols {
            for c in 0..cols {
                coeffs[i] += v[(i, c)] * uty[c] / s[c];
            }
        }
        return Ok(PolyFit { coeffs, x_mid, x_half, degree });
    }
}

/// Straight-line least squares returning `(slope, intercept, rms_residual)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidArgument("linear fit needs >= 2 points".into()));
    }
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::InvalidArgument("degenerate abscissa in linear fit".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mut ss = 0.0;
    for (&xv, &yv) in x.iter().zip(y) {
        let r = yv - (slope * xv + intercept);
        ss += r * r;
    }
    Ok((slope, intercept, (ss / n).sqrt()))
}

/// Dense complex matrix product via the faer kernels.
pub fn dense_mul(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    assert_eq!(a.ncols(), b.nrows(), "matmul shape mismatch");
    let fa = to_faer_c64(a);
    let fb = to_faer_c64(b);
    let fc = fa * fb;
    Array2::from_shape_fn((a.nrows(), b.ncols()), |(i, j)| fc[(i, j)])
}

/// Dense complex matrix–vector product (row-major loops; oracle-grade).
pub fn dense_matvec(a: &Array2<C64>, v: &Array1<C64>) -> Array1<C64> {
    let (m, n) = a.dim();
    assert_eq!(n, v.len());
    let mut out = Array1::<C64>::zeros(m);
    for i in 0..m {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            acc += a[(i, j)] * v[j];
        }
        out[i] = acc;
    }
    out
}
