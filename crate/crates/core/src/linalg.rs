//! Small dense linear-algebra helpers shared across the crate.
//!
//! Everything here operates on `nalgebra::DMatrix<f64>`; the matrices in this
//! problem domain are tiny (n up to a few hundred, operator matrices up to
//! 64x64), so dense storage is always the right call.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Maximum entrywise deviation from symmetry.
pub fn symmetry_defect(m: &Matrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(m: &Matrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn sym_eigen_min(m: &Matrix) -> f64 {
    sym_eigenvalues(m)[0]
}

pub fn sym_eigen_max(m: &Matrix) -> f64 {
    *sym_eigenvalues(m).last().expect("nonempty matrix")
}

/// Spectral radius of an arbitrary square matrix via complex eigenvalues.
///
/// A 2x2 input is solved in closed form from its characteristic polynomial;
/// iterative Schur noise would otherwise leak into certification paths.
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    assert_eq!(m.nrows(), m.ncols(), "spectral_radius needs a square matrix");
    if m.nrows() == 2 {
        return Ok(spectral_radius_2x2(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]));
    }
    let n = m.nrows();
    let schur = m.clone().try_schur(1e-12, 100_000).ok_or(Error::Eigen(n))?;
    let eigs = schur.complex_eigenvalues();
    Ok(eigs.iter().map(|c| c.norm()).fold(0.0, f64::max))
}

/// Closed-form spectral radius of `[[a, b], [c, d]]`.
pub fn spectral_radius_2x2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        (0.5 * (tr + r)).abs().max((0.5 * (tr - r)).abs())
    } else {
        // complex conjugate pair; |lambda|^2 = det
        det.sqrt()
    }
}

/// Symmetric positive-definite matrix power `m^exponent` via eigendecomposition.
pub fn spd_power(m: &Matrix, exponent: f64) -> Matrix {
    let eig = m.clone().symmetric_eigen();
    let mut scaled = eig.eigenvectors.clone();
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        let f = lambda.max(0.0).powf(exponent);
        scaled.column_mut(j).scale_mut(f);
    }
    &scaled * eig.eigenvectors.transpose()
}

/// Permutation matrix `P` with `P e_i = e_{p(i)}` (0-indexed permutation).
pub fn permutation_matrix(p: &[usize]) -> Matrix {
    let n = p.len();
    let mut m = Matrix::zeros(n, n);
    for (i, &pi) in p.iter().enumerate() {
        m[(pi, i)] = 1.0;
    }
    m
}

/// Checks that `p` is a permutation of `0..n`.
pub fn is_permutation(p: &[usize]) -> bool {
    let n = p.len();
    let mut seen = vec![false; n];
    for &x in p {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Column-stacking vectorization.
pub fn vectorize(m: &Matrix) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &Vector, n: usize) -> Matrix {
    Matrix::from_column_slice(n, n, v.as_slice())
}

/// Frobenius norm of the difference.
pub fn frob_distance(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm()
}

/// Solves `L y = b` for lower-triangular `L` (unit-checked diagonal not assumed).
pub fn forward_substitute(l: &Matrix, b: &Vector) -> Vector {
    let n = l.nrows();
    let mut y = Vector::zeros(n);
    for i in 0..n {
        let mut s = b[i];
        for j in 0..i {
            s -= l[(i, j)] * y[j];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

/// Lower-triangular part of `m`, including the diagonal.
pub fn tril(m: &Matrix) -> Matrix {
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            out[(i, j)] = 0.0;
        }
    }
    out
}
