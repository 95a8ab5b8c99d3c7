//! Complex dense linear algebra on bodies, backed by nalgebra.

use nalgebra::DMatrix;

use crate::algebra::C64;

pub type CMatrix = DMatrix<C64>;

/// Inverse through LU, refusing pivots of magnitude at most `tol`.
pub fn invert(m: &CMatrix, tol: f64) -> Option<CMatrix> {
    if m.nrows() != m.ncols() {
        return None;
    }
    if m.nrows() == 0 {
        return Some(m.clone());
    }
    let lu = m.clone().lu();
    let u = lu.u();
    if (0..u.nrows()).any(|i| u[(i, i)].norm() <= tol) {
        return None;
    }
    lu.try_inverse()
}

/// Eigenvalues of the Hermitian part `(m + m^H) / 2`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let h = (m + m.adjoint()).map(|c| c * 0.5);
    let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Eigenvalues of a general complex square matrix.
pub fn eigenvalues(m: &CMatrix) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    match m.clone().try_schur(1e-14, 10_000) {
        Some(s) => {
            let t = s.unpack().1;
            (0..t.nrows()).map(|i| t[(i, i)]).collect()
        }
        None => Vec::new(),
    }
}

/// Largest eigenvalue modulus; falls back to a power-norm estimate when the
/// Schur iteration fails.
pub fn spectral_radius(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let ev = eigenvalues(m);
    if ev.len() == m.nrows() {
        return ev.iter().map(|c| c.norm()).fold(0.0, f64::max);
    }
    let mut p = m.clone();
    for _ in 0..6 {
        p = &p * &p;
    }
    p.norm().powf(1.0 / 64.0)
}

/// Singular values, descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank with threshold `tol · max(1, σ_max)`.
pub fn rank(m: &CMatrix, tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0).max(1.0);
    sv.iter().filter(|s| **s > tol * top).count()
}

/// Spectral norm.
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn determinant(m: &CMatrix) -> C64 {
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}
