//! Schur analysis: Schur–Grassmann functions, the Stein equation, `Θ` and
//! its kernels, Nevanlinna–Pick interpolation, the Schur algorithm, and
//! Blaschke factors with Brune sections.

mod algorithm;
mod blaschke;
mod pick;
mod theta;

pub use algorithm::{schur_algorithm, schur_step, Normalization, SchurChain, SchurStep, Termination};
pub use blaschke::{blaschke_factor, brune_section, brune_closed_form, BlaschkeFactor, BruneSection};
pub use pick::{
    lft_apply, np_interpolation_check, np_residuals, np_solve, np_theta, pick_matrix, pick_matrix_stein,
    InterpolationData,
};
pub use theta::{
    build_theta, h_theta_kernel, kernel_decomposition_residual, kernel_eval, module_interpolate, module_residual,
    ThetaFunction,
};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::matrix::SuperMatrix;
use crate::realization::Realization;
use crate::series::SeriesMatrix;

/// Iteration budget for [`stein_solve`]; each round squares the step.
const STEIN_ROUNDS: usize = 64;

/// Body-level Schur test on `L_depth`, the lower triangular block Toeplitz
/// matrix of `s₀, …, s_depth`: `I − L*L ⪰ 0` over the algebra.
///
/// Contractivity of `L_depth` implies it for every smaller section, so the
/// largest one decides.
pub fn is_schur_grassmann(s: &SeriesMatrix, depth: usize) -> bool {
    let (p, q) = s.shape();
    let depth = if s.is_truncated() { depth.min(s.degree()) } else { depth };
    let ctx = s.ctx();
    let blocks: Vec<SuperMatrix> = (0..=depth)
        .map(|n| s.coeff(n).unwrap_or_else(|| SuperMatrix::zeros(ctx, p, q)))
        .collect();
    let m = depth + 1;
    let mut l = SuperMatrix::zeros(ctx, m * p, m * q);
    for i in 0..m {
        for j in 0..=i {
            l.set_block(i * p, j * q, &blocks[i - j]);
        }
    }
    let gap = &SuperMatrix::identity(ctx, m * q) - &(&l.adjoint() * &l);
    gap.is_supernonnegative()
}

/// Body-only version of [`is_schur_grassmann`]: largest singular value of
/// the body section at most `1 + tol_body`.
pub fn body_is_schur(s: &SeriesMatrix, depth: usize) -> bool {
    let (p, q) = s.shape();
    let body = s.body();
    let depth = if s.is_truncated() { depth.min(s.degree()) } else { depth };
    let m = depth + 1;
    let mut l = CMatrix::zeros(m * p, m * q);
    for i in 0..m {
        for j in 0..=i {
            if i - j < body.len() {
                l.view_mut((i * p, j * q), (p, q)).copy_from(&body[i - j]);
            }
        }
    }
    linalg::op_norm(&l) <= 1.0 + s.ctx().tol_body
}

/// The matrix inequality
/// `[A B; C D]* diag(H, I) [A B; C D] ⪯ diag(H, I)` with `H ≺ 0`.
pub fn kyp_check(r: &Realization, h: &SuperMatrix) -> Result<bool> {
    let n = r.state_dim();
    if h.shape() != (n, n) {
        return Err(Error::ShapeMismatch("H must match the state dimension".into()));
    }
    if n > 0 && !(-h).is_superpositive() {
        return Err(Error::HNotNegative);
    }
    let ctx = r.ctx();
    let (p, q) = r.shape();
    if p != q {
        return Err(Error::ShapeMismatch("the inequality needs a square transfer function".into()));
    }
    let m = SuperMatrix::from_blocks(&r.a, &r.b, &r.c, &r.d)?;
    let w = SuperMatrix::block_diag(h, &SuperMatrix::identity(ctx, p));
    let gap = &w - &(&(&m.adjoint() * &w) * &m);
    Ok(gap.is_supernonnegative())
}

/// Solves `P − A*PA = C*JC` by the doubling iteration
/// `P ← P + A_k* P A_k`, `A_k ← A_k²`, which sums `Σ (A*)ⁿ C*JC Aⁿ`.
pub fn stein_solve(c: &SuperMatrix, a: &SuperMatrix, j: &SuperMatrix) -> Result<SuperMatrix> {
    if !a.is_square() || c.cols() != a.rows() || j.shape() != (c.rows(), c.rows()) {
        return Err(Error::ShapeMismatch("Stein data shapes".into()));
    }
    let ctx = a.ctx();
    if a.rows() > 0 && linalg::spectral_radius(&a.body()) >= 1.0 - ctx.tol_body {
        return Err(Error::NotConvergent);
    }
    let q = &(&c.adjoint() * j) * c;
    let mut p = q.clone();
    let mut ak = a.clone();
    for _ in 0..STEIN_ROUNDS {
        let step = &(&ak.adjoint() * &p) * &ak;
        p = &p + &step;
        if step.norm1() <= ctx.tol_eq * 1e-3 * p.norm1().max(1.0) {
            let p = p.hermitian_part();
            if stein_residual(&p, a, c, j) > ctx.tol_eq * p.norm1().max(1.0) {
                return Err(Error::NotConvergent);
            }
            return Ok(p);
        }
        ak = &ak * &ak;
    }
    Err(Error::NotConvergent)
}

/// `‖P − A*PA − C*JC‖₁`.
pub fn stein_residual(p: &SuperMatrix, a: &SuperMatrix, c: &SuperMatrix, j: &SuperMatrix) -> f64 {
    let lhs = p - &(&(&a.adjoint() * p) * a);
    let rhs = &(&c.adjoint() * j) * c;
    (&lhs - &rhs).norm1()
}

/// The signature `diag(1, −1)` used for scalar interpolation.
pub fn signature(ctx: &crate::algebra::Ctx) -> SuperMatrix {
    use crate::algebra::Supernumber;
    SuperMatrix::diag(ctx, &[Supernumber::one(ctx), Supernumber::real(ctx, -1.0)])
}
