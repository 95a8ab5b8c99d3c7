//! One-step extension of superpositive Toeplitz supermatrices.
//!
//! Given `r₀, …, r_N` with a superpositive Toeplitz matrix `T_N`, every
//! superpositive extension has `r_{N+1} = c_N + α^{-1/2} η ξ` with `η` in the
//! open unit superdisk. `c_N` is the center, `α^{-1/2}` the left radius and
//! `ξ` the right radius.

use crate::algebra::{Ctx, Supernumber};
use crate::error::{Error, Result};
use crate::matrix::SuperMatrix;

/// First row `r₀, …, r_N` of a self-adjoint Toeplitz supermatrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzSpec {
    r: Vec<Supernumber>,
}

/// Center and radii of the superdisk of admissible next entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperdiskParams {
    pub center: Supernumber,
    pub alpha: Supernumber,
    /// `α^{-1/2}`.
    pub left_radius: Supernumber,
    /// Superreal square root of `r₀ − b_N* T_{N-1}⁻¹ b_N`.
    pub right_radius: Supernumber,
}

impl ToeplitzSpec {
    /// `r₀` must be superreal.
    pub fn new(r: Vec<Supernumber>) -> Result<Self> {
        let r0 = r
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Toeplitz data".into()))?;
        if r0.reality_defect() > 1e-12 * r0.norm1().max(1.0) {
            return Err(Error::InvalidArgument("r0 must be superreal".into()));
        }
        let ctx = r0.ctx().clone();
        if r.iter().any(|z| **z.ctx() != *ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(ToeplitzSpec { r })
    }

    pub fn entries(&self) -> &[Supernumber] {
        &self.r
    }

    pub fn ctx(&self) -> &Ctx {
        self.r[0].ctx()
    }

    /// Index `N` of the last entry.
    pub fn order(&self) -> usize {
        self.r.len() - 1
    }

    /// The `(N+1) × (N+1)` matrix with entries `r_{k−j}` above the diagonal
    /// and `r_{j−k}†` below.
    pub fn assemble(&self) -> SuperMatrix {
        toeplitz(self.ctx(), &self.r)
    }

    /// Center and radii of the one-step extension.
    pub fn extension_params(&self) -> Result<SuperdiskParams> {
        if !self.assemble().is_superpositive() {
            return Err(Error::NotSuperpositive);
        }
        let ctx = self.ctx();
        let r0 = &self.r[0];
        let n = self.order();
        if n == 0 {
            let alpha = r0.invert()?;
            return Ok(SuperdiskParams {
                center: Supernumber::zero(ctx),
                left_radius: r0.sqrt()?,
                right_radius: r0.sqrt()?,
                alpha,
            });
        }
        let tinv = toeplitz(ctx, &self.r[..n]).mat_invert()?;
        let a = SuperMatrix::row(ctx, &self.r[1..]);
        let rev: Vec<Supernumber> = self.r[1..].iter().rev().cloned().collect();
        let b = SuperMatrix::column(ctx, &rev);
        let alpha_inv = (r0 - &(&(&a * &tinv) * &a.adjoint()).as_scalar()?).real_part();
        let center = (&(&a * &tinv) * &b).as_scalar()?;
        let xi_sq = (r0 - &(&(&b.adjoint() * &tinv) * &b).as_scalar()?).real_part();
        let map_np = |e: Error| match e {
            Error::BodyZero | Error::BranchCut => Error::NotSuperpositive,
            e => e,
        };
        Ok(SuperdiskParams {
            center,
            alpha: alpha_inv.invert().map_err(map_np)?,
            left_radius: alpha_inv.sqrt().map_err(map_np)?,
            right_radius: xi_sq.sqrt().map_err(map_np)?,
        })
    }

    /// Appends `r_{N+1} = c_N + α^{-1/2} η ξ`.
    pub fn extend(&self, eta: &Supernumber) -> Result<ToeplitzSpec> {
        if eta.body().norm() >= 1.0 {
            return Err(Error::EtaNotContractive);
        }
        let p = self.extension_params()?;
        let next = &p.center + &(&(&p.left_radius * eta) * &p.right_radius);
        let mut r = self.r.clone();
        r.push(next);
        Ok(ToeplitzSpec { r })
    }

    /// Superpositivity of `T_N` through its last Schur complement:
    /// `T_{N-1}` superpositive and `r₀ − b_N* T_{N-1}⁻¹ b_N` a positive
    /// supernumber.
    pub fn verify_extension(&self) -> bool {
        let ctx = self.ctx();
        let n = self.order();
        if n == 0 {
            return self.r[0].is_superpositive();
        }
        let head = toeplitz(ctx, &self.r[..n]);
        if !head.is_superpositive() {
            return false;
        }
        let Ok(tinv) = head.mat_invert() else {
            return false;
        };
        let rev: Vec<Supernumber> = self.r[1..].iter().rev().cloned().collect();
        let b = SuperMatrix::column(ctx, &rev);
        let Ok(q) = (&(&b.adjoint() * &tinv) * &b).as_scalar() else {
            return false;
        };
        let s = &self.r[0] - &q;
        s.reality_defect() <= ctx.tol_eq * s.norm1().max(1.0) && s.body().re > ctx.tol_body
    }
}

/// Self-adjoint Toeplitz matrix with first row `r`.
pub fn toeplitz(ctx: &Ctx, r: &[Supernumber]) -> SuperMatrix {
    let n = r.len();
    SuperMatrix::from_fn(ctx, n, n, |j, k| {
        if k >= j {
            r[k - j].clone()
        } else {
            r[j - k].dagger()
        }
    })
}
