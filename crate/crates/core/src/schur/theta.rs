//! `Θ(z) = I − (1−z) C ⋆ (I − zA)^{−⋆} P⁻¹ (I − A)^{−*} C* J`, its kernels and
//! the module interpolation problem it parametrizes.

use super::{stein_residual, stein_solve};
use crate::algebra::{same_ctx, Supernumber};
use crate::error::{Error, Result};
use crate::matrix::SuperMatrix;
use crate::realization::{check_signature, Realization};
use crate::sample::Sampler;
use crate::series::{tail_estimate, SeriesMatrix};

/// Number of `(z, w)` pairs at which [`build_theta`] checks the kernel
/// identity.
pub const KERNEL_SAMPLES: usize = 8;

#[derive(Clone, Debug)]
pub struct ThetaFunction {
    pub c: SuperMatrix,
    pub a: SuperMatrix,
    pub p: SuperMatrix,
    pub j: SuperMatrix,
    pub p_inv: SuperMatrix,
    /// `P⁻¹ (I − A)^{−*} C* J`, so that `Θ(z) = I − (1−z) F(z) K` with
    /// `F(z) = Σ zⁿ C Aⁿ`.
    pub k: SuperMatrix,
    /// `(A, (I − A)K, C, I − CK)`.
    pub realization: Realization,
    pub series: SeriesMatrix,
    /// Largest kernel identity residual over the construction samples.
    pub kernel_defect: f64,
}

/// Builds `Θ` from Stein-consistent data `P − A*PA = C*JC`.
pub fn build_theta(c: &SuperMatrix, a: &SuperMatrix, p: &SuperMatrix, j: &SuperMatrix) -> Result<ThetaFunction> {
    let (rows, q) = c.shape();
    if a.shape() != (q, q) || p.shape() != (q, q) || j.shape() != (rows, rows) {
        return Err(Error::ShapeMismatch("Θ data shapes".into()));
    }
    if ![a, p, j].iter().all(|m| same_ctx(m.ctx(), c.ctx())) {
        return Err(Error::ContextMismatch);
    }
    check_signature(j)?;
    let ctx = c.ctx();
    let scale = p.norm1().max(1.0);
    let defect = p.adjoint_defect().max(stein_residual(p, a, c, j));
    if defect > ctx.tol_eq * scale {
        return Err(Error::SteinViolated(defect));
    }
    let id_q = SuperMatrix::identity(ctx, q);
    let i_minus_a = &id_q - a;
    let left = i_minus_a.adjoint().mat_invert().map_err(|_| Error::ISubASingular)?;
    let p_inv = p.mat_invert()?;
    let k = &(&(&p_inv * &left) * &c.adjoint()) * j;
    let realization = Realization::new(
        a.clone(),
        &i_minus_a * &k,
        c.clone(),
        &SuperMatrix::identity(ctx, rows) - &(c * &k),
    )?;
    let series = realization.to_series(ctx.max_series_degree);
    let mut theta = ThetaFunction {
        c: c.clone(),
        a: a.clone(),
        p: p.clone(),
        j: j.clone(),
        p_inv,
        k,
        realization,
        series,
        kernel_defect: 0.0,
    };
    theta.kernel_defect = theta.kernel_defect_sampled(KERNEL_SAMPLES, 0)?;
    Ok(theta)
}

impl ThetaFunction {
    /// `Θ(z)` in closed form.
    pub fn evaluate(&self, z: &Supernumber) -> Result<SuperMatrix> {
        self.realization.evaluate(z)
    }

    /// `F(z) = Σ zⁿ C Aⁿ`.
    pub fn observability_function(&self, z: &Supernumber) -> Result<SuperMatrix> {
        Realization::new(self.a.clone(), self.a.clone(), self.c.clone(), self.c.clone())?.evaluate(z)
    }

    /// `‖(J − Θ(z)JΘ(w)*) − (Y − zYw†)‖₁` with `Y = F(z) P⁻¹ F(w)*`.
    ///
    /// Summing `Σ zⁿ(·)(w†)ⁿ` of the bracket telescopes to `Y`, so this is the
    /// kernel identity with both sides brought to closed form.
    pub fn kernel_residual(&self, z: &Supernumber, w: &Supernumber) -> Result<f64> {
        let lhs = &self.j - &(&(&self.evaluate(z)? * &self.j) * &self.evaluate(w)?.adjoint());
        let y = &(&self.observability_function(z)? * &self.p_inv) * &self.observability_function(w)?.adjoint();
        let rhs = &y - &y.left_scale(z).right_scale(&w.dagger());
        Ok((&lhs - &rhs).norm1())
    }

    /// Largest [`kernel_residual`](Self::kernel_residual) over random pairs
    /// with bodies in the disk of radius ½ and souls of both parities.
    pub fn kernel_defect_sampled(&self, samples: usize, seed: u64) -> Result<f64> {
        let mut s = Sampler::new(self.c.ctx(), seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let zb = s.complex(0.5);
            let wb = s.complex(0.5);
            let z = s.supernumber(zb, 0.1);
            let w = s.supernumber(wb, 0.1);
            worst = worst.max(self.kernel_residual(&z, &w)?);
        }
        Ok(worst)
    }

    /// `(r ⋆ Θ)(z)` for a constant row `r`.
    pub fn row_evaluate(&self, r: &SuperMatrix, z: &Supernumber) -> Result<SuperMatrix> {
        let rr = &self.realization;
        Realization::new(rr.a.clone(), rr.b.clone(), r.try_mul(&rr.c)?, r.try_mul(&rr.d)?)?.evaluate(z)
    }
}

/// `K(·, w)ξ = Σ zⁿ (w†)ⁿ ξ`.
pub fn kernel_eval(w: &Supernumber, xi: &SuperMatrix) -> Result<SeriesMatrix> {
    if !same_ctx(w.ctx(), xi.ctx()) {
        return Err(Error::ContextMismatch);
    }
    let ctx = w.ctx();
    let wd = w.dagger();
    let mut coeffs = vec![xi.clone()];
    let mut exact = false;
    for _ in 0..ctx.max_series_degree {
        let next = coeffs.last().unwrap().left_scale(&wd);
        if next.is_zero() {
            exact = true;
            break;
        }
        coeffs.push(next);
    }
    if exact {
        SeriesMatrix::polynomial(coeffs)
    } else {
        SeriesMatrix::truncated(coeffs)
    }
}

/// `K_{H(Θ)}(·, w)ξ = Σ zⁿ C Aⁿ P⁻¹ F(w)* ξ`.
pub fn h_theta_kernel(theta: &ThetaFunction, w: &Supernumber, xi: &SuperMatrix) -> Result<SeriesMatrix> {
    let v = &(&theta.p_inv * &theta.observability_function(w)?.adjoint()) * xi;
    let r = Realization::new(theta.a.clone(), &theta.a * &v, theta.c.clone(), &theta.c * &v)?;
    Ok(r.to_series(theta.c.ctx().max_series_degree))
}

/// Coefficient deviation of
/// `Σ zⁿ J (w†)ⁿ ξ = Θ ⋆ Σ zⁿ J Θ(w)* (w†)ⁿ ξ + K_{H(Θ)}(·, w)ξ`.
pub fn kernel_decomposition_residual(theta: &ThetaFunction, w: &Supernumber, xi: &SuperMatrix) -> Result<f64> {
    let whole = kernel_eval(w, &(&theta.j * xi))?;
    let tw = &theta.j * &theta.evaluate(w)?.adjoint();
    let inner = kernel_eval(w, xi)?.left_mul(&tw)?;
    let split = theta.series.star_mul(&inner)?.try_add(&h_theta_kernel(theta, w, xi)?)?;
    Ok(whole.max_coeff_diff(&split))
}

/// `F = F_min + Θ ⋆ h` with `F_min = Σ zⁿ C Aⁿ P⁻¹ X`, solving
/// `(C* ⋆ F)(A*) = X` for data with `C*C = P − A*PA`.
pub fn module_interpolate(
    c: &SuperMatrix,
    a: &SuperMatrix,
    x: &SuperMatrix,
    h: &SeriesMatrix,
) -> Result<SeriesMatrix> {
    let ctx = c.ctx();
    let j = SuperMatrix::identity(ctx, c.rows());
    let p = stein_solve(c, a, &j)?;
    let theta = build_theta(c, a, &p, &j)?;
    let v = &theta.p_inv * x;
    let fmin = Realization::new(a.clone(), a * &v, c.clone(), c * &v)?.to_series(ctx.max_series_degree);
    fmin.try_add(&theta.series.star_mul(h)?)
}

/// `‖Σ (A*)ⁿ C* fₙ − X‖₁` with a geometric estimate of the neglected tail.
pub fn module_residual(c: &SuperMatrix, a: &SuperMatrix, x: &SuperMatrix, f: &SeriesMatrix) -> Result<(f64, f64)> {
    let mut acc = -x;
    let mut power = c.adjoint();
    let mut sizes = Vec::with_capacity(f.degree() + 1);
    for fnn in f.coeffs() {
        let term = power.try_mul(fnn)?;
        sizes.push(term.norm1());
        acc = acc.try_add(&term)?;
        power = &a.adjoint() * &power;
    }
    let tail = if f.is_truncated() { tail_estimate(&sizes) } else { 0.0 };
    Ok((acc.norm1(), tail))
}
