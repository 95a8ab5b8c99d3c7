//! Blaschke factors and Brune sections.

use super::theta::{build_theta, ThetaFunction};
use crate::algebra::{same_ctx, Supernumber};
use crate::error::{Error, Result};
use crate::matrix::SuperMatrix;
use crate::series::SeriesMatrix;

/// `b_a(z) = 1 − (1−z) c ⋆ (1 − za)^{−⋆} p⁻¹ (1−a)^{−†} c†` under
/// `p − a†pa = c†c`.
#[derive(Clone, Debug)]
pub struct BlaschkeFactor {
    pub a: Supernumber,
    pub c: Supernumber,
    pub p: Supernumber,
    /// The zero `ω = c^{−†} a† c†`.
    pub omega: Supernumber,
    pub theta: ThetaFunction,
}

fn check_superreal_invertible(p: &Supernumber) -> Result<Supernumber> {
    if !p.is_real() {
        return Err(Error::InvalidArgument("p must be superreal".into()));
    }
    p.invert()
}

pub fn blaschke_factor(a: &Supernumber, c: &Supernumber, p: &Supernumber) -> Result<BlaschkeFactor> {
    if !same_ctx(a.ctx(), c.ctx()) || !same_ctx(a.ctx(), p.ctx()) {
        return Err(Error::ContextMismatch);
    }
    let ctx = a.ctx();
    check_superreal_invertible(p)?;
    let residual = (&(p - &(&(&a.dagger() * p) * a)) - &(&c.dagger() * c)).norm1();
    if residual > ctx.tol_eq {
        return Err(Error::ConstraintViolated(residual));
    }
    let omega = &(&c.dagger().invert()? * &a.dagger()) * &c.dagger();
    let theta = build_theta(
        &SuperMatrix::scalar(c),
        &SuperMatrix::scalar(a),
        &SuperMatrix::scalar(p),
        &SuperMatrix::identity(ctx, 1),
    )?;
    Ok(BlaschkeFactor {
        a: a.clone(),
        c: c.clone(),
        p: p.clone(),
        omega,
        theta,
    })
}

impl BlaschkeFactor {
    /// Coefficients through the context's series degree.
    pub fn series(&self) -> &SeriesMatrix {
        &self.theta.series
    }

    /// `b_a(z)` in closed form.
    pub fn evaluate(&self, z: &Supernumber) -> Result<Supernumber> {
        self.theta.evaluate(z)?.as_scalar()
    }

    /// `|b_a(ω)|₁`.
    pub fn zero_residual(&self) -> Result<f64> {
        Ok(self.evaluate(&self.omega)?.norm1())
    }

    /// `(z − ω) ⋆ [1 + (ω−1) c^{−†} p c⁻¹ ω†] ⋆ (1 − zω†)^{−⋆} ⋆ [c p⁻¹ (1−a)^{−†} c†]`.
    pub fn factorized_series(&self) -> Result<SeriesMatrix> {
        let ctx = self.a.ctx();
        let one = Supernumber::one(ctx);
        let w = &self.omega;
        let wd = w.dagger();
        let cd_inv = self.c.dagger().invert()?;
        let c_inv = self.c.invert()?;
        let middle = &one + &(&(&(&(w - &one) * &cd_inv) * &self.p) * &(&c_inv * &wd));
        let tail = &(&(&self.c * &self.p.invert()?) * &(&one - &self.a).dagger().invert()?) * &self.c.dagger();
        let lin = SeriesMatrix::scalar(&[-w, one.clone()], false)?;
        let geo = SeriesMatrix::scalar(&[one, -&wd], false)?.star_inverse()?;
        lin.right_mul(&SuperMatrix::scalar(&middle))?
            .star_mul(&geo)?
            .right_mul(&SuperMatrix::scalar(&tail))
    }

    /// Largest coefficient difference between the factorized and the direct
    /// series.
    pub fn factorization_residual(&self) -> Result<f64> {
        Ok(self.factorized_series()?.max_coeff_diff(self.series()))
    }
}

/// `Θ_BP = Θ ⋆ M⁻¹` with `M = I − ½ c (1+a)† p⁻¹ (1−a)^{−†} c* J`.
#[derive(Clone, Debug)]
pub struct BruneSection {
    pub theta: ThetaFunction,
    pub m: SuperMatrix,
    pub m_inv: SuperMatrix,
    pub series: SeriesMatrix,
}

fn brune_inputs(c: &SuperMatrix, a: &Supernumber, p: &Supernumber, j: &SuperMatrix) -> Result<Supernumber> {
    if c.cols() != 1 || j.shape() != (c.rows(), c.rows()) {
        return Err(Error::ShapeMismatch("c must be a column matching J".into()));
    }
    if !same_ctx(c.ctx(), a.ctx()) || !same_ctx(c.ctx(), p.ctx()) || !same_ctx(c.ctx(), j.ctx()) {
        return Err(Error::ContextMismatch);
    }
    let ctx = c.ctx();
    if (&(&c.adjoint() * j) * c).norm1() > ctx.tol_eq {
        return Err(Error::IsotropyViolated);
    }
    if (&(&a.dagger() * a) - &Supernumber::one(ctx)).norm1() > ctx.tol_eq {
        return Err(Error::NotUnimodular);
    }
    if !p.is_even() {
        return Err(Error::InvalidArgument("p must be even".into()));
    }
    check_superreal_invertible(p)
}

/// `(1−a)^{−†}` or [`Error::ISubASingular`].
fn one_minus_a_inv_dagger(a: &Supernumber) -> Result<Supernumber> {
    (&Supernumber::one(a.ctx()) - a)
        .dagger()
        .invert()
        .map_err(|_| Error::ISubASingular)
}

pub fn brune_section(c: &SuperMatrix, a: &Supernumber, p: &Supernumber, j: &SuperMatrix) -> Result<BruneSection> {
    let p_inv = brune_inputs(c, a, p, j)?;
    let ctx = c.ctx();
    let one = Supernumber::one(ctx);
    let theta = build_theta(c, &SuperMatrix::scalar(a), &SuperMatrix::scalar(p), j)?;
    let s = &(&(&one + a).dagger() * &p_inv) * &one_minus_a_inv_dagger(a)?;
    let k = &(&c.right_scale(&s) * &c.adjoint()) * j;
    let m = &SuperMatrix::identity(ctx, c.rows()) - &k.scale_real(0.5);
    let m_inv = m.mat_invert()?;
    let series = theta.series.right_mul(&m_inv)?;
    Ok(BruneSection {
        theta,
        m,
        m_inv,
        series,
    })
}

/// `I + ½ (z + a†) ⋆ (z − a†)^{−⋆} c (1−a)† p⁻¹ (1−a)^{−†} c* J`.
pub fn brune_closed_form(c: &SuperMatrix, a: &Supernumber, p: &Supernumber, j: &SuperMatrix) -> Result<SeriesMatrix> {
    let p_inv = brune_inputs(c, a, p, j)?;
    let ctx = c.ctx();
    let one = Supernumber::one(ctx);
    let ad = a.dagger();
    let s = &(&(&one - a).dagger() * &p_inv) * &one_minus_a_inv_dagger(a)?;
    let k = (&(&c.right_scale(&s) * &c.adjoint()) * j).scale_real(0.5);
    let ratio = SeriesMatrix::scalar(&[ad.clone(), one.clone()], false)?
        .star_mul(&SeriesMatrix::scalar(&[-&ad, one], false)?.star_inverse()?)?;
    let n = c.rows();
    let coeffs = ratio
        .coeffs()
        .iter()
        .map(|g| Ok(k.left_scale(&g.as_scalar()?)))
        .collect::<Result<Vec<_>>>()?;
    let f = if ratio.is_truncated() {
        SeriesMatrix::truncated(coeffs)?
    } else {
        SeriesMatrix::polynomial(coeffs)?
    };
    f.try_add(&SeriesMatrix::identity(ctx, n))
}
