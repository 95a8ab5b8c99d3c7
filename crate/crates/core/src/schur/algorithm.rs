//! The Schur algorithm on scalar Schur–Grassmann functions.

use super::body_is_schur;
use crate::algebra::Supernumber;
use crate::error::{Error, Result};
use crate::series::SeriesMatrix;

/// Choice of the constant J-unitary factor applied after solving
/// `σ = T_{M_n}(τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `σ_next = (1 − τρ†)^{−⋆} ⋆ (τ − ρ)`, whose coefficients are the
    /// classical Schur coefficients.
    #[default]
    Classical,
    /// The raw solution `τ`.
    Modified,
}

#[derive(Clone, Debug)]
pub struct SchurStep {
    pub rho: Supernumber,
    /// `P = 1 − ρρ†`.
    pub p: Supernumber,
    pub next: SeriesMatrix,
    /// `τ`, the solution of `σ = T_{M_n}(τ)` before normalization.
    pub raw: SeriesMatrix,
}

/// One Schur step with the classical normalization; `step` only labels
/// errors.
pub fn schur_step(sigma: &SeriesMatrix, step: usize) -> Result<SchurStep> {
    schur_step_with(sigma, step, Normalization::Classical)
}

/// One Schur step.
///
/// With `ρ = σ(0)` and `P = 1 − ρρ†`, the entries of `M_n` are
/// `a = (1 − P⁻¹) + zP⁻¹`, `b = P⁻¹ρ − zP⁻¹ρ`, `c = −ρ†P⁻¹ + zρ†P⁻¹`,
/// `d = (1 + ρ†P⁻¹ρ) − zρ†P⁻¹ρ`. `σ = T_{M_n}(τ)` reads `M⋆τ = N` with
/// `M = σ⋆c − a` and `N = b − σ⋆d`; both vanish at the origin, where `M_n`
/// is singular, so the common factor `z` is divided out first.
pub fn schur_step_with(sigma: &SeriesMatrix, step: usize, norm: Normalization) -> Result<SchurStep> {
    if sigma.shape() != (1, 1) {
        return Err(Error::ShapeMismatch("the Schur algorithm acts on scalar series".into()));
    }
    let ctx = sigma.ctx().clone();
    let rho = sigma.coeffs()[0].as_scalar()?;
    if !rho.in_superdisk() {
        return Err(Error::RhoNotContractive { step });
    }
    let one = Supernumber::one(&ctx);
    let p = &one - &(&rho * &rho.dagger());
    let p_inv = p.invert().map_err(|_| Error::RhoNotContractive { step })?;
    let rho_d = rho.dagger();
    let lin = |c0: Supernumber, c1: Supernumber| SeriesMatrix::scalar(&[c0, c1], false);
    let a = lin(&one - &p_inv, p_inv.clone())?;
    let b = lin(&p_inv * &rho, -&(&p_inv * &rho))?;
    let c = lin(-&(&rho_d * &p_inv), &rho_d * &p_inv)?;
    let rpr = &(&rho_d * &p_inv) * &rho;
    let d = lin(&one + &rpr, -&rpr)?;

    let m = sigma.star_mul(&c)?.try_sub(&a)?;
    let n = b.try_sub(&sigma.star_mul(&d)?)?;
    let at_zero = m.coeffs()[0].norm1().max(n.coeffs()[0].norm1());
    if at_zero > ctx.tol_eq {
        return Err(Error::StepSingular { step });
    }
    let shift = |f: &SeriesMatrix| f.backward_shift().map_err(|_| Error::StepSingular { step });
    let (m, n) = (shift(&m)?, shift(&n)?);
    if m.coeffs()[0].as_scalar()?.body().norm() <= ctx.tol_body {
        return Err(Error::StepSingular { step });
    }
    let raw = m.star_inverse()?.star_mul(&n)?;
    let next = match norm {
        Normalization::Modified => raw.clone(),
        Normalization::Classical => {
            let rho_s = SeriesMatrix::scalar(&[rho.clone()], false)?;
            let den = SeriesMatrix::identity(&ctx, 1).try_sub(&raw.star_mul(&SeriesMatrix::scalar(&[rho_d], false)?)?)?;
            den.star_inverse()
                .map_err(|_| Error::StepSingular { step })?
                .star_mul(&raw.try_sub(&rho_s)?)?
        }
    };
    Ok(SchurStep { rho, p, next, raw })
}

/// Why [`schur_algorithm`] stopped.
#[derive(Clone, Debug, PartialEq)]
pub enum Termination {
    MaxSteps,
    /// `|ρ_B| ≥ 1 − tol_body` at `step`; `ρ` is the last chain entry.
    Boundary { step: usize },
    /// The shifted denominator was singular at `step`.
    Singular { step: usize },
    /// A truncated series ran out of coefficients at `step`.
    Exhausted { step: usize },
}

impl Termination {
    /// The error a single step reported, if the stop came from one.
    pub fn error(&self) -> Option<Error> {
        match self {
            Termination::Boundary { step } => Some(Error::RhoNotContractive { step: *step }),
            Termination::Singular { step } => Some(Error::StepSingular { step: *step }),
            Termination::MaxSteps | Termination::Exhausted { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SchurChain {
    /// `ρ₀, ρ₁, …`, including a boundary coefficient when one stopped the run.
    pub rhos: Vec<Supernumber>,
    /// `P_n = 1 − ρ_nρ_n†` of every completed step.
    pub p: Vec<Supernumber>,
    pub termination: Termination,
    /// `σ` after the last completed step.
    pub last: SeriesMatrix,
}

impl SchurChain {
    pub fn body_coefficients(&self) -> Vec<crate::algebra::C64> {
        self.rhos.iter().map(|r| r.body()).collect()
    }
}

/// Iterates [`schur_step`] from `σ₀ = S` for at most `max_steps` steps.
pub fn schur_algorithm(s: &SeriesMatrix, max_steps: usize) -> Result<SchurChain> {
    schur_algorithm_with(s, max_steps, Normalization::Classical)
}

pub fn schur_algorithm_with(s: &SeriesMatrix, max_steps: usize, norm: Normalization) -> Result<SchurChain> {
    if s.shape() != (1, 1) {
        return Err(Error::ShapeMismatch("the Schur algorithm acts on scalar series".into()));
    }
    if !body_is_schur(s, s.ctx().max_series_degree) {
        return Err(Error::InvalidArgument("the input is not a Schur function".into()));
    }
    let mut chain = SchurChain {
        rhos: Vec::new(),
        p: Vec::new(),
        termination: Termination::MaxSteps,
        last: s.clone(),
    };
    for step in 0..max_steps {
        if chain.last.is_truncated() && chain.last.degree() == 0 && step > 0 {
            chain.termination = Termination::Exhausted { step };
            break;
        }
        match schur_step_with(&chain.last, step, norm) {
            Ok(st) => {
                chain.rhos.push(st.rho);
                chain.p.push(st.p);
                chain.last = st.next;
            }
            Err(Error::RhoNotContractive { step }) => {
                chain.rhos.push(chain.last.coeffs()[0].as_scalar()?);
                chain.termination = Termination::Boundary { step };
                break;
            }
            Err(Error::StepSingular { step }) => {
                if chain.last.is_truncated() && chain.last.degree() == 0 {
                    chain.termination = Termination::Exhausted { step };
                } else {
                    chain.termination = Termination::Singular { step };
                }
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraContext, Ctx, C64};
    use crate::oracle::classical_schur;
    use crate::sample::Sampler;
    use crate::schur::lft_apply;

    fn ctx() -> Ctx {
        AlgebraContext::new(6).unwrap()
    }

    fn scalar_series(k: &Ctx, c: &[C64]) -> SeriesMatrix {
        let c: Vec<Supernumber> = c.iter().map(|x| Supernumber::scalar(k, *x)).collect();
        SeriesMatrix::scalar(&c, false).unwrap()
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn constant_rho_continues_with_zero() {
        let k = ctx();
        let mut s = Sampler::new(&k, 1);
        let rho = s.supernumber(C64::new(0.3, -0.2), 0.1);
        let st = schur_step(&SeriesMatrix::scalar(&[rho.clone()], false).unwrap(), 0).unwrap();
        assert_eq!(st.rho, rho);
        assert!(st.next.max_coeff_diff(&SeriesMatrix::zero(&k, 1, 1)) < 1e-14);
        let chain = schur_algorithm(&SeriesMatrix::zero(&k, 1, 1), 6).unwrap();
        assert_eq!(chain.termination, Termination::MaxSteps);
        assert!(chain.rhos.iter().all(|r| r.is_zero()));
    }

    #[test]
    fn body_chain_matches_classical() {
        let k = ctx();
        let s = scalar_series(&k, &[re(0.5), re(0.25)]);
        let chain = schur_algorithm(&s, 6).unwrap();
        let oracle = classical_schur(&[re(0.5), re(0.25)], 6);
        for (a, b) in chain.body_coefficients().iter().zip(&oracle.coefficients) {
            assert!((a - b).norm() < 1e-9);
        }
        let s = scalar_series(&k, &[C64::new(0.2, 0.1), C64::new(0.3, -0.1), re(0.1), C64::new(0.0, 0.15)]);
        let chain = schur_algorithm(&s, 6).unwrap();
        let body: Vec<C64> = s.body().iter().map(|m| m[(0, 0)]).collect();
        let oracle = classical_schur(&body, 6);
        assert_eq!(chain.rhos.len(), 6);
        for (a, b) in chain.body_coefficients().iter().zip(&oracle.coefficients) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn souls_leave_body_chain_unchanged() {
        let k = ctx();
        let mut s = Sampler::new(&k, 2);
        let base = [C64::new(0.2, 0.1), C64::new(0.3, -0.1), re(0.1), C64::new(0.0, 0.15)];
        let coeffs: Vec<Supernumber> = base.iter().map(|b| s.supernumber(*b, 0.05)).collect();
        let with = schur_algorithm(&SeriesMatrix::scalar(&coeffs, false).unwrap(), 6).unwrap();
        let without = schur_algorithm(&scalar_series(&k, &base), 6).unwrap();
        for (a, b) in with.body_coefficients().iter().zip(without.body_coefficients()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn raw_step_inverts_the_linear_fractional_map() {
        let k = ctx();
        let mut s = Sampler::new(&k, 3);
        let coeffs: Vec<Supernumber> =
            [C64::new(0.3, 0.1), re(0.2), C64::new(0.0, -0.2)].iter().map(|b| s.supernumber(*b, 0.1)).collect();
        let sigma = SeriesMatrix::scalar(&coeffs, false).unwrap();
        let st = schur_step_with(&sigma, 0, Normalization::Modified).unwrap();
        let rho = st.rho.clone();
        let p_inv = st.p.invert().unwrap();
        let one = Supernumber::one(&k);
        let rd = rho.dagger();
        let rpr = &(&rd * &p_inv) * &rho;
        let m_n = crate::matrix::SuperMatrix::from_rows(
            &k,
            vec![vec![&one - &p_inv, &p_inv * &rho], vec![-&(&rd * &p_inv), &one + &rpr]],
        )
        .unwrap();
        let m_1 = crate::matrix::SuperMatrix::from_rows(
            &k,
            vec![vec![p_inv.clone(), -&(&p_inv * &rho)], vec![&rd * &p_inv, -&rpr]],
        )
        .unwrap();
        let theta = SeriesMatrix::polynomial(vec![m_n, m_1]).unwrap();
        let back = lft_apply(&theta, &st.raw).unwrap();
        assert!(back.truncate(k.max_series_degree - 1).max_coeff_diff(&sigma.truncate(k.max_series_degree - 1)) < 1e-12);
        let classical = schur_step(&sigma, 0).unwrap();
        let rho_s = SeriesMatrix::scalar(&[rho.clone()], false).unwrap();
        let num = classical.next.try_add(&rho_s).unwrap();
        let den = SeriesMatrix::identity(&k, 1)
            .try_add(&SeriesMatrix::scalar(&[rd], false).unwrap().star_mul(&classical.next).unwrap())
            .unwrap();
        let tau = num.star_mul(&den.star_inverse().unwrap()).unwrap();
        assert!(tau.max_coeff_diff(&st.raw) < 1e-12);
    }

    #[test]
    fn boundary_stops_the_chain() {
        let k = ctx();
        let z = scalar_series(&k, &[re(0.0), re(1.0)]);
        let chain = schur_algorithm(&z, 5).unwrap();
        assert_eq!(chain.termination, Termination::Boundary { step: 1 });
        assert_eq!(chain.termination.error(), Some(Error::RhoNotContractive { step: 1 }));
        assert!((chain.rhos[1].body() - re(1.0)).norm() < 1e-12);
        let unimodular = scalar_series(&k, &[C64::from_polar(1.0, 0.4)]);
        assert!(matches!(schur_step(&unimodular, 0), Err(Error::RhoNotContractive { step: 0 })));
        let oracle = classical_schur(&[re(0.0), re(1.0)], 5);
        assert_eq!(oracle.boundary, Some(1));
    }

    #[test]
    fn rejects_non_schur_input() {
        let k = ctx();
        let big = scalar_series(&k, &[re(0.6), re(0.6)]);
        assert!(matches!(schur_algorithm(&big, 3), Err(Error::InvalidArgument(_))));
    }
}
