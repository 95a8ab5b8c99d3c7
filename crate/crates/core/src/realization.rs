//! State-space realizations `F(z) = D + z C ⋆ (I − zA)^{−⋆} ⋆ B`.

use crate::algebra::{same_ctx, Ctx, Supernumber, C64};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::matrix::SuperMatrix;
use crate::sample::Sampler;
use crate::series::{SeriesMatrix, Side};

/// Default number of sample points for [`is_j_unitary`].
pub const DEFAULT_J_SAMPLES: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub a: SuperMatrix,
    pub b: SuperMatrix,
    pub c: SuperMatrix,
    pub d: SuperMatrix,
}

/// How [`compose`] combines two realizations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComposeMode {
    /// `F₁ ⋆ F₂`.
    Product,
    /// `F₁ + F₂`.
    Sum,
    /// `[F₁; F₂]`.
    ConcatRows,
    /// `[F₁ F₂]`.
    ConcatCols,
}

impl Realization {
    /// Checks `A: n×n`, `B: n×q`, `C: p×n`, `D: p×q`.
    pub fn new(a: SuperMatrix, b: SuperMatrix, c: SuperMatrix, d: SuperMatrix) -> Result<Self> {
        let n = a.rows();
        let (p, q) = d.shape();
        if a.cols() != n || b.shape() != (n, q) || c.shape() != (p, n) {
            return Err(Error::ShapeMismatch(format!(
                "realization blocks A {:?}, B {:?}, C {:?}, D {:?}",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        let ctx = d.ctx();
        if ![&a, &b, &c].iter().all(|m| same_ctx(m.ctx(), ctx)) {
            return Err(Error::ContextMismatch);
        }
        Ok(Realization { a, b, c, d })
    }

    /// The constant function `D` with no state.
    pub fn constant(d: &SuperMatrix) -> Self {
        let ctx = d.ctx();
        let (p, q) = d.shape();
        Realization {
            a: SuperMatrix::zeros(ctx, 0, 0),
            b: SuperMatrix::zeros(ctx, 0, q),
            c: SuperMatrix::zeros(ctx, p, 0),
            d: d.clone(),
        }
    }

    pub fn ctx(&self) -> &Ctx {
        self.d.ctx()
    }

    /// State dimension `n`.
    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    /// Shape `p × q` of the realized function.
    pub fn shape(&self) -> (usize, usize) {
        self.d.shape()
    }

    /// Taylor coefficients `f₀ = D`, `fₙ = C Aⁿ⁻¹ B` through `degree`; exact
    /// when a power of `A` vanishes within that range.
    pub fn to_series(&self, degree: usize) -> SeriesMatrix {
        let mut coeffs = vec![self.d.clone()];
        let mut power_b = self.b.clone();
        let mut exact = self.state_dim() == 0;
        for _ in 1..=degree {
            if power_b.is_zero() {
                exact = true;
                break;
            }
            coeffs.push(&self.c * &power_b);
            power_b = &self.a * &power_b;
        }
        if !exact && power_b.is_zero() {
            exact = true;
        }
        let built = if exact {
            SeriesMatrix::polynomial(coeffs)
        } else {
            SeriesMatrix::truncated(coeffs)
        };
        built.expect("coefficients share shape and context")
    }

    /// `F(z) = Σ zⁿ fₙ`, summed in closed form.
    ///
    /// With `z = λ + s`, `λ` the body and `s` nilpotent,
    /// `F(z) = D + λ C R B + Σ_{k≥1} s^k C (R A)^{k−1} R² B` where
    /// `R = (I − λA)⁻¹`. This agrees with the power series inside its disk
    /// of convergence and continues it to every `λ` with `I − λA_B` invertible.
    pub fn evaluate(&self, z: &Supernumber) -> Result<SuperMatrix> {
        if !same_ctx(z.ctx(), self.ctx()) {
            return Err(Error::ContextMismatch);
        }
        let n = self.state_dim();
        if n == 0 {
            return Ok(self.d.clone());
        }
        let lambda = z.body();
        let s = z.soul();
        let ctx = self.ctx();
        let shifted = &SuperMatrix::identity(ctx, n) - &self.a.scale(lambda);
        let r = shifted.mat_invert()?;
        let rb = &r * &self.b;
        let mut value = &self.d + &(&self.c * &rb).scale(lambda);
        if s.is_zero() {
            return Ok(value);
        }
        let ra = &r * &self.a;
        let mut chain = &r * &rb;
        let mut sk = s.clone();
        for _ in 0..=ctx.generators {
            if sk.is_zero() {
                break;
            }
            value = &value + &(&self.c * &chain).left_scale(&sk);
            chain = &ra * &chain;
            sk = &sk * &s;
        }
        Ok(value)
    }

    /// `(A − BD⁻¹C, BD⁻¹, −D⁻¹C, D⁻¹)`, a realization of `F^{−⋆}`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.d.is_square() {
            return Err(Error::DSingular);
        }
        let dinv = self.d.mat_invert().map_err(|_| Error::DSingular)?;
        let bd = &self.b * &dinv;
        Ok(Realization {
            a: &self.a - &(&bd * &self.c),
            b: bd,
            c: -&(&dinv * &self.c),
            d: dinv,
        })
    }
}

/// Convenience form of [`Realization::inverse`].
pub fn inverse_realization(r: &Realization) -> Result<Realization> {
    r.inverse()
}

/// Block realizations of products, sums and concatenations.
pub fn compose(r1: &Realization, r2: &Realization, mode: ComposeMode) -> Result<Realization> {
    if !same_ctx(r1.ctx(), r2.ctx()) {
        return Err(Error::ContextMismatch);
    }
    let ctx = r1.ctx().clone();
    let (p1, q1) = r1.shape();
    let (p2, q2) = r2.shape();
    let (n1, n2) = (r1.state_dim(), r2.state_dim());
    let mismatch = |what: &str| Error::ShapeMismatch(format!("{what}: {p1}x{q1} and {p2}x{q2}"));
    let a_diag = SuperMatrix::block_diag(&r1.a, &r2.a);
    match mode {
        ComposeMode::Product => {
            if q1 != p2 {
                return Err(mismatch("product"));
            }
            let a = SuperMatrix::from_blocks(&r1.a, &(&r1.b * &r2.c), &SuperMatrix::zeros(&ctx, n2, n1), &r2.a)?;
            let b = SuperMatrix::vstack(&[&(&r1.b * &r2.d), &r2.b])?;
            let c = SuperMatrix::hstack(&[&r1.c, &(&r1.d * &r2.c)])?;
            Realization::new(a, b, c, &r1.d * &r2.d)
        }
        ComposeMode::Sum => {
            if (p1, q1) != (p2, q2) {
                return Err(mismatch("sum"));
            }
            let b = SuperMatrix::vstack(&[&r1.b, &r2.b])?;
            let c = SuperMatrix::hstack(&[&r1.c, &r2.c])?;
            Realization::new(a_diag, b, c, &r1.d + &r2.d)
        }
        ComposeMode::ConcatRows => {
            if q1 != q2 {
                return Err(mismatch("row concatenation"));
            }
            let b = SuperMatrix::vstack(&[&r1.b, &r2.b])?;
            let c = SuperMatrix::block_diag(&r1.c, &r2.c);
            Realization::new(a_diag, b, c, SuperMatrix::vstack(&[&r1.d, &r2.d])?)
        }
        ComposeMode::ConcatCols => {
            if p1 != p2 {
                return Err(mismatch("column concatenation"));
            }
            let b = SuperMatrix::block_diag(&r1.b, &r2.b);
            let c = SuperMatrix::hstack(&[&r1.c, &r2.c])?;
            Realization::new(a_diag, b, c, SuperMatrix::hstack(&[&r1.d, &r2.d])?)
        }
    }
}

/// Realization of `M₀ + z M₁ + … + z^k M_k` with state `[x₁; …; x_k]`
/// (block shift `A`, `B = [I; 0; …]`, `C = [M₁ … M_k]`, `D = M₀`).
pub fn polynomial_realization(coeffs: &[SuperMatrix]) -> Result<Realization> {
    let m0 = coeffs
        .first()
        .ok_or_else(|| Error::InvalidArgument("polynomial needs a coefficient".into()))?;
    let ctx = m0.ctx();
    let (p, q) = m0.shape();
    if coeffs.iter().any(|m| m.shape() != (p, q)) {
        return Err(Error::ShapeMismatch("polynomial coefficients differ in shape".into()));
    }
    let k = coeffs.len() - 1;
    if k == 0 {
        return Ok(Realization::constant(m0));
    }
    let n = k * q;
    let mut a = SuperMatrix::zeros(ctx, n, n);
    for i in 1..k {
        a.set_block(i * q, (i - 1) * q, &SuperMatrix::identity(ctx, q));
    }
    let mut b = SuperMatrix::zeros(ctx, n, q);
    b.set_block(0, 0, &SuperMatrix::identity(ctx, q));
    let parts: Vec<&SuperMatrix> = coeffs[1..].iter().collect();
    let c = SuperMatrix::hstack(&parts)?;
    Realization::new(a, b, c, m0.clone())
}

/// Rank test on the body of `[C; CA; …; CAⁿ⁻¹]`.
pub fn is_observable(c: &SuperMatrix, a: &SuperMatrix) -> bool {
    let n = a.rows();
    if c.cols() != n || a.cols() != n {
        return false;
    }
    if n == 0 {
        return true;
    }
    let (cb, ab) = (c.body(), a.body());
    let mut stacked = CMatrix::zeros(c.rows() * n, n);
    let mut block = cb.clone();
    for k in 0..n {
        stacked.view_mut((k * c.rows(), 0), (c.rows(), n)).copy_from(&block);
        block = &block * &ab;
    }
    linalg::rank(&stacked, a.ctx().tol_body) == n
}

/// Rank test on the body of `[B, AB, …, Aⁿ⁻¹B]`.
pub fn is_controllable(a: &SuperMatrix, b: &SuperMatrix) -> bool {
    is_observable(&b.adjoint(), &a.adjoint())
}

/// Body rank of the span of `R₀ⁿ F e_j` for `1 ≤ n ≤ n_max`.
///
/// Each shifted column is compared on the coefficients every shift still
/// knows: all of them for an exact series, the first `D + 1 − n_max` for a
/// truncated one.
pub fn backward_shift_span_dimension(f: &SeriesMatrix, n_max: usize) -> usize {
    let (p, q) = f.shape();
    let d = f.degree();
    let len = if f.is_truncated() {
        if n_max > d {
            return 0;
        }
        d + 1 - n_max
    } else {
        d + 1
    };
    if n_max == 0 || len == 0 {
        return 0;
    }
    let body = f.body();
    let zero = CMatrix::zeros(p, q);
    let mut m = CMatrix::zeros(len * p, n_max * q);
    for n in 1..=n_max {
        for k in 0..len {
            let c = body.get(n + k).unwrap_or(&zero);
            m.view_mut((k * p, (n - 1) * q), (p, q)).copy_from(c);
        }
    }
    linalg::rank(&m, f.ctx().tol_body)
}

/// Sampled test of `U(z) J U(z^{−†})* = J`.
///
/// `J` must be self-adjoint with `J² = I`. Sample points have unimodular
/// bodies and random even souls, drawn from a generator seeded with `seed`.
pub fn is_j_unitary(u: &Realization, j: &SuperMatrix, sample_points: usize, seed: u64) -> Result<bool> {
    Ok(j_unitarity_defect(u, j, sample_points, seed)? <= u.ctx().tol_eq)
}

/// Largest `‖U(z) J U(z^{−†})* − J‖₁` over the sample points.
pub fn j_unitarity_defect(u: &Realization, j: &SuperMatrix, sample_points: usize, seed: u64) -> Result<f64> {
    check_signature(j)?;
    let (p, q) = u.shape();
    if p != q || j.rows() != p {
        return Err(Error::ShapeMismatch("J-unitarity needs a square U matching J".into()));
    }
    let ctx = u.ctx();
    let mut sampler = Sampler::new(ctx, seed);
    let mut worst: f64 = 0.0;
    for _ in 0..sample_points {
        let t = sampler.uniform(0.0, std::f64::consts::TAU);
        let z = sampler.even(C64::from_polar(1.0, t), 0.2);
        let mirror = z.dagger().invert()?;
        let lhs = &(&u.evaluate(&z)? * j) * &u.evaluate(&mirror)?.adjoint();
        let defect = (&lhs - j).norm1() / j.norm1().max(1.0);
        worst = worst.max(defect);
    }
    Ok(worst)
}

/// `J = J*` and `J² = I`, checked exactly up to `tol_eq`.
pub fn check_signature(j: &SuperMatrix) -> Result<()> {
    let ctx = j.ctx();
    if !j.is_square() || j.adjoint_defect() > ctx.tol_eq {
        return Err(Error::JInvalid);
    }
    let sq = j * j;
    if (&sq - &SuperMatrix::identity(ctx, j.rows())).norm1() > ctx.tol_eq {
        return Err(Error::JInvalid);
    }
    Ok(())
}

/// The same realization read as a right-sided series.
pub fn right_series(r: &Realization, degree: usize) -> SeriesMatrix {
    r.to_series(degree).with_side(Side::Right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraContext;

    fn ctx() -> Ctx {
        AlgebraContext::new(6).unwrap()
    }

    fn sc(k: &Ctx, x: f64) -> SuperMatrix {
        SuperMatrix::scalar(&Supernumber::real(k, x))
    }

    fn random(s: &mut Sampler, n: usize, p: usize, q: usize) -> Realization {
        Realization::new(
            s.matrix(n, n, 0.3, 0.1),
            s.matrix(n, q, 1.0, 0.1),
            s.matrix(p, n, 1.0, 0.1),
            &s.matrix(p, q, 0.3, 0.1) + &SuperMatrix::identity(s.ctx(), p.max(q)).block(0, 0, p, q),
        )
        .unwrap()
    }

    #[test]
    fn series_of_simple_realizations() {
        let k = ctx();
        let mut s = Sampler::new(&k, 1);
        let d = s.matrix(2, 3, 1.0, 0.2);
        let f = Realization::constant(&d).to_series(8);
        assert_eq!(f, SeriesMatrix::constant(&d));
        let m = s.matrix(2, 2, 1.0, 0.2);
        let zm = Realization::new(SuperMatrix::zeros(&k, 2, 2), SuperMatrix::identity(&k, 2), m.clone(), SuperMatrix::zeros(&k, 2, 2)).unwrap();
        let f = zm.to_series(8);
        assert!(!f.is_truncated());
        assert_eq!(f.coeffs(), &[SuperMatrix::zeros(&k, 2, 2), m]);
    }

    #[test]
    fn series_matches_resolvent_expansion() {
        let k = ctx();
        let mut s = Sampler::new(&k, 2);
        let r = random(&mut s, 3, 2, 2);
        let deg = 12;
        let f = r.to_series(deg);
        let res = crate::series::resolvent(&r.a, Side::Left).unwrap().truncate(deg);
        let c = SeriesMatrix::constant(&r.c).shift_up();
        let b = SeriesMatrix::constant(&r.b);
        let g = SeriesMatrix::constant(&r.d)
            .try_add(&c.star_mul(&res).unwrap().star_mul(&b).unwrap())
            .unwrap();
        assert!(f.approx_eq(&g, 1e-13));
    }

    #[test]
    fn closed_form_matches_series() {
        let k = ctx();
        let mut s = Sampler::new(&k, 3);
        let r = random(&mut s, 3, 2, 2);
        let f = r.to_series(k.max_series_degree);
        for _ in 0..5 {
            let b = s.complex(0.25);
            let z = s.supernumber(b, 0.1);
            let series = f.evaluate(&z).unwrap();
            assert!(series.tail < 1e-10);
            assert!(r.evaluate(&z).unwrap().approx_eq(&series.value, 1e-10));
        }
    }

    #[test]
    fn inverse_realizations() {
        let k = ctx();
        let two = Realization::constant(&sc(&k, 2.0));
        assert_eq!(two.inverse().unwrap().d, sc(&k, 0.5));
        let one_minus_z = polynomial_realization(&[sc(&k, 1.0), sc(&k, -1.0)]).unwrap();
        let geo = one_minus_z.inverse().unwrap().to_series(10);
        assert!(geo.body().iter().all(|c| (c[(0, 0)].re - 1.0).abs() < 1e-15));
        let mut s = Sampler::new(&k, 4);
        let r = random(&mut s, 3, 2, 2);
        let f = r.to_series(16);
        let g = r.inverse().unwrap().to_series(16);
        let id = SeriesMatrix::identity(&k, 2);
        assert!(f.star_mul(&g).unwrap().max_coeff_diff(&id) <= k.tol_eq);
        assert!(g.star_mul(&f).unwrap().max_coeff_diff(&id) <= k.tol_eq);
        let back = r.inverse().unwrap().inverse().unwrap().to_series(16);
        assert!(back.approx_eq(&f, 1e-10));
        let sing = Realization::constant(&SuperMatrix::zeros(&k, 2, 2));
        assert_eq!(sing.inverse(), Err(Error::DSingular));
    }

    #[test]
    fn compose_modes_match_series_operations() {
        let k = ctx();
        let mut s = Sampler::new(&k, 5);
        let deg = 10;
        let r1 = random(&mut s, 2, 2, 2);
        let r2 = random(&mut s, 3, 2, 2);
        let (f1, f2) = (r1.to_series(deg), r2.to_series(deg));
        let prod = compose(&r1, &r2, ComposeMode::Product).unwrap().to_series(deg);
        assert!(prod.approx_eq(&f1.star_mul(&f2).unwrap(), 1e-12));
        let sum = compose(&r1, &r2, ComposeMode::Sum).unwrap().to_series(deg);
        assert!(sum.approx_eq(&f1.try_add(&f2).unwrap(), 1e-12));
        let rows = compose(&r1, &r2, ComposeMode::ConcatRows).unwrap().to_series(deg);
        let cols = compose(&r1, &r2, ComposeMode::ConcatCols).unwrap().to_series(deg);
        for n in 0..=deg {
            let (a, b) = (f1.coeff(n).unwrap(), f2.coeff(n).unwrap());
            assert!(rows.coeff(n).unwrap().approx_eq(&SuperMatrix::vstack(&[&a, &b]).unwrap(), 1e-12));
            assert!(cols.coeff(n).unwrap().approx_eq(&SuperMatrix::hstack(&[&a, &b]).unwrap(), 1e-12));
        }
        let id = Realization::constant(&SuperMatrix::identity(&k, 2));
        assert!(compose(&r1, &id, ComposeMode::Product).unwrap().to_series(deg).approx_eq(&f1, 1e-14));
        let zero = Realization::constant(&SuperMatrix::zeros(&k, 2, 2));
        assert!(compose(&r1, &zero, ComposeMode::Sum).unwrap().to_series(deg).approx_eq(&f1, 1e-14));
        let wide = random(&mut s, 1, 2, 3);
        assert!(matches!(compose(&wide, &r1, ComposeMode::Product), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn polynomial_realizations_are_exact() {
        let k = ctx();
        let mut s = Sampler::new(&k, 6);
        let m = s.matrix(2, 2, 1.0, 0.2);
        let r = polynomial_realization(&[m.clone()]).unwrap();
        assert_eq!(r.state_dim(), 0);
        assert_eq!(r.d, m);
        let coeffs: Vec<SuperMatrix> = (0..4).map(|_| s.matrix(2, 3, 1.0, 0.2)).collect();
        let f = polynomial_realization(&coeffs).unwrap().to_series(20);
        assert!(!f.is_truncated());
        assert_eq!(f.coeffs(), coeffs.as_slice());
    }

    #[test]
    fn observability_and_controllability() {
        let k = ctx();
        let id = SuperMatrix::identity(&k, 2);
        let zero = SuperMatrix::zeros(&k, 2, 2);
        assert!(is_observable(&id, &zero));
        assert!(!is_observable(&zero, &zero));
        assert!(is_controllable(&zero, &id));
        let mut jordan = zero.clone();
        jordan.set(0, 1, Supernumber::one(&k));
        let e1 = SuperMatrix::unit_column(&k, 2, 0);
        let e2 = SuperMatrix::unit_column(&k, 2, 1);
        assert!(is_controllable(&jordan, &e2));
        assert!(!is_controllable(&jordan, &e1));
        assert!(is_observable(&e1.adjoint(), &jordan));
        assert!(!is_observable(&e2.adjoint(), &jordan));
    }

    #[test]
    fn shift_span() {
        let k = ctx();
        let geo = SeriesMatrix::scalar(&[Supernumber::one(&k), Supernumber::real(&k, -0.5)], false)
            .unwrap()
            .star_inverse()
            .unwrap();
        assert_eq!(backward_shift_span_dimension(&geo, 5), 1);
        let cubic = SeriesMatrix::scalar(&[1.0, 2.0, -1.0, 0.5].map(|x| Supernumber::real(&k, x)), false).unwrap();
        assert_eq!(backward_shift_span_dimension(&cubic, 6), 3);
        let mut s = Sampler::new(&k, 7);
        let r = random(&mut s, 2, 1, 1);
        assert!(backward_shift_span_dimension(&r.to_series(24), 6) <= 2);
    }

    #[test]
    fn j_unitarity() {
        let k = ctx();
        let j = SuperMatrix::diag(&k, &[Supernumber::one(&k), Supernumber::real(&k, -1.0)]);
        let (ch, sh) = (1.2f64.cosh(), 1.2f64.sinh());
        let boost = SuperMatrix::from_rows(&k, vec![
            vec![Supernumber::real(&k, ch), Supernumber::real(&k, sh)],
            vec![Supernumber::real(&k, sh), Supernumber::real(&k, ch)],
        ])
        .unwrap();
        assert!(is_j_unitary(&Realization::constant(&boost), &j, 8, 1).unwrap());
        let id = SuperMatrix::identity(&k, 2);
        let stretch = SuperMatrix::diag(&k, &[Supernumber::real(&k, 2.0), Supernumber::one(&k)]);
        assert!(!is_j_unitary(&Realization::constant(&stretch), &id, 8, 1).unwrap());
        let blaschke = polynomial_realization(&[sc(&k, 0.0), sc(&k, 1.0)]).unwrap();
        assert!(is_j_unitary(&blaschke, &sc(&k, 1.0), 8, 2).unwrap());
        assert_eq!(is_j_unitary(&Realization::constant(&id), &stretch, 4, 1), Err(Error::JInvalid));
    }
}
