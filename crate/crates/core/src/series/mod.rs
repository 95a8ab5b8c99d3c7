//! Power series with supermatrix coefficients and the Cauchy (star) product.
//!
//! A [`SeriesMatrix`] stores `f₀, …, f_D`. An exact series is a polynomial
//! whose coefficients beyond `D` vanish; a truncated series only knows its
//! first `D + 1` coefficients. Every operation propagates the flag, so a
//! result is always correct through its reported degree.

mod laurent;

pub use laurent::{wiener_invert, wiener_is_invertible, weak_plus_invertibility, LaurentSeries};

use crate::algebra::{same_ctx, Ctx, Supernumber};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::matrix::SuperMatrix;

/// Which side of the coefficients the powers of `z` sit on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `F(z) = Σ zⁿ fₙ`.
    Left,
    /// `F(z) = Σ fₙ zⁿ`.
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix {
    coeffs: Vec<SuperMatrix>,
    rows: usize,
    cols: usize,
    truncated: bool,
    side: Side,
    ctx: Ctx,
}

/// Value of a series at a point with an estimate of the neglected tail.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: SuperMatrix,
    /// Geometric extrapolation of the remaining terms; zero for an exact
    /// series, infinite when the terms do not decay.
    pub tail: f64,
}

impl SeriesMatrix {
    fn build(coeffs: Vec<SuperMatrix>, truncated: bool) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("a series needs at least one coefficient".into()))?;
        let (rows, cols) = first.shape();
        let ctx = first.ctx().clone();
        for c in &coeffs {
            if c.shape() != (rows, cols) {
                return Err(Error::ShapeMismatch("series coefficients differ in shape".into()));
            }
            if !same_ctx(c.ctx(), &ctx) {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(SeriesMatrix {
            coeffs,
            rows,
            cols,
            truncated,
            side: Side::Left,
            ctx,
        })
    }

    /// Exact polynomial `Σ zⁿ Mₙ`.
    pub fn polynomial(coeffs: Vec<SuperMatrix>) -> Result<Self> {
        Ok(Self::build(coeffs, false)?.trimmed())
    }

    /// First coefficients of a series known only up to `coeffs.len() − 1`.
    pub fn truncated(coeffs: Vec<SuperMatrix>) -> Result<Self> {
        Self::build(coeffs, true)
    }

    pub fn constant(m: &SuperMatrix) -> Self {
        Self::build(vec![m.clone()], false).expect("one coefficient")
    }

    pub fn identity(ctx: &Ctx, n: usize) -> Self {
        Self::constant(&SuperMatrix::identity(ctx, n))
    }

    pub fn zero(ctx: &Ctx, rows: usize, cols: usize) -> Self {
        Self::constant(&SuperMatrix::zeros(ctx, rows, cols))
    }

    /// Scalar series with the given supernumber coefficients.
    pub fn scalar(coeffs: &[Supernumber], truncated: bool) -> Result<Self> {
        Self::build(coeffs.iter().map(SuperMatrix::scalar).collect(), truncated).map(|s| {
            if truncated {
                s
            } else {
                s.trimmed()
            }
        })
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    fn trimmed(mut self) -> Self {
        if !self.truncated {
            while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.is_zero()) {
                self.coeffs.pop();
            }
        }
        self
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn coeffs(&self) -> &[SuperMatrix] {
        &self.coeffs
    }

    /// Coefficient `n`; zero past the degree of an exact series.
    pub fn coeff(&self, n: usize) -> Option<SuperMatrix> {
        match self.coeffs.get(n) {
            Some(c) => Some(c.clone()),
            None if !self.truncated => Some(SuperMatrix::zeros(&self.ctx, self.rows, self.cols)),
            None => None,
        }
    }

    /// Bodies of the coefficients.
    pub fn body(&self) -> Vec<CMatrix> {
        self.coeffs.iter().map(|c| c.body()).collect()
    }

    /// Same truncation state with every coefficient mapped.
    pub fn map(&self, f: impl Fn(&SuperMatrix) -> SuperMatrix) -> Result<Self> {
        let coeffs: Vec<SuperMatrix> = self.coeffs.iter().map(f).collect();
        Ok(Self::build(coeffs, self.truncated)?.with_side(self.side).trimmed())
    }

    /// The scalar coefficients of a `1 × 1` series.
    pub fn scalar_coeffs(&self) -> Result<Vec<Supernumber>> {
        self.coeffs.iter().map(|c| c.as_scalar()).collect()
    }

    /// Keeps degrees `0..=d`; marks the result truncated when something was
    /// dropped.
    pub fn truncate(&self, d: usize) -> Self {
        if d >= self.degree() {
            return self.clone();
        }
        let dropped = self.coeffs[d + 1..].iter().any(|c| !c.is_zero());
        SeriesMatrix {
            coeffs: self.coeffs[..=d].to_vec(),
            truncated: self.truncated || dropped,
            ..self.clone()
        }
    }

    /// Degree and truncation flag of a binary operation.
    fn combined_degree(&self, other: &SeriesMatrix, exact_degree: usize) -> (usize, bool) {
        match (self.truncated, other.truncated) {
            (false, false) => {
                let cap = self.ctx.max_series_degree;
                if exact_degree > cap {
                    (cap, true)
                } else {
                    (exact_degree, false)
                }
            }
            (true, false) => (self.degree(), true),
            (false, true) => (other.degree(), true),
            (true, true) => (self.degree().min(other.degree()), true),
        }
    }

    fn check_ctx(&self, other: &SeriesMatrix) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn linear(&self, other: &SeriesMatrix, sign: f64) -> Result<Self> {
        self.check_ctx(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch("series sum shapes differ".into()));
        }
        let exact = self.degree().max(other.degree());
        let (d, truncated) = match (self.truncated, other.truncated) {
            (false, false) => (exact, false),
            _ => self.combined_degree(other, exact),
        };
        let zero = SuperMatrix::zeros(&self.ctx, self.rows, self.cols);
        let coeffs = (0..=d)
            .map(|n| {
                let a = self.coeffs.get(n).unwrap_or(&zero);
                let b = other.coeffs.get(n).unwrap_or(&zero);
                a + &b.scale_real(sign)
            })
            .collect();
        Ok(Self::build(coeffs, truncated)?.with_side(self.side).trimmed())
    }

    pub fn try_add(&self, other: &SeriesMatrix) -> Result<Self> {
        self.linear(other, 1.0)
    }

    pub fn try_sub(&self, other: &SeriesMatrix) -> Result<Self> {
        self.linear(other, -1.0)
    }

    /// `M ⋆ F` for a constant matrix `M`.
    pub fn left_mul(&self, m: &SuperMatrix) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| m.try_mul(c)).collect::<Result<Vec<_>>>()?;
        Ok(Self::build(coeffs, self.truncated)?.with_side(self.side).trimmed())
    }

    /// `F ⋆ M` for a constant matrix `M`.
    pub fn right_mul(&self, m: &SuperMatrix) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.try_mul(m)).collect::<Result<Vec<_>>>()?;
        Ok(Self::build(coeffs, self.truncated)?.with_side(self.side).trimmed())
    }

    /// `z·F`, shifting every coefficient up one degree.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = vec![SuperMatrix::zeros(&self.ctx, self.rows, self.cols)];
        coeffs.extend(self.coeffs.iter().cloned());
        SeriesMatrix { coeffs, ..self.clone() }.trimmed()
    }

    fn convolve(&self, other: &SeriesMatrix, side: Side) -> Result<Self> {
        self.check_ctx(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "star product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (d, truncated) = self.combined_degree(other, self.degree() + other.degree());
        let mut coeffs = Vec::with_capacity(d + 1);
        for n in 0..=d {
            let mut acc = SuperMatrix::zeros(&self.ctx, self.rows, other.cols);
            let lo = n.saturating_sub(other.degree());
            for u in lo..=n.min(self.degree()) {
                acc = &acc + &(&self.coeffs[u] * &other.coeffs[n - u]);
            }
            coeffs.push(acc);
        }
        Ok(Self::build(coeffs, truncated)?.with_side(side).trimmed())
    }

    /// Cauchy product `(F⋆G)ₙ = Σᵤ fᵤ g_{n−u}`.
    pub fn star_mul(&self, other: &SeriesMatrix) -> Result<Self> {
        self.convolve(other, Side::Left)
    }

    /// Cauchy product of right-sided series `Σ fₙ zⁿ`.
    pub fn star_mul_right(&self, other: &SeriesMatrix) -> Result<Self> {
        self.convolve(other, Side::Right)
    }

    /// `F^{−⋆}` from `g₀ = f₀⁻¹`, `gₙ = −f₀⁻¹ Σ_{u≥1} fᵤ g_{n−u}`.
    pub fn star_inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("star inverse needs square coefficients".into()));
        }
        let f0inv = self.coeffs[0].mat_invert().map_err(|e| match e {
            Error::BodySingular => Error::ConstantTermSingular,
            e => e,
        })?;
        if !self.truncated && self.degree() == 0 {
            return Ok(SeriesMatrix::constant(&f0inv).with_side(self.side));
        }
        let d = if self.truncated {
            self.degree()
        } else {
            self.ctx.max_series_degree
        };
        let mut g: Vec<SuperMatrix> = vec![f0inv.clone()];
        for n in 1..=d {
            let mut acc = SuperMatrix::zeros(&self.ctx, self.rows, self.cols);
            for u in 1..=n.min(self.degree()) {
                acc = &acc + &(&self.coeffs[u] * &g[n - u]);
            }
            g.push(-&(&f0inv * &acc));
        }
        Ok(Self::build(g, true)?.with_side(self.side))
    }

    /// `R₀F = f₁ + z f₂ + …`.
    pub fn backward_shift(&self) -> Result<Self> {
        if self.degree() == 0 {
            if self.truncated {
                return Err(Error::InvalidArgument("no coefficients left to shift".into()));
            }
            return Ok(SeriesMatrix::zero(&self.ctx, self.rows, self.cols).with_side(self.side));
        }
        Ok(SeriesMatrix {
            coeffs: self.coeffs[1..].to_vec(),
            ..self.clone()
        })
    }

    /// `Σ zⁿ fₙ` (or `Σ fₙ zⁿ` for a right series) with a tail estimate.
    pub fn evaluate(&self, z: &Supernumber) -> Result<Evaluation> {
        if !same_ctx(z.ctx(), &self.ctx) {
            return Err(Error::ContextMismatch);
        }
        let mut value = SuperMatrix::zeros(&self.ctx, self.rows, self.cols);
        let mut power = Supernumber::one(&self.ctx);
        let mut sizes = Vec::with_capacity(self.coeffs.len());
        for (n, f) in self.coeffs.iter().enumerate() {
            if n > 0 {
                power = &power * z;
            }
            let term = match self.side {
                Side::Left => f.left_scale(&power),
                Side::Right => f.right_scale(&power),
            };
            sizes.push(term.norm1());
            value = &value + &term;
        }
        let tail = if self.truncated { tail_estimate(&sizes) } else { 0.0 };
        Ok(Evaluation { value, tail })
    }

    /// Like [`evaluate`](Self::evaluate) but fails when the tail estimate
    /// exceeds `tol_eq`.
    pub fn evaluate_strict(&self, z: &Supernumber) -> Result<SuperMatrix> {
        let e = self.evaluate(z)?;
        if e.tail > self.ctx.tol_eq {
            return Err(Error::TailTooLarge(e.tail));
        }
        Ok(e.value)
    }

    /// `[F, G] = Σ gₙ* fₙ` over the coefficients both series know.
    pub fn hermitian_form(&self, g: &SeriesMatrix) -> Result<SuperMatrix> {
        self.check_ctx(g)?;
        if self.rows != g.rows {
            return Err(Error::ShapeMismatch("hermitian form needs equal row counts".into()));
        }
        let d = match (self.truncated, g.truncated) {
            (false, false) => self.degree().min(g.degree()),
            (true, false) => self.degree().min(g.degree()),
            (false, true) => self.degree().min(g.degree()),
            (true, true) => self.degree().min(g.degree()),
        };
        let mut acc = SuperMatrix::zeros(&self.ctx, g.cols, self.cols);
        for n in 0..=d {
            acc = &acc + &(&g.coeffs[n].adjoint() * &self.coeffs[n]);
        }
        Ok(acc)
    }

    /// Sub-block of every coefficient.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let coeffs: Vec<SuperMatrix> = self.coeffs.iter().map(|c| c.block(r0, c0, rows, cols)).collect();
        SeriesMatrix {
            coeffs,
            rows,
            cols,
            ..self.clone()
        }
        .trimmed()
    }

    /// Largest coefficient deviation `max ‖fₙ − gₙ‖₁` over common degrees.
    pub fn max_coeff_diff(&self, other: &SeriesMatrix) -> f64 {
        let d = self.degree().min(other.degree());
        (0..=d)
            .map(|n| (&self.coeffs[n] - &other.coeffs[n]).norm1())
            .fold(0.0, f64::max)
    }

    /// Agreement through the common degree, relative to the coefficient size.
    pub fn approx_eq(&self, other: &SeriesMatrix, tol: f64) -> bool {
        let d = self.degree().min(other.degree());
        (0..=d).all(|n| {
            let a = self.coeff(n).expect("within degree");
            let b = other.coeff(n).expect("within degree");
            a.approx_eq(&b, tol)
        })
    }
}

/// `Σ zⁿ Aⁿ`, exact when some power of `A` vanishes.
pub fn resolvent(a: &SuperMatrix, side: Side) -> Result<SeriesMatrix> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("resolvent needs a square matrix".into()));
    }
    let ctx = a.ctx();
    let mut coeffs = vec![SuperMatrix::identity(ctx, a.rows())];
    let mut truncated = true;
    for _ in 0..ctx.max_series_degree {
        let next = coeffs.last().unwrap() * a;
        if next.is_zero() {
            truncated = false;
            break;
        }
        coeffs.push(next);
    }
    Ok(SeriesMatrix::build(coeffs, truncated)?.with_side(side))
}

/// Geometric extrapolation of a tail from the last few term sizes.
pub(crate) fn tail_estimate(sizes: &[f64]) -> f64 {
    let n = sizes.len();
    if n == 0 {
        return 0.0;
    }
    let window = &sizes[n.saturating_sub(5)..];
    let last = window.iter().copied().fold(0.0, f64::max);
    if last == 0.0 {
        return 0.0;
    }
    let mut q: f64 = 0.0;
    for w in window.windows(2) {
        if w[0] > 0.0 {
            q = q.max(w[1] / w[0]);
        } else if w[1] > 0.0 {
            return f64::INFINITY;
        }
    }
    if window.len() < 2 || q >= 1.0 {
        return f64::INFINITY;
    }
    last * q / (1.0 - q)
}
