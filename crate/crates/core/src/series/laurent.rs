//! Two-sided series `Σ eⁱⁿᵗ fₙ` with supermatrix coefficients.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rustfft::FftPlanner;

use super::SeriesMatrix;
use crate::algebra::{same_ctx, Ctx, MultiIndex, Supernumber, C64};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::matrix::SuperMatrix;

/// Largest sampling grid tried by [`wiener_invert`].
const MAX_SAMPLES: usize = 1 << 16;

/// Coefficients `f_{−K}, …, f_K`; everything outside the window is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    window: usize,
    coeffs: Vec<SuperMatrix>,
    rows: usize,
    cols: usize,
    ctx: Ctx,
}

impl LaurentSeries {
    /// `coeffs[k]` is the coefficient of index `k − K`; needs `2K + 1` entries.
    pub fn new(window: usize, coeffs: Vec<SuperMatrix>) -> Result<Self> {
        if coeffs.len() != 2 * window + 1 {
            return Err(Error::InvalidArgument(format!(
                "window {window} needs {} coefficients, got {}",
                2 * window + 1,
                coeffs.len()
            )));
        }
        let (rows, cols) = coeffs[0].shape();
        let ctx = coeffs[0].ctx().clone();
        for c in &coeffs {
            if c.shape() != (rows, cols) {
                return Err(Error::ShapeMismatch("Laurent coefficients differ in shape".into()));
            }
            if !same_ctx(c.ctx(), &ctx) {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(LaurentSeries { window, coeffs, rows, cols, ctx })
    }

    /// Series from `(index, coefficient)` pairs; repeated indices add up.
    pub fn from_terms(ctx: &Ctx, rows: usize, cols: usize, terms: &[(i64, SuperMatrix)]) -> Result<Self> {
        let window = terms.iter().map(|(n, _)| n.unsigned_abs() as usize).max().unwrap_or(0);
        let mut f = LaurentSeries::zero(ctx, rows, cols, window);
        for (n, m) in terms {
            if m.shape() != (rows, cols) {
                return Err(Error::ShapeMismatch("Laurent term shape".into()));
            }
            let k = f.slot(*n).expect("inside window");
            f.coeffs[k] = f.coeffs[k].try_add(m)?;
        }
        Ok(f)
    }

    pub fn zero(ctx: &Ctx, rows: usize, cols: usize, window: usize) -> Self {
        LaurentSeries {
            window,
            coeffs: vec![SuperMatrix::zeros(ctx, rows, cols); 2 * window + 1],
            rows,
            cols,
            ctx: ctx.clone(),
        }
    }

    pub fn constant(m: &SuperMatrix) -> Self {
        LaurentSeries {
            window: 0,
            coeffs: vec![m.clone()],
            rows: m.rows(),
            cols: m.cols(),
            ctx: m.ctx().clone(),
        }
    }

    /// Nonnegative-index series with the coefficients of `f`.
    pub fn from_series(f: &SeriesMatrix) -> Self {
        let d = f.degree();
        let (rows, cols) = f.shape();
        let mut out = LaurentSeries::zero(f.ctx(), rows, cols, d);
        for (n, c) in f.coeffs().iter().enumerate() {
            out.coeffs[d + n] = c.clone();
        }
        out
    }

    fn slot(&self, n: i64) -> Option<usize> {
        let k = n + self.window as i64;
        (k >= 0 && (k as usize) < self.coeffs.len()).then_some(k as usize)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Coefficient of index `n`, zero outside the window.
    pub fn coeff(&self, n: i64) -> SuperMatrix {
        match self.slot(n) {
            Some(k) => self.coeffs[k].clone(),
            None => SuperMatrix::zeros(&self.ctx, self.rows, self.cols),
        }
    }

    /// `(n, fₙ)` over the window in increasing `n`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &SuperMatrix)> {
        let k = self.window as i64;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as i64 - k, c))
    }

    /// Same series in window `w`; coefficients outside are dropped.
    pub fn with_window(&self, w: usize) -> Self {
        let coeffs = (-(w as i64)..=w as i64).map(|n| self.coeff(n)).collect();
        LaurentSeries { window: w, coeffs, ..self.clone() }
    }

    /// Smallest window holding every nonzero coefficient.
    pub fn trimmed(&self) -> Self {
        let w = self
            .terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, _)| n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        self.with_window(w)
    }

    /// `Σ ‖fₙ‖₁`.
    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm1()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Body of `f(e^{it})`.
    pub fn body_at(&self, t: f64) -> CMatrix {
        let mut acc = CMatrix::zeros(self.rows, self.cols);
        for (n, c) in self.terms() {
            acc += c.body() * C64::from_polar(1.0, n as f64 * t);
        }
        acc
    }

    /// Coefficients with every soul removed.
    pub fn body_series(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| SuperMatrix::from_complex(&self.ctx, &c.body()))
            .collect();
        LaurentSeries { coeffs, ..self.clone() }
    }

    /// Coefficients with every body removed.
    pub fn soul_series(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.soul()).collect();
        LaurentSeries { coeffs, ..self.clone() }
    }

    fn linear(&self, other: &LaurentSeries, sign: f64) -> Result<Self> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch("Laurent sum shapes differ".into()));
        }
        let w = self.window.max(other.window);
        let coeffs = (-(w as i64)..=w as i64)
            .map(|n| &self.coeff(n) + &other.coeff(n).scale_real(sign))
            .collect();
        Ok(LaurentSeries { window: w, coeffs, ..self.clone() })
    }

    pub fn try_add(&self, other: &LaurentSeries) -> Result<Self> {
        self.linear(other, 1.0)
    }

    pub fn try_sub(&self, other: &LaurentSeries) -> Result<Self> {
        self.linear(other, -1.0)
    }

    /// Convolution `(f⋆g)ₙ = Σ_k f_k g_{n−k}`, summed in increasing `k`.
    pub fn star_mul(&self, other: &LaurentSeries) -> Result<Self> {
        self.star_mul_window(other, self.window + other.window)
    }

    /// Convolution restricted to indices `|n| ≤ w`.
    pub fn star_mul_window(&self, other: &LaurentSeries, w: usize) -> Result<Self> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch("Laurent star product inner shapes differ".into()));
        }
        let (kf, kg) = (self.window as i64, other.window as i64);
        let mut coeffs = Vec::with_capacity(2 * w + 1);
        for n in -(w as i64)..=w as i64 {
            let mut acc = SuperMatrix::zeros(&self.ctx, self.rows, other.cols);
            for k in (n - kg).max(-kf)..=(n + kg).min(kf) {
                let f = &self.coeffs[(k + kf) as usize];
                let g = &other.coeffs[(n - k + kg) as usize];
                if !f.is_zero() && !g.is_zero() {
                    acc = &acc + &(f * g);
                }
            }
            coeffs.push(acc);
        }
        Ok(LaurentSeries {
            window: w,
            coeffs,
            rows: self.rows,
            cols: other.cols,
            ctx: self.ctx.clone(),
        })
    }

    fn masked(&self, keep: impl Fn(i64) -> bool) -> Self {
        let coeffs = self
            .terms()
            .map(|(n, c)| if keep(n) { c.clone() } else { SuperMatrix::zeros(&self.ctx, self.rows, self.cols) })
            .collect();
        LaurentSeries { coeffs, ..self.clone() }
    }

    /// Keeps indices `n ≥ 0`.
    pub fn project_plus(&self) -> Self {
        self.masked(|n| n >= 0)
    }

    /// Keeps indices `n ≤ 0`.
    pub fn project_minus(&self) -> Self {
        self.masked(|n| n <= 0)
    }

    /// Largest coefficient deviation from the identity within the window of
    /// `self`, which must be square.
    pub fn identity_residual(&self) -> f64 {
        let id = SuperMatrix::identity(&self.ctx, self.rows);
        self.terms()
            .map(|(n, c)| if n == 0 { (c - &id).norm1() } else { c.norm1() })
            .fold(0.0, f64::max)
    }
}

/// Finest grid used to separate the body of a symbol from zero.
const MAX_VERDICT_GRID: usize = 1 << 18;

/// Whether the body of `f` is invertible at every point of the unit circle.
///
/// `σ_min(f_B(e^{it}))` is Lipschitz in `t` with constant
/// `L = Σ |n| ‖f_n,B‖_F`, so a grid of `m` points whose smallest value
/// exceeds `Lπ/m` certifies invertibility everywhere. The grid starts at
/// `grid_points` and doubles until that holds, a sample falls to `tol_body`,
/// or the grid reaches 2¹⁸ points; the last two mean not invertible.
pub fn wiener_is_invertible(f: &LaurentSeries, grid_points: usize) -> bool {
    if f.rows != f.cols {
        return false;
    }
    let lipschitz: f64 = f.terms().map(|(n, c)| n.unsigned_abs() as f64 * c.body().norm()).sum();
    let tol = f.ctx.tol_body;
    let mut m = grid_points.max(2 * f.window + 1).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    loop {
        let values = body_samples(f, m, &mut planner);
        let p = f.rows;
        let mut min = f64::INFINITY;
        for t in 0..m {
            let s = if p == 1 {
                values[0][t].norm()
            } else {
                let v = CMatrix::from_fn(p, p, |i, j| values[i * p + j][t]);
                linalg::singular_values(&v).last().copied().unwrap_or(f64::INFINITY)
            };
            if s <= tol {
                return false;
            }
            min = min.min(s);
        }
        if min > lipschitz * PI / m as f64 {
            return true;
        }
        if m >= MAX_VERDICT_GRID {
            return false;
        }
        m *= 2;
    }
}

/// Samples of each body entry `f_B,ij(e^{2πit/m})`, `t < m`, stored entry by
/// entry in row-major order; needs `m > 2K`.
fn body_samples(f: &LaurentSeries, m: usize, planner: &mut FftPlanner<f64>) -> Vec<Vec<C64>> {
    let fft = planner.plan_fft_inverse(m);
    let mut out = Vec::with_capacity(f.rows * f.cols);
    for i in 0..f.rows {
        for j in 0..f.cols {
            let mut buf = vec![C64::new(0.0, 0.0); m];
            for (n, c) in f.terms() {
                buf[n.rem_euclid(m as i64) as usize] = c.get(i, j).body();
            }
            fft.process(&mut buf);
            out.push(buf);
        }
    }
    out
}

/// Inverse of an invertible element.
///
/// `f` is sampled on `m` points of the circle, each sample is inverted as a
/// supermatrix and every monomial coefficient is transformed back, so the
/// body inverse and its nilpotent soul correction come out of the same
/// transform. The grid starts at `4(2K+1)` points and doubles until, outside
/// a quarter of the grid (the returned window), the body tail is below
/// `tol_eq` and the full tail is negligible next to `‖g‖₁`; both one-sided
/// residuals inside the window must then be within `tol_eq`.
pub fn wiener_invert(f: &LaurentSeries) -> Result<LaurentSeries> {
    if f.rows != f.cols {
        return Err(Error::ShapeMismatch("Wiener inverse needs square coefficients".into()));
    }
    let ctx = f.ctx.clone();
    let mut m = (4 * (2 * f.window + 1)).next_power_of_two().max(16);
    if !wiener_is_invertible(f, m.max(256)) {
        return Err(Error::NotInvertible);
    }
    let fb_norm = f.body_series().norm1().max(1.0);
    let mut planner = FftPlanner::<f64>::new();
    while m <= MAX_SAMPLES {
        let w = m / 4;
        let g = inverse_coefficients(f, m, &mut planner)?;
        let half = m as i64 / 2;
        let outside = |n: i64| n.unsigned_abs() as usize > w;
        let index = |k: usize| if k as i64 > half { k as i64 - m as i64 } else { k as i64 };
        let (mut body_tail, mut tail, mut total) = (0.0, 0.0, 0.0);
        for (k, c) in g.iter().enumerate() {
            let norm = c.norm1();
            total += norm;
            if outside(index(k)) {
                tail += norm;
                body_tail += c.body().iter().map(|x| x.norm()).sum::<f64>();
            }
        }
        if body_tail * fb_norm > ctx.tol_eq / 10.0 || tail > ctx.tol_eq / 10.0 * total {
            m *= 2;
            continue;
        }
        let at = |n: i64| g[n.rem_euclid(m as i64) as usize].clone();
        let inv = LaurentSeries::new(w, (-(w as i64)..=w as i64).map(at).collect())?;
        let right = f.star_mul_window(&inv, w)?.identity_residual();
        let left = inv.star_mul_window(f, w)?.identity_residual();
        if right.max(left) <= ctx.tol_eq {
            return Ok(inv);
        }
        m *= 2;
    }
    Err(Error::WindowTooSmall)
}

/// Fourier coefficients `gₙ`, `n` read modulo `m`, of `f(e^{it})⁻¹` sampled
/// on `m` points.
fn inverse_coefficients(f: &LaurentSeries, m: usize, planner: &mut FftPlanner<f64>) -> Result<Vec<SuperMatrix>> {
    let (ctx, p) = (&f.ctx, f.rows);
    let zero = C64::new(0.0, 0.0);
    // Samples of each entry, one row per monomial.
    let mut samples: Vec<BTreeMap<MultiIndex, Vec<C64>>> = vec![BTreeMap::new(); p * p];
    for t in 0..m {
        let theta = 2.0 * PI * t as f64 / m as f64;
        let mut v = SuperMatrix::zeros(ctx, p, p);
        for (n, c) in f.terms() {
            if !c.is_zero() {
                v = &v + &c.scale(C64::from_polar(1.0, n as f64 * theta));
            }
        }
        let inv = v.mat_invert().map_err(|_| Error::NotInvertible)?;
        for (e, rows) in samples.iter_mut().enumerate() {
            for &(idx, x) in inv.get(e / p, e % p).terms() {
                rows.entry(idx).or_insert_with(|| vec![zero; m])[t] = x;
            }
        }
    }
    let fft = planner.plan_fft_forward(m);
    let mut terms: Vec<Vec<Vec<(MultiIndex, C64)>>> = vec![vec![Vec::new(); p * p]; m];
    for (e, rows) in samples.into_iter().enumerate() {
        for (idx, mut buf) in rows {
            fft.process(&mut buf);
            for (n, x) in buf.into_iter().enumerate() {
                terms[n][e].push((idx, x / m as f64));
            }
        }
    }
    terms
        .into_iter()
        .map(|entries| {
            let data = entries
                .into_iter()
                .map(|t| Supernumber::from_terms(ctx, t))
                .collect::<Result<Vec<_>>>()?;
            SuperMatrix::from_vec(ctx, p, p, data)
        })
        .collect()
}

/// Whether the body of a scalar one-sided series has no zero in the closed
/// unit disk: nonvanishing on the circle with winding number zero.
pub fn weak_plus_invertibility(f: &SeriesMatrix) -> bool {
    if f.shape() != (1, 1) {
        return false;
    }
    let c: Vec<C64> = f.body().iter().map(|m| m[(0, 0)]).collect();
    let samples = (16 * c.len()).max(1024);
    let tol = f.ctx().tol_body;
    let value = |t: f64| {
        let z = C64::from_polar(1.0, t);
        c.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc * z + a)
    };
    let mut prev = value(0.0);
    if prev.norm() <= tol {
        return false;
    }
    let mut turns = 0.0;
    for k in 1..=samples {
        let v = value(2.0 * PI * k as f64 / samples as f64);
        if v.norm() <= tol {
            return false;
        }
        turns += (v / prev).arg();
        prev = v;
    }
    (turns / (2.0 * PI)).round() == 0.0
}
