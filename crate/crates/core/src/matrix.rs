//! Supermatrices: dense grids of supernumbers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::{same_ctx, Ctx, Supernumber, C64};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Dense `rows × cols` matrix over the algebra, stored row-major.
#[derive(Clone, PartialEq)]
pub struct SuperMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Supernumber>,
    ctx: Ctx,
}

/// Factors `M = L·D·U` with unit triangular `L`, `U` and diagonal `D`.
#[derive(Clone, Debug)]
pub struct LduFactors {
    pub l: SuperMatrix,
    pub d: SuperMatrix,
    pub u: SuperMatrix,
}

/// Outcome of a positivity test together with the reason.
#[derive(Clone, Debug, PartialEq)]
pub enum Positivity {
    Holds { min_eigenvalue: f64 },
    NotSquare,
    NotSelfAdjoint { defect: f64 },
    BodyNotPositive { min_eigenvalue: f64, threshold: f64 },
}

impl Positivity {
    pub fn holds(&self) -> bool {
        matches!(self, Positivity::Holds { .. })
    }
}

impl SuperMatrix {
    pub fn zeros(ctx: &Ctx, rows: usize, cols: usize) -> Self {
        SuperMatrix {
            rows,
            cols,
            data: vec![Supernumber::zero(ctx); rows * cols],
            ctx: ctx.clone(),
        }
    }

    pub fn identity(ctx: &Ctx, n: usize) -> Self {
        Self::from_fn(ctx, n, n, |i, j| {
            if i == j {
                Supernumber::one(ctx)
            } else {
                Supernumber::zero(ctx)
            }
        })
    }

    pub fn from_fn(ctx: &Ctx, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Supernumber) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        SuperMatrix {
            rows,
            cols,
            data,
            ctx: ctx.clone(),
        }
    }

    /// Row-major entries.
    pub fn from_vec(ctx: &Ctx, rows: usize, cols: usize, data: Vec<Supernumber>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !same_ctx(z.ctx(), ctx)) {
            return Err(Error::ContextMismatch);
        }
        Ok(SuperMatrix {
            rows,
            cols,
            data,
            ctx: ctx.clone(),
        })
    }

    pub fn from_rows(ctx: &Ctx, rows: Vec<Vec<Supernumber>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::from_vec(ctx, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_complex(ctx: &Ctx, m: &CMatrix) -> Self {
        Self::from_fn(ctx, m.nrows(), m.ncols(), |i, j| Supernumber::scalar(ctx, m[(i, j)]))
    }

    /// `1 × 1` matrix.
    pub fn scalar(z: &Supernumber) -> Self {
        SuperMatrix {
            rows: 1,
            cols: 1,
            data: vec![z.clone()],
            ctx: z.ctx().clone(),
        }
    }

    pub fn diag(ctx: &Ctx, entries: &[Supernumber]) -> Self {
        let n = entries.len();
        Self::from_fn(ctx, n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                Supernumber::zero(ctx)
            }
        })
    }

    pub fn column(ctx: &Ctx, entries: &[Supernumber]) -> Self {
        Self::from_fn(ctx, entries.len(), 1, |i, _| entries[i].clone())
    }

    pub fn row(ctx: &Ctx, entries: &[Supernumber]) -> Self {
        Self::from_fn(ctx, 1, entries.len(), |_, j| entries[j].clone())
    }

    /// Coordinate column `e_k` of length `n`.
    pub fn unit_column(ctx: &Ctx, n: usize, k: usize) -> Self {
        Self::from_fn(ctx, n, 1, |i, _| {
            if i == k {
                Supernumber::one(ctx)
            } else {
                Supernumber::zero(ctx)
            }
        })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Supernumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Supernumber) {
        self.data[i * self.cols + j] = z;
    }

    pub fn entries(&self) -> &[Supernumber] {
        &self.data
    }

    /// The only entry of a `1 × 1` matrix.
    pub fn as_scalar(&self) -> Result<Supernumber> {
        if self.shape() != (1, 1) {
            return Err(Error::ShapeMismatch(format!(
                "expected 1x1, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(self.data[0].clone())
    }

    pub fn map(&self, f: impl Fn(&Supernumber) -> Supernumber) -> Self {
        SuperMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            ctx: self.ctx.clone(),
        }
    }

    /// Complex matrix of entry bodies.
    pub fn body(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).body())
    }

    pub fn soul(&self) -> Self {
        self.map(|z| z.soul())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.is_zero())
    }

    /// True when every entry has an even soul.
    pub fn is_even(&self) -> bool {
        self.data.iter().all(|z| z.is_even())
    }

    /// `Σ_{jk} ‖m_jk‖₁`.
    pub fn norm1(&self) -> f64 {
        self.data.iter().map(|z| z.norm1()).sum()
    }

    /// Conjugate transpose under the dagger.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).dagger())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn check_same(&self, other: &SuperMatrix) -> Result<()> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &SuperMatrix) -> Result<Self> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(SuperMatrix { data, ..self.clone_shape() })
    }

    pub fn try_sub(&self, other: &SuperMatrix) -> Result<Self> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(SuperMatrix { data, ..self.clone_shape() })
    }

    fn clone_shape(&self) -> SuperMatrix {
        SuperMatrix {
            rows: self.rows,
            cols: self.cols,
            data: Vec::new(),
            ctx: self.ctx.clone(),
        }
    }

    /// Matrix product; entries are summed in increasing inner index.
    pub fn try_mul(&self, other: &SuperMatrix) -> Result<Self> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Supernumber::zero(&self.ctx);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc += &(a * b);
                }
                data.push(acc);
            }
        }
        Ok(SuperMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
            ctx: self.ctx.clone(),
        })
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|z| z.scale(c))
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.map(|z| z.scale_real(x))
    }

    /// `z·M`.
    pub fn left_scale(&self, z: &Supernumber) -> Self {
        self.map(|m| z * m)
    }

    /// `M·z`.
    pub fn right_scale(&self, z: &Supernumber) -> Self {
        self.map(|m| m * z)
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// `‖A − B‖₁ ≤ tol · max(1, ‖A‖₁, ‖B‖₁)`.
    pub fn approx_eq(&self, other: &SuperMatrix, tol: f64) -> bool {
        if self.shape() != other.shape() {
            return false;
        }
        let scale = 1f64.max(self.norm1()).max(other.norm1());
        (self - other).norm1() <= tol * scale
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(&self.ctx, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &SuperMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// Side-by-side concatenation `[A B …]`.
    pub fn hstack(parts: &[&SuperMatrix]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidArgument("empty stack".into()))?;
        let rows = first.rows;
        if parts.iter().any(|p| p.rows != rows) {
            return Err(Error::ShapeMismatch("hstack row counts differ".into()));
        }
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = SuperMatrix::zeros(&first.ctx, rows, cols);
        let mut c0 = 0;
        for p in parts {
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(parts: &[&SuperMatrix]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidArgument("empty stack".into()))?;
        let cols = first.cols;
        if parts.iter().any(|p| p.cols != cols) {
            return Err(Error::ShapeMismatch("vstack column counts differ".into()));
        }
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = SuperMatrix::zeros(&first.ctx, rows, cols);
        let mut r0 = 0;
        for p in parts {
            out.set_block(r0, 0, p);
            r0 += p.rows;
        }
        Ok(out)
    }

    pub fn block_diag(a: &SuperMatrix, b: &SuperMatrix) -> Self {
        let mut out = SuperMatrix::zeros(&a.ctx, a.rows + b.rows, a.cols + b.cols);
        out.set_block(0, 0, a);
        out.set_block(a.rows, a.cols, b);
        out
    }

    /// `[[A, B], [C, D]]`.
    pub fn from_blocks(a: &SuperMatrix, b: &SuperMatrix, c: &SuperMatrix, d: &SuperMatrix) -> Result<Self> {
        let top = SuperMatrix::hstack(&[a, b])?;
        let bottom = SuperMatrix::hstack(&[c, d])?;
        SuperMatrix::vstack(&[&top, &bottom])
    }

    /// Recursive Schur-complement factorization `M = L·D·U`.
    pub fn ldu_factor(&self) -> Result<LduFactors> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("LDU needs a square matrix".into()));
        }
        let n = self.rows;
        let ctx = &self.ctx;
        let mut s = self.clone();
        let mut l = SuperMatrix::identity(ctx, n);
        let mut u = SuperMatrix::identity(ctx, n);
        let mut d = SuperMatrix::zeros(ctx, n, n);
        let mut minor = C64::new(1.0, 0.0);
        for k in 0..n {
            let piv = s.get(k, k).clone();
            minor *= piv.body();
            if minor.norm() <= ctx.tol_body {
                return Err(Error::NotRegular(k + 1));
            }
            let pinv = piv.invert().map_err(|_| Error::NotRegular(k + 1))?;
            for i in k + 1..n {
                l.set(i, k, s.get(i, k) * &pinv);
            }
            for j in k + 1..n {
                u.set(k, j, &pinv * s.get(k, j));
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let upd = l.get(i, k) * s.get(k, j);
                    let v = s.get(i, j) - &upd;
                    s.set(i, j, v);
                }
            }
            d.set(k, k, piv);
        }
        Ok(LduFactors { l, d, u })
    }

    /// Inverse via `(I + M_B⁻¹M_S)⁻¹ M_B⁻¹` and a terminating Neumann series.
    pub fn mat_invert(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("only square matrices invert".into()));
        }
        let ctx = &self.ctx;
        let n = self.rows;
        let bi = linalg::invert(&self.body(), ctx.tol_body).ok_or(Error::BodySingular)?;
        let bi = SuperMatrix::from_complex(ctx, &bi);
        let x = -&(&bi * &self.soul());
        let mut sum = SuperMatrix::identity(ctx, n);
        let mut power = SuperMatrix::identity(ctx, n);
        for _ in 0..=ctx.generators {
            power = &power * &x;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        let inv = &sum * &bi;
        // one Newton correction X + X(I − MX)
        let r = &SuperMatrix::identity(ctx, n) - &(self * &inv);
        Ok(&inv + &(&inv * &r))
    }

    /// `‖M − M*‖₁`.
    pub fn adjoint_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self - &self.adjoint()).norm1()
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_square() && self.adjoint_defect() <= 1e-12 * self.norm1().max(1.0)
    }

    fn positivity(&self, strict: bool) -> Positivity {
        if !self.is_square() {
            return Positivity::NotSquare;
        }
        let defect = self.adjoint_defect();
        if defect > 1e-12 * self.norm1().max(1.0) {
            return Positivity::NotSelfAdjoint { defect };
        }
        let ev = linalg::hermitian_eigenvalues(&self.body());
        let min = ev.first().copied().unwrap_or(f64::INFINITY);
        let scale = ev.iter().map(|e| e.abs()).fold(0.0, f64::max);
        let threshold = self.ctx.tol_body * scale;
        let ok = if strict { min > threshold } else { min >= -threshold };
        if ok {
            Positivity::Holds { min_eigenvalue: min }
        } else {
            Positivity::BodyNotPositive {
                min_eigenvalue: min,
                threshold,
            }
        }
    }

    /// Self-adjoint with positive definite body.
    pub fn superpositivity(&self) -> Positivity {
        self.positivity(true)
    }

    /// Self-adjoint with positive semidefinite body.
    pub fn supernonnegativity(&self) -> Positivity {
        self.positivity(false)
    }

    pub fn is_superpositive(&self) -> bool {
        self.superpositivity().holds()
    }

    pub fn is_supernonnegative(&self) -> bool {
        self.supernonnegativity().holds()
    }

    /// Lower triangular `L` with `M = L·L*`.
    pub fn positive_factorize(&self) -> Result<Self> {
        if !self.is_superpositive() {
            return Err(Error::NotSuperpositive);
        }
        let f = self.ldu_factor().map_err(|_| Error::NotSuperpositive)?;
        let roots: Vec<Supernumber> = (0..self.rows)
            .map(|k| f.d.get(k, k).real_part().sqrt())
            .collect::<Result<_>>()
            .map_err(|_| Error::NotSuperpositive)?;
        Ok(&f.l * &SuperMatrix::diag(&self.ctx, &roots))
    }

    /// `c*·M·c` for a column `c`.
    pub fn quadratic_form(&self, c: &SuperMatrix) -> Result<Supernumber> {
        let v = c.adjoint().try_mul(self)?.try_mul(c)?;
        v.as_scalar()
    }

    /// Rebuilds a square matrix from its quadratic form using
    /// `d*Mc = ¼ Σₖ iᵏ q(c + iᵏ d)` on coordinate probes.
    pub fn polarization_reconstruct(ctx: &Ctx, n: usize, q: impl Fn(&SuperMatrix) -> Supernumber) -> Self {
        let phases = [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ];
        Self::from_fn(ctx, n, n, |j, k| {
            let c = SuperMatrix::unit_column(ctx, n, k);
            let d = SuperMatrix::unit_column(ctx, n, j);
            let mut acc = Supernumber::zero(ctx);
            for ph in phases {
                let probe = &c + &d.scale(ph);
                acc += &q(&probe).scale(ph);
            }
            acc.scale_real(0.25)
        })
    }
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SuperMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a SuperMatrix> for &'a SuperMatrix {
    type Output = SuperMatrix;
    fn add(self, rhs: &'a SuperMatrix) -> SuperMatrix {
        self.try_add(rhs).expect("supermatrix shape or context mismatch")
    }
}

impl<'a> Sub<&'a SuperMatrix> for &'a SuperMatrix {
    type Output = SuperMatrix;
    fn sub(self, rhs: &'a SuperMatrix) -> SuperMatrix {
        self.try_sub(rhs).expect("supermatrix shape or context mismatch")
    }
}

impl<'a> Mul<&'a SuperMatrix> for &'a SuperMatrix {
    type Output = SuperMatrix;
    fn mul(self, rhs: &'a SuperMatrix) -> SuperMatrix {
        self.try_mul(rhs).expect("supermatrix shape or context mismatch")
    }
}

impl Neg for &SuperMatrix {
    type Output = SuperMatrix;
    fn neg(self) -> SuperMatrix {
        self.scale_real(-1.0)
    }
}
