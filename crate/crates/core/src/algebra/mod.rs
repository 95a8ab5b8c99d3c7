//! Truncated Grassmann algebra with complex coefficients.
//!
//! A [`Supernumber`] is a sparse combination of basis monomials `i_α`, where
//! `α` is a set of generator indices encoded as a 64-bit mask. All values are
//! immutable and tied to a shared [`AlgebraContext`].

mod analytic;

pub use analytic::{AnalyticFunction, Exp, Geometric, Identity, Log, Power, Reciprocal, Square};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum number of generators a context may declare.
pub const MAX_GENERATORS: u32 = 64;

/// Sets up to this many generators use a dense accumulator in products.
const DENSE_LIMIT: u32 = 10;

/// A set of generators; bit `k - 1` set means generator `k` is present.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct MultiIndex(u64);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub const fn from_bits(bits: u64) -> Self {
        MultiIndex(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Single generator `k` (1-based).
    pub fn generator(k: u32) -> Result<Self> {
        if k == 0 || k > MAX_GENERATORS {
            return Err(Error::GeneratorOutOfRange(k, MAX_GENERATORS));
        }
        Ok(MultiIndex(1u64 << (k - 1)))
    }

    /// Builds an index from a strictly increasing list of 1-based generators.
    pub fn from_generators(gens: &[u32]) -> Result<Self> {
        let mut bits = 0u64;
        let mut last = 0u32;
        for &g in gens {
            if g <= last {
                return Err(Error::Parse(format!(
                    "generator list {gens:?} is not strictly increasing"
                )));
            }
            bits |= MultiIndex::generator(g)?.0;
            last = g;
        }
        Ok(MultiIndex(bits))
    }

    /// The generators in increasing order.
    pub fn generators(self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.grade() as usize);
        let mut b = self.0;
        while b != 0 {
            out.push(b.trailing_zeros() + 1);
            b &= b - 1;
        }
        out
    }

    /// Largest generator present, 0 for the empty index.
    pub fn max_generator(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    /// Order by grade, then lexicographically on the increasing tuples.
    pub fn canonical_cmp(self, other: MultiIndex) -> Ordering {
        match self.grade().cmp(&other.grade()) {
            Ordering::Equal => {}
            o => return o,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.generators().iter().map(|g| format!("i{g}")).collect();
        write!(f, "{}", parts.join(""))
    }
}

/// Number of transpositions needed to sort the concatenation of two disjoint
/// increasing tuples, modulo 2.
#[inline]
fn merge_parity(a: u64, b: u64) -> u32 {
    let mut count = 0u32;
    let mut rest = a;
    while rest != 0 {
        let p = rest.trailing_zeros();
        count += (b & ((1u64 << p) - 1)).count_ones();
        rest &= rest - 1;
    }
    count & 1
}

/// Product of two basis monomials: `None` when they share a generator,
/// otherwise the sign and the merged index.
pub fn basis_mul(a: MultiIndex, b: MultiIndex) -> Option<(i8, MultiIndex)> {
    if a.0 & b.0 != 0 {
        return None;
    }
    let sign = if merge_parity(a.0, b.0) == 0 { 1 } else { -1 };
    Some((sign, MultiIndex(a.0 | b.0)))
}

/// Sign picked up by `i_α` under the dagger.
#[inline]
pub fn dagger_sign(a: MultiIndex) -> f64 {
    match a.grade() % 4 {
        2 | 3 => -1.0,
        _ => 1.0,
    }
}

/// Generator count, tolerances and the default series truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraContext {
    pub generators: u32,
    pub tol_body: f64,
    pub tol_eq: f64,
    pub max_series_degree: usize,
}

pub type Ctx = Arc<AlgebraContext>;

impl AlgebraContext {
    pub const DEFAULT_TOL_BODY: f64 = 1e-10;
    pub const DEFAULT_TOL_EQ: f64 = 1e-9;
    pub const DEFAULT_DEGREE: usize = 32;

    pub fn new(generators: u32) -> Result<Ctx> {
        Self::with(
            generators,
            Self::DEFAULT_TOL_BODY,
            Self::DEFAULT_TOL_EQ,
            Self::DEFAULT_DEGREE,
        )
    }

    pub fn with(generators: u32, tol_body: f64, tol_eq: f64, max_series_degree: usize) -> Result<Ctx> {
        if generators == 0 || generators > MAX_GENERATORS {
            return Err(Error::InvalidArgument(format!(
                "generator count {generators} outside 1..=64"
            )));
        }
        if !(tol_body > 0.0) || !(tol_eq > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(Arc::new(AlgebraContext {
            generators,
            tol_body,
            tol_eq,
            max_series_degree,
        }))
    }

    /// Bits allowed in an index under this context.
    pub fn mask(&self) -> u64 {
        if self.generators >= 64 {
            u64::MAX
        } else {
            (1u64 << self.generators) - 1
        }
    }
}

pub(crate) fn same_ctx(a: &Ctx, b: &Ctx) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Element of the truncated Grassmann algebra.
///
/// Terms are kept sorted by raw index bits and never hold an exact zero.
#[derive(Clone)]
pub struct Supernumber {
    terms: Vec<(MultiIndex, C64)>,
    ctx: Ctx,
}

/// Summary returned by [`Supernumber::classify`].
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub is_real: bool,
    pub is_even: bool,
    pub is_odd: bool,
    pub is_superpositive: bool,
    pub is_supernonnegative: bool,
    pub body: C64,
    pub soul: Supernumber,
}

impl Supernumber {
    pub fn zero(ctx: &Ctx) -> Self {
        Supernumber {
            terms: Vec::new(),
            ctx: ctx.clone(),
        }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::scalar(ctx, C64::new(1.0, 0.0))
    }

    pub fn scalar(ctx: &Ctx, c: C64) -> Self {
        let terms = if c == C64::new(0.0, 0.0) {
            Vec::new()
        } else {
            vec![(MultiIndex::EMPTY, c)]
        };
        Supernumber {
            terms,
            ctx: ctx.clone(),
        }
    }

    pub fn real(ctx: &Ctx, x: f64) -> Self {
        Self::scalar(ctx, C64::new(x, 0.0))
    }

    /// The generator `i_k`.
    pub fn generator(ctx: &Ctx, k: u32) -> Result<Self> {
        Self::monomial(ctx, MultiIndex::generator(k)?, C64::new(1.0, 0.0))
    }

    pub fn monomial(ctx: &Ctx, idx: MultiIndex, c: C64) -> Result<Self> {
        Self::from_terms(ctx, [(idx, c)])
    }

    /// Sums the given terms, merging duplicate indices.
    pub fn from_terms<I>(ctx: &Ctx, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C64)>,
    {
        let mask = ctx.mask();
        let mut v: Vec<(MultiIndex, C64)> = Vec::new();
        for (idx, c) in terms {
            if idx.0 & !mask != 0 {
                return Err(Error::GeneratorOutOfRange(idx.max_generator(), ctx.generators));
            }
            v.push((idx, c));
        }
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(MultiIndex, C64)> = Vec::with_capacity(v.len());
        for (idx, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == idx => last.1 += c,
                _ => out.push((idx, c)),
            }
        }
        out.retain(|t| t.1 != C64::new(0.0, 0.0));
        Ok(Supernumber {
            terms: out,
            ctx: ctx.clone(),
        })
    }

    fn from_sorted(ctx: &Ctx, mut terms: Vec<(MultiIndex, C64)>) -> Self {
        terms.retain(|t| t.1 != C64::new(0.0, 0.0));
        Supernumber {
            terms,
            ctx: ctx.clone(),
        }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    /// Terms sorted by raw index bits.
    pub fn terms(&self) -> &[(MultiIndex, C64)] {
        &self.terms
    }

    /// Terms in canonical order: by grade, then lexicographic.
    pub fn canonical_terms(&self) -> Vec<(MultiIndex, C64)> {
        let mut t = self.terms.clone();
        t.sort_by(|a, b| a.0.canonical_cmp(b.0));
        t
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: MultiIndex) -> C64 {
        match self.terms.binary_search_by_key(&idx, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn body(&self) -> C64 {
        match self.terms.first() {
            Some((idx, c)) if idx.is_empty() => *c,
            _ => C64::new(0.0, 0.0),
        }
    }

    pub fn soul(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| !t.0.is_empty())
            .copied()
            .collect();
        Supernumber {
            terms,
            ctx: self.ctx.clone(),
        }
    }

    /// True when there is no soul.
    pub fn is_scalar(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_empty())
    }

    pub fn max_grade(&self) -> u32 {
        self.terms.iter().map(|t| t.0.grade()).max().unwrap_or(0)
    }

    pub fn norm1(&self) -> f64 {
        self.terms.iter().map(|t| t.1.norm()).sum()
    }

    pub fn even_part(&self) -> Self {
        self.filter_grade(|g| g % 2 == 0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter_grade(|g| g % 2 == 1)
    }

    fn filter_grade(&self, keep: impl Fn(u32) -> bool) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| keep(t.0.grade()))
            .copied()
            .collect();
        Supernumber {
            terms,
            ctx: self.ctx.clone(),
        }
    }

    pub fn is_even(&self) -> bool {
        self.terms.iter().all(|t| t.0.grade() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.iter().all(|t| t.0.grade() % 2 == 1)
    }

    fn check_ctx(&self, other: &Supernumber) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == C64::new(0.0, 0.0) {
            return Supernumber::zero(&self.ctx);
        }
        let terms = self.terms.iter().map(|&(i, v)| (i, v * c)).collect();
        Supernumber::from_sorted(&self.ctx, terms)
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    fn merge(&self, other: &Supernumber, sign: f64) -> Supernumber {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, b[j].1 * sign));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1 * sign));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(k, v)| (k, v * sign)));
        Supernumber::from_sorted(&self.ctx, out)
    }

    pub fn try_add(&self, other: &Supernumber) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.merge(other, 1.0))
    }

    pub fn try_sub(&self, other: &Supernumber) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.merge(other, -1.0))
    }

    /// Product in the algebra. Contributions to each output monomial are
    /// accumulated in lexicographic order of the factor indices.
    pub fn try_mul(&self, other: &Supernumber) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Supernumber) -> Supernumber {
        let (a, b) = (&self.terms, &other.terms);
        if a.is_empty() || b.is_empty() {
            return Supernumber::zero(&self.ctx);
        }
        if self.ctx.generators <= DENSE_LIMIT {
            let size = 1usize << self.ctx.generators;
            let mut acc = vec![C64::new(0.0, 0.0); size];
            let mut touched = vec![false; size];
            for &(ia, ca) in a {
                for &(ib, cb) in b {
                    if ia.0 & ib.0 != 0 {
                        continue;
                    }
                    let k = (ia.0 | ib.0) as usize;
                    let p = ca * cb;
                    if merge_parity(ia.0, ib.0) == 0 {
                        acc[k] += p;
                    } else {
                        acc[k] -= p;
                    }
                    touched[k] = true;
                }
            }
            let terms = (0..size)
                .filter(|&k| touched[k])
                .map(|k| (MultiIndex(k as u64), acc[k]))
                .collect();
            Supernumber::from_sorted(&self.ctx, terms)
        } else {
            let mut contrib: Vec<(u64, C64, bool)> = Vec::with_capacity(a.len() * b.len());
            for &(ia, ca) in a {
                for &(ib, cb) in b {
                    if ia.0 & ib.0 != 0 {
                        continue;
                    }
                    contrib.push((ia.0 | ib.0, ca * cb, merge_parity(ia.0, ib.0) == 1));
                }
            }
            // stable: keeps the (a, b) order within each key
            contrib.sort_by_key(|t| t.0);
            let mut terms: Vec<(MultiIndex, C64)> = Vec::new();
            for (k, p, neg) in contrib {
                let slot = match terms.last_mut() {
                    Some(last) if last.0 .0 == k => &mut last.1,
                    _ => {
                        terms.push((MultiIndex(k), C64::new(0.0, 0.0)));
                        &mut terms.last_mut().unwrap().1
                    }
                };
                if neg {
                    *slot -= p;
                } else {
                    *slot += p;
                }
            }
            Supernumber::from_sorted(&self.ctx, terms)
        }
    }

    /// The conjugation `z†`.
    pub fn dagger(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|&(i, c)| (i, c.conj() * dagger_sign(i)))
            .collect();
        Supernumber {
            terms,
            ctx: self.ctx.clone(),
        }
    }

    /// Exact test of `z† = z`.
    pub fn is_real(&self) -> bool {
        self.terms
            .iter()
            .all(|&(i, c)| c.conj() * dagger_sign(i) == c)
    }

    /// Largest coefficient deviation from `z† = z`.
    pub fn reality_defect(&self) -> f64 {
        self.terms
            .iter()
            .map(|&(i, c)| (c - c.conj() * dagger_sign(i)).norm())
            .fold(0.0, f64::max)
    }

    /// The superreal part `(z + z†) / 2`.
    pub fn real_part(&self) -> Self {
        (self + &self.dagger()).scale_real(0.5)
    }

    pub fn classify(&self) -> Classification {
        let is_real = self.is_real();
        let body = self.body();
        let tol = self.ctx.tol_body;
        Classification {
            is_real,
            is_even: self.is_even(),
            is_odd: self.is_odd(),
            is_superpositive: is_real && body.re > tol,
            is_supernonnegative: is_real && body.re >= -tol,
            body,
            soul: self.soul(),
        }
    }

    pub fn is_superpositive(&self) -> bool {
        self.is_real() && self.body().re > self.ctx.tol_body
    }

    /// Body-level contractivity `z z† ≺ 1`, i.e. `|z_B| < 1 - tol_body`.
    pub fn in_superdisk(&self) -> bool {
        self.body().norm() < 1.0 - self.ctx.tol_body
    }

    /// Powers of a nilpotent element `x` summed with the given weights,
    /// `Σ c_n x^n`, stopping when the power vanishes or the weights run out.
    fn nilpotent_series(x: &Supernumber, coeffs: &[C64]) -> Supernumber {
        let ctx = &x.ctx;
        let mut sum = Supernumber::scalar(ctx, coeffs[0]);
        let mut power = Supernumber::one(ctx);
        for &c in &coeffs[1..] {
            power = power.mul_unchecked(x);
            if power.is_zero() {
                break;
            }
            sum = &sum + &power.scale(c);
        }
        sum
    }

    /// Highest power of the soul that can be nonzero.
    fn nilpotency_bound(&self) -> usize {
        let soul_terms = self.terms.iter().filter(|t| !t.0.is_empty()).count();
        if soul_terms == 0 {
            return 0;
        }
        let mut used = 0u64;
        for t in &self.terms {
            used |= t.0.bits();
        }
        used.count_ones() as usize
    }

    pub fn invert(&self) -> Result<Self> {
        let b = self.body();
        if b.norm() <= self.ctx.tol_body {
            return Err(Error::BodyZero);
        }
        let binv = b.inv();
        let x = self.soul().scale(-binv);
        let n = self.nilpotency_bound();
        let w = Supernumber::nilpotent_series(&x, &vec![C64::new(1.0, 0.0); n + 1]).scale(binv);
        // one Newton correction w + w(1 - zw) removes most rounding error
        let r = &Supernumber::one(&self.ctx) - &self.mul_unchecked(&w);
        Ok(&w + &w.mul_unchecked(&r))
    }

    /// Principal `k`-th root via the binomial series in `z_S / z_B`.
    pub fn kth_root(&self, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("root order {k} must be at least 2")));
        }
        let b = self.body();
        if b.norm() <= self.ctx.tol_body {
            return Err(Error::BodyZero);
        }
        if b.re < 0.0 && b.im.abs() <= self.ctx.tol_body {
            return Err(Error::BranchCut);
        }
        let root_b = principal_root(b, k);
        let x = self.soul().scale(b.inv());
        let n = self.nilpotency_bound();
        let e = 1.0 / k as f64;
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut c = 1.0;
        coeffs.push(C64::new(1.0, 0.0));
        for m in 1..=n {
            c *= (e - (m as f64 - 1.0)) / m as f64;
            coeffs.push(C64::new(c, 0.0));
        }
        Ok(Supernumber::nilpotent_series(&x, &coeffs).scale(root_b))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.kth_root(2)
    }

    /// `f(z) = Σ f⁽ⁿ⁾(z_B)/n! z_Sⁿ`, finite by nilpotency of the soul.
    pub fn analytic_apply(&self, f: &dyn AnalyticFunction) -> Result<Self> {
        let n = self.nilpotency_bound();
        let coeffs = f
            .taylor(self.body(), n)
            .map_err(Error::DomainViolation)?;
        if coeffs.len() < n + 1 {
            return Err(Error::DomainViolation(format!(
                "{} supplied {} Taylor coefficients, {} needed",
                f.name(),
                coeffs.len(),
                n + 1
            )));
        }
        Ok(Supernumber::nilpotent_series(&self.soul(), &coeffs[..n + 1]))
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Supernumber::one(&self.ctx);
        for _ in 0..n {
            out = out.mul_unchecked(self);
        }
        out
    }

    /// `‖a − b‖₁ ≤ tol · max(1, ‖a‖₁, ‖b‖₁)`.
    pub fn approx_eq(&self, other: &Supernumber, tol: f64) -> bool {
        let scale = 1f64.max(self.norm1()).max(other.norm1());
        (self - other).norm1() <= tol * scale
    }
}

/// Principal `k`-th root of a complex number; real positive input yields a
/// real result.
pub(crate) fn principal_root(b: C64, k: u32) -> C64 {
    if b.im == 0.0 && b.re > 0.0 {
        return C64::new(b.re.powf(1.0 / k as f64), 0.0);
    }
    let (r, th) = b.to_polar();
    C64::from_polar(r.powf(1.0 / k as f64), th / k as f64)
}

/// Combination `Σ cᵢ zᵢ`.
pub fn linear_combine(pairs: &[(C64, &Supernumber)]) -> Result<Supernumber> {
    let Some(first) = pairs.first() else {
        return Err(Error::InvalidArgument("empty combination".into()));
    };
    let mut acc = Supernumber::zero(first.1.ctx());
    for (c, z) in pairs {
        acc = acc.try_add(&z.scale(*c))?;
    }
    Ok(acc)
}

impl PartialEq for Supernumber {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl fmt::Debug for Supernumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Supernumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .canonical_terms()
            .iter()
            .map(|(i, c)| {
                if i.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}){i}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// Operators panic on context mismatch; the `try_*` methods report it instead.

impl<'a> Add<&'a Supernumber> for &'a Supernumber {
    type Output = Supernumber;
    fn add(self, rhs: &'a Supernumber) -> Supernumber {
        self.try_add(rhs).expect("supernumber context mismatch")
    }
}

impl<'a> Sub<&'a Supernumber> for &'a Supernumber {
    type Output = Supernumber;
    fn sub(self, rhs: &'a Supernumber) -> Supernumber {
        self.try_sub(rhs).expect("supernumber context mismatch")
    }
}

impl<'a> Mul<&'a Supernumber> for &'a Supernumber {
    type Output = Supernumber;
    fn mul(self, rhs: &'a Supernumber) -> Supernumber {
        self.try_mul(rhs).expect("supernumber context mismatch")
    }
}

impl Add for Supernumber {
    type Output = Supernumber;
    fn add(self, rhs: Supernumber) -> Supernumber {
        &self + &rhs
    }
}

impl Sub for Supernumber {
    type Output = Supernumber;
    fn sub(self, rhs: Supernumber) -> Supernumber {
        &self - &rhs
    }
}

impl Mul for Supernumber {
    type Output = Supernumber;
    fn mul(self, rhs: Supernumber) -> Supernumber {
        &self * &rhs
    }
}

impl AddAssign<&Supernumber> for Supernumber {
    fn add_assign(&mut self, rhs: &Supernumber) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Supernumber> for Supernumber {
    fn sub_assign(&mut self, rhs: &Supernumber) {
        *self = &*self - rhs;
    }
}

impl Neg for &Supernumber {
    type Output = Supernumber;
    fn neg(self) -> Supernumber {
        self.scale_real(-1.0)
    }
}

impl Neg for Supernumber {
    type Output = Supernumber;
    fn neg(self) -> Supernumber {
        self.scale_real(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Ctx {
        AlgebraContext::new(8).unwrap()
    }

    fn idx(g: &[u32]) -> MultiIndex {
        MultiIndex::from_generators(g).unwrap()
    }

    fn gen(c: &Ctx, k: u32) -> Supernumber {
        Supernumber::generator(c, k).unwrap()
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn basis_products() {
        assert_eq!(basis_mul(idx(&[1]), idx(&[2])), Some((1, idx(&[1, 2]))));
        assert_eq!(basis_mul(idx(&[2]), idx(&[1])), Some((-1, idx(&[1, 2]))));
        assert_eq!(basis_mul(idx(&[1]), idx(&[1])), None);
        assert_eq!(basis_mul(idx(&[1, 3]), idx(&[2])), Some((-1, idx(&[1, 2, 3]))));
        assert_eq!(basis_mul(MultiIndex::EMPTY, idx(&[4])), Some((1, idx(&[4]))));
    }

    #[test]
    fn top_generator_sign() {
        let a = idx(&[64]);
        let b = idx(&[1, 63]);
        assert_eq!(basis_mul(a, b), Some((1, idx(&[1, 63, 64]))));
        assert_eq!(basis_mul(b, a), Some((1, idx(&[1, 63, 64]))));
        assert_eq!(basis_mul(a, idx(&[3])), Some((-1, idx(&[3, 64]))));
    }

    #[test]
    fn index_parsing_rejects_bad_lists() {
        assert!(MultiIndex::from_generators(&[2, 1]).is_err());
        assert!(MultiIndex::from_generators(&[1, 1]).is_err());
        assert!(MultiIndex::from_generators(&[65]).is_err());
        assert_eq!(idx(&[1, 5, 9]).generators(), vec![1, 5, 9]);
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![idx(&[2, 3]), idx(&[1]), MultiIndex::EMPTY, idx(&[1, 3]), idx(&[1, 2]), idx(&[2])];
        v.sort_by(|a, b| a.canonical_cmp(*b));
        assert_eq!(
            v,
            vec![MultiIndex::EMPTY, idx(&[1]), idx(&[2]), idx(&[1, 2]), idx(&[1, 3]), idx(&[2, 3])]
        );
    }

    #[test]
    fn linear_combinations() {
        let k = ctx();
        let z = &Supernumber::one(&k) + &gen(&k, 3);
        let w = gen(&k, 2);
        assert_eq!(linear_combine(&[(c(1.0), &z), (c(0.0), &w)]).unwrap(), z);
        assert!(linear_combine(&[(c(1.0), &z), (c(-1.0), &z)]).unwrap().is_zero());
        let i1 = gen(&k, 1);
        assert_eq!(linear_combine(&[(c(0.5), &i1), (c(0.5), &i1)]).unwrap(), i1);
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = Supernumber::one(&ctx());
        let b = Supernumber::one(&AlgebraContext::new(3).unwrap());
        assert_eq!(a.try_mul(&b), Err(Error::ContextMismatch));
        assert_eq!(linear_combine(&[(c(1.0), &a), (c(1.0), &b)]), Err(Error::ContextMismatch));
        assert!(Supernumber::generator(&AlgebraContext::new(3).unwrap(), 4).is_err());
    }

    #[test]
    fn small_products() {
        let k = ctx();
        let one = Supernumber::one(&k);
        let i1 = gen(&k, 1);
        assert_eq!(&(&one + &i1) * &(&one - &i1), one);
        let v = &(&gen(&k, 1) + &gen(&k, 2)) + &gen(&k, 3);
        assert!((&v * &v).is_zero());
        assert_eq!(&gen(&k, 2) * &gen(&k, 1), -(&gen(&k, 1) * &gen(&k, 2)));
    }

    #[test]
    fn dagger_signs() {
        let k = ctx();
        let i1 = gen(&k, 1);
        let i12 = &gen(&k, 1) * &gen(&k, 2);
        assert_eq!(i1.dagger(), i1);
        assert_eq!(i12.dagger(), -&i12);
        let z = Supernumber::scalar(&k, C64::new(1.0, 2.0));
        assert_eq!(z.dagger().body(), C64::new(1.0, -2.0));
    }

    #[test]
    fn norms() {
        let k = ctx();
        let z = &Supernumber::one(&k) + &gen(&k, 1);
        assert_eq!(z.norm1(), 2.0);
        for lambda in [0.0, 1.0, 7.5, 1e3] {
            let a = (&Supernumber::one(&k) + &gen(&k, 1).scale_real(lambda)).scale_real(0.5);
            assert!((a.norm1() - (1.0 + lambda) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn classification() {
        let k = ctx();
        let s = &gen(&k, 1) + &gen(&k, 2);
        let cl = s.classify();
        assert!(cl.is_real && !cl.is_superpositive && cl.is_supernonnegative && cl.is_odd);
        let i12 = &gen(&k, 1) * &gen(&k, 2);
        let z = &(&Supernumber::real(&k, 4.0) + &i12) + &i12.dagger();
        assert_eq!(z, Supernumber::real(&k, 4.0));
        assert!(z.classify().is_superpositive);
        let w = &Supernumber::scalar(&k, C64::new(0.5, 0.3)) + &gen(&k, 4);
        assert!((&w * &w.dagger()).classify().is_superpositive);
        assert!(!Supernumber::scalar(&k, C64::new(1.0, 1.0)).is_real());
    }

    #[test]
    fn inversion() {
        let k = ctx();
        let one = Supernumber::one(&k);
        let i1 = gen(&k, 1);
        assert_eq!((&one + &i1).invert().unwrap(), &one - &i1);
        assert_eq!(Supernumber::real(&k, 2.0).invert().unwrap(), Supernumber::real(&k, 0.5));
        let z = &(&one + &(&gen(&k, 1) * &gen(&k, 2))) + &(&gen(&k, 3) * &gen(&k, 4));
        let zi = z.invert().unwrap();
        assert!((&z * &zi).approx_eq(&one, 1e-12));
        assert_eq!(i1.invert(), Err(Error::BodyZero));
        assert_eq!(Supernumber::zero(&k).invert(), Err(Error::BodyZero));
    }

    #[test]
    fn roots() {
        let k = ctx();
        assert_eq!(Supernumber::real(&k, 4.0).sqrt().unwrap(), Supernumber::real(&k, 2.0));
        let i12 = &gen(&k, 1) * &gen(&k, 2);
        let z = &Supernumber::real(&k, 4.0) + &i12.scale_real(4.0);
        let w = z.sqrt().unwrap();
        assert!(w.approx_eq(&(&Supernumber::real(&k, 2.0) + &i12), 1e-15));
        assert_eq!(Supernumber::real(&k, -4.0).sqrt(), Err(Error::BranchCut));
        assert_eq!(i12.sqrt(), Err(Error::BodyZero));
        let z = &Supernumber::scalar(&k, C64::new(0.3, 1.2)) + &gen(&k, 3);
        assert!(z.kth_root(3).unwrap().powi(3).approx_eq(&z, 1e-13));
    }

    #[test]
    fn analytic_functions() {
        let k = ctx();
        let i12 = &gen(&k, 1) * &gen(&k, 2);
        let e = i12.analytic_apply(&Exp).unwrap();
        assert_eq!(e, &Supernumber::one(&k) + &i12);
        let z = &(&Supernumber::scalar(&k, C64::new(0.4, -0.2)) + &gen(&k, 1)) + &(&gen(&k, 2) * &gen(&k, 3));
        assert!(z.analytic_apply(&Identity).unwrap().approx_eq(&z, 1e-15));
        assert!(z.analytic_apply(&Square).unwrap().approx_eq(&(&z * &z), 1e-14));
        assert!(z.analytic_apply(&Reciprocal).unwrap().approx_eq(&z.invert().unwrap(), 1e-13));
        assert!(matches!(i12.analytic_apply(&Reciprocal), Err(Error::DomainViolation(_))));
        let g = z.analytic_apply(&Geometric).unwrap();
        let expect = (&Supernumber::one(&k) - &z).invert().unwrap();
        assert!(g.approx_eq(&expect, 1e-13));
        let sq = z.analytic_apply(&Power(C64::new(0.5, 0.0))).unwrap();
        assert!(sq.approx_eq(&z.sqrt().unwrap(), 1e-13));
        let l = z.analytic_apply(&Log).unwrap();
        assert!(l.analytic_apply(&Exp).unwrap().approx_eq(&z, 1e-13));
    }

    #[test]
    fn reality_defect_and_parts() {
        let k = ctx();
        let i12 = &gen(&k, 1) * &gen(&k, 2);
        let z = &Supernumber::real(&k, 2.0) + &i12;
        assert!(z.reality_defect() > 1.0);
        assert!(z.real_part().is_real());
        assert_eq!(z.even_part(), z);
        assert!(z.odd_part().is_zero());
    }
}
