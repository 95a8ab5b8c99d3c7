//! Brute-force references used to cross-check the main pipelines.
//!
//! Everything here is deliberately naive: dense coefficient arrays, explicit
//! transposition counting, and textbook complex formulas evaluated with
//! nalgebra.

use crate::algebra::{Ctx, MultiIndex, Supernumber, C64};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Largest generator count the dense oracle accepts.
pub const MAX_DENSE_GENERATORS: u32 = 10;

/// Supernumber stored as all `2^N` coefficients, indexed by bit pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSupernumber {
    generators: u32,
    coeffs: Vec<C64>,
}

impl DenseSupernumber {
    pub fn zero(generators: u32) -> Result<Self> {
        if generators > MAX_DENSE_GENERATORS {
            return Err(Error::InvalidArgument(format!(
                "dense oracle holds at most {MAX_DENSE_GENERATORS} generators"
            )));
        }
        Ok(DenseSupernumber {
            generators,
            coeffs: vec![C64::new(0.0, 0.0); 1 << generators],
        })
    }

    pub fn from_supernumber(z: &Supernumber) -> Result<Self> {
        let mut d = DenseSupernumber::zero(z.ctx().generators)?;
        for &(i, c) in z.terms() {
            d.coeffs[i.bits() as usize] = c;
        }
        Ok(d)
    }

    pub fn to_supernumber(&self, ctx: &Ctx) -> Result<Supernumber> {
        Supernumber::from_terms(
            ctx,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (MultiIndex::from_bits(k as u64), *c)),
        )
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficientwise equality, treating signed zeros as equal.
    pub fn same_values(&self, other: &DenseSupernumber) -> bool {
        self.generators == other.generators && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

/// Generators of a bit pattern as an increasing list.
fn tuple(bits: usize) -> Vec<u32> {
    (0..usize::BITS).filter(|b| bits & (1 << b) != 0).map(|b| b + 1).collect()
}

/// Sign of `i_α i_β` found by bubble-sorting the concatenated tuples, or
/// `None` when a generator repeats.
pub fn bubble_sign(alpha: &[u32], beta: &[u32]) -> Option<i8> {
    let mut buf = [0u32; 2 * MAX_DENSE_GENERATORS as usize];
    let n = alpha.len() + beta.len();
    if n > buf.len() {
        let mut v: Vec<u32> = alpha.iter().chain(beta).copied().collect();
        return bubble(&mut v);
    }
    buf[..alpha.len()].copy_from_slice(alpha);
    buf[alpha.len()..n].copy_from_slice(beta);
    bubble(&mut buf[..n])
}

fn bubble(v: &mut [u32]) -> Option<i8> {
    let mut swaps = 0usize;
    for i in 0..v.len() {
        for j in 0..v.len().saturating_sub(1 + i) {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                swaps += 1;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

/// Product by an explicit double loop over every pair of basis monomials.
/// Pairs with a zero coefficient contribute nothing and are skipped.
pub fn naive_mul(a: &DenseSupernumber, b: &DenseSupernumber) -> DenseSupernumber {
    assert_eq!(a.generators, b.generators, "generator counts differ");
    let size = a.coeffs.len();
    let tuples: Vec<Vec<u32>> = (0..size).map(tuple).collect();
    let zero = C64::new(0.0, 0.0);
    let mut out = vec![zero; size];
    for i in 0..size {
        if a.coeffs[i] == zero {
            continue;
        }
        for j in 0..size {
            if b.coeffs[j] == zero {
                continue;
            }
            let Some(sign) = bubble_sign(&tuples[i], &tuples[j]) else {
                continue;
            };
            let p = a.coeffs[i] * b.coeffs[j];
            if sign > 0 {
                out[i | j] += p;
            } else {
                out[i | j] -= p;
            }
        }
    }
    DenseSupernumber {
        generators: a.generators,
        coeffs: out,
    }
}

/// Classical Schur coefficients of a scalar power series.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalSchur {
    pub coefficients: Vec<C64>,
    /// Step at which `|ρ| = 1` stopped the recursion.
    pub boundary: Option<usize>,
}

/// `s_{n+1} = (s_n − ρ_n) / (λ (1 − s_n ρ̄_n))` on truncated coefficient lists.
pub fn classical_schur(s: &[C64], steps: usize) -> ClassicalSchur {
    let mut cur = s.to_vec();
    let mut coefficients = Vec::new();
    for step in 0..steps {
        let Some(&rho) = cur.first() else {
            break;
        };
        coefficients.push(rho);
        if rho.norm() >= 1.0 - 1e-10 {
            return ClassicalSchur {
                coefficients,
                boundary: Some(step),
            };
        }
        if cur.len() < 2 {
            break;
        }
        let num: Vec<C64> = cur[1..].to_vec();
        let mut den: Vec<C64> = cur.iter().map(|c| -c * rho.conj()).collect();
        den[0] += 1.0;
        let n = num.len();
        let mut q = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let mut acc = num[k];
            for u in 1..=k {
                acc -= den[u] * q[k - u];
            }
            q[k] = acc / den[0];
        }
        cur = q;
    }
    ClassicalSchur {
        coefficients,
        boundary: None,
    }
}

/// `P_jk = (1 − s_j s̄_k) / (1 − z_j z̄_k)`.
pub fn classical_pick(nodes: &[C64], values: &[C64]) -> CMatrix {
    let n = nodes.len();
    CMatrix::from_fn(n, n, |j, k| {
        (C64::new(1.0, 0.0) - values[j] * values[k].conj()) / (C64::new(1.0, 0.0) - nodes[j] * nodes[k].conj())
    })
}

/// `Θ(λ) = I − (1−λ) C (I − λA)⁻¹ P⁻¹ (I − A)^{-*} C* J` for complex data.
pub fn classical_theta(c: &CMatrix, a: &CMatrix, p: &CMatrix, j: &CMatrix, lambda: C64) -> Option<CMatrix> {
    let n = a.nrows();
    let id_n = CMatrix::identity(n, n);
    let r = (&id_n - a * lambda).try_inverse()?;
    let pinv = p.clone().try_inverse()?;
    let s = (&id_n - a).adjoint().try_inverse()?;
    let m = c * r * pinv * s * c.adjoint() * j;
    Some(CMatrix::identity(c.nrows(), c.nrows()) - m * (C64::new(1.0, 0.0) - lambda))
}

/// Nevanlinna–Pick data in the scalar case.
#[derive(Clone, Debug)]
pub struct ClassicalNp {
    pub pick: CMatrix,
    /// Taylor coefficients of the central solution `Θ₁₂/Θ₂₂`.
    pub central: Vec<C64>,
}

/// Pick matrix and central interpolant, the latter computed from the closed
/// form of `Θ` sampled on the unit circle and a discrete Fourier transform.
pub fn classical_np(nodes: &[C64], values: &[C64], degree: usize) -> Option<ClassicalNp> {
    let n = nodes.len();
    let pick = classical_pick(nodes, values);
    let a = CMatrix::from_fn(n, n, |i, k| if i == k { nodes[i].conj() } else { C64::new(0.0, 0.0) });
    let c = CMatrix::from_fn(2, n, |i, k| if i == 0 { C64::new(1.0, 0.0) } else { values[k].conj() });
    let j = CMatrix::from_fn(2, 2, |i, k| match (i, k) {
        (0, 0) => C64::new(1.0, 0.0),
        (1, 1) => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, 0.0),
    });
    let m = 1024usize;
    let mut samples = Vec::with_capacity(m);
    for t in 0..m {
        let lambda = C64::from_polar(1.0, std::f64::consts::TAU * t as f64 / m as f64);
        let th = classical_theta(&c, &a, &pick, &j, lambda)?;
        samples.push(th[(0, 1)] / th[(1, 1)]);
    }
    let central = (0..=degree)
        .map(|k| {
            let mut acc = C64::new(0.0, 0.0);
            for (t, v) in samples.iter().enumerate() {
                acc += v * C64::from_polar(1.0, -std::f64::consts::TAU * (k * t) as f64 / m as f64);
            }
            acc / m as f64
        })
        .collect();
    Some(ClassicalNp { pick, central })
}

/// Complex Toeplitz matrix with first row `r`.
pub fn classical_toeplitz(r: &[C64]) -> CMatrix {
    let n = r.len();
    CMatrix::from_fn(n, n, |j, k| if k >= j { r[k - j] } else { r[j - k].conj() })
}

/// Hermitian with all eigenvalues positive.
pub fn classical_is_pd(m: &CMatrix) -> bool {
    if (m - m.adjoint()).norm() > 1e-12 * m.norm().max(1.0) {
        return false;
    }
    let h = (m + m.adjoint()).map(|c| c * 0.5);
    nalgebra::SymmetricEigen::new(h).eigenvalues.iter().all(|e| *e > 0.0)
}

/// Center, `α` and `ξ²` of the one-step extension of a positive definite
/// Toeplitz matrix with first row `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalExtension {
    pub center: C64,
    pub alpha: C64,
    pub xi_squared: C64,
}

pub fn classical_toeplitz_extension(r: &[C64]) -> Option<ClassicalExtension> {
    if !classical_is_pd(&classical_toeplitz(r)) {
        return None;
    }
    let n = r.len() - 1;
    if n == 0 {
        return Some(ClassicalExtension {
            center: C64::new(0.0, 0.0),
            alpha: r[0].inv(),
            xi_squared: r[0],
        });
    }
    let t = classical_toeplitz(&r[..n]);
    let a = CMatrix::from_fn(1, n, |_, k| r[k + 1]);
    let b = CMatrix::from_fn(n, 1, |i, _| r[n - i]);
    let lu = t.lu();
    let ta = lu.solve(&a.adjoint())?;
    let tb = lu.solve(&b)?;
    Some(ClassicalExtension {
        center: (&a * &tb)[(0, 0)],
        alpha: (r[0] - (&a * &ta)[(0, 0)]).inv(),
        xi_squared: r[0] - (b.adjoint() * &tb)[(0, 0)],
    })
}

/// Scalar Blaschke factor `1 − (1−λ) c (1−λa)⁻¹ p⁻¹ (1−ā)⁻¹ c̄`.
pub fn classical_blaschke(a: C64, c: C64, p: f64, lambda: C64) -> C64 {
    let one = C64::new(1.0, 0.0);
    one - (one - lambda) * c / (one - lambda * a) / p / (one - a.conj()) * c.conj()
}
