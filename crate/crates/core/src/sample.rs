//! Seeded random generators for supernumbers and supermatrices.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Ctx, MultiIndex, Supernumber, C64};
use crate::matrix::SuperMatrix;

/// Deterministic source of random algebra elements.
pub struct Sampler {
    rng: ChaCha8Rng,
    ctx: Ctx,
    /// Number of soul monomials drawn per supernumber.
    pub soul_terms: usize,
    /// Highest grade of a drawn soul monomial.
    pub max_grade: u32,
}

impl Sampler {
    pub fn new(ctx: &Ctx, seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            ctx: ctx.clone(),
            soul_terms: 6,
            max_grade: 4,
        }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Complex number uniform in the square `[-s, s]²`.
    pub fn complex(&mut self, s: f64) -> C64 {
        C64::new(self.rng.gen_range(-s..=s), self.rng.gen_range(-s..=s))
    }

    /// Complex number with modulus in `[lo, hi)` and uniform argument.
    pub fn complex_annulus(&mut self, lo: f64, hi: f64) -> C64 {
        let r = self.rng.gen_range(lo..hi);
        let t = self.rng.gen_range(0.0..std::f64::consts::TAU);
        C64::from_polar(r, t)
    }

    /// A random nonempty index of grade at most `max_grade` whose grade
    /// parity passes `keep`.
    fn index(&mut self, keep: &dyn Fn(u32) -> bool) -> MultiIndex {
        let n = self.ctx.generators;
        let top = self.max_grade.min(n).max(1);
        let grades: Vec<u32> = (1..=top).filter(|g| keep(*g)).collect();
        let g = grades[self.rng.gen_range(0..grades.len())];
        let picks = sample(&mut self.rng, n as usize, g as usize);
        let bits = picks.iter().fold(0u64, |acc, p| acc | (1u64 << p));
        MultiIndex::from_bits(bits)
    }

    fn soul_with(&mut self, scale: f64, keep: &dyn Fn(u32) -> bool) -> Supernumber {
        let mut terms = Vec::with_capacity(self.soul_terms);
        for _ in 0..self.soul_terms {
            let i = self.index(keep);
            let c = self.complex(scale);
            terms.push((i, c));
        }
        Supernumber::from_terms(&self.ctx, terms).expect("indices fit the context")
    }

    /// Random soul with coefficients in `[-scale, scale]²`.
    pub fn soul(&mut self, scale: f64) -> Supernumber {
        self.soul_with(scale, &|_| true)
    }

    pub fn even_soul(&mut self, scale: f64) -> Supernumber {
        if self.ctx.generators < 2 {
            return Supernumber::zero(&self.ctx);
        }
        self.soul_with(scale, &|g| g % 2 == 0)
    }

    pub fn odd_soul(&mut self, scale: f64) -> Supernumber {
        self.soul_with(scale, &|g| g % 2 == 1)
    }

    /// Body plus a random soul.
    pub fn supernumber(&mut self, body: C64, soul_scale: f64) -> Supernumber {
        &Supernumber::scalar(&self.ctx, body) + &self.soul(soul_scale)
    }

    /// Body plus a random even soul.
    pub fn even(&mut self, body: C64, soul_scale: f64) -> Supernumber {
        &Supernumber::scalar(&self.ctx, body) + &self.even_soul(soul_scale)
    }

    /// Every monomial gets a coefficient; intended for small generator counts.
    pub fn dense(&mut self, scale: f64) -> Supernumber {
        let n = self.ctx.generators.min(16);
        let mut terms = Vec::with_capacity(1 << n);
        for k in 0..(1u64 << n) {
            terms.push((MultiIndex::from_bits(k), self.complex(scale)));
        }
        Supernumber::from_terms(&self.ctx, terms).expect("indices fit the context")
    }

    /// Superreal element with the given real body.
    pub fn superreal(&mut self, body: f64, soul_scale: f64) -> Supernumber {
        let s = self.soul(soul_scale);
        &Supernumber::real(&self.ctx, body) + &s.real_part()
    }

    /// Superreal even element with the given real body.
    pub fn superreal_even(&mut self, body: f64, soul_scale: f64) -> Supernumber {
        let s = self.even_soul(soul_scale);
        &Supernumber::real(&self.ctx, body) + &s.real_part()
    }

    /// Matrix with bodies in `[-body, body]²` and random souls.
    pub fn matrix(&mut self, rows: usize, cols: usize, body: f64, soul_scale: f64) -> SuperMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let b = self.complex(body);
            entries.push(self.supernumber(b, soul_scale));
        }
        SuperMatrix::from_vec(&self.ctx, rows, cols, entries).expect("consistent shape")
    }

    /// Matrix whose entries have even souls.
    pub fn even_matrix(&mut self, rows: usize, cols: usize, body: f64, soul_scale: f64) -> SuperMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let b = self.complex(body);
            entries.push(self.even(b, soul_scale));
        }
        SuperMatrix::from_vec(&self.ctx, rows, cols, entries).expect("consistent shape")
    }

    /// Square matrix whose body has spectral norm at most `radius`.
    pub fn contraction(&mut self, n: usize, radius: f64, soul_scale: f64) -> SuperMatrix {
        let m = self.matrix(n, n, 1.0, soul_scale);
        let body_norm = m.body().norm().max(1e-300);
        let scaled_body = m.body().map(|c| c * (radius / body_norm));
        &SuperMatrix::from_complex(&self.ctx, &scaled_body) + &m.soul()
    }

    /// Superpositive matrix `A A* + shift·I`.
    pub fn superpositive(&mut self, n: usize, shift: f64, soul_scale: f64) -> SuperMatrix {
        let a = self.matrix(n, n, 1.0, soul_scale);
        let aa = &a * &a.adjoint();
        &aa + &SuperMatrix::identity(&self.ctx, n).scale_real(shift)
    }
}
