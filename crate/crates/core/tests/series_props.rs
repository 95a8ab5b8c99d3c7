use grassmann_schur::algebra::{AlgebraContext, Ctx, Supernumber, C64};
use grassmann_schur::matrix::SuperMatrix;
use grassmann_schur::realization::{compose, inverse_realization, polynomial_realization, ComposeMode, Realization};
use grassmann_schur::sample::Sampler;
use grassmann_schur::series::{wiener_invert, wiener_is_invertible, LaurentSeries, SeriesMatrix};
use proptest::prelude::*;

fn ctx() -> Ctx {
    AlgebraContext::new(6).unwrap()
}

fn poly(s: &mut Sampler, deg: usize, rows: usize, cols: usize) -> SeriesMatrix {
    SeriesMatrix::polynomial((0..=deg).map(|_| s.matrix(rows, cols, 0.5, 0.2)).collect()).unwrap()
}

/// Realization with body spectral radius at most ½.
fn stable(s: &mut Sampler, n: usize, p: usize, q: usize) -> Realization {
    Realization::new(
        s.contraction(n, 0.5, 0.1),
        s.matrix(n, q, 1.0, 0.1),
        s.matrix(p, n, 1.0, 0.1),
        &s.matrix(p, q, 0.3, 0.1) + &SuperMatrix::identity(s.ctx(), p.max(q)).block(0, 0, p, q),
    )
    .unwrap()
}

fn rel_diff(a: &SeriesMatrix, b: &SeriesMatrix) -> f64 {
    let scale = b.coeffs().iter().map(|c| c.norm1()).fold(1.0, f64::max);
    a.max_coeff_diff(b) / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn star_product_is_associative_and_distributive(seed in any::<u64>()) {
        let k = ctx();
        let mut s = Sampler::new(&k, seed);
        let (f, g, h) = (poly(&mut s, 3, 2, 2), poly(&mut s, 2, 2, 2), poly(&mut s, 4, 2, 2));
        let l = f.star_mul(&g).unwrap().star_mul(&h).unwrap();
        let r = f.star_mul(&g.star_mul(&h).unwrap()).unwrap();
        prop_assert!(l.max_coeff_diff(&r) < 1e-12);
        let d1 = f.star_mul(&g.try_add(&h).unwrap()).unwrap();
        let d2 = f.star_mul(&g).unwrap().try_add(&f.star_mul(&h).unwrap()).unwrap();
        prop_assert!(d1.max_coeff_diff(&d2) < 1e-12);
    }

    #[test]
    fn star_inverse_is_two_sided(seed in any::<u64>()) {
        let k = ctx();
        let mut s = Sampler::new(&k, seed);
        let f = poly(&mut s, 3, 2, 2).try_add(&SeriesMatrix::identity(&k, 2)).unwrap();
        let g = f.star_inverse().unwrap();
        let id = SeriesMatrix::identity(&k, 2).truncate(k.max_series_degree);
        prop_assert!(f.star_mul(&g).unwrap().max_coeff_diff(&id) < 1e-9);
        prop_assert!(g.star_mul(&f).unwrap().max_coeff_diff(&id) < 1e-9);
    }

    #[test]
    fn zeros_survive_right_star_multiplication(seed in any::<u64>()) {
        // (F ⋆ G)(z) = Σ zᵐ F(z) gₘ, so a left zero of F is one of F ⋆ G.
        let k = ctx();
        let mut s = Sampler::new(&k, seed);
        let zb = s.complex(0.5);
        let z = s.supernumber(zb, 0.2);
        let f = SeriesMatrix::scalar(&[-&z, Supernumber::one(&k)], false).unwrap();
        prop_assert!(f.evaluate(&z).unwrap().value.is_zero());
        let g = poly(&mut s, 4, 1, 1);
        let v = f.star_mul(&g).unwrap().evaluate(&z).unwrap().value;
        prop_assert!(v.norm1() < 1e-12);
    }

    #[test]
    fn realization_algebra_matches_series(seed in any::<u64>()) {
        let k = ctx();
        let d = k.max_series_degree;
        let mut s = Sampler::new(&k, seed);
        let r1 = stable(&mut s, 2, 2, 2);
        let r2 = stable(&mut s, 3, 2, 2);
        let (f1, f2) = (r1.to_series(d), r2.to_series(d));
        let prod = compose(&r1, &r2, ComposeMode::Product).unwrap().to_series(d);
        prop_assert!(rel_diff(&prod, &f1.star_mul(&f2).unwrap()) < 1e-10);
        let sum = compose(&r1, &r2, ComposeMode::Sum).unwrap().to_series(d);
        prop_assert!(rel_diff(&sum, &f1.try_add(&f2).unwrap()) < 1e-10);
        let inv = inverse_realization(&r1).unwrap().to_series(d);
        let id = SeriesMatrix::identity(&k, 2).truncate(d);
        prop_assert!(f1.star_mul(&inv).unwrap().max_coeff_diff(&id) < 1e-9);
        prop_assert!(rel_diff(&inv, &f1.star_inverse().unwrap()) < 1e-9);
    }

    #[test]
    fn closed_form_evaluation_matches_series(seed in any::<u64>()) {
        let k = ctx();
        let mut s = Sampler::new(&k, seed);
        let r = stable(&mut s, 3, 2, 1);
        let zb = s.complex(0.4);
        let z = s.supernumber(zb, 0.2);
        let e = r.to_series(k.max_series_degree).evaluate(&z).unwrap();
        prop_assert!(e.tail < 1e-8);
        prop_assert!(e.value.approx_eq(&r.evaluate(&z).unwrap(), 1e-8));
    }

    #[test]
    fn polynomial_realization_reproduces_coefficients(seed in any::<u64>(), deg in 0usize..5) {
        let k = ctx();
        let mut s = Sampler::new(&k, seed);
        let f = poly(&mut s, deg, 2, 3);
        let r = polynomial_realization(f.coeffs()).unwrap();
        prop_assert!(r.to_series(k.max_series_degree).max_coeff_diff(&f) < 1e-14);
    }

    #[test]
    fn wiener_verdict_ignores_souls(seed in any::<u64>()) {
        let k = ctx();
        let mut s = Sampler::new(&k, seed);
        let terms: Vec<(i64, SuperMatrix)> = (-2..=2)
            .map(|n| (n, SuperMatrix::scalar(&Supernumber::scalar(&k, s.complex(0.6)))))
            .collect();
        let f = LaurentSeries::from_terms(&k, 1, 1, &terms).unwrap();
        let souled: Vec<(i64, SuperMatrix)> = terms
            .iter()
            .map(|(n, m)| (*n, &SuperMatrix::scalar(&s.soul(0.5)) + m))
            .collect();
        let g = LaurentSeries::from_terms(&k, 1, 1, &souled).unwrap();
        prop_assert_eq!(wiener_is_invertible(&f, 256), wiener_is_invertible(&g, 256));
    }

    #[test]
    fn wiener_inverse_residual(seed in any::<u64>()) {
        let k = ctx();
        let mut s = Sampler::new(&k, seed);
        let mut terms: Vec<(i64, SuperMatrix)> = (-2..=2)
            .map(|n| (n, s.matrix(1, 1, 0.2, 0.2)))
            .collect();
        terms[2].1 = &terms[2].1 + &SuperMatrix::scalar(&Supernumber::scalar(&k, C64::new(1.5, 0.0)));
        let f = LaurentSeries::from_terms(&k, 1, 1, &terms).unwrap();
        prop_assume!(wiener_is_invertible(&f, 256));
        let g = wiener_invert(&f).unwrap();
        prop_assert!(f.star_mul_window(&g, g.window()).unwrap().identity_residual() <= 1e-9);
        prop_assert!(g.star_mul_window(&f, g.window()).unwrap().identity_residual() <= 1e-9);
    }
}

#[test]
fn truncation_flags_propagate() {
    let k = ctx();
    let mut s = Sampler::new(&k, 1);
    let exact = poly(&mut s, 2, 1, 1);
    let trunc = SeriesMatrix::truncated(vec![s.matrix(1, 1, 0.5, 0.1); 4]).unwrap();
    let p = exact.star_mul(&trunc).unwrap();
    assert!(p.is_truncated());
    assert_eq!(p.degree(), 3);
    let q = exact.star_mul(&exact).unwrap();
    assert!(!q.is_truncated());
    assert_eq!(q.degree(), 4);
}
