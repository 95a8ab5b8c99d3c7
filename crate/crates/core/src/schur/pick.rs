//! Nevanlinna–Pick interpolation: nodes `z_k` in the superdisk, values `s_k`.

use super::theta::{build_theta, ThetaFunction};
use super::{body_is_schur, signature, stein_solve};
use crate::algebra::{same_ctx, Ctx, Supernumber};
use crate::error::{Error, Result};
use crate::matrix::SuperMatrix;
use crate::series::{tail_estimate, SeriesMatrix};

/// Term budget for the direct Pick sums.
const PICK_MAX_TERMS: usize = 1 << 20;

/// Depth of the Schur test applied to the free parameter of [`np_solve`].
const SIGMA_DEPTH: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct InterpolationData {
    nodes: Vec<Supernumber>,
    values: Vec<Supernumber>,
}

impl InterpolationData {
    /// Checks lengths, contexts and `|z_k,B| < 1 − tol_body`.
    pub fn new(nodes: Vec<Supernumber>, values: Vec<Supernumber>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != values.len() {
            return Err(Error::InvalidArgument("need matching nonempty node and value lists".into()));
        }
        let ctx = nodes[0].ctx().clone();
        if nodes.iter().chain(&values).any(|z| !same_ctx(z.ctx(), &ctx)) {
            return Err(Error::ContextMismatch);
        }
        if let Some(k) = nodes.iter().position(|z| !z.in_superdisk()) {
            return Err(Error::NodeOutsideSuperdisk(k));
        }
        Ok(InterpolationData { nodes, values })
    }

    pub fn ctx(&self) -> &Ctx {
        self.nodes[0].ctx()
    }

    pub fn nodes(&self) -> &[Supernumber] {
        &self.nodes
    }

    pub fn values(&self) -> &[Supernumber] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `A = diag(z_k†)`.
    pub fn a_matrix(&self) -> SuperMatrix {
        let d: Vec<Supernumber> = self.nodes.iter().map(|z| z.dagger()).collect();
        SuperMatrix::diag(self.ctx(), &d)
    }

    /// `C` with rows `(1, …, 1)` and `(s_1†, …, s_N†)`.
    pub fn c_matrix(&self) -> SuperMatrix {
        let ctx = self.ctx();
        SuperMatrix::from_fn(ctx, 2, self.len(), |i, k| {
            if i == 0 {
                Supernumber::one(ctx)
            } else {
                self.values[k].dagger()
            }
        })
    }
}

/// `P_jk = Σₙ z_jⁿ (1 − s_j s_k†) (z_k†)ⁿ`, each sum run until its
/// geometric tail estimate drops below `tol_eq / 100`.
pub fn pick_matrix(data: &InterpolationData) -> Result<SuperMatrix> {
    let ctx = data.ctx().clone();
    let n = data.len();
    let mut out = SuperMatrix::zeros(&ctx, n, n);
    let one = Supernumber::one(&ctx);
    for j in 0..n {
        for k in 0..n {
            let (zj, zk) = (&data.nodes[j], data.nodes[k].dagger());
            let base = &one - &(&data.values[j] * &data.values[k].dagger());
            let mut term = base.clone();
            let mut acc = base;
            let mut sizes = vec![acc.norm1()];
            let mut done = false;
            for step in 1..PICK_MAX_TERMS {
                term = &(zj * &term) * &zk;
                sizes.push(term.norm1());
                acc += &term;
                if term.is_zero() || (step >= 8 && tail_estimate(&sizes[sizes.len() - 6..]) <= ctx.tol_eq * 1e-2) {
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(Error::NotConvergent);
            }
            out.set(j, k, acc);
        }
    }
    Ok(out)
}

/// The Pick matrix as the solution of `P − A*PA = C*JC`.
pub fn pick_matrix_stein(data: &InterpolationData) -> Result<SuperMatrix> {
    stein_solve(&data.c_matrix(), &data.a_matrix(), &signature(data.ctx()))
}

/// `Θ` for the interpolation data; the Pick matrix must be superpositive.
pub fn np_theta(data: &InterpolationData) -> Result<ThetaFunction> {
    let p = pick_matrix(data)?;
    if !p.is_superpositive() {
        return Err(Error::NotSuperpositive);
    }
    build_theta(&data.c_matrix(), &data.a_matrix(), &p.hermitian_part(), &signature(data.ctx()))
}

/// `‖((1, −s_k) ⋆ Θ)(z_k)‖₁` for every node.
pub fn np_residuals(data: &InterpolationData, theta: &ThetaFunction) -> Result<Vec<f64>> {
    let ctx = data.ctx();
    data.nodes
        .iter()
        .zip(&data.values)
        .map(|(z, s)| {
            let row = SuperMatrix::row(ctx, &[Supernumber::one(ctx), -s]);
            Ok(theta.row_evaluate(&row, z)?.norm1())
        })
        .collect()
}

/// Every node residual at most `tol_eq`.
pub fn np_interpolation_check(data: &InterpolationData, theta: &ThetaFunction) -> bool {
    match np_residuals(data, theta) {
        Ok(r) => r.iter().all(|x| *x <= data.ctx().tol_eq),
        Err(_) => false,
    }
}

/// `T_Θ(σ) = (a⋆σ + b) ⋆ (c⋆σ + d)^{−⋆}` with `Θ` split conformally with the
/// `r × c` parameter `σ`.
pub fn lft_apply(theta: &SeriesMatrix, sigma: &SeriesMatrix) -> Result<SeriesMatrix> {
    let (r, c) = sigma.shape();
    if theta.shape() != (r + c, r + c) {
        return Err(Error::ShapeMismatch(format!(
            "Θ of shape {:?} cannot act on a {r}x{c} parameter",
            theta.shape()
        )));
    }
    let a = theta.block(0, 0, r, r);
    let b = theta.block(0, r, r, c);
    let cc = theta.block(r, 0, c, r);
    let d = theta.block(r, r, c, c);
    let num = a.star_mul(sigma)?.try_add(&b)?;
    let den = cc.star_mul(sigma)?.try_add(&d)?;
    let den_inv = den.star_inverse().map_err(|e| match e {
        Error::ConstantTermSingular => Error::DenominatorSingular,
        e => e,
    })?;
    num.star_mul(&den_inv)
}

/// `S = T_Θ(σ)` for a Schur parameter `σ`; `S(z_k) = s_k` at every node.
pub fn np_solve(data: &InterpolationData, sigma: &SeriesMatrix) -> Result<SeriesMatrix> {
    if sigma.shape() != (1, 1) {
        return Err(Error::ShapeMismatch("the parameter must be scalar".into()));
    }
    if !body_is_schur(sigma, SIGMA_DEPTH) {
        return Err(Error::InvalidArgument("the parameter is not a Schur function".into()));
    }
    let theta = np_theta(data)?;
    lft_apply(&theta.series, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraContext, C64};
    use crate::oracle::{classical_np, classical_pick};
    use crate::sample::Sampler;

    fn ctx() -> Ctx {
        AlgebraContext::new(6).unwrap()
    }

    /// Nodes in the disk of radius 0.45 and values `s_k = S(z_k)` of the
    /// Schur function `S(z) = s₀ + s₁z` with `|s₀,B| + |s₁,B| < 1`, so the
    /// Pick matrix is superpositive.
    fn random_data(s: &mut Sampler, n: usize, soul: f64) -> InterpolationData {
        let b0 = s.complex(0.3);
        let b1 = s.complex(0.4);
        let f = SeriesMatrix::scalar(&[s.supernumber(b0, soul), s.supernumber(b1, soul)], false).unwrap();
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for k in 0..n {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + s.uniform(0.0, 0.5);
            let r = s.uniform(0.1, 0.45);
            let z = s.supernumber(C64::from_polar(r, angle), soul);
            values.push(f.evaluate(&z).unwrap().value.get(0, 0).clone());
            nodes.push(z);
        }
        InterpolationData::new(nodes, values).unwrap()
    }

    #[test]
    fn single_node_at_origin() {
        let k = ctx();
        let mut s = Sampler::new(&k, 1);
        let s1 = s.supernumber(C64::new(0.3, 0.1), 0.2);
        let data = InterpolationData::new(vec![Supernumber::zero(&k)], vec![s1.clone()]).unwrap();
        let p = pick_matrix(&data).unwrap();
        assert_eq!(*p.get(0, 0), &Supernumber::one(&k) - &(&s1 * &s1.dagger()));
        let theta = np_theta(&data).unwrap();
        assert!(np_residuals(&data, &theta).unwrap()[0] < 1e-14);
        let outside = InterpolationData::new(vec![Supernumber::real(&k, 1.0)], vec![s1]);
        assert_eq!(outside, Err(Error::NodeOutsideSuperdisk(0)));
    }

    #[test]
    fn pick_agrees_with_stein_and_classical() {
        let k = ctx();
        let mut s = Sampler::new(&k, 2);
        let data = random_data(&mut s, 3, 0.1);
        let direct = pick_matrix(&data).unwrap();
        let stein = pick_matrix_stein(&data).unwrap();
        assert!(direct.approx_eq(&stein, 1e-10));
        let nodes: Vec<C64> = data.nodes().iter().map(|z| z.body()).collect();
        let values: Vec<C64> = data.values().iter().map(|z| z.body()).collect();
        assert!((direct.body() - classical_pick(&nodes, &values)).norm() < 1e-12);
    }

    #[test]
    fn interpolation_identity_and_negative_control() {
        let k = ctx();
        let mut s = Sampler::new(&k, 3);
        let data = random_data(&mut s, 3, 0.1);
        let theta = np_theta(&data).unwrap();
        assert!(np_interpolation_check(&data, &theta));
        let mut values = data.values().to_vec();
        values[1] = &values[1] + &Supernumber::real(&k, 1e-3);
        let perturbed = InterpolationData::new(data.nodes().to_vec(), values).unwrap();
        assert!(!np_interpolation_check(&perturbed, &theta));
    }

    #[test]
    fn central_solution_interpolates() {
        let k = ctx();
        let mut s = Sampler::new(&k, 4);
        let data = random_data(&mut s, 3, 0.1);
        let sol = np_solve(&data, &SeriesMatrix::zero(&k, 1, 1)).unwrap();
        for (z, v) in data.nodes().iter().zip(data.values()) {
            let e = sol.evaluate(z).unwrap();
            assert!(e.tail < 1e-8);
            assert!((e.value.get(0, 0) - v).norm1() < 1e-8);
        }
        let nodes: Vec<C64> = data.nodes().iter().map(|z| z.body()).collect();
        let values: Vec<C64> = data.values().iter().map(|z| z.body()).collect();
        let oracle = classical_np(&nodes, &values, 20).unwrap();
        for (n, c) in sol.body().iter().take(21).enumerate() {
            assert!((c[(0, 0)] - oracle.central[n]).norm() < 1e-9);
        }
        assert!(super::super::is_schur_grassmann(&sol, 16));
    }

    #[test]
    fn unimodular_parameter_still_interpolates() {
        let k = ctx();
        let mut s = Sampler::new(&k, 5);
        let data = random_data(&mut s, 2, 0.1);
        let sigma = SeriesMatrix::constant(&SuperMatrix::scalar(&Supernumber::scalar(&k, C64::from_polar(1.0, 0.7))));
        let sol = np_solve(&data, &sigma).unwrap();
        for (z, v) in data.nodes().iter().zip(data.values()) {
            assert!((sol.evaluate(z).unwrap().value.get(0, 0) - v).norm1() < 1e-8);
        }
    }

    #[test]
    fn lft_trivial_cases() {
        let k = ctx();
        let mut s = Sampler::new(&k, 6);
        let sigma = SeriesMatrix::polynomial(vec![s.matrix(1, 1, 0.3, 0.1), s.matrix(1, 1, 0.3, 0.1)]).unwrap();
        let id = SeriesMatrix::identity(&k, 2);
        assert!(lft_apply(&id, &sigma).unwrap().approx_eq(&sigma, 1e-14));
        let data = random_data(&mut s, 2, 0.1);
        let theta = np_theta(&data).unwrap();
        let at_zero = lft_apply(&theta.series, &SeriesMatrix::zero(&k, 1, 1)).unwrap();
        let b = theta.series.block(0, 1, 1, 1);
        let d = theta.series.block(1, 1, 1, 1);
        assert!(at_zero.approx_eq(&b.star_mul(&d.star_inverse().unwrap()).unwrap(), 1e-14));
    }
}
