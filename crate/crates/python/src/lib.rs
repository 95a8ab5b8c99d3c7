//! Python bindings: supernumbers as a class, pipelines over canonical JSON.

use grassmann_schur::algebra::{AlgebraContext, Ctx, Supernumber as Inner, C64};
use grassmann_schur::error::Error;
use grassmann_schur::schur::{blaschke_factor, np_solve as solve, schur_algorithm, InterpolationData, Termination};
use grassmann_schur::serial::{from_text, to_text, Canonical};
use grassmann_schur::series::SeriesMatrix;
use grassmann_schur::toeplitz::ToeplitzSpec;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(grassmann_schur, GrassmannError, PyException);

fn err(e: Error) -> PyErr {
    GrassmannError::new_err(format!("{}: {e}", e.code()))
}

/// Algebra settings shared by the values built from it.
#[pyclass(frozen)]
struct Context {
    ctx: Ctx,
}

#[pymethods]
impl Context {
    #[new]
    #[pyo3(signature = (generators = 16, degree = 32, tol_body = 1e-10, tol_eq = 1e-9))]
    fn new(generators: u32, degree: usize, tol_body: f64, tol_eq: f64) -> PyResult<Self> {
        let ctx = AlgebraContext::with(generators, tol_body, tol_eq, degree).map_err(err)?;
        Ok(Context { ctx })
    }

    #[getter]
    fn generators(&self) -> u32 {
        self.ctx.generators
    }

    /// The generator `i_k`, 1-based.
    fn generator(&self, k: u32) -> PyResult<Supernumber> {
        Ok(Supernumber(Inner::generator(&self.ctx, k).map_err(err)?))
    }

    fn scalar(&self, value: num_complex_py::Complex) -> Supernumber {
        Supernumber(Inner::scalar(&self.ctx, value.0))
    }

    /// Parses the canonical JSON term list.
    fn parse(&self, text: &str) -> PyResult<Supernumber> {
        Ok(Supernumber(from_text(&self.ctx, text).map_err(err)?))
    }
}

/// Element of the Grassmann algebra.
#[pyclass(frozen)]
struct Supernumber(Inner);

#[pymethods]
impl Supernumber {
    #[getter]
    fn body(&self) -> num_complex_py::Complex {
        num_complex_py::Complex(self.0.body())
    }

    fn to_json(&self) -> String {
        to_text(&self.0).trim_end().to_string()
    }

    fn invert(&self) -> PyResult<Supernumber> {
        Ok(Supernumber(self.0.invert().map_err(err)?))
    }

    fn kth_root(&self, k: u32) -> PyResult<Supernumber> {
        Ok(Supernumber(self.0.kth_root(k).map_err(err)?))
    }

    fn dagger(&self) -> Supernumber {
        Supernumber(self.0.dagger())
    }

    fn norm1(&self) -> f64 {
        self.0.norm1()
    }

    fn is_superpositive(&self) -> bool {
        self.0.is_superpositive()
    }

    fn in_superdisk(&self) -> bool {
        self.0.in_superdisk()
    }

    fn __add__(&self, other: PyRef<'_, Supernumber>) -> PyResult<Supernumber> {
        Ok(Supernumber(self.0.try_add(&other.0).map_err(err)?))
    }

    fn __sub__(&self, other: PyRef<'_, Supernumber>) -> PyResult<Supernumber> {
        Ok(Supernumber(self.0.try_sub(&other.0).map_err(err)?))
    }

    fn __mul__(&self, other: PyRef<'_, Supernumber>) -> PyResult<Supernumber> {
        Ok(Supernumber(self.0.try_mul(&other.0).map_err(err)?))
    }

    fn __eq__(&self, other: PyRef<'_, Supernumber>) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Supernumber({})", self.to_json())
    }
}

/// One-step extension of a Toeplitz spec; both arguments and the result are
/// canonical JSON.
#[pyfunction]
fn toeplitz_extend(ctx: PyRef<'_, Context>, spec: &str, eta: &str) -> PyResult<String> {
    let t: ToeplitzSpec = from_text(&ctx.ctx, spec).map_err(err)?;
    let e: Inner = from_text(&ctx.ctx, eta).map_err(err)?;
    Ok(to_text(&t.extend(&e).map_err(err)?))
}

/// Schur coefficients of a scalar series and how the recursion stopped.
#[pyfunction]
fn schur_coefficients(ctx: PyRef<'_, Context>, series: &str, max_steps: usize) -> PyResult<(Vec<Supernumber>, String)> {
    let s: SeriesMatrix = from_text(&ctx.ctx, series).map_err(err)?;
    let chain = schur_algorithm(&s, max_steps).map_err(err)?;
    let how = match chain.termination {
        Termination::MaxSteps => "max_steps".to_string(),
        Termination::Boundary { step } => format!("boundary at step {step}"),
        Termination::Singular { step } => format!("singular at step {step}"),
        Termination::Exhausted { step } => format!("exhausted at step {step}"),
    };
    Ok((chain.rhos.into_iter().map(Supernumber).collect(), how))
}

/// Nevanlinna-Pick solution for the parameter `sigma` (zero when omitted).
#[pyfunction]
#[pyo3(signature = (ctx, data, sigma = None))]
fn np_solve(ctx: PyRef<'_, Context>, data: &str, sigma: Option<&str>) -> PyResult<String> {
    let d: InterpolationData = from_text(&ctx.ctx, data).map_err(err)?;
    let sigma = match sigma {
        Some(t) => from_text(&ctx.ctx, t).map_err(err)?,
        None => SeriesMatrix::zero(&ctx.ctx, 1, 1),
    };
    Ok(solve(&d, &sigma).map_err(err)?.to_json().to_string())
}

/// `b_a(z)` for a triple with `p − a†pa = c†c`.
#[pyfunction]
fn blaschke_eval(
    a: PyRef<'_, Supernumber>,
    c: PyRef<'_, Supernumber>,
    p: PyRef<'_, Supernumber>,
    z: PyRef<'_, Supernumber>,
) -> PyResult<Supernumber> {
    let b = blaschke_factor(&a.0, &c.0, &p.0).map_err(err)?;
    Ok(Supernumber(b.evaluate(&z.0).map_err(err)?))
}

mod num_complex_py {
    use super::C64;
    use pyo3::prelude::*;
    use pyo3::types::PyComplex;

    /// Python `complex` on the boundary; real numbers are accepted too.
    pub struct Complex(pub C64);

    impl<'a, 'py> FromPyObject<'a, 'py> for Complex {
        type Error = PyErr;

        fn extract(ob: Borrowed<'a, 'py, PyAny>) -> PyResult<Self> {
            match ob.cast::<PyComplex>() {
                Ok(c) => Ok(Complex(C64::new(c.real(), c.imag()))),
                Err(_) => Ok(Complex(C64::new(ob.extract::<f64>()?, 0.0))),
            }
        }
    }

    impl<'py> IntoPyObject<'py> for Complex {
        type Target = PyComplex;
        type Output = Bound<'py, PyComplex>;
        type Error = std::convert::Infallible;

        fn into_pyobject(self, py: Python<'py>) -> Result<Self::Output, Self::Error> {
            Ok(PyComplex::from_doubles(py, self.0.re, self.0.im))
        }
    }
}

#[pymodule]
#[pyo3(name = "grassmann_schur")]
fn grassmann_schur_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds the classes and functions to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Context>()?;
    m.add_class::<Supernumber>()?;
    m.add("GrassmannError", m.py().get_type::<GrassmannError>())?;
    m.add_function(wrap_pyfunction!(toeplitz_extend, m)?)?;
    m.add_function(wrap_pyfunction!(schur_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(np_solve, m)?)?;
    m.add_function(wrap_pyfunction!(blaschke_eval, m)?)?;
    Ok(())
}
