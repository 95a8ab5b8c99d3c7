//! Canonical JSON form shared by the library and the command line.
//!
//! A supernumber is a list of terms `{"idx":[...],"re":x,"im":y}` with
//! 1-based, strictly increasing generator lists, ordered by grade and then
//! lexicographically. Matrices are `{"rows","cols","entries"}` with entries
//! listed row by row; series, Laurent series and realizations nest matrices.

use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraContext, Ctx, MultiIndex, Supernumber, C64};
use crate::error::{Error, Result};
use crate::matrix::SuperMatrix;
use crate::realization::Realization;
use crate::schur::InterpolationData;
use crate::series::{LaurentSeries, SeriesMatrix};
use crate::toeplitz::{SuperdiskParams, ToeplitzSpec};

/// Values with a canonical JSON form.
pub trait Canonical: Sized {
    fn to_json(&self) -> Value;
    fn from_json(ctx: &Ctx, v: &Value) -> Result<Self>;
}

/// Compact text of a canonical value with a trailing newline.
pub fn to_text<T: Canonical>(x: &T) -> String {
    let mut s = x.to_json().to_string();
    s.push('\n');
    s
}

pub fn from_text<T: Canonical>(ctx: &Ctx, text: &str) -> Result<T> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    T::from_json(ctx, &v)
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| parse_err(format!("missing field `{name}`")))
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| parse_err(format!("`{what}` must be a number")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(format!("`{what}` must be a nonnegative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("`{what}` must be an array")))
}

impl Canonical for Supernumber {
    fn to_json(&self) -> Value {
        Value::Array(
            self.canonical_terms()
                .into_iter()
                // `+ 0.0` folds negative zero so equal values print identically.
                .map(|(idx, c)| json!({"idx": idx.generators(), "re": c.re + 0.0, "im": c.im + 0.0}))
                .collect(),
        )
    }

    fn from_json(ctx: &Ctx, v: &Value) -> Result<Self> {
        let mut terms = Vec::new();
        let mut prev: Option<MultiIndex> = None;
        for t in as_array(v, "supernumber")? {
            let gens = as_array(field(t, "idx")?, "idx")?
                .iter()
                .map(|g| {
                    g.as_u64()
                        .and_then(|g| u32::try_from(g).ok())
                        .ok_or_else(|| parse_err("generator indices must be positive integers"))
                })
                .collect::<Result<Vec<u32>>>()?;
            let idx = MultiIndex::from_generators(&gens)?;
            if let Some(p) = prev {
                if p.canonical_cmp(idx) != std::cmp::Ordering::Less {
                    return Err(parse_err(format!("term {idx} is duplicated or out of canonical order")));
                }
            }
            prev = Some(idx);
            let re = as_f64(field(t, "re")?, "re")?;
            let im = as_f64(field(t, "im")?, "im")?;
            terms.push((idx, C64::new(re, im)));
        }
        Supernumber::from_terms(ctx, terms)
    }
}

impl Canonical for SuperMatrix {
    fn to_json(&self) -> Value {
        let entries: Vec<Value> = (0..self.rows())
            .map(|i| Value::Array((0..self.cols()).map(|j| self.get(i, j).to_json()).collect()))
            .collect();
        json!({"rows": self.rows(), "cols": self.cols(), "entries": entries})
    }

    fn from_json(ctx: &Ctx, v: &Value) -> Result<Self> {
        let rows = as_usize(field(v, "rows")?, "rows")?;
        let cols = as_usize(field(v, "cols")?, "cols")?;
        let entries = as_array(field(v, "entries")?, "entries")?;
        if entries.len() != rows {
            return Err(parse_err(format!("expected {rows} rows, found {}", entries.len())));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for row in entries {
            let row = as_array(row, "row")?;
            if row.len() != cols {
                return Err(parse_err(format!("expected {cols} columns, found {}", row.len())));
            }
            for z in row {
                data.push(Supernumber::from_json(ctx, z)?);
            }
        }
        SuperMatrix::from_vec(ctx, rows, cols, data)
    }
}

fn matrices(ctx: &Ctx, v: &Value, what: &str) -> Result<Vec<SuperMatrix>> {
    as_array(v, what)?.iter().map(|m| SuperMatrix::from_json(ctx, m)).collect()
}

impl Canonical for SeriesMatrix {
    fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.coeffs().iter().map(Canonical::to_json).collect();
        json!({"degree": self.degree(), "truncated": self.is_truncated(), "coeffs": coeffs})
    }

    fn from_json(ctx: &Ctx, v: &Value) -> Result<Self> {
        let degree = as_usize(field(v, "degree")?, "degree")?;
        let truncated = match v.get("truncated") {
            None => false,
            Some(t) => t.as_bool().ok_or_else(|| parse_err("`truncated` must be a boolean"))?,
        };
        let coeffs = matrices(ctx, field(v, "coeffs")?, "coeffs")?;
        if coeffs.len() != degree + 1 {
            return Err(parse_err(format!("degree {degree} needs {} coefficients", degree + 1)));
        }
        if truncated {
            SeriesMatrix::truncated(coeffs)
        } else {
            SeriesMatrix::polynomial(coeffs)
        }
    }
}

impl Canonical for LaurentSeries {
    fn to_json(&self) -> Value {
        let k = self.window() as i64;
        let mut map = Map::new();
        for n in -k..=k {
            map.insert(n.to_string(), self.coeff(n).to_json());
        }
        json!({"window": self.window(), "coeffs": Value::Object(map)})
    }

    fn from_json(ctx: &Ctx, v: &Value) -> Result<Self> {
        let window = as_usize(field(v, "window")?, "window")?;
        let map = field(v, "coeffs")?
            .as_object()
            .ok_or_else(|| parse_err("`coeffs` must map indices to matrices"))?;
        let k = window as i64;
        let mut coeffs = Vec::with_capacity(2 * window + 1);
        for n in -k..=k {
            let m = map
                .get(&n.to_string())
                .ok_or_else(|| parse_err(format!("missing coefficient {n}")))?;
            coeffs.push(SuperMatrix::from_json(ctx, m)?);
        }
        if map.len() != coeffs.len() {
            return Err(parse_err("coefficient indices outside the window"));
        }
        LaurentSeries::new(window, coeffs)
    }
}

impl Canonical for Realization {
    fn to_json(&self) -> Value {
        json!({"A": self.a.to_json(), "B": self.b.to_json(), "C": self.c.to_json(), "D": self.d.to_json()})
    }

    fn from_json(ctx: &Ctx, v: &Value) -> Result<Self> {
        let m = |name: &str| SuperMatrix::from_json(ctx, field(v, name)?);
        Realization::new(m("A")?, m("B")?, m("C")?, m("D")?)
    }
}

fn supernumbers(ctx: &Ctx, v: &Value, what: &str) -> Result<Vec<Supernumber>> {
    as_array(v, what)?.iter().map(|z| Supernumber::from_json(ctx, z)).collect()
}

fn supernumbers_json(zs: &[Supernumber]) -> Value {
    Value::Array(zs.iter().map(Canonical::to_json).collect())
}

impl Canonical for ToeplitzSpec {
    fn to_json(&self) -> Value {
        json!({"r": supernumbers_json(self.entries())})
    }

    fn from_json(ctx: &Ctx, v: &Value) -> Result<Self> {
        ToeplitzSpec::new(supernumbers(ctx, field(v, "r")?, "r")?)
    }
}

impl Canonical for SuperdiskParams {
    fn to_json(&self) -> Value {
        json!({
            "center": self.center.to_json(),
            "alpha": self.alpha.to_json(),
            "left_radius": self.left_radius.to_json(),
            "right_radius": self.right_radius.to_json(),
        })
    }

    fn from_json(ctx: &Ctx, v: &Value) -> Result<Self> {
        let z = |name: &str| Supernumber::from_json(ctx, field(v, name)?);
        Ok(SuperdiskParams {
            center: z("center")?,
            alpha: z("alpha")?,
            left_radius: z("left_radius")?,
            right_radius: z("right_radius")?,
        })
    }
}

impl Canonical for InterpolationData {
    fn to_json(&self) -> Value {
        json!({"nodes": supernumbers_json(self.nodes()), "values": supernumbers_json(self.values())})
    }

    fn from_json(ctx: &Ctx, v: &Value) -> Result<Self> {
        InterpolationData::new(
            supernumbers(ctx, field(v, "nodes")?, "nodes")?,
            supernumbers(ctx, field(v, "values")?, "values")?,
        )
    }
}

/// Run parameters: algebra context settings plus sampling controls.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub generators: u32,
    pub degree: usize,
    pub tol_body: f64,
    pub tol_eq: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            generators: 16,
            degree: 32,
            tol_body: 1e-10,
            tol_eq: 1e-9,
            samples: 16,
            seed: 0,
        }
    }
}

impl Config {
    pub fn context(&self) -> Result<Ctx> {
        AlgebraContext::with(self.generators, self.tol_body, self.tol_eq, self.degree)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.generators,
            "degree": self.degree,
            "tol_body": self.tol_body,
            "tol_eq": self.tol_eq,
            "samples": self.samples,
            "seed": self.seed,
        })
    }

    /// Reads the fields present in `v` over the defaults; unknown keys are
    /// rejected.
    pub fn from_json(v: &Value) -> Result<Self> {
        let map = v.as_object().ok_or_else(|| parse_err("config must be an object"))?;
        let mut c = Config::default();
        for (k, x) in map {
            match k.as_str() {
                "generators" => {
                    c.generators = u32::try_from(as_usize(x, k)?).map_err(|_| parse_err("generators out of range"))?
                }
                "degree" => c.degree = as_usize(x, k)?,
                "tol_body" => c.tol_body = as_f64(x, k)?,
                "tol_eq" => c.tol_eq = as_f64(x, k)?,
                "samples" => c.samples = as_usize(x, k)?,
                "seed" => c.seed = as_usize(x, k)? as u64,
                _ => return Err(parse_err(format!("unknown config key `{k}`"))),
            }
        }
        c.context()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Sampler;

    fn ctx() -> Ctx {
        AlgebraContext::new(6).unwrap()
    }

    #[test]
    fn supernumber_text_form() {
        let k = ctx();
        let z = Supernumber::from_terms(
            &k,
            [
                (MultiIndex::from_generators(&[1, 3]).unwrap(), C64::new(2.0, 0.0)),
                (MultiIndex::EMPTY, C64::new(1.0, -1.0)),
                (MultiIndex::from_generators(&[2]).unwrap(), C64::new(0.5, 0.0)),
            ],
        )
        .unwrap();
        let text = to_text(&z);
        assert_eq!(
            text,
            "[{\"idx\":[],\"re\":1.0,\"im\":-1.0},{\"idx\":[2],\"re\":0.5,\"im\":0.0},{\"idx\":[1,3],\"re\":2.0,\"im\":0.0}]\n"
        );
        assert_eq!(from_text::<Supernumber>(&k, &text).unwrap(), z);
    }

    #[test]
    fn reader_rejects_noncanonical_input() {
        let k = ctx();
        for bad in [
            r#"[{"idx":[2],"re":1,"im":0},{"idx":[],"re":1,"im":0}]"#,
            r#"[{"idx":[1],"re":1,"im":0},{"idx":[1],"re":1,"im":0}]"#,
            r#"[{"idx":[2,1],"re":1,"im":0}]"#,
            r#"[{"idx":[0],"re":1,"im":0}]"#,
            r#"[{"idx":[],"re":1}]"#,
        ] {
            assert!(from_text::<Supernumber>(&k, bad).is_err(), "{bad}");
        }
        assert!(matches!(
            from_text::<Supernumber>(&k, r#"[{"idx":[7],"re":1,"im":0}]"#),
            Err(Error::GeneratorOutOfRange(..))
        ));
    }

    #[test]
    fn round_trips() {
        let k = ctx();
        let mut s = Sampler::new(&k, 1);
        let m = s.matrix(2, 3, 1.0, 0.3);
        assert_eq!(from_text::<SuperMatrix>(&k, &to_text(&m)).unwrap(), m);
        let e = SuperMatrix::zeros(&k, 0, 0);
        assert_eq!(from_text::<SuperMatrix>(&k, &to_text(&e)).unwrap(), e);
        let f = SeriesMatrix::truncated(vec![s.matrix(1, 2, 1.0, 0.2), s.matrix(1, 2, 1.0, 0.2)]).unwrap();
        assert_eq!(from_text::<SeriesMatrix>(&k, &to_text(&f)).unwrap(), f);
        let g = SeriesMatrix::polynomial(vec![s.matrix(2, 2, 1.0, 0.2)]).unwrap();
        assert_eq!(from_text::<SeriesMatrix>(&k, &to_text(&g)).unwrap(), g);
        let l = LaurentSeries::from_terms(&k, 1, 1, &[(-2, s.matrix(1, 1, 1.0, 0.2)), (1, s.matrix(1, 1, 1.0, 0.2))]).unwrap();
        assert_eq!(from_text::<LaurentSeries>(&k, &to_text(&l)).unwrap(), l);
        let r = Realization::new(s.matrix(2, 2, 0.5, 0.1), s.matrix(2, 1, 1.0, 0.1), s.matrix(1, 2, 1.0, 0.1), s.matrix(1, 1, 1.0, 0.1)).unwrap();
        let back = from_text::<Realization>(&k, &to_text(&r)).unwrap();
        assert_eq!((back.a, back.b, back.c, back.d), (r.a, r.b, r.c, r.d));
    }

    #[test]
    fn config_defaults_and_overrides() {
        let c = Config::from_json(&json!({"generators": 8, "tol_eq": 1e-8})).unwrap();
        assert_eq!(c.generators, 8);
        assert_eq!(c.degree, 32);
        assert_eq!(c.tol_eq, 1e-8);
        assert!(Config::from_json(&json!({"bogus": 1})).is_err());
        assert!(Config::from_json(&json!({"generators": 65})).is_err());
        assert_eq!(Config::from_json(&c.to_json()).unwrap(), c);
    }
}
