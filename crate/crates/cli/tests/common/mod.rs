#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use grassmann_schur::algebra::{AlgebraContext, Ctx};
use grassmann_schur::matrix::SuperMatrix;
use grassmann_schur::serial::Canonical;
use grassmann_schur::series::SeriesMatrix;
use grassmann_schur::toeplitz::{SuperdiskParams, ToeplitzSpec};
use grassmann_schur::algebra::Supernumber;
use grassmann_schur::realization::Realization;
use grassmann_schur_cli::dispatch;
use serde_json::Value;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// One golden command: its name, arguments relative to the golden directory
/// and the top-level fields holding canonical values of a known kind.
pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
}

pub const CASES: &[Case] = &[
    Case { name: "algebra_invert", args: &["algebra", "invert", "--in", "z.json"] },
    Case { name: "toeplitz_extend", args: &["toeplitz", "extend", "--spec", "spec.json", "--eta", "eta.json"] },
    Case { name: "toeplitz_params", args: &["toeplitz", "extend", "--spec", "spec.json", "--params-only"] },
    Case { name: "schur_run", args: &["schur", "run", "--series", "series.json", "--max-steps", "5"] },
    Case { name: "np_solve", args: &["np", "solve", "--data", "np_data.json", "--sigma", "sigma.json"] },
    Case {
        name: "blaschke_eval",
        args: &["blaschke", "eval", "--a", "a.json", "--c", "c.json", "--p", "p.json", "--at", "at.json"],
    },
    Case { name: "theta_build", args: &["theta", "build", "--C", "C.json", "--A", "A.json", "--J", "J.json"] },
];

/// Runs a command from the golden directory with the shared config, writing
/// to `out`. Returns the exit code.
pub fn run_case(args: &[&str], out: &Path) -> i32 {
    let dir = golden_dir();
    let mut argv: Vec<String> = vec!["gschur".into()];
    let mut file_flag = false;
    for a in args {
        if file_flag {
            argv.push(dir.join(a).to_string_lossy().into_owned());
        } else {
            argv.push(a.to_string());
        }
        file_flag = a.starts_with("--") && !matches!(*a, "--max-steps" | "--params-only");
    }
    argv.push("--config".into());
    argv.push(dir.join("config.json").to_string_lossy().into_owned());
    argv.push("--out".into());
    argv.push(out.to_string_lossy().into_owned());
    dispatch(argv)
}

pub fn ctx() -> Ctx {
    AlgebraContext::new(4).unwrap()
}

/// Re-parses every canonical value inside a command's output and writes it
/// back; the result must equal the input document.
pub fn reparse(name: &str, v: &Value) -> Value {
    let k = ctx();
    fn again<T: Canonical>(k: &Ctx, v: &Value) -> Value {
        T::from_json(k, v).expect("canonical value re-parses").to_json()
    }
    let mut w = v.clone();
    match name {
        "algebra_invert" => w = again::<Supernumber>(&k, v),
        "toeplitz_extend" => w["spec"] = again::<ToeplitzSpec>(&k, &v["spec"]),
        "toeplitz_params" => w = again::<SuperdiskParams>(&k, v),
        "schur_run" => {
            for key in ["rhos", "p"] {
                let items: Vec<Value> = v[key].as_array().unwrap().iter().map(|z| again::<Supernumber>(&k, z)).collect();
                w[key] = Value::Array(items);
            }
        }
        "np_solve" => {
            w["pick"] = again::<SuperMatrix>(&k, &v["pick"]);
            w["solution"] = again::<SeriesMatrix>(&k, &v["solution"]);
        }
        "blaschke_eval" => {
            w["value"] = again::<Supernumber>(&k, &v["value"]);
            w["omega"] = again::<Supernumber>(&k, &v["omega"]);
        }
        "theta_build" => {
            w["P"] = again::<SuperMatrix>(&k, &v["P"]);
            w["realization"] = again::<Realization>(&k, &v["realization"]);
        }
        other => panic!("unknown case {other}"),
    }
    w
}

/// Structural equality with a relative tolerance on numbers.
pub fn json_close(a: &Value, b: &Value, tol: f64) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
        }
        (Value::Array(x), Value::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| json_close(p, q, tol)),
        (Value::Object(x), Value::Object(y)) => {
            x.len() == y.len() && x.iter().all(|(k, p)| y.get(k).is_some_and(|q| json_close(p, q, tol)))
        }
        _ => a == b,
    }
}

pub fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

/// Checks one golden case: exit 0, output close to the stored golden,
/// canonical values re-parse unchanged and a second run is byte-identical.
pub fn check_case(case: &Case, scratch: &Path) -> Result<(), String> {
    let out1 = scratch.join(format!("{}.1.json", case.name));
    let out2 = scratch.join(format!("{}.2.json", case.name));
    let code = run_case(case.args, &out1);
    if code != 0 {
        return Err(format!("{}: exit {code}", case.name));
    }
    let golden = golden_dir().join(format!("{}.out.json", case.name));
    if std::env::var_os("GSCHUR_BLESS").is_some() {
        fs::copy(&out1, &golden).unwrap();
    }
    let got = read_json(&out1);
    if !json_close(&got, &read_json(&golden), 1e-12) {
        return Err(format!("{}: output differs from golden", case.name));
    }
    if reparse(case.name, &got) != got {
        return Err(format!("{}: canonical values do not round-trip", case.name));
    }
    run_case(case.args, &out2);
    if fs::read(&out1).unwrap() != fs::read(&out2).unwrap() {
        return Err(format!("{}: repeated run is not byte-identical", case.name));
    }
    Ok(())
}
