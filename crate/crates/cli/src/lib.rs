//! `gschur <area> <verb> [flags]`: file based front end to the library.
//!
//! Every numeric artifact is written in the canonical JSON form. Exit codes
//! are 0 on success, 1 on usage errors (bad flags, unreadable or malformed
//! input) and 2 on mathematical domain errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use grassmann_schur::algebra::{Ctx, Supernumber};
use grassmann_schur::error::Error;
use grassmann_schur::matrix::SuperMatrix;
use grassmann_schur::schur::{
    blaschke_factor, build_theta, np_residuals, np_solve, np_theta, pick_matrix, schur_algorithm, signature,
    stein_solve, InterpolationData, Termination,
};
use grassmann_schur::serial::{Canonical, Config};
use grassmann_schur::series::SeriesMatrix;
use grassmann_schur::toeplitz::ToeplitzSpec;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gschur", version, about = "Schur analysis over the Grassmann algebra")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    area: Area,
}

#[derive(Args, Debug)]
struct Global {
    /// Config file in canonical JSON; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    generators: Option<u32>,
    #[arg(long, global = true)]
    degree: Option<usize>,
    #[arg(long = "tol-body", global = true)]
    tol_body: Option<f64>,
    #[arg(long = "tol-eq", global = true)]
    tol_eq: Option<f64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Area {
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    #[command(subcommand)]
    Toeplitz(ToeplitzCmd),
    #[command(subcommand)]
    Schur(SchurCmd),
    #[command(subcommand)]
    Np(NpCmd),
    #[command(subcommand)]
    Blaschke(BlaschkeCmd),
    #[command(subcommand)]
    Theta(ThetaCmd),
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Inverse of a supernumber.
    Invert {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum ToeplitzCmd {
    /// One-step extension of a superpositive Toeplitz spec.
    Extend {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        eta: Option<PathBuf>,
        /// Write the superdisk parameters instead of the extended spec.
        #[arg(long = "params-only")]
        params_only: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SchurCmd {
    /// Schur coefficients of a scalar series.
    Run {
        #[arg(long)]
        series: PathBuf,
        #[arg(long = "max-steps")]
        max_steps: usize,
    },
}

#[derive(Subcommand, Debug)]
enum NpCmd {
    /// Nevanlinna-Pick solution for a parameter sigma (zero when absent).
    Solve {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        sigma: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum BlaschkeCmd {
    /// Evaluates the Blaschke factor b_a at a point.
    Eval {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        c: PathBuf,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        at: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum ThetaCmd {
    /// Solves the Stein equation and builds Theta.
    Build {
        #[arg(long = "C")]
        c: PathBuf,
        #[arg(long = "A")]
        a: PathBuf,
        /// Signature matrix; diag(1, -1) when absent.
        #[arg(long = "J")]
        j: Option<PathBuf>,
    },
}

/// Failure of a command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub exit: i32,
    pub code: String,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            exit: if e.is_usage() { EXIT_USAGE } else { EXIT_DOMAIN },
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        exit: EXIT_USAGE,
        code: "Io".into(),
        message: format!("{}: {e}", path.display()),
    }
}

/// Parses `argv` (program name first), runs the command and writes its
/// output. Returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(text) => match &cli.global.out {
            Some(p) => match fs::write(p, text) {
                Ok(()) => EXIT_OK,
                Err(e) => report(&io_failure(p, e)),
            },
            None => {
                let _ = std::io::stdout().write_all(text.as_bytes());
                EXIT_OK
            }
        },
        Err(f) => report(&f),
    }
}

fn report(f: &Failure) -> i32 {
    eprintln!("error[{}]: {}", f.code, f.message);
    f.exit
}

fn config(g: &Global) -> Result<Config, Failure> {
    let mut c = match &g.config {
        Some(p) => {
            let v: Value = serde_json::from_str(&read(p)?).map_err(|e| Error::Parse(e.to_string()))?;
            Config::from_json(&v)?
        }
        None => Config::default(),
    };
    if let Some(x) = g.generators {
        c.generators = x;
    }
    if let Some(x) = g.degree {
        c.degree = x;
    }
    if let Some(x) = g.tol_body {
        c.tol_body = x;
    }
    if let Some(x) = g.tol_eq {
        c.tol_eq = x;
    }
    if let Some(x) = g.samples {
        c.samples = x;
    }
    if let Some(x) = g.seed {
        c.seed = x;
    }
    Ok(c)
}

fn read(p: &Path) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| io_failure(p, e))
}

fn load<T: Canonical>(ctx: &Ctx, p: &Path) -> Result<T, Failure> {
    let v: Value = serde_json::from_str(&read(p)?).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
    T::from_json(ctx, &v).map_err(Failure::from)
}

fn termination_json(t: &Termination) -> Value {
    let (kind, step) = match t {
        Termination::MaxSteps => ("max_steps", None),
        Termination::Boundary { step } => ("boundary", Some(*step)),
        Termination::Singular { step } => ("singular", Some(*step)),
        Termination::Exhausted { step } => ("exhausted", Some(*step)),
    };
    let mut v = json!({ "kind": kind });
    if let Some(s) = step {
        v["step"] = json!(s);
    }
    if let Some(e) = t.error() {
        v["error"] = json!(e.code());
    }
    v
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let cfg = config(&cli.global)?;
    let ctx = cfg.context()?;
    let out = match &cli.area {
        Area::Algebra(AlgebraCmd::Invert { input }) => {
            let z: Supernumber = load(&ctx, input)?;
            z.invert()?.to_json()
        }
        Area::Toeplitz(ToeplitzCmd::Extend { spec, eta, params_only }) => {
            let t: ToeplitzSpec = load(&ctx, spec)?;
            if *params_only {
                t.extension_params()?.to_json()
            } else {
                let e: Supernumber = match eta {
                    Some(p) => load(&ctx, p)?,
                    None => Supernumber::zero(&ctx),
                };
                let next = t.extend(&e)?;
                json!({ "spec": next.to_json(), "verified": next.verify_extension() })
            }
        }
        Area::Schur(SchurCmd::Run { series, max_steps }) => {
            let s: SeriesMatrix = load(&ctx, series)?;
            let chain = schur_algorithm(&s, *max_steps)?;
            json!({
                "rhos": chain.rhos.iter().map(Canonical::to_json).collect::<Vec<_>>(),
                "p": chain.p.iter().map(Canonical::to_json).collect::<Vec<_>>(),
                "termination": termination_json(&chain.termination),
            })
        }
        Area::Np(NpCmd::Solve { data, sigma }) => {
            let d: InterpolationData = load(&ctx, data)?;
            let sigma: SeriesMatrix = match sigma {
                Some(p) => load(&ctx, p)?,
                None => SeriesMatrix::zero(&ctx, 1, 1),
            };
            let theta = np_theta(&d)?;
            let residuals = np_residuals(&d, &theta)?;
            let solution = np_solve(&d, &sigma)?;
            json!({
                "pick": pick_matrix(&d)?.to_json(),
                "solution": solution.to_json(),
                "residuals": residuals,
            })
        }
        Area::Blaschke(BlaschkeCmd::Eval { a, c, p, at }) => {
            let (a, c, p): (Supernumber, Supernumber, Supernumber) = (load(&ctx, a)?, load(&ctx, c)?, load(&ctx, p)?);
            let z: Supernumber = load(&ctx, at)?;
            let b = blaschke_factor(&a, &c, &p)?;
            json!({
                "value": b.evaluate(&z)?.to_json(),
                "omega": b.omega.to_json(),
                "zero_residual": b.zero_residual()?,
            })
        }
        Area::Theta(ThetaCmd::Build { c, a, j }) => {
            let (c, a): (SuperMatrix, SuperMatrix) = (load(&ctx, c)?, load(&ctx, a)?);
            let j: SuperMatrix = match j {
                Some(p) => load(&ctx, p)?,
                None => signature(&ctx),
            };
            let p = stein_solve(&c, &a, &j)?;
            let theta = build_theta(&c, &a, &p, &j)?;
            json!({
                "P": p.to_json(),
                "realization": theta.realization.to_json(),
                "kernel_defect": theta.kernel_defect,
                "kernel_defect_sampled": theta.kernel_defect_sampled(cfg.samples, cfg.seed)?,
            })
        }
    };
    let mut text = out.to_string();
    text.push('\n');
    Ok(text)
}
