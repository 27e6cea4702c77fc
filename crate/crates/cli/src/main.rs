mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use slicereg::verify::{
    check_regular, counterexample_probe_with, max_modulus_probe, min_modulus_probe,
    open_mapping_probe_with, CounterexampleConfig, OpenMappingConfig, DEFAULT_H, DEFAULT_TOL,
};
use slicereg::{find_zeros, reciprocal_eval, transform_tf, GridSpec, Quaternion, ZeroSet};

use input::InputError;

const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_IO: u8 = 1;

/// Slice-regular quaternionic polynomials: algebra, zero sets and numerical probes.
///
/// Polynomials are JSON objects `{"coeffs": [[w,x,y,z], ...]}` listing the
/// right coefficients a₀, a₁, ... of Σ qⁿaₙ. Rational expressions use
/// `{"op": "sum"|"star"|"recip"|"const-shift", "args": [...]}` with
/// polynomial leaves. Arguments taking JSON accept it inline, as `@file`, or
/// as a plain file path. Quaternion literals look like `1-2i+0.5k`.
///
/// Exit status: 0 success, 2 usage or parse error, 3 domain error (pole,
/// zero polynomial, degenerate precondition), 1 if the output cannot be written.
#[derive(Parser, Debug)]
#[command(name = "slicereg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PolyArg {
    /// Polynomial JSON, `@file` or file path.
    #[arg(long, value_name = "JSON|@FILE")]
    poly: String,
}

#[derive(Args, Debug)]
struct PointArg {
    /// Evaluation point as a quaternion literal.
    #[arg(long, value_name = "QUATERNION", allow_hyphen_values = true)]
    at: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a polynomial or rational expression at a point.
    Eval {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        at: PointArg,
    },
    /// Regular product left * right.
    Mul {
        #[arg(long, value_name = "JSON|@FILE")]
        left: String,
        #[arg(long, value_name = "JSON|@FILE")]
        right: String,
    },
    /// Regular conjugate f^c.
    Conj {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Symmetrization f^s = f * f^c.
    Symm {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Regular reciprocal f^{-*} at a point.
    RecipEval {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        at: PointArg,
    },
    /// The transform T_f(q) = f^c(q)⁻¹ q f^c(q).
    Tf {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        at: PointArg,
    },
    /// Zero set: isolated points, spheres and real points.
    Zeros {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Finite-difference check of the slice Cauchy-Riemann equations.
    ///
    /// Samples a grid × grid square of half-width radius around the slice
    /// coordinates of --at on slices i, j, k and three seeded random units.
    CheckRegular {
        #[command(flatten)]
        poly: PolyArg,
        /// Centre of the sampled region [default: 0].
        #[arg(long, value_name = "QUATERNION", allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
        #[arg(long, default_value_t = 7)]
        grid: usize,
        /// Largest accepted residual.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Modulus-principle and open-mapping probes.
    ///
    /// max, min: 4D box grid centred at --at [default 0] with half-width
    /// --radius [default 2] and --grid points per axis [default 15]; --tol is
    /// the zero tolerance for min [default 1e-12].
    ///
    /// open: ball of radius --radius [default 0.3] around --at [default 0],
    /// 10 seeded targets, --grid points per axis for each refinement level
    /// [default 21, odd].
    Probe {
        #[arg(long, value_enum)]
        kind: ProbeKind,
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, value_name = "QUATERNION", allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Non-openness evidence for q⁻² + 1 on B(i, 1/2) with target 0.1j.
    Counterexample {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of uniform samples of the ball.
        #[arg(long, default_value_t = 200_000)]
        grid: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProbeKind {
    Max,
    Min,
    Open,
}

enum Failure {
    Input(InputError),
    Domain(slicereg::Error),
    Output(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<slicereg::Error> for Failure {
    fn from(e: slicereg::Error) -> Self {
        if e.is_domain_error() {
            Failure::Domain(e)
        } else {
            Failure::Input(InputError::Parse(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("results serialize to JSON")
}

/// A malformed grid is a bad argument, not a mathematical failure.
fn grid_spec(center: Quaternion, radius: f64, points: usize) -> Result<GridSpec, InputError> {
    GridSpec::new(center, radius, points).map_err(|e| InputError::Parse(e.to_string()))
}

fn point_or_zero(at: Option<&str>) -> Result<Quaternion, InputError> {
    at.map_or(Ok(Quaternion::ZERO), input::quaternion)
}

fn run(command: Command) -> Result<serde_json::Value, Failure> {
    Ok(match command {
        Command::Eval { poly, at } => {
            let f = input::function(&poly.poly)?;
            let q = input::quaternion(&at.at)?;
            to_json(&f.as_fn().eval_at(q)?)
        }
        Command::Mul { left, right } => {
            let (f, g) = (input::poly(&left)?, input::poly(&right)?);
            to_json(&f.star_mul(&g))
        }
        Command::Conj { poly } => to_json(&input::poly(&poly.poly)?.regular_conjugate()),
        Command::Symm { poly } => to_json(&input::poly(&poly.poly)?.symmetrization()),
        Command::RecipEval { poly, at } => {
            let f = input::poly(&poly.poly)?;
            to_json(&reciprocal_eval(&f, input::quaternion(&at.at)?)?)
        }
        Command::Tf { poly, at } => {
            let f = input::poly(&poly.poly)?;
            to_json(&transform_tf(&f, input::quaternion(&at.at)?)?)
        }
        Command::Zeros { poly } => {
            let f = input::poly(&poly.poly)?;
            to_json(&ZeroSet {
                zeros: find_zeros(&f)?,
            })
        }
        Command::CheckRegular {
            poly,
            at,
            radius,
            grid,
            tol,
        } => {
            let f = input::function(&poly.poly)?;
            let region = grid_spec(point_or_zero(at.as_deref())?, radius, grid)?;
            to_json(&check_regular(f.as_fn(), &region, DEFAULT_H, tol)?)
        }
        Command::Probe {
            kind,
            poly,
            at,
            radius,
            grid,
            tol,
            seed,
        } => {
            let center = point_or_zero(at.as_deref())?;
            match kind {
                ProbeKind::Max | ProbeKind::Min => {
                    let f = input::poly(&poly.poly)?;
                    let region = grid_spec(center, radius.unwrap_or(2.0), grid.unwrap_or(15))?;
                    if matches!(kind, ProbeKind::Max) {
                        to_json(&max_modulus_probe(&f, &region))
                    } else {
                        to_json(&min_modulus_probe(&f, &region, tol.unwrap_or(1e-12))?)
                    }
                }
                ProbeKind::Open => {
                    let f = input::function(&poly.poly)?;
                    let cfg = OpenMappingConfig {
                        seed,
                        grid_points: grid.unwrap_or(OpenMappingConfig::default().grid_points),
                        ..OpenMappingConfig::default()
                    };
                    to_json(&open_mapping_probe_with(
                        f.as_fn(),
                        center,
                        radius.unwrap_or(0.3),
                        &cfg,
                    )?)
                }
            }
        }
        Command::Counterexample { seed, grid } => {
            let cfg = CounterexampleConfig {
                seed,
                samples: grid,
                ..CounterexampleConfig::default()
            };
            to_json(&counterexample_probe_with(&cfg)?.report())
        }
    })
}

fn emit(value: &serde_json::Value, out: Option<&PathBuf>) -> Result<(), Failure> {
    let text = format!(
        "{}\n",
        serde_json::to_string(value).expect("JSON values serialize")
    );
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Output(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(cli.command).and_then(|v| emit(&v, cli.out.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Output(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
