//! Subcommand definitions and dispatch.

use crate::parse::parse_function;
use abd_core::{
    apply_operator, bound_c2, bound_lipschitz, bound_modulus, default_bound_interval,
    error_curve, kfunctional_argument, moment_report, run_experiment, second_modulus,
    voronovskaja_limit, voronovskaja_sequence, write_curve_csv, Error, EvalOptions, FigurePreset,
    FunctionSpec, MomentKind, OperatorParams, Result,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

/// Evaluation of generalized Baskakov-Durrmeyer operators: single points,
/// error curves, moments, Voronovskaja sequences, error bounds, and the
/// preset error-comparison experiments.
#[derive(Parser)]
#[command(name = "abd", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OperatorArgs {
    /// Operator index n (n >= 1)
    #[arg(long)]
    n: u32,
    /// Shape parameter alpha in [0, 1]
    #[arg(long)]
    alpha: f64,
    /// Durrmeyer parameter rho > 0
    #[arg(long)]
    rho: f64,
}

impl OperatorArgs {
    fn params(&self) -> Result<OperatorParams> {
        OperatorParams::new(self.n, self.alpha, self.rho)
    }
}

#[derive(Args)]
struct TolArgs {
    /// Series truncation tolerance
    #[arg(long, default_value_t = 1e-10)]
    series_eps: f64,
    /// Relative tolerance for inner integrals
    #[arg(long = "quad-tol", default_value_t = 1e-10)]
    quad_tol: f64,
    /// Hard cap on series terms
    #[arg(long, default_value_t = 10_000)]
    k_max: usize,
}

impl TolArgs {
    fn options(&self) -> EvalOptions {
        EvalOptions {
            series_eps: self.series_eps,
            quad_rel_tol: self.quad_tol,
            k_max: self.k_max,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BoundKind {
    /// |A(f;x) - f(x)| <= 2 omega(f; sqrt(Delta_n(x)))
    Modulus,
    /// |A(f;x) - f(x)| <= M Delta_n(x)^(gamma/2)
    Lipschitz,
    /// (|Gamma_n(x)| + Delta_n(x)/2) * norm
    C2,
    /// omega_2 at sqrt(|Gamma_n|/2 + Delta_n/4), reported without a bound
    Omega2,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate A(f; x) at one point and print A and |f - A|
    Eval {
        /// Target: sqrt | expneg | ratio | e<k> | poly:c0,c1,...
        #[arg(long = "fn", value_parser = parse_function)]
        function: FunctionSpec,
        #[command(flatten)]
        op: OperatorArgs,
        /// Evaluation point x >= 0
        #[arg(long)]
        x: f64,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Tabulate (x, f, A(f;x), |f - A|) over a uniform grid as CSV
    Curve {
        #[arg(long = "fn", value_parser = parse_function)]
        function: FunctionSpec,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 3.0)]
        hi: f64,
        #[arg(long, default_value_t = 61)]
        points: usize,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Compare a closed-form moment against the series route (JSON)
    Moments {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long)]
        x: f64,
        /// Moment order (raw: 0..=2, central: 1..=2)
        #[arg(long)]
        order: u32,
        /// Report the central moment instead of the raw moment
        #[arg(long)]
        central: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// The scaled error sequence r_n = (n rho - 1)(A(f;x) - f(x)) (JSON)
    Voronovskaja {
        #[arg(long = "fn", value_parser = parse_function)]
        function: FunctionSpec,
        /// Shape parameter alpha in [0, 1]
        #[arg(long)]
        alpha: f64,
        /// Durrmeyer parameter rho > 0
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        x: f64,
        /// Comma-separated list of n values
        #[arg(long = "n-list", value_delimiter = ',', default_value = "50,100,200")]
        n_list: Vec<u32>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Pointwise error-bound reports (JSON)
    Bounds {
        #[arg(long, value_enum)]
        kind: BoundKind,
        /// Target function; required for every kind except c2
        #[arg(
            long = "fn",
            value_parser = parse_function,
            required_if_eq_any([("kind", "modulus"), ("kind", "lipschitz"), ("kind", "omega2")])
        )]
        function: Option<FunctionSpec>,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long)]
        x: f64,
        /// Hölder constant M (lipschitz)
        #[arg(long = "m-const", default_value_t = 1.0)]
        m_const: f64,
        /// Hölder exponent gamma in (0, 1] (lipschitz)
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// Combined norm bound on f, f', f'' (c2)
        #[arg(long = "c2-norm", default_value_t = 1.0)]
        c2_norm: f64,
        /// Grid resolution for modulus estimation
        #[arg(long, default_value_t = 4001)]
        resolution: usize,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run a preset error-comparison experiment (fig12 | fig34 | fig56)
    Figures {
        /// Preset name
        #[arg(value_parser = parse_preset)]
        preset: FigurePreset,
        /// Output directory for the per-rho CSVs and summary JSON
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 3.0)]
        hi: f64,
        #[arg(long, default_value_t = 61)]
        points: usize,
        #[command(flatten)]
        tol: TolArgs,
    },
}

fn parse_preset(raw: &str) -> std::result::Result<FigurePreset, String> {
    FigurePreset::from_name(raw)
        .ok_or_else(|| format!("unknown preset {raw:?}; expected fig12, fig34, or fig56"))
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidParameter(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct VoronovskajaJson {
    function: String,
    alpha: f64,
    rho: f64,
    x: f64,
    n_list: Vec<u32>,
    r: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit: Option<f64>,
}

#[derive(Serialize)]
struct C2BoundJson {
    x: f64,
    gamma_n: f64,
    delta_n: f64,
    c2_norm: f64,
    bound: f64,
}

#[derive(Serialize)]
struct Omega2Json {
    x: f64,
    function: String,
    argument: f64,
    sqrt_argument: f64,
    omega2: f64,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval {
            function,
            op,
            x,
            tol,
        } => {
            let params = op.params()?;
            let value = apply_operator(&params, &function, x, &tol.options())?;
            let err = (function.eval(x) - value).abs();
            println!("A = {}", fmt17(value));
            println!("abs_err = {}", fmt17(err));
            Ok(())
        }
        Command::Curve {
            function,
            op,
            lo,
            hi,
            points,
            out,
            tol,
        } => {
            if points < 2 {
                return Err(Error::InvalidParameter(
                    "curve needs at least 2 grid points".into(),
                ));
            }
            if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
                return Err(Error::InvalidParameter(format!(
                    "curve range requires 0 <= lo < hi, got [{lo}, {hi}]"
                )));
            }
            let params = op.params()?;
            let grid: Vec<f64> = (0..points)
                .map(|i| {
                    if i + 1 == points {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / (points - 1) as f64
                    }
                })
                .collect();
            let table = error_curve(&params, &function, &grid, &tol.options())?;
            match out {
                Some(path) => {
                    let file = fs::File::create(path)?;
                    let mut writer = std::io::BufWriter::new(file);
                    write_curve_csv(&mut writer, op.rho, &table)
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    write_curve_csv(&mut lock, op.rho, &table)?;
                    lock.flush()?;
                    Ok(())
                }
            }
        }
        Command::Moments {
            op,
            x,
            order,
            central,
            tol,
        } => {
            let params = op.params()?;
            let kind = if central {
                MomentKind::Central
            } else {
                MomentKind::Raw
            };
            let report = moment_report(&params, x, kind, order, &tol.options())?;
            if report.formula_mismatch(1e-8) {
                eprintln!(
                    "abd: warning: closed form and series disagree (rel gap {:.3e}); \
                     the series route is the reference",
                    report.rel_gap
                );
            }
            print_json(&report)
        }
        Command::Voronovskaja {
            function,
            alpha,
            rho,
            x,
            n_list,
            tol,
        } => {
            if n_list.is_empty() {
                return Err(Error::InvalidParameter("n-list must not be empty".into()));
            }
            let r = voronovskaja_sequence(alpha, rho, &function, x, &n_list, &tol.options())?;
            let limit = match (function.derivative1(x), function.derivative2(x)) {
                (Some(f1), Some(f2)) if f1.is_finite() && f2.is_finite() => {
                    Some(voronovskaja_limit(alpha, rho, x, f1, f2))
                }
                _ => None,
            };
            print_json(&VoronovskajaJson {
                function: function.to_string(),
                alpha,
                rho,
                x,
                n_list,
                r,
                limit,
            })
        }
        Command::Bounds {
            kind,
            function,
            op,
            x,
            m_const,
            gamma,
            c2_norm,
            resolution,
            tol,
        } => {
            let params = op.params()?;
            match kind {
                BoundKind::Modulus => {
                    let f = function.expect("clap enforces --fn for this kind");
                    let iv = default_bound_interval(&params, x, resolution)?;
                    let report = bound_modulus(&params, &f, x, &iv, &tol.options())?;
                    print_json(&report)
                }
                BoundKind::Lipschitz => {
                    let f = function.expect("clap enforces --fn for this kind");
                    let report =
                        bound_lipschitz(&params, m_const, gamma, &f, x, &tol.options())?;
                    print_json(&report)
                }
                BoundKind::C2 => {
                    let bound = bound_c2(&params, c2_norm, x)?;
                    print_json(&C2BoundJson {
                        x,
                        gamma_n: params.central_moment_closed(x, 1)?,
                        delta_n: params.central_moment_closed(x, 2)?,
                        c2_norm,
                        bound,
                    })
                }
                BoundKind::Omega2 => {
                    let f = function.expect("clap enforces --fn for this kind");
                    let argument = kfunctional_argument(&params, x)?;
                    let iv = default_bound_interval(&params, x, resolution)?;
                    let omega2 = second_modulus(&f, &iv, argument.sqrt());
                    print_json(&Omega2Json {
                        x,
                        function: f.to_string(),
                        argument,
                        sqrt_argument: argument.sqrt(),
                        omega2,
                    })
                }
            }
        }
        Command::Figures {
            preset,
            out,
            lo,
            hi,
            points,
            tol,
        } => {
            let spec = preset.spec_on_grid(&out, lo, hi, points);
            run_experiment(&spec, &tol.options())?;
            // the summary file is the canonical output; echo it to stdout
            let summary = fs::read_to_string(out.join("summary.json"))?;
            print!("{summary}");
            std::io::stdout().flush()?;
            Ok(())
        }
    }
}
