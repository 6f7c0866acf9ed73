//! Error-comparison experiments over a list of ρ values: one error curve
//! per ρ on a shared grid, CSV tables, and a JSON summary naming the ρ
//! with the smallest maximum grid error.

use crate::basis::OperatorParams;
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::operator::{error_curve, CurveTable, EvalOptions};
use serde::Serialize;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// One error-comparison run: a target function, a fixed (n, α), and the ρ
/// values to compare on a shared grid.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub function: FunctionSpec,
    pub n: u32,
    pub alpha: f64,
    pub rho_list: Vec<f64>,
    /// (lo, hi, points)
    pub x_range: (f64, f64, usize),
    pub output_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RhoSummary {
    pub rho: f64,
    pub max_err: f64,
    pub argmax_x: f64,
}

/// In-memory result of one experiment run.
#[derive(Clone, Debug)]
pub struct ExperimentSummary {
    pub per_rho: Vec<RhoSummary>,
    /// ρ achieving the smallest maximum grid error.
    pub argmin_rho: f64,
    pub tables: Vec<CurveTable>,
}

#[derive(Serialize)]
struct SettingsJson {
    function: String,
    n: u32,
    alpha: f64,
    rho_list: Vec<f64>,
    x_lo: f64,
    x_hi: f64,
    points: usize,
}

#[derive(Serialize)]
struct SummaryJson<'a> {
    settings: SettingsJson,
    per_rho: &'a [RhoSummary],
    argmin_rho: f64,
}

impl ExperimentSpec {
    fn validate(&self) -> Result<()> {
        let (lo, hi, points) = self.x_range;
        if self.rho_list.is_empty() {
            return Err(Error::InvalidParameter(
                "rho_list must not be empty".into(),
            ));
        }
        if points < 2 {
            return Err(Error::InvalidParameter(
                "grid needs at least 2 points".into(),
            ));
        }
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "x range requires 0 <= lo < hi, got [{lo}, {hi}]"
            )));
        }
        for &rho in &self.rho_list {
            let params = OperatorParams::new(self.n, self.alpha, rho)?;
            if params.n_rho() <= 2.0 {
                return Err(Error::InvalidParameter(format!(
                    "experiments require n*rho > 2, got {} at rho = {rho}",
                    params.n_rho()
                )));
            }
            if let Some(degree) = self.function.degree() {
                params.require_moment(degree as u32)?;
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi, points) = self.x_range;
        (0..points)
            .map(|i| {
                if i + 1 == points {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (points - 1) as f64
                }
            })
            .collect()
    }
}

/// Every f64 is written with 17 significant digits so CSV round-trips are
/// lossless.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes one curve table in the fixed CSV schema
/// `rho,x,f,approx,abs_err`, 17 significant digits per value.
pub fn write_curve_csv<W: Write>(out: &mut W, rho: f64, table: &CurveTable) -> Result<()> {
    writeln!(out, "rho,x,f,approx,abs_err")?;
    for row in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(rho),
            fmt_f64(row.x),
            fmt_f64(row.f_val),
            fmt_f64(row.approx),
            fmt_f64(row.abs_err)
        )?;
    }
    out.flush()?;
    Ok(())
}

fn write_curve_csv_file(path: &Path, rho: f64, table: &CurveTable) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut out = BufWriter::new(file);
    write_curve_csv(&mut out, rho, table)
}

/// File stem for one ρ value, e.g. `rho_0.5.csv`.
pub fn curve_file_name(rho: f64) -> String {
    format!("rho_{rho}.csv")
}

/// Runs the experiment: one error curve per ρ (grid points evaluated in
/// parallel, output ordered by grid index), one CSV per ρ, and a summary
/// JSON written last. Reruns with the same spec produce byte-identical
/// files.
pub fn run_experiment(spec: &ExperimentSpec, opts: &EvalOptions) -> Result<ExperimentSummary> {
    spec.validate()?;
    let grid = spec.grid();
    fs::create_dir_all(&spec.output_dir)?;

    let mut per_rho = Vec::with_capacity(spec.rho_list.len());
    let mut tables = Vec::with_capacity(spec.rho_list.len());
    for &rho in &spec.rho_list {
        let params = OperatorParams::new(spec.n, spec.alpha, rho)?;
        let table =
            error_curve(&params, &spec.function, &grid, opts).map_err(|e| e.at_rho(rho))?;
        let (argmax_x, max_err) = table
            .max_abs_err()
            .expect("grid is non-empty by validation");
        write_curve_csv_file(&spec.output_dir.join(curve_file_name(rho)), rho, &table)?;
        per_rho.push(RhoSummary {
            rho,
            max_err,
            argmax_x,
        });
        tables.push(table);
    }

    let argmin_rho = per_rho
        .iter()
        .min_by(|a, b| a.max_err.total_cmp(&b.max_err))
        .expect("rho_list is non-empty by validation")
        .rho;

    let summary = SummaryJson {
        settings: SettingsJson {
            function: spec.function.to_string(),
            n: spec.n,
            alpha: spec.alpha,
            rho_list: spec.rho_list.clone(),
            x_lo: spec.x_range.0,
            x_hi: spec.x_range.1,
            points: spec.x_range.2,
        },
        per_rho: &per_rho,
        argmin_rho,
    };
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::InvalidParameter(format!("summary serialization failed: {e}")))?;
    fs::write(spec.output_dir.join("summary.json"), json + "\n")?;

    Ok(ExperimentSummary {
        per_rho,
        argmin_rho,
        tables,
    })
}

/// The three preset error-comparison experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigurePreset {
    /// √x at n = 20, α = 0.1, ρ ∈ {1, 5, 0.5}
    Fig12,
    /// √x at n = 20, α = 1, ρ ∈ {1, 5, 0.5}
    Fig34,
    /// x² + 5x + 2 at n = 20, α = 0.7, ρ ∈ {1, 5, 0.3}
    Fig56,
}

impl FigurePreset {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "fig12" => Some(FigurePreset::Fig12),
            "fig34" => Some(FigurePreset::Fig34),
            "fig56" => Some(FigurePreset::Fig56),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FigurePreset::Fig12 => "fig12",
            FigurePreset::Fig34 => "fig34",
            FigurePreset::Fig56 => "fig56",
        }
    }

    /// Default grid: [0, 3] with 61 points.
    pub fn spec(self, output_dir: &Path) -> ExperimentSpec {
        self.spec_on_grid(output_dir, 0.0, 3.0, 61)
    }

    pub fn spec_on_grid(
        self,
        output_dir: &Path,
        lo: f64,
        hi: f64,
        points: usize,
    ) -> ExperimentSpec {
        let (function, alpha, rho_list) = match self {
            FigurePreset::Fig12 => (FunctionSpec::sqrt(), 0.1, vec![1.0, 5.0, 0.5]),
            FigurePreset::Fig34 => (FunctionSpec::sqrt(), 1.0, vec![1.0, 5.0, 0.5]),
            FigurePreset::Fig56 => (
                FunctionSpec::Polynomial(vec![2.0, 5.0, 1.0]),
                0.7,
                vec![1.0, 5.0, 0.3],
            ),
        };
        ExperimentSpec {
            function,
            n: 20,
            alpha,
            rho_list,
            x_range: (lo, hi, points),
            output_dir: output_dir.to_path_buf(),
        }
    }
}
