//! Application of the operator A_n^{α,ρ} to a target function: series
//! truncation over the basis weights combined with exact Beta-ratio
//! integration for polynomials or adaptive quadrature for everything else.

use crate::basis::{ClassicalWeightIter, OperatorParams};
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::quad::adaptive_quad;
use crate::special::ln_beta;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::RwLock;

/// Segment budget for one inner integral.
const MAX_QUAD_SEGMENTS: usize = 400;

/// Length of the trailing window used by the series stopping rule.
const TAIL_WINDOW: usize = 8;

/// Tolerances controlling series truncation and quadrature.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EvalOptions {
    /// Target bound on the neglected series tail (absolute, relative to
    /// max(1, |sum|)).
    pub series_eps: f64,
    /// Relative tolerance for each inner integral.
    pub quad_rel_tol: f64,
    /// Hard cap on the number of series terms.
    pub k_max: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            series_eps: 1e-10,
            quad_rel_tol: 1e-10,
            k_max: 10_000,
        }
    }
}

impl EvalOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_eps > 0.0 && self.series_eps < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "series_eps must lie in (0, 1), got {}",
                self.series_eps
            )));
        }
        if !(self.quad_rel_tol > 0.0 && self.quad_rel_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quad_rel_tol must lie in (0, 1), got {}",
                self.quad_rel_tol
            )));
        }
        if self.k_max == 0 {
            return Err(Error::InvalidParameter("k_max must be positive".into()));
        }
        Ok(())
    }
}

/// How a series evaluation terminated.
#[derive(Clone, Copy, Debug)]
pub struct SeriesDiagnostics {
    /// Number of terms actually summed.
    pub terms: usize,
    /// Bound on the neglected tail Σ_{k>K} |p_k g_k|.
    pub tail_bound: f64,
}

/// Sums Σ_k p_{n,k}^α(x) g(k) with certified tail control.
///
/// The signed weights are dominated by c₊ l_k + c₋ l_{k-2}, so the tail of
/// the dominating series bounds the neglected mass even where the signed
/// partial sums overshoot. On top of the weight tail, the last
/// `TAIL_WINDOW` dominated terms must decay geometrically; the observed
/// ratio extrapolates a bound on Σ_{k>K} |p_k g_k|, which also covers
/// targets g of polynomial growth.
pub(crate) fn weighted_kernel_sum<G>(
    params: &OperatorParams,
    x: f64,
    opts: &EvalOptions,
    mut g: G,
) -> Result<(f64, SeriesDiagnostics)>
where
    G: FnMut(usize) -> Result<f64>,
{
    opts.validate()?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!(
            "operator evaluation requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        // p_{n,0}(0) = 1 and every other weight vanishes
        let v = g(0)?;
        return Ok((
            v,
            SeriesDiagnostics {
                terms: 1,
                tail_bound: 0.0,
            },
        ));
    }

    let eps = opts.series_eps;
    let (cp, cm) = params.weight_split(x);
    let mut weights = ClassicalWeightIter::new(params, x);
    let mut lambda = 0.0;
    let mut lambda_m2 = 0.0;
    let mut last = [0.0f64; 2]; // l_{k-2}, l_{k-1}
    let mut sum = 0.0;
    let mut window = [f64::INFINITY; TAIL_WINDOW];
    let k_min = (params.n() as f64 * x).ceil() as usize + 2;

    for k in 0..=opts.k_max {
        let l = weights.next_weight();
        if k >= 2 {
            lambda_m2 += last[0];
        }
        let dominating = cp * l + cm * last[0];
        let g_k = g(k)?;
        sum += (cp * l - cm * last[0]) * g_k;
        last[0] = last[1];
        last[1] = l;
        lambda += l;
        window[k % TAIL_WINDOW] = dominating * g_k.abs();

        if k < k_min.max(TAIL_WINDOW) {
            continue;
        }
        let weight_tail = cp * (1.0 - lambda) + cm * (1.0 - lambda_m2);
        if weight_tail > eps {
            continue;
        }
        let scale = eps * sum.abs().max(1.0);
        // window entries in chronological order
        let mut decaying = true;
        let mut window_max = 0.0f64;
        let mut ratio = 0.0f64;
        for j in 1..=TAIL_WINDOW {
            let d = window[(k + j) % TAIL_WINDOW];
            window_max = window_max.max(d);
            if j > 1 {
                let prev = window[(k + j - 1) % TAIL_WINDOW];
                if d > prev {
                    decaying = false;
                    break;
                }
                if prev > 0.0 {
                    ratio = ratio.max(d / prev);
                }
            }
        }
        if !decaying || window_max > scale || ratio >= 0.999 {
            continue;
        }
        let d_last = window[k % TAIL_WINDOW];
        let tail_estimate = d_last * ratio / (1.0 - ratio);
        if tail_estimate <= scale {
            return Ok((
                sum,
                SeriesDiagnostics {
                    terms: k + 1,
                    tail_bound: tail_estimate.max(0.0),
                },
            ));
        }
    }

    let weight_tail = cp * (1.0 - lambda) + cm * (1.0 - lambda_m2);
    Err(Error::SeriesCapExceeded {
        k_max: opts.k_max,
        partial_sum: sum,
        tail_bound: weight_tail.max(0.0),
    })
}

/// ∫₀^∞ μ_{n,k}^ρ(t) f(t) dt.
///
/// Polynomials combine the exact kernel moments; other targets are folded
/// onto (0, 1) by t = u/(1-u), where the integrand becomes
/// u^{kρ}(1-u)^{nρ-1} f(u/(1-u)) / B(kρ+1, nρ), and integrated adaptively.
pub fn inner_integral(
    params: &OperatorParams,
    k: usize,
    f: &FunctionSpec,
    opts: &EvalOptions,
) -> Result<f64> {
    if let FunctionSpec::Polynomial(coeffs) = f {
        let degree = f.degree().expect("polynomial has a degree");
        params.require_moment(degree as u32)?;
        let mut v = 0.0;
        for (m, &c) in coeffs.iter().enumerate().take(degree + 1) {
            if c != 0.0 {
                v += c * params.kernel_raw_moment(k, m as u32)?;
            }
        }
        return Ok(v);
    }

    let k_rho = k as f64 * params.rho();
    let n_rho = params.n_rho();
    let ln_b = ln_beta(k_rho + 1.0, n_rho);
    let integrand = move |u: f64| -> f64 {
        if u >= 1.0 {
            return 0.0;
        }
        if u <= 0.0 {
            return if k_rho > 0.0 {
                0.0
            } else {
                (-ln_b).exp() * f.eval(0.0)
            };
        }
        let t = u / (1.0 - u);
        (k_rho * u.ln() + (n_rho - 1.0) * (-u).ln_1p() - ln_b).exp() * f.eval(t)
    };
    let r = adaptive_quad(
        &integrand,
        0.0,
        1.0,
        opts.quad_rel_tol,
        1e-300,
        MAX_QUAD_SEGMENTS,
    )?;
    Ok(r.value)
}

/// A_n^{α,ρ}(f; x) together with series diagnostics.
pub fn apply_with_diagnostics(
    params: &OperatorParams,
    f: &FunctionSpec,
    x: f64,
    opts: &EvalOptions,
) -> Result<(f64, SeriesDiagnostics)> {
    if let Some(degree) = f.degree() {
        params.require_moment(degree as u32)?;
    }
    weighted_kernel_sum(params, x, opts, |k| inner_integral(params, k, f, opts))
}

/// A_n^{α,ρ}(f; x).
pub fn apply_operator(
    params: &OperatorParams,
    f: &FunctionSpec,
    x: f64,
    opts: &EvalOptions,
) -> Result<f64> {
    apply_with_diagnostics(params, f, x, opts).map(|(v, _)| v)
}

/// One row of an error table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurveRow {
    pub x: f64,
    pub f_val: f64,
    pub approx: f64,
    pub abs_err: f64,
}

/// Grid of (x, f(x), A(f;x), |f - A|) rows for one parameter setting.
#[derive(Clone, Debug, Serialize)]
pub struct CurveTable {
    pub params: OperatorParams,
    pub rows: Vec<CurveRow>,
}

impl CurveTable {
    pub fn max_abs_err(&self) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for row in &self.rows {
            if best.is_none_or(|(_, e)| row.abs_err > e) {
                best = Some((row.x, row.abs_err));
            }
        }
        best
    }
}

/// Inner integrals do not depend on x, so a grid evaluation shares them
/// across all points. Values are appended on demand; recomputation under
/// the write lock is idempotent, so results do not depend on scheduling.
struct InnerCache<'a> {
    params: &'a OperatorParams,
    f: &'a FunctionSpec,
    opts: &'a EvalOptions,
    values: RwLock<Vec<f64>>,
}

impl<'a> InnerCache<'a> {
    fn new(params: &'a OperatorParams, f: &'a FunctionSpec, opts: &'a EvalOptions) -> Self {
        Self {
            params,
            f,
            opts,
            values: RwLock::new(Vec::new()),
        }
    }

    fn get(&self, k: usize) -> Result<f64> {
        {
            let values = self.values.read().expect("inner cache poisoned");
            if k < values.len() {
                return Ok(values[k]);
            }
        }
        let mut values = self.values.write().expect("inner cache poisoned");
        while values.len() <= k {
            let next = values.len();
            values.push(inner_integral(self.params, next, self.f, self.opts)?);
        }
        Ok(values[k])
    }
}

/// Evaluates f, A(f;·) and |f - A| on a strictly increasing grid.
///
/// Points are independent and evaluated in parallel; the result order is
/// the grid order regardless of scheduling.
pub fn error_curve(
    params: &OperatorParams,
    f: &FunctionSpec,
    grid: &[f64],
    opts: &EvalOptions,
) -> Result<CurveTable> {
    opts.validate()?;
    for w in grid.windows(2) {
        // also rejects NaN grid entries
        let ascending = w[0] < w[1];
        if !ascending {
            return Err(Error::InvalidParameter(
                "grid must be strictly increasing".into(),
            ));
        }
    }
    if let Some(&x0) = grid.first() {
        if !(x0 >= 0.0 && x0.is_finite()) {
            return Err(Error::Domain(format!(
                "grid points must satisfy x >= 0, got {x0}"
            )));
        }
    }
    if let Some(degree) = f.degree() {
        params.require_moment(degree as u32)?;
    }

    let cache = InnerCache::new(params, f, opts);
    let rows: Vec<CurveRow> = grid
        .par_iter()
        .map(|&x| {
            let (approx, _) = weighted_kernel_sum(params, x, opts, |k| cache.get(k))
                .map_err(|e| e.at_x(x))?;
            let f_val = f.eval(x);
            Ok(CurveRow {
                x,
                f_val,
                approx,
                abs_err: (f_val - approx).abs(),
            })
        })
        .collect::<Result<_>>()?;

    Ok(CurveTable {
        params: *params,
        rows,
    })
}
