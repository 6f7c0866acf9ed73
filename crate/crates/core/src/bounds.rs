//! Moduli of continuity, the pointwise error-bound theorems, the
//! Voronovskaja limit, and finite-grid weighted-norm gaps.
//!
//! Grid modulus estimates are lower bounds of the true suprema and
//! converge to them as the resolution grows; bound checks therefore pick
//! intervals wide enough to cover the region where the operator mass
//! concentrates.

use crate::basis::OperatorParams;
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::operator::{apply_operator, EvalOptions};
use serde::Serialize;

/// Slack added to the right-hand side when deciding `satisfied`.
pub const BOUND_SLACK: f64 = 1e-12;

/// Default grid resolution for sup estimation.
pub const DEFAULT_RESOLUTION: usize = 4001;

/// Closed interval with a grid resolution for sup estimation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
    resolution: usize,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, resolution: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "interval requires 0 <= lo < hi, got [{lo}, {hi}]"
            )));
        }
        if resolution < 2 {
            return Err(Error::InvalidParameter(
                "interval resolution must be at least 2".into(),
            ));
        }
        Ok(Self { lo, hi, resolution })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.resolution - 1) as f64
    }

    fn samples(&self, f: &FunctionSpec) -> Vec<f64> {
        (0..self.resolution)
            .map(|i| {
                let x = if i + 1 == self.resolution {
                    self.hi
                } else {
                    self.lo + i as f64 * self.step()
                };
                f.eval(x)
            })
            .collect()
    }
}

/// Interval [0, x + 3·√Δ_n(x) + 1] on which the grid modulus captures the
/// operator mass around x.
pub fn default_bound_interval(
    params: &OperatorParams,
    x: f64,
    resolution: usize,
) -> Result<Interval> {
    let delta = params.central_moment_closed(x, 2)?;
    Interval::new(0.0, x + 3.0 * delta.sqrt() + 1.0, resolution)
}

/// Grid estimate of the first modulus of continuity
/// ω(f; δ) = sup_{|x−y|≤δ} |f(x) − f(y)| over the interval.
pub fn modulus(f: &FunctionSpec, iv: &Interval, delta: f64) -> f64 {
    if delta <= 0.0 {
        return 0.0;
    }
    let values = iv.samples(f);
    let j_max = ((delta / iv.step()) * (1.0 + 1e-12)).floor() as usize;
    let j_max = j_max.min(iv.resolution - 1);
    let mut sup = 0.0f64;
    for i in 0..values.len() {
        for j in 1..=j_max.min(values.len() - 1 - i) {
            sup = sup.max((values[i] - values[i + j]).abs());
        }
    }
    sup
}

/// Grid estimate of the second modulus
/// ω₂(f; δ) = sup_{0<h≤δ} sup_x |f(x+h) − 2f(x) + f(x−h)|.
pub fn second_modulus(f: &FunctionSpec, iv: &Interval, delta: f64) -> f64 {
    if delta <= 0.0 {
        return 0.0;
    }
    let values = iv.samples(f);
    let j_max = ((delta / iv.step()) * (1.0 + 1e-12)).floor() as usize;
    let j_max = j_max.min((iv.resolution - 1) / 2);
    let mut sup = 0.0f64;
    for j in 1..=j_max {
        for i in j..values.len() - j {
            sup = sup.max((values[i + j] - 2.0 * values[i] + values[i - j]).abs());
        }
    }
    sup
}

/// Outcome of one pointwise bound check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundReport {
    pub x: f64,
    /// |A(f;x) − f(x)|
    pub lhs: f64,
    /// theorem bound
    pub rhs: f64,
    /// lhs ≤ rhs + BOUND_SLACK
    pub satisfied: bool,
}

impl BoundReport {
    fn new(x: f64, lhs: f64, rhs: f64) -> Self {
        Self {
            x,
            lhs,
            rhs,
            satisfied: lhs <= rhs + BOUND_SLACK,
        }
    }
}

/// Checks |A(f;x) − f(x)| ≤ 2·ω(f; √Δ_n(x)) for bounded f.
pub fn bound_modulus(
    params: &OperatorParams,
    f: &FunctionSpec,
    x: f64,
    iv: &Interval,
    opts: &EvalOptions,
) -> Result<BoundReport> {
    let delta = params.central_moment_closed(x, 2)?;
    let lhs = (apply_operator(params, f, x, opts)? - f.eval(x)).abs();
    let rhs = 2.0 * modulus(f, iv, delta.sqrt());
    Ok(BoundReport::new(x, lhs, rhs))
}

/// Checks |A(f;x) − f(x)| ≤ M·Δ_n(x)^{γ/2} for f in the Hölder class
/// with constant M and exponent γ ∈ (0, 1].
pub fn bound_lipschitz(
    params: &OperatorParams,
    m_const: f64,
    gamma: f64,
    f: &FunctionSpec,
    x: f64,
    opts: &EvalOptions,
) -> Result<BoundReport> {
    let m_valid = m_const.is_finite() && m_const > 0.0;
    if !m_valid {
        return Err(Error::InvalidParameter(format!(
            "Hölder constant must be positive, got {m_const}"
        )));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Hölder exponent must lie in (0, 1], got {gamma}"
        )));
    }
    let delta = params.central_moment_closed(x, 2)?;
    let lhs = (apply_operator(params, f, x, opts)? - f.eval(x)).abs();
    let rhs = m_const * delta.powf(gamma / 2.0);
    Ok(BoundReport::new(x, lhs, rhs))
}

/// Error bound (|Γ_n(x)| + Δ_n(x)/2)·‖f‖ for twice-differentiable bounded
/// targets with combined norm `f_c2_norm`.
///
/// Γ_n enters in absolute value: the underlying estimate controls the
/// first-order term through |A(t−x;x)|, and Γ_n itself is negative for
/// part of the (α, ρ) range.
pub fn bound_c2(params: &OperatorParams, f_c2_norm: f64, x: f64) -> Result<f64> {
    if !(f_c2_norm >= 0.0 && f_c2_norm.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "norm must be a non-negative real, got {f_c2_norm}"
        )));
    }
    let gamma = params.central_moment_closed(x, 1)?;
    let delta = params.central_moment_closed(x, 2)?;
    Ok((gamma.abs() + delta / 2.0) * f_c2_norm)
}

/// Argument |Γ_n(x)|/2 + Δ_n(x)/4 of the second-modulus error estimate.
/// Reported alongside ω₂ at its square root; the estimate carries an
/// unspecified multiplicative constant, so it is not a pass/fail check.
pub fn kfunctional_argument(params: &OperatorParams, x: f64) -> Result<f64> {
    let gamma = params.central_moment_closed(x, 1)?;
    let delta = params.central_moment_closed(x, 2)?;
    Ok(gamma.abs() / 2.0 + delta / 4.0)
}

/// The Voronovskaja limit
/// [x(1 − 2ρ(1−α)) + 1]·f′(x) + (ρ+1)x(x+1)·f″(x)/2,
/// i.e. lim (nρ−1)[A(f;x) − f(x)].
pub fn voronovskaja_limit(alpha: f64, rho: f64, x: f64, f1: f64, f2: f64) -> f64 {
    (x * (1.0 - 2.0 * rho * (1.0 - alpha)) + 1.0) * f1
        + (rho + 1.0) * x * (x + 1.0) * f2 / 2.0
}

/// The scaled error sequence r_n = (nρ−1)[A(f;x) − f(x)], one entry per n
/// in input order.
pub fn voronovskaja_sequence(
    alpha: f64,
    rho: f64,
    f: &FunctionSpec,
    x: f64,
    n_list: &[u32],
    opts: &EvalOptions,
) -> Result<Vec<f64>> {
    let fx = f.eval(x);
    n_list
        .iter()
        .map(|&n| {
            let params = OperatorParams::new(n, alpha, rho)?;
            let value = apply_operator(&params, f, x, opts)?;
            Ok((params.n_rho() - 1.0) * (value - fx))
        })
        .collect()
}

/// Finite-grid surrogate of the weighted norm gap
/// max_x |A(e_i; x) − x^i| / (1 + x²), for i in {0, 1, 2}.
pub fn weighted_gap(params: &OperatorParams, i: u32, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter(
            "weighted gap needs a non-empty grid".into(),
        ));
    }
    let mut gap = 0.0f64;
    for &x in grid {
        let moment = params.raw_moment_closed(x, i)?;
        gap = gap.max((moment - x.powi(i as i32)).abs() / (1.0 + x * x));
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params(n: u32, alpha: f64, rho: f64) -> OperatorParams {
        OperatorParams::new(n, alpha, rho).unwrap()
    }

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(0.0, 1.0, 2).is_ok());
        assert!(Interval::new(-0.5, 1.0, 100).is_err());
        assert!(Interval::new(1.0, 1.0, 100).is_err());
        assert!(Interval::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn modulus_of_linear_function_is_delta() {
        let iv = Interval::new(0.0, 1.0, 4001).unwrap();
        let f = FunctionSpec::Polynomial(vec![0.0, 1.0]);
        assert_abs_diff_eq!(modulus(&f, &iv, 0.1), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn modulus_of_sqrt_attained_at_origin() {
        let iv = Interval::new(0.0, 1.0, 4001).unwrap();
        assert_abs_diff_eq!(modulus(&FunctionSpec::sqrt(), &iv, 0.25), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn modulus_of_constant_is_zero() {
        let iv = Interval::new(0.0, 2.0, 1001).unwrap();
        assert_eq!(modulus(&FunctionSpec::constant(3.5), &iv, 0.7), 0.0);
        assert_eq!(modulus(&FunctionSpec::constant(3.5), &iv, -1.0), 0.0);
    }

    #[test]
    fn second_modulus_of_affine_is_zero() {
        let iv = Interval::new(0.0, 2.0, 2001).unwrap();
        let f = FunctionSpec::Polynomial(vec![1.0, 2.0]);
        // zero up to evaluation rounding on the grid
        assert!(second_modulus(&f, &iv, 0.3) <= 1e-14);
    }

    #[test]
    fn second_modulus_of_square_is_two_delta_squared() {
        // second difference of x² is exactly 2h²; the grid step divides
        // δ = 0.1 evenly here, so the estimate is exact
        let iv = Interval::new(0.0, 2.0, 4001).unwrap();
        let f = FunctionSpec::monomial(2);
        assert_abs_diff_eq!(second_modulus(&f, &iv, 0.1), 0.02, epsilon = 1e-12);
    }

    #[test]
    fn second_modulus_sqrt_golden() {
        // frozen from an independent scan of the same grid
        let iv = Interval::new(0.01, 1.0, 4001).unwrap();
        let v = second_modulus(&FunctionSpec::sqrt(), &iv, 0.005);
        assert!(v > 0.0 && v.is_finite());
        assert_relative_eq!(v, 0.003473025416090819, max_relative = 1e-12);
    }

    #[test]
    fn bound_modulus_trivial_for_constants() {
        let p = params(20, 0.5, 1.0);
        let iv = default_bound_interval(&p, 1.0, 1001).unwrap();
        let r = bound_modulus(&p, &FunctionSpec::constant(2.0), 1.0, &iv, &opts()).unwrap();
        assert!(r.lhs <= 1e-10);
        assert_eq!(r.rhs, 0.0);
        assert!(r.satisfied);
    }

    #[test]
    fn bound_modulus_holds_for_bounded_targets() {
        let cases = [
            (50u32, 0.5, 2.0, FunctionSpec::ratio(), 1.0),
            (20, 0.1, 0.5, FunctionSpec::expneg(), 0.5),
        ];
        for (n, alpha, rho, f, x) in cases {
            let p = params(n, alpha, rho);
            let iv = default_bound_interval(&p, x, DEFAULT_RESOLUTION).unwrap();
            let r = bound_modulus(&p, &f, x, &iv, &opts()).unwrap();
            assert!(r.satisfied, "lhs {} vs rhs {}", r.lhs, r.rhs);
            assert!(r.rhs > r.lhs);
        }
    }

    #[test]
    fn bound_lipschitz_examples() {
        // √x is Hölder-1/2 with constant 1
        let p = params(20, 1.0, 1.0);
        let r = bound_lipschitz(&p, 1.0, 0.5, &FunctionSpec::sqrt(), 1.0, &opts()).unwrap();
        assert!(r.satisfied);
        assert_relative_eq!(r.rhs, (44.0f64 / 171.0).powf(0.25), max_relative = 1e-12);

        let p2 = params(100, 0.1, 0.5);
        let r2 = bound_lipschitz(&p2, 1.0, 0.5, &FunctionSpec::sqrt(), 2.0, &opts()).unwrap();
        assert!(r2.satisfied);

        let c = bound_lipschitz(&p, 1.0, 1.0, &FunctionSpec::constant(4.0), 1.0, &opts()).unwrap();
        assert!(c.lhs <= 1e-10 && c.satisfied);
    }

    #[test]
    fn bound_lipschitz_rejects_bad_class_parameters() {
        let p = params(20, 1.0, 1.0);
        assert!(bound_lipschitz(&p, 0.0, 0.5, &FunctionSpec::sqrt(), 1.0, &opts()).is_err());
        assert!(bound_lipschitz(&p, 1.0, 1.5, &FunctionSpec::sqrt(), 1.0, &opts()).is_err());
    }

    #[test]
    fn bound_c2_values() {
        // Γ vanishes at (α=0.5, ρ=2), leaving Δ/2·norm
        let p = params(10, 0.5, 2.0);
        let delta = p.central_moment_closed(1.0, 2).unwrap();
        assert_relative_eq!(
            bound_c2(&p, 2.0, 1.0).unwrap(),
            delta,
            max_relative = 1e-13
        );
        assert_eq!(bound_c2(&p, 0.0, 1.0).unwrap(), 0.0);
        // Γ = 2/19 and Δ = 44/171 at (n=20, α=1, ρ=1, x=1)
        let classical = params(20, 1.0, 1.0);
        assert_relative_eq!(
            bound_c2(&classical, 1.0, 1.0).unwrap(),
            2.0 / 19.0 + 22.0 / 171.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn kfunctional_argument_positive() {
        let p = params(20, 0.0, 5.0);
        // Γ is negative here; the argument must still be a valid square
        assert!(p.central_moment_closed(2.0, 1).unwrap() < 0.0);
        let arg = kfunctional_argument(&p, 2.0).unwrap();
        assert!(arg > 0.0);
        let iv = default_bound_interval(&p, 2.0, 1001).unwrap();
        let w2 = second_modulus(&FunctionSpec::ratio(), &iv, arg.sqrt());
        assert!(w2.is_finite() && w2 >= 0.0);
    }

    #[test]
    fn voronovskaja_limit_exact_cases() {
        assert_relative_eq!(voronovskaja_limit(1.0, 1.0, 1.0, 2.0, 2.0), 8.0);
        assert_relative_eq!(voronovskaja_limit(0.3, 2.0, 0.0, 7.5, -3.0), 7.5);
        assert_abs_diff_eq!(voronovskaja_limit(0.5, 2.0, 1.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn voronovskaja_sequence_linear_target_is_constant() {
        // (nρ-1)(A(e1;1) - 1) = x(1 - 2ρ(1-α)) + 1 = 2 at α=1, ρ=1, x=1
        let r = voronovskaja_sequence(
            1.0,
            1.0,
            &FunctionSpec::monomial(1),
            1.0,
            &[10, 40, 160],
            &opts(),
        )
        .unwrap();
        for v in r {
            assert_abs_diff_eq!(v, 2.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn voronovskaja_sequence_quadratic_target() {
        // closed form 8n/(n-2) at α=1, ρ=1, x=1
        let tight = EvalOptions {
            series_eps: 1e-12,
            ..EvalOptions::default()
        };
        let r =
            voronovskaja_sequence(1.0, 1.0, &FunctionSpec::monomial(2), 1.0, &[100], &tight)
                .unwrap();
        assert_relative_eq!(r[0], 800.0 / 98.0, max_relative = 1e-8);
    }

    #[test]
    fn voronovskaja_sequence_constant_target_is_zero() {
        let r = voronovskaja_sequence(
            0.4,
            1.0,
            &FunctionSpec::constant(3.0),
            1.0,
            &[20, 50],
            &opts(),
        )
        .unwrap();
        for v in r {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn weighted_gap_identity_is_zero() {
        let p = params(20, 0.5, 1.0);
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        assert_eq!(weighted_gap(&p, 0, &grid).unwrap(), 0.0);
    }

    #[test]
    fn weighted_gap_decreases_with_n() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        for i in [1u32, 2] {
            let small = weighted_gap(&params(20, 1.0, 1.0), i, &grid).unwrap();
            let large = weighted_gap(&params(200, 1.0, 1.0), i, &grid).unwrap();
            assert!(large < small);
        }
    }

    #[test]
    fn weighted_gap_e1_closed_form() {
        // |A(e1;x) - x| = (x+1)/(n-1) at α=1, ρ=1; the weighted sup over the
        // grid lands near x = √2 - 1
        let p = params(20, 1.0, 1.0);
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let gap = weighted_gap(&p, 1, &grid).unwrap();
        let expected = grid
            .iter()
            .map(|&x| (x + 1.0) / 19.0 / (1.0 + x * x))
            .fold(0.0f64, f64::max);
        assert_relative_eq!(gap, expected, max_relative = 1e-13);
    }

    #[test]
    fn default_interval_spans_operator_mass() {
        let p = params(20, 0.5, 1.0);
        let iv = default_bound_interval(&p, 1.0, 101).unwrap();
        assert_eq!(iv.lo(), 0.0);
        let delta = p.central_moment_closed(1.0, 2).unwrap();
        assert_relative_eq!(iv.hi(), 1.0 + 3.0 * delta.sqrt() + 1.0, max_relative = 1e-14);
    }
}
