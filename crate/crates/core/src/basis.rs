//! The two basis families: generalized Baskakov weights p_{n,k}^α(x) and
//! Durrmeyer Beta-kernel densities μ_{n,k}^ρ(t).
//!
//! The weight of index k distributes the x^{k-1} prefactor into the bracket,
//! which removes the removable singularity at x = 0 and exposes the signed
//! three-term structure
//!
//!   p_{n,k}^α(x) = α·l_{n,k}(x) + (1-α)(1+x)·l_{n,k}(x) - (1-α)x·l_{n,k-2}(x)
//!
//! with l_{n,k}(x) = C(n+k-1,k) x^k / (1+x)^{n+k} the classical Baskakov
//! weight. Each l is evaluated in log space; the signed combination happens
//! in linear space. For α < 1 the third term makes far-tail weights slightly
//! negative, so series truncation bounds the tail through the dominating
//! positive series c₊·l_k + c₋·l_{k-2} rather than the signed partial sums,
//! which can overshoot 1.

use crate::error::{Error, Result};
use crate::special::{ln_beta, ln_gamma};
use serde::Serialize;

/// The triple (n, α, ρ) indexing one operator instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorParams {
    n: u32,
    alpha: f64,
    rho: f64,
    #[serde(skip)]
    n_rho: f64,
}

impl OperatorParams {
    /// Validates n ≥ 1, α ∈ [0, 1], ρ > 0 and caches n·ρ.
    pub fn new(n: u32, alpha: f64, rho: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "rho must be a positive finite real, got {rho}"
            )));
        }
        Ok(Self {
            n,
            alpha,
            rho,
            n_rho: n as f64 * rho,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn n_rho(&self) -> f64 {
        self.n_rho
    }

    /// Moments of order m exist only for n·ρ > m.
    pub fn require_moment(&self, order: u32) -> Result<()> {
        if self.n_rho > order as f64 {
            Ok(())
        } else {
            Err(Error::MomentExistence {
                order,
                n_rho: self.n_rho,
            })
        }
    }

    /// Coefficients (c₊, c₋) of the dominating split
    /// p_k = c₊·l_k − c₋·l_{k-2}, with c₊ − c₋ = 1.
    pub(crate) fn weight_split(&self, x: f64) -> (f64, f64) {
        let cp = self.alpha + (1.0 - self.alpha) * (1.0 + x);
        let cm = (1.0 - self.alpha) * x;
        (cp, cm)
    }

    /// Classical Baskakov weight l_{n,k}(x) = C(n+k-1,k) x^k/(1+x)^{n+k}.
    pub fn classical_weight(&self, k: usize, x: f64) -> f64 {
        if x == 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        let nf = self.n as f64;
        let kf = k as f64;
        let ln_c = ln_gamma(nf + kf) - ln_gamma(kf + 1.0) - ln_gamma(nf);
        (ln_c + kf * x.ln() - (nf + kf) * x.ln_1p()).exp()
    }

    /// Generalized basis weight p_{n,k}^α(x), defined for x ≥ 0.
    ///
    /// Reduces to `classical_weight` at α = 1.
    pub fn weight(&self, k: usize, x: f64) -> Result<f64> {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::Domain(format!(
                "basis weights are defined for x >= 0, got {x}"
            )));
        }
        let (cp, cm) = self.weight_split(x);
        let mut v = cp * self.classical_weight(k, x);
        if k >= 2 {
            v -= cm * self.classical_weight(k - 2, x);
        }
        Ok(v)
    }

    /// Beta-kernel density μ_{n,k}^ρ(t) = t^{kρ} / (B(kρ+1, nρ)(1+t)^{nρ+kρ+1}).
    pub fn kernel_density(&self, k: usize, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!(
                "kernel density is defined for t >= 0, got {t}"
            )));
        }
        let k_rho = k as f64 * self.rho;
        let ln_b = ln_beta(k_rho + 1.0, self.n_rho);
        if t == 0.0 {
            // t^{kρ} kills every index except k = 0, where the density is nρ.
            return Ok(if k == 0 { (-ln_b).exp() } else { 0.0 });
        }
        Ok((k_rho * t.ln() - ln_b - (self.n_rho + k_rho + 1.0) * t.ln_1p()).exp())
    }

    /// Exact m-th raw moment of the Beta kernel,
    /// ∫₀^∞ t^m μ_{n,k}^ρ(t) dt = ∏_{j=0}^{m-1} (kρ+1+j)/(nρ-1-j).
    pub fn kernel_raw_moment(&self, k: usize, m: u32) -> Result<f64> {
        self.require_moment(m)?;
        let k_rho = k as f64 * self.rho;
        let mut v = 1.0;
        for j in 0..m {
            let jf = j as f64;
            v *= (k_rho + 1.0 + jf) / (self.n_rho - 1.0 - jf);
        }
        Ok(v)
    }

    /// Smallest K whose dominating tail bound
    /// c₊(1−Λ_K) + c₋(1−Λ_{K-2}), Λ_K = Σ_{k≤K} l_{n,k}(x),
    /// drops to `eps`. This guarantees |Σ_{k≤K} p_k − 1| ≤ Σ_{k>K}|p_k| ≤ eps,
    /// so the partial sum of the signed weights is within eps of 1. At α = 1
    /// it coincides with the first crossing Λ_K ≥ 1 − eps.
    pub fn truncation_index(&self, x: f64, eps: f64, k_max: usize) -> Result<usize> {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::Domain(format!(
                "truncation index is defined for x >= 0, got {x}"
            )));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "truncation tolerance must lie in (0, 1), got {eps}"
            )));
        }
        let (cp, cm) = self.weight_split(x);
        let mut weights = ClassicalWeightIter::new(self, x);
        let mut lambda = 0.0; // Σ_{j<=k} l_j
        let mut lambda_m2 = 0.0; // Σ_{j<=k-2} l_j
        let mut last = [0.0f64; 2]; // l_{k-1}, l_k
        let mut signed_sum = 0.0;
        for k in 0..=k_max {
            let l = weights.next_weight();
            // entering iteration k, last = [l_{k-2}, l_{k-1}]
            if k >= 2 {
                lambda_m2 += last[0];
            }
            signed_sum += cp * l - cm * last[0];
            last[0] = last[1];
            last[1] = l;
            lambda += l;
            let tail = cp * (1.0 - lambda) + cm * (1.0 - lambda_m2);
            if tail <= eps {
                return Ok(k);
            }
        }
        let tail = cp * (1.0 - lambda) + cm * (1.0 - lambda_m2);
        Err(Error::SeriesCapExceeded {
            k_max,
            partial_sum: signed_sum,
            tail_bound: tail,
        })
    }
}

/// Sequential classical weights in log space; one ln per step instead of
/// three ln_gamma calls, with no underflow chaining issues at k = 0 because
/// the iterator switches to the closed form whenever the running value
/// degenerates.
pub(crate) struct ClassicalWeightIter<'a> {
    params: &'a OperatorParams,
    x: f64,
    ln_ratio_base: f64, // ln(x/(1+x))
    ln_l: f64,
    k: usize,
}

impl<'a> ClassicalWeightIter<'a> {
    pub(crate) fn new(params: &'a OperatorParams, x: f64) -> Self {
        let ln_l = if x == 0.0 {
            0.0
        } else {
            -(params.n as f64) * x.ln_1p()
        };
        Self {
            params,
            x,
            ln_ratio_base: if x == 0.0 { f64::NEG_INFINITY } else { x.ln() - x.ln_1p() },
            ln_l,
            k: 0,
        }
    }

    /// l_{n,k}(x) for the current k, then advances.
    pub(crate) fn next_weight(&mut self) -> f64 {
        if self.x == 0.0 {
            let v = if self.k == 0 { 1.0 } else { 0.0 };
            self.k += 1;
            return v;
        }
        let v = self.ln_l.exp();
        let nf = self.params.n as f64;
        let kf = self.k as f64;
        self.ln_l += ((nf + kf) / (kf + 1.0)).ln() + self.ln_ratio_base;
        self.k += 1;
        v
    }
}
