//! Target functions the operators are applied to.

use std::fmt;
use std::sync::Arc;

/// Built-in non-polynomial targets defined on [0, ∞).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedFunction {
    /// √x
    Sqrt,
    /// e^{-x}
    ExpNeg,
    /// x/(1+x)
    Ratio,
}

impl NamedFunction {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            NamedFunction::Sqrt => x.sqrt(),
            NamedFunction::ExpNeg => (-x).exp(),
            NamedFunction::Ratio => x / (1.0 + x),
        }
    }

    fn derivative1(self, x: f64) -> f64 {
        match self {
            NamedFunction::Sqrt => 0.5 / x.sqrt(),
            NamedFunction::ExpNeg => -(-x).exp(),
            NamedFunction::Ratio => 1.0 / ((1.0 + x) * (1.0 + x)),
        }
    }

    fn derivative2(self, x: f64) -> f64 {
        match self {
            NamedFunction::Sqrt => -0.25 / (x * x.sqrt()),
            NamedFunction::ExpNeg => (-x).exp(),
            NamedFunction::Ratio => -2.0 / ((1.0 + x) * (1.0 + x) * (1.0 + x)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedFunction::Sqrt => "sqrt",
            NamedFunction::ExpNeg => "expneg",
            NamedFunction::Ratio => "ratio",
        }
    }
}

/// A target function: polynomial by ascending coefficients, a named
/// builtin, or an opaque evaluator supplied by the caller.
///
/// Polynomials take the exact Beta-ratio integration path inside the
/// operator; everything else is integrated by adaptive quadrature.
#[derive(Clone)]
pub enum FunctionSpec {
    /// Coefficients in ascending powers: `c[0] + c[1] x + c[2] x^2 + ...`
    Polynomial(Vec<f64>),
    Named(NamedFunction),
    /// Arbitrary evaluator. Must be defined on [0, ∞) and grow slower
    /// than t^(n*rho - 1) for the inner integrals to exist.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Polynomial(c) => write!(f, "Polynomial({c:?})"),
            FunctionSpec::Named(n) => write!(f, "Named({n:?})"),
            FunctionSpec::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            FunctionSpec::Named(n) => write!(f, "{}", n.name()),
            FunctionSpec::Custom(_) => write!(f, "custom"),
        }
    }
}

impl FunctionSpec {
    /// The monomial e_i(x) = x^i.
    pub fn monomial(i: usize) -> Self {
        let mut c = vec![0.0; i + 1];
        c[i] = 1.0;
        FunctionSpec::Polynomial(c)
    }

    pub fn constant(v: f64) -> Self {
        FunctionSpec::Polynomial(vec![v])
    }

    pub fn sqrt() -> Self {
        FunctionSpec::Named(NamedFunction::Sqrt)
    }

    pub fn expneg() -> Self {
        FunctionSpec::Named(NamedFunction::ExpNeg)
    }

    pub fn ratio() -> Self {
        FunctionSpec::Named(NamedFunction::Ratio)
    }

    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        FunctionSpec::Custom(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            FunctionSpec::Polynomial(c) => {
                let mut v = 0.0;
                for &ci in c.iter().rev() {
                    v = v * x + ci;
                }
                v
            }
            FunctionSpec::Named(n) => n.eval(x),
            FunctionSpec::Custom(f) => f(x),
        }
    }

    /// Degree after dropping trailing zero coefficients; `None` for
    /// non-polynomial targets.
    pub fn degree(&self) -> Option<usize> {
        match self {
            FunctionSpec::Polynomial(c) => {
                Some(c.iter().rposition(|&v| v != 0.0).unwrap_or(0))
            }
            _ => None,
        }
    }

    /// Analytic first derivative at `x`; `None` for opaque evaluators.
    pub fn derivative1(&self, x: f64) -> Option<f64> {
        match self {
            FunctionSpec::Polynomial(c) => {
                let mut v = 0.0;
                for (i, &ci) in c.iter().enumerate().skip(1).rev() {
                    v = v * x + i as f64 * ci;
                }
                Some(v)
            }
            FunctionSpec::Named(n) => Some(n.derivative1(x)),
            FunctionSpec::Custom(_) => None,
        }
    }

    /// Analytic second derivative at `x`; `None` for opaque evaluators.
    pub fn derivative2(&self, x: f64) -> Option<f64> {
        match self {
            FunctionSpec::Polynomial(c) => {
                let mut v = 0.0;
                for (i, &ci) in c.iter().enumerate().skip(2).rev() {
                    v = v * x + (i * (i - 1)) as f64 * ci;
                }
                Some(v)
            }
            FunctionSpec::Named(n) => Some(n.derivative2(x)),
            FunctionSpec::Custom(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_eval_and_derivatives() {
        // 2 + 5x + x^2
        let f = FunctionSpec::Polynomial(vec![2.0, 5.0, 1.0]);
        assert_relative_eq!(f.eval(3.0), 26.0);
        assert_relative_eq!(f.derivative1(3.0).unwrap(), 11.0);
        assert_relative_eq!(f.derivative2(3.0).unwrap(), 2.0);
        assert_eq!(f.degree(), Some(2));
    }

    #[test]
    fn degree_ignores_trailing_zeros() {
        let f = FunctionSpec::Polynomial(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(f.degree(), Some(1));
        assert_eq!(FunctionSpec::Polynomial(vec![0.0]).degree(), Some(0));
    }

    #[test]
    fn named_functions() {
        assert_relative_eq!(FunctionSpec::sqrt().eval(0.25), 0.5);
        assert_eq!(FunctionSpec::sqrt().eval(0.0), 0.0);
        assert_relative_eq!(FunctionSpec::expneg().eval(1.0), (-1.0f64).exp());
        assert_relative_eq!(FunctionSpec::ratio().eval(1.0), 0.5);
        assert_relative_eq!(
            FunctionSpec::sqrt().derivative2(1.0).unwrap(),
            -0.25,
            max_relative = 1e-15
        );
    }

    #[test]
    fn custom_evaluator_round_trip() {
        let f = FunctionSpec::custom(|x| x * x + 5.0 * x + 2.0);
        assert_relative_eq!(f.eval(2.0), 16.0);
        assert!(f.degree().is_none());
        assert!(f.derivative1(1.0).is_none());
    }

    #[test]
    fn monomial_constructor() {
        let e2 = FunctionSpec::monomial(2);
        assert_relative_eq!(e2.eval(3.0), 9.0);
        assert_eq!(e2.degree(), Some(2));
    }
}
