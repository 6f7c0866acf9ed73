//! Flag-value parsers.

use abd_core::FunctionSpec;

/// Accepts `sqrt`, `expneg`, `ratio`, `e<k>` monomials, and
/// `poly:c0,c1,...` with ascending-power coefficients.
pub fn parse_function(raw: &str) -> Result<FunctionSpec, String> {
    match raw {
        "sqrt" => return Ok(FunctionSpec::sqrt()),
        "expneg" => return Ok(FunctionSpec::expneg()),
        "ratio" => return Ok(FunctionSpec::ratio()),
        _ => {}
    }
    if let Some(power) = raw.strip_prefix('e') {
        if let Ok(i) = power.parse::<usize>() {
            if i > 8 {
                return Err(format!("monomial degree {i} is out of range (max 8)"));
            }
            return Ok(FunctionSpec::monomial(i));
        }
    }
    if let Some(list) = raw.strip_prefix("poly:") {
        let coeffs: Result<Vec<f64>, _> =
            list.split(',').map(|c| c.trim().parse::<f64>()).collect();
        return match coeffs {
            Ok(c) if !c.is_empty() && c.iter().all(|v| v.is_finite()) => {
                Ok(FunctionSpec::Polynomial(c))
            }
            _ => Err(format!("cannot parse polynomial coefficients from {list:?}")),
        };
    }
    Err(format!(
        "unknown function {raw:?}; expected sqrt, expneg, ratio, e<k>, or poly:c0,c1,..."
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_and_monomial_forms() {
        assert!(matches!(parse_function("sqrt"), Ok(FunctionSpec::Named(_))));
        let e2 = parse_function("e2").unwrap();
        assert_eq!(e2.degree(), Some(2));
        assert_eq!(e2.eval(3.0), 9.0);
    }

    #[test]
    fn polynomial_form() {
        let f = parse_function("poly:2,5,1").unwrap();
        assert_eq!(f.eval(1.0), 8.0);
        assert!(parse_function("poly:").is_err());
        assert!(parse_function("poly:1,abc").is_err());
    }

    #[test]
    fn rejects_unknown_names() {
        assert!(parse_function("cos").is_err());
        assert!(parse_function("e9").is_err());
    }
}
