//! Text forms accepted for scalars: decimals (`5.2`, `-1e-3`), rationals (`36/7`),
//! and π² fractions as produced by [`Scalar::render`](super::Scalar::render).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{Poly, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("cannot parse scalar {input:?}: {reason}")]
pub struct ScalarParseError {
    pub input: String,
    pub reason: String,
}

fn err(input: &str, reason: impl Into<String>) -> ScalarParseError {
    ScalarParseError {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// Exact rational value of a decimal literal with optional exponent.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let shift = exp - frac_part.len() as i64;
    let ten = BigRational::from_integer(10.into());
    let p = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= p;
    } else {
        value /= p;
    }
    Some(if neg { -value } else { value })
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_decimal(q)?;
            if q.is_zero() {
                return None;
            }
            Some(parse_decimal(p)? / q)
        }
        None => parse_decimal(s),
    }
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

/// Polynomial in π² from terms like `35+24*pi^2-3*pi^4` or `pi^2`.
fn parse_pi_poly(s: &str) -> Option<Poly> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        let c = bytes[i];
        let prev = bytes[i - 1];
        if (c == b'+' || c == b'-') && prev != b'e' && prev != b'E' && prev != b'^' && prev != b'*' {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut coeffs: Vec<BigRational> = Vec::new();
    for term in terms {
        if term.is_empty() {
            return None;
        }
        let (coef, power) = match term.find("pi") {
            Some(idx) => {
                let head = term[..idx].trim_end_matches('*');
                let exp_part = term[idx + 2..].strip_prefix('^').unwrap_or("1");
                let e: usize = exp_part.parse().ok()?;
                if !e.is_multiple_of(2) {
                    return None;
                }
                let coef = match head {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    h => parse_rational(h)?,
                };
                (coef, e / 2)
            }
            None => (parse_rational(term)?, 0),
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigRational::zero());
        }
        coeffs[power] += coef;
    }
    Some(Poly::from_coeffs(coeffs))
}

pub fn parse_scalar(input: &str) -> Result<Scalar, ScalarParseError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(err(input, "empty"));
    }
    if s.contains("pi") {
        let (num, den) = match s.find(")/(") {
            Some(i) => (&s[..i + 1], &s[i + 2..]),
            None => (s, "1"),
        };
        let num = parse_pi_poly(strip_parens(num)).ok_or_else(|| err(input, "bad π² numerator"))?;
        let den = parse_pi_poly(strip_parens(den)).ok_or_else(|| err(input, "bad π² denominator"))?;
        if den.is_zero() {
            return Err(err(input, "zero denominator"));
        }
        return Ok(Scalar::from_polys(num, den));
    }
    parse_rational(s)
        .map(Scalar::Rational)
        .ok_or_else(|| err(input, "expected decimal, p/q, or π² fraction"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_scalar("5.2").unwrap(), Scalar::ratio(26, 5));
        assert_eq!(parse_scalar("-1e-3").unwrap(), Scalar::ratio(-1, 1000));
        assert_eq!(parse_scalar("36/7").unwrap(), Scalar::ratio(36, 7));
        assert_eq!(parse_scalar(".5").unwrap(), Scalar::ratio(1, 2));
    }

    #[test]
    fn pi_forms_round_trip() {
        let v = Scalar::pi2_linear(0, 144, 35, 24);
        assert_eq!(parse_scalar(&v.render()).unwrap(), v);
        let w = parse_scalar("(70+224*pi^2)/(35+32*pi^2)").unwrap();
        assert_eq!(w, Scalar::pi2_linear(70, 224, 35, 32));
        let q = parse_scalar("(8*pi^2+3*pi^4)/(1225+1960*pi^2+768*pi^4)").unwrap();
        assert_eq!(parse_scalar(&q.render()).unwrap(), q);
        assert_eq!(parse_scalar("pi^2").unwrap(), Scalar::pi_squared());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("abc").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("pi^3").is_err());
        assert!(parse_scalar("").is_err());
    }
}
