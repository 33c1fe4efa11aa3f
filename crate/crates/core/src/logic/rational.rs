//! Exact probabilities.
//!
//! All probabilities are arbitrary-precision rationals kept in lowest terms.
//! Decimal input is converted exactly (`0.9` becomes `9/10`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct RationalParseError(pub String);

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `a/b`, an integer, or a finite decimal such as `0.125`.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError(text.to_string());
    let t = text.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(num, den);
    Ok(if neg { -value } else { value })
}

/// `a/b`, or just `a` for integers.
pub fn format_exact(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal expansion rounded half-up to `sig_digits` significant digits, with
/// trailing zeros removed. Terminating values shorter than that print exactly.
pub fn format_decimal(value: &Rational, sig_digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let neg = value.is_negative();
    let v = value.abs();
    let ten = BigInt::from(10);
    // exponent e such that 10^e <= v < 10^(e+1)
    let mut e: i64 = 0;
    let mut scaled = v.clone();
    while scaled >= Rational::from_integer(ten.clone()) {
        scaled /= Rational::from_integer(ten.clone());
        e += 1;
    }
    while scaled < Rational::one() {
        scaled *= Rational::from_integer(ten.clone());
        e -= 1;
    }
    // integer with sig_digits digits: round(v * 10^(sig-1-e))
    let shift = sig_digits as i64 - 1 - e;
    let factor = num_traits::pow(ten.clone(), shift.unsigned_abs() as usize);
    let mut m = if shift >= 0 { v * Rational::from_integer(factor) } else { v / Rational::from_integer(factor) };
    m += ratio(1, 2);
    let mut digits = m.floor().to_integer();
    let mut shift = shift;
    // rounding may carry into a new leading digit
    if digits.to_string().len() > sig_digits {
        digits /= &ten;
        shift -= 1;
    }
    let s = digits.to_string();
    let body = if shift <= 0 {
        let zeros = "0".repeat((-shift) as usize);
        format!("{s}{zeros}")
    } else {
        let shift = shift as usize;
        let padded = if s.len() <= shift { format!("{}{}", "0".repeat(shift - s.len() + 1), s) } else { s };
        let (ip, fp) = padded.split_at(padded.len() - shift);
        let fp = fp.trim_end_matches('0');
        if fp.is_empty() {
            ip.to_string()
        } else {
            format!("{ip}.{fp}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
