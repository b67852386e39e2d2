//! Text forms of exact rationals: `num/den`, integers and decimal literals in,
//! `num/den` and fixed-digit decimals out.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};
use crate::ExactRational;

/// Parses `"num/den"`, a plain integer, or a decimal literal such as
/// `"0.05"` or `"-1.25"`. Decimals are converted exactly through powers of ten.
pub fn parse_rational(text: &str) -> Result<ExactRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(invalid("empty number"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num)?;
        let den = parse_integer(den)?;
        if den.is_zero() {
            return Err(invalid(format!("zero denominator in {text:?}")));
        }
        return Ok(ExactRational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (negative, whole) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if frac.is_empty() && whole.is_empty() {
            return Err(invalid(format!("not a number: {text:?}")));
        }
        if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid(format!("not a number: {text:?}")));
        }
        let digits = format!("{whole}{frac}");
        let mantissa: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| invalid(format!("not a number: {text:?}")))?
        };
        let scale = BigInt::from(10u8).pow(frac.len() as u32);
        let value = ExactRational::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    Ok(ExactRational::from_integer(parse_integer(s)?))
}

fn parse_integer(s: &str) -> Result<BigInt> {
    let s = s.trim();
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid(format!("not an integer: {s:?}")));
    }
    s.parse().map_err(|_| invalid(format!("not an integer: {s:?}")))
}

/// Always `num/den`, so the text parses back to the same value.
pub fn render_rational(x: &ExactRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Fixed-point decimal with `digits` places, rounded half away from zero.
pub fn render_decimal(x: &ExactRational, digits: usize) -> String {
    let scale = BigInt::from(10u8).pow(digits as u32);
    let scaled = x.abs() * ExactRational::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let twice = r * 2u8;
    let rounded = if &twice >= scaled.denom() { q + BigInt::one() } else { q };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}
