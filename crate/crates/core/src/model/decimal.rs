//! Fixed-point decimal literal parsing shared by money, hours and rates.

use crate::error::{Error, Result};

/// Parses an unsigned decimal literal into an integer count of `10^-scale` units.
///
/// Accepts `123`, `123.45` and a leading `+`. Rejects exponents, empty parts
/// around the point, and more than `scale` fractional digits.
pub(crate) fn parse_scaled(literal: &str, scale: u32) -> Result<i128> {
    let text = literal.trim();
    let malformed = || Error::MalformedDecimal(literal.to_string());
    let (negative, body) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    if let Some(f) = frac_part {
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        if f.len() as u32 > scale {
            return Err(Error::TooManyFractionalDigits {
                literal: literal.to_string(),
                max: scale,
            });
        }
    }
    if negative {
        return Err(Error::Negative(literal.to_string()));
    }
    let overflow = || Error::Overflow("decimal literal");
    let mut value: i128 = 0;
    for b in int_part.bytes() {
        value = value
            .checked_mul(10)
            .and_then(|v| v.checked_add(i128::from(b - b'0')))
            .ok_or_else(overflow)?;
    }
    let frac = frac_part.unwrap_or("");
    for i in 0..scale as usize {
        let digit = frac.as_bytes().get(i).map_or(0, |b| b - b'0');
        value = value
            .checked_mul(10)
            .and_then(|v| v.checked_add(i128::from(digit)))
            .ok_or_else(overflow)?;
    }
    Ok(value)
}

/// Renders `units * 10^-scale` with trailing fractional zeros removed.
pub(crate) fn format_scaled(units: i128, scale: u32) -> String {
    let factor = 10i128.pow(scale);
    let sign = if units < 0 { "-" } else { "" };
    let abs = units.unsigned_abs();
    let int = abs / factor as u128;
    let frac = abs % factor as u128;
    if frac == 0 {
        return format!("{sign}{int}");
    }
    let mut digits = format!("{frac:0width$}", width = scale as usize);
    while digits.ends_with('0') {
        digits.pop();
    }
    format!("{sign}{int}.{digits}")
}
