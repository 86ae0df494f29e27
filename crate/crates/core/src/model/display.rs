//! Display-only rounding. Halves round away from zero everywhere.

use super::fraction::Fraction;
use super::money::{ExactMoney, Money};
use super::rational::Rational;

fn group_thousands(n: u128) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

fn scaled_round(value: &Rational, decimals: u32) -> i128 {
    let factor = Rational::from_integer(10i128.pow(decimals));
    value
        .checked_mul(&factor)
        .map(|v| v.round_half_away())
        .unwrap_or_else(|_| (value.to_f64() * 10f64.powi(decimals as i32)).round() as i128)
}

fn fixed(units: i128, decimals: u32, grouped: bool) -> String {
    let sign = if units < 0 { "-" } else { "" };
    let abs = units.unsigned_abs();
    let factor = 10u128.pow(decimals);
    let int = abs / factor;
    let int_text = if grouped {
        group_thousands(int)
    } else {
        int.to_string()
    };
    if decimals == 0 {
        format!("{sign}{int_text}")
    } else {
        format!(
            "{sign}{int_text}.{:0width$}",
            abs % factor,
            width = decimals as usize
        )
    }
}

/// `$2,545` style whole-dollar rendering of an exact USD value.
pub fn usd_whole(usd: &Rational) -> String {
    format!("${}", fixed(scaled_round(usd, 0), 0, true))
}

/// `$416.67` style rendering of an exact USD value.
pub fn usd_cents(usd: &Rational) -> String {
    format!("${}", fixed(scaled_round(usd, 2), 2, true))
}

pub fn money_whole(m: Money) -> String {
    usd_whole(&ExactMoney::from(m).usd())
}

pub fn exact_money_whole(m: &ExactMoney) -> String {
    usd_whole(&m.usd())
}

pub fn exact_money_cents(m: &ExactMoney) -> String {
    usd_cents(&m.usd())
}

/// Whole-dollar rendering of a binary float (interval endpoints, Monte Carlo output).
pub fn usd_whole_f64(usd: f64) -> String {
    let rounded = usd.round();
    let sign = if rounded < 0.0 { "-" } else { "" };
    format!("{sign}${}", group_thousands(rounded.abs() as u128))
}

/// `19.6%`
pub fn percent(f: &Fraction) -> String {
    percent_of(&f.as_rational())
}

pub fn percent_of(r: &Rational) -> String {
    let hundred = Rational::from_integer(100);
    let pct = r.checked_mul(&hundred).unwrap_or(*r);
    format!("{}%", fixed(scaled_round(&pct, 1), 1, false))
}

/// One decimal place, e.g. `5.1`, `8.0`.
pub fn one_decimal(r: &Rational) -> String {
    fixed(scaled_round(r, 1), 1, false)
}

pub fn decimals(r: &Rational, places: u32) -> String {
    fixed(scaled_round(r, places), places, false)
}

/// Six significant digits, as used for statistical summaries.
pub fn six_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let places = (5 - magnitude).max(0) as usize;
    let scale = 10f64.powi(5 - magnitude);
    let rounded = (x * scale).round() / scale;
    format!("{rounded:.places$}")
}
