//! Decimal renderings of big floats for reports and CSV output.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer};

/// Fixed-point decimal with exactly `digits` digits after the point, rounded to nearest.
pub fn fixed(x: &Float, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let scale = Integer::from(10).pow(digits as u32);
    let prec = x.prec() + (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8;
    let scaled = Float::with_val(prec, x * &scale);
    let (mut n, _) = scaled
        .to_integer_round(Round::Nearest)
        .expect("finite value");
    let neg = n < 0;
    n.abs_mut();
    let mut s = n.to_string();
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    let (int_part, frac_part) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Scientific notation with `digits` significant digits, e.g. `3.333e-1`.
pub fn scientific(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}
