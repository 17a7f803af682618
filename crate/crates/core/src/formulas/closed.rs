use rug::{Integer, Rational};

use super::chain::chain_node;
use super::family::{Parity, SeriesFamily};
use crate::error::{Error, Result};
use crate::exactval::{beta_exact, gamma_exact, ExactSum, ExactValue};

fn r(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

fn is_half_multiple(x: &Rational) -> bool {
    *x.denom() == 1 || *x.denom() == 2
}

fn check_state(alpha: &Rational, beta: &Rational, min: &Rational, what: &str) -> Result<()> {
    if !is_half_multiple(alpha) || !is_half_multiple(beta) {
        return Err(Error::domain(format!(
            "{what} needs integer or half-integer α, β, got ({alpha}, {beta})"
        )));
    }
    if alpha < min || beta < min {
        return Err(Error::domain(format!(
            "{what} needs α, β ≥ {min}, got ({alpha}, {beta})"
        )));
    }
    Ok(())
}

fn gamma_q(x: Rational) -> Result<ExactValue> {
    gamma_exact(&x)
}

/// `[Γ(α+β+3) / (Γ(α+2) Γ(β+1))]²`.
fn shape_ratio_sq(alpha: &Rational, beta: &Rational) -> Result<ExactValue> {
    let num = gamma_q(Rational::from(alpha + beta) + 3u32)?;
    let den = gamma_q(Rational::from(alpha + 2u32))? * gamma_q(Rational::from(beta + 1u32))?;
    num.checked_div(&den)?.powi(2)
}

/// `Σ_{n≥1} n² F_n²`, the Parseval sum of the state `(α, β)`:
///
/// ```text
/// (1/2π²) [Γ(α+β+3) / (Γ(α+2)Γ(β+1))]² B(2α+1, 2β+1)
/// ```
pub fn parseval_sum_closed(alpha: &Rational, beta: &Rational) -> Result<ExactValue> {
    check_state(alpha, beta, &r(1, 2), "parseval_sum_closed")?;
    let b = beta_exact(
        &(Rational::from(alpha * 2u32) + 1u32),
        &(Rational::from(beta * 2u32) + 1u32),
    )?;
    Ok(shape_ratio_sq(alpha, beta)? * b * ExactValue::new(r(1, 2), -4))
}

/// `Σ_{n≥1} n⁴ F_n²` for `α, β > 1/2`:
///
/// ```text
/// αβ B(2α−1, 2β−1) / (2π⁴ (2α+2β−1) B²(α+2, β+1))
/// ```
pub fn n4_sum_closed(alpha: &Rational, beta: &Rational) -> Result<ExactValue> {
    check_state(alpha, beta, &r(1, 1), "n4_sum_closed")?;
    let two_a = Rational::from(alpha * 2u32);
    let two_b = Rational::from(beta * 2u32);
    let b1 = beta_exact(&(two_a.clone() - 1u32), &(two_b.clone() - 1u32))?;
    let b2 = beta_exact(&(alpha.clone() + 2u32), &(beta.clone() + 1u32))?.powi(2)?;
    let lin = Rational::from(alpha * beta) / (Rational::from(&two_a + &two_b) - 1u32) / 2u32;
    (ExactValue::new(lin, -8) * b1).checked_div(&b2)
}

/// `Σ_{n≥1} n⁶ F_n²` for `α, β > 3/2`:
///
/// ```text
/// 3αβ(β−1) Γ(2α−1) Γ(2β−3)
/// ───────────────────────────────────────────────────── · [Γ(α+β+3) / (Γ(α+2)Γ(β+1))]²
/// 4π⁶ (2α−3)(2α+2β−5)(2α+2β−3) Γ(2α+2β−6)
/// ```
pub fn n6_sum_closed(alpha: &Rational, beta: &Rational) -> Result<ExactValue> {
    check_state(alpha, beta, &r(2, 1), "n6_sum_closed")?;
    let two_a = Rational::from(alpha * 2u32);
    let two_b = Rational::from(beta * 2u32);
    let s = Rational::from(&two_a + &two_b);
    let num = Rational::from(alpha * beta) * (beta.clone() - 1u32) * 3u32;
    let den = (two_a.clone() - 3u32) * (s.clone() - 5u32) * (s.clone() - 3u32) * 4u32;
    let gammas = (gamma_q(two_a - 1u32)? * gamma_q(two_b - 3u32)?).checked_div(&gamma_q(s - 6u32)?)?;
    Ok(ExactValue::new(num / den, -12) * gammas * shape_ratio_sq(alpha, beta)?)
}

/// `(π/4)^(m/2)` as an exact value.
fn quarter_pi_half_power(m: i32) -> ExactValue {
    // (π/4)^(m/2) = π^(m/2) · 2^(−m)
    let two = ExactValue::int(2);
    ExactValue::pi_pow(m) * two.powi(-m).expect("non-zero")
}

fn factorial(n: u32) -> Rational {
    Rational::from(Integer::from(Integer::factorial(n)))
}

/// `Σ_{n≥1} J_p(nπ/2) J_q(nπ/2) / n^(p+q)` for `p, q ≥ 1`:
///
/// ```text
/// Γ(p+q) (π/4)^(p+q−1/2) / (Γ(p+q+1/2) Γ(p+1/2) Γ(q+1/2)) − (1/2)(π/4)^(p+q) / (p! q!)
/// ```
pub fn nis1_closed(p: u32, q: u32) -> Result<ExactSum> {
    if p == 0 || q == 0 {
        return Err(Error::domain(format!("nis1 needs p, q ≥ 1, got ({p}, {q})")));
    }
    let m = (p + q) as i64;
    let half = r(1, 2);
    let first = gamma_q(Rational::from(m))? * quarter_pi_half_power(2 * m as i32 - 1);
    let den = gamma_q(Rational::from(m) + &half)?
        * gamma_q(Rational::from(p) + &half)?
        * gamma_q(Rational::from(q) + &half)?;
    let first = first.checked_div(&den)?;
    let second = quarter_pi_half_power(2 * m as i32)
        * ExactValue::rational(half / (factorial(p) * factorial(q)) );
    Ok(ExactSum::from_terms([first, -second]))
}

/// `Σ_{n≥1} J_p(nπ/2) J_q(nπ/2) / n^(p+q−2)` for `p, q ≥ 1`, `p + q > 2`:
///
/// ```text
/// (π/4)^(p+q−5/2) Γ(p+q−2) / (2 Γ(p−1/2) Γ(q−1/2) Γ(p+q−1/2))
/// ```
pub fn nis2_closed(p: u32, q: u32) -> Result<ExactValue> {
    if p == 0 || q == 0 || p + q <= 2 {
        return Err(Error::domain(format!(
            "nis2 needs p, q ≥ 1 and p + q > 2, got ({p}, {q})"
        )));
    }
    let m = (p + q) as i64;
    let half = r(1, 2);
    let num = quarter_pi_half_power(2 * m as i32 - 5) * gamma_q(Rational::from(m - 2))?;
    let den = gamma_q(Rational::from(p) - &half)?
        * gamma_q(Rational::from(q) - &half)?
        * gamma_q(Rational::from(m) - &half)?
        * ExactValue::int(2);
    num.checked_div(&den)
}

/// Cancels parameters shared by the numerator and denominator lists of a
/// `pFq`, as a multiset, and sorts what remains.
pub fn pfq_reduce(uppers: &[Rational], lowers: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut ups: Vec<Rational> = uppers.to_vec();
    let mut lows: Vec<Rational> = Vec::with_capacity(lowers.len());
    for b in lowers {
        if let Some(i) = ups.iter().position(|a| a == b) {
            ups.remove(i);
        } else {
            lows.push(b.clone());
        }
    }
    ups.sort();
    lows.sort();
    (ups, lows)
}

/// Rewrites a weighted sum over an equal-exponent state as a Bessel series.
///
/// For `α = β = p − 1/2`, `F_n` reduces to a multiple of `J_p(nπ/2)/n^(p+1)` on
/// odd `n` and vanishes on even `n`, so
///
/// ```text
/// Σ_{k≥0} J_p²((2k+1)π/2)/(2k+1)^(2p+2−w) = π^(2p+1) B²(α+2, α+1) / Γ²(p+1/2) · Σ n^w F_n²
/// ```
///
/// Returns the Bessel family and its value for `w ∈ {2, 4, 6}`.
pub fn equal_state_bessel_value(p: u32, w: u32) -> Result<(SeriesFamily, ExactValue)> {
    if p == 0 || w > 2 * p + 1 {
        return Err(Error::domain(format!(
            "no Bessel form for p = {p}, w = {w}"
        )));
    }
    let alpha = Rational::from(p) - r(1, 2);
    let hyper = match w {
        2 => parseval_sum_closed(&alpha, &alpha)?,
        4 => n4_sum_closed(&alpha, &alpha)?,
        6 => n6_sum_closed(&alpha, &alpha)?,
        _ => return Err(Error::Unsupported(format!("weight {w} has no closed form"))),
    };
    let b = beta_exact(&(alpha.clone() + 2u32), &(alpha.clone() + 1u32))?.powi(2)?;
    let g = gamma_q(Rational::from(p) + r(1, 2))?.powi(2)?;
    let value = (hyper * ExactValue::pi_pow(2 * (2 * p as i32 + 1)) * b).checked_div(&g)?;
    let family = SeriesFamily::OddBesselSq { p, e: 2 * p + 2 - w };
    Ok((family, value))
}

/// Exact value from the weighted hypergeometric sums, when one is known.
fn hyper_closed(alpha: &Rational, beta: &Rational, w: u32) -> Result<Option<ExactValue>> {
    if !is_half_multiple(alpha) || !is_half_multiple(beta) {
        return Ok(None);
    }
    Ok(match w {
        2 => Some(parseval_sum_closed(alpha, beta)?),
        4 => Some(n4_sum_closed(alpha, beta)?),
        6 => Some(n6_sum_closed(alpha, beta)?),
        _ => None,
    })
}

/// Bessel family values reachable without the all-n complement.
fn direct_bessel(f: &SeriesFamily) -> Result<Option<ExactSum>> {
    if let Some(node) = chain_node(f) {
        return Ok(Some(node.value.clone().into()));
    }
    match *f {
        SeriesFamily::AllNBesselProd { p, q, e } => {
            if e == p + q {
                Ok(Some(nis1_closed(p, q)?))
            } else if e + 2 == p + q {
                Ok(Some(nis2_closed(p, q)?.into()))
            } else {
                Ok(None)
            }
        }
        SeriesFamily::OddBesselSq { p, e } if e + 4 >= 2 * p && e <= 2 * p && e % 2 == 0 => {
            let w = 2 * p + 2 - e;
            match equal_state_bessel_value(p, w) {
                Ok((_, v)) => Ok(Some(v.into())),
                Err(Error::Domain(_)) => Ok(None),
                Err(err) => Err(err),
            }
        }
        _ => Ok(None),
    }
}

/// The exact value of a series, or `None` when no closed form is known.
///
/// Odd and even Bessel kinds are looked up in the solved chain, then in the
/// equal-state conversions, then recovered from the all-n sums as
/// `all − other parity`.
pub fn closed_form(f: &SeriesFamily) -> Result<Option<ExactSum>> {
    f.validate()?;
    let f = f.canonical();
    if let SeriesFamily::HyperSq { alpha, beta, w } = &f {
        return Ok(hyper_closed(alpha, beta, *w)?.map(ExactSum::from));
    }
    if let Some(v) = direct_bessel(&f)? {
        return Ok(Some(v));
    }
    let (parity, p, q, e) = f.bessel_parts().expect("bessel kind");
    let other = match parity {
        Parity::Odd => Parity::Even,
        Parity::Even => Parity::Odd,
        Parity::All => return Ok(None),
    };
    let all = direct_bessel(&SeriesFamily::AllNBesselProd { p, q, e })?;
    let rest = direct_bessel(&SeriesFamily::bessel(other, p, q, e))?;
    Ok(match (all, rest) {
        (Some(a), Some(b)) => Some(a - b),
        _ => None,
    })
}
