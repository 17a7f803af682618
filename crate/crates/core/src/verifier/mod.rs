//! Brute-force summation with tail bounds, and exact-versus-numeric certification.

mod report;
mod tail;

use std::fmt;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

pub use report::{render_results, render_table, Format, TableRow};
pub use tail::{fitted_tail, landau_pair_constant, landau_tail, power_tail, HEURISTIC_SAFETY, LANDAU_B};

use crate::error::{Error, Result};
use crate::exactval::{beta_exact, gamma_exact, ExactSum, ExactValue};
use crate::formulas::{closed_form, n4_sum_closed, n6_sum_closed, Parity, SeriesFamily};
use crate::specfun::{bessel_j_half_pi_grid, block_tree_sum, pfq_pi_square_grid, PrecisionContext};
use crate::spectral::{coeffs, energy_moment_integral, energy_moment_quadrature, normalization_constant, CoeffRoute, WaveState};

/// Default number of series terms.
pub const DEFAULT_TERMS: usize = 2000;

/// Fewest terms a summation accepts.
pub const MIN_TERMS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    NoExact,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "Pass",
            Verdict::Fail => "Fail",
            Verdict::NoExact => "NoExact",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Rigorous,
    Heuristic,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Rigorous => "rigorous",
            BoundKind::Heuristic => "heuristic",
        })
    }
}

/// A partial sum with a bound on what was left out.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSum {
    pub partial: Float,
    pub tail_bound: Float,
    pub bound_kind: BoundKind,
    /// Rounding allowance for the partial sum itself.
    pub error_budget: Float,
    pub terms: usize,
}

/// The outcome of comparing a brute-force sum with an exact value.
#[derive(Clone, Debug, PartialEq)]
pub struct SumResult {
    /// Family grammar string, or the name of a composite check.
    pub family: String,
    pub exact: Option<ExactSum>,
    pub numeric: Float,
    pub terms: usize,
    pub tail_bound: Float,
    pub error_budget: Float,
    /// `|numeric − exact|`.
    pub deviation: Option<Float>,
    pub relative_error: Option<Float>,
    pub verdict: Verdict,
    pub bound_kind: BoundKind,
}

fn check_terms(n: usize) -> Result<()> {
    if n < MIN_TERMS {
        return Err(Error::domain(format!("need at least {MIN_TERMS} terms, got {n}")));
    }
    Ok(())
}

/// Rounding allowance: every term is within 2^target relative, and so is every addition.
fn budget(terms: &[Float], ctx: &PrecisionContext) -> Float {
    let prec = ctx.working_bits();
    let abs: Vec<Float> = terms.iter().map(|t| Float::with_val(prec, t.abs_ref())).collect();
    let total = block_tree_sum(&abs, prec);
    let count = terms.len() as u32 + 2;
    Float::with_val(prec, total.max(&Float::with_val(prec, 1))) * count * ctx.target_abs_error()
}

fn summed(terms: Vec<Float>, tail_bound: Float, bound_kind: BoundKind, ctx: &PrecisionContext) -> SeriesSum {
    let prec = ctx.working_bits();
    SeriesSum {
        partial: block_tree_sum(&terms, prec),
        error_budget: budget(&terms, ctx),
        tail_bound,
        bound_kind,
        terms: terms.len(),
    }
}

/// The `n` values of the first `count` terms.
fn indices(parity: Parity, count: usize) -> Vec<u64> {
    let c = count as u64;
    match parity {
        Parity::Odd => (0..c).map(|k| 2 * k + 1).collect(),
        Parity::Even => (1..=c).map(|k| 2 * k).collect(),
        Parity::All => (1..=c).collect(),
    }
}

fn grid_len(parity: Parity, count: usize) -> usize {
    match parity {
        Parity::All => count,
        // Odd and even sums share one grid.
        _ => 2 * count,
    }
}

fn sum_bessel(parity: Parity, p: u32, q: u32, e: u32, count: usize, ctx: &PrecisionContext) -> Result<SeriesSum> {
    let prec = ctx.working_bits();
    let len = grid_len(parity, count);
    let jp = bessel_j_half_pi_grid(p, len, ctx)?;
    let jq = if q == p { jp.clone() } else { bessel_j_half_pi_grid(q, len, ctx)? };
    let terms: Vec<Float> = indices(parity, count)
        .into_par_iter()
        .map(|n| {
            let i = n as usize - 1;
            let d = Integer::from(n).pow(e);
            Float::with_val(prec, &jp[i] * &jq[i]) / d
        })
        .collect();
    let last = *indices(parity, count).last().expect("count ≥ 1");
    let step = if parity == Parity::All { 1 } else { 2 };
    let one = Float::with_val(prec, 1);
    let tail = landau_tail(&one, e, last + step, step, ctx)?;
    Ok(summed(terms, tail, BoundKind::Rigorous, ctx))
}

/// `F_n² = λ J_p²(nπ/2) / n^(2p+2)` on odd `n` for `α = β = p − 1/2`; returns `λ`.
fn equal_state_lambda(p: u32, ctx: &PrecisionContext) -> Result<Float> {
    let alpha = Rational::from(p) - Rational::from((1, 2));
    let g = gamma_exact(&(Rational::from(p) + Rational::from((1, 2))))?.powi(2)?;
    let b = beta_exact(&(alpha.clone() + 2u32), &(alpha + 1u32))?.powi(2)?;
    let lambda = (g * ExactValue::pi_pow(-2 - 4 * p as i32)).checked_div(&b)?;
    Ok(lambda.to_float(&PrecisionContext::new(ctx.working_bits())?))
}

fn sum_hyper(alpha: &Rational, beta: &Rational, w: u32, count: usize, ctx: &PrecisionContext) -> Result<SeriesSum> {
    let prec = ctx.working_bits();
    let state = WaveState::new(alpha.clone(), beta.clone())?;
    let (ups, lows) = state.hyper_params();
    let grid = pfq_pi_square_grid(&ups, &lows, &Rational::from((-1, 4)), count, ctx)?;
    let terms: Vec<Float> = (1..=count as u64)
        .into_par_iter()
        .map(|n| {
            let f = &grid[n as usize - 1];
            Float::with_val(prec, f.square_ref()) * Integer::from(n).pow(w)
        })
        .collect();
    let half_odd = *alpha.denom() == 2;
    if alpha == beta && half_odd {
        let p = (alpha + Rational::from((1, 2)))
            .numer()
            .to_u32()
            .expect("small order");
        let lambda = equal_state_lambda(p, ctx)?;
        let first_odd = (count as u64 + 1) | 1;
        let tail = landau_tail(&lambda, 2 * p + 2 - w, first_odd, 2, ctx)?;
        return Ok(summed(terms, tail, BoundKind::Rigorous, ctx));
    }
    let tail = fitted_tail(&terms, ctx)?;
    Ok(summed(terms, tail, BoundKind::Heuristic, ctx))
}

/// First `count` terms of `family`, summed in fixed block-tree order, plus a tail bound.
///
/// Bessel families use Landau's bound with the integral test, which is rigorous.
/// `HyperSq` is rigorous for equal half-integer exponents (through the Bessel
/// form of `F_n`) and fitted otherwise.
pub fn sum_series(family: &SeriesFamily, count: usize, ctx: &PrecisionContext) -> Result<SeriesSum> {
    check_terms(count)?;
    family.validate()?;
    match family.canonical() {
        SeriesFamily::HyperSq { alpha, beta, w } => sum_hyper(&alpha, &beta, w, count, ctx),
        f => {
            let (parity, p, q, e) = f.bessel_parts().expect("bessel kind");
            sum_bessel(parity, p, q, e, count, ctx)
        }
    }
}

fn judge(label: String, exact: &ExactSum, sum: SeriesSum, ctx: &PrecisionContext) -> SumResult {
    let prec = ctx.working_bits();
    let wide = PrecisionContext::new(prec).expect("valid precision");
    let x = exact.to_float(&wide);
    let deviation = Float::with_val(prec, &sum.partial - &x).abs();
    let relative = if x.is_zero() {
        None
    } else {
        Some(Float::with_val(prec, &deviation / Float::with_val(prec, x.abs_ref())))
    };
    let allowed = Float::with_val(prec, &sum.tail_bound + &sum.error_budget);
    let verdict = if deviation <= allowed { Verdict::Pass } else { Verdict::Fail };
    SumResult {
        family: label,
        exact: Some(exact.clone()),
        numeric: sum.partial,
        terms: sum.terms,
        tail_bound: sum.tail_bound,
        error_budget: sum.error_budget,
        deviation: Some(deviation),
        relative_error: relative,
        verdict,
        bound_kind: sum.bound_kind,
    }
}

/// Sums `family` and compares with `exact`. Disagreement is a `Fail` verdict, not an error.
pub fn certify(family: &SeriesFamily, exact: &ExactSum, count: usize, ctx: &PrecisionContext) -> Result<SumResult> {
    let sum = sum_series(family, count, ctx)?;
    Ok(judge(family.canonical().to_string(), exact, sum, ctx))
}

/// Sums `family` and certifies it against its closed form, or reports `NoExact`.
pub fn verify_family(family: &SeriesFamily, count: usize, ctx: &PrecisionContext) -> Result<SumResult> {
    match closed_form(family)? {
        Some(exact) => certify(family, &exact, count, ctx),
        None => {
            let sum = sum_series(family, count, ctx)?;
            Ok(SumResult {
                family: family.canonical().to_string(),
                exact: None,
                numeric: sum.partial,
                terms: sum.terms,
                tail_bound: sum.tail_bound,
                error_budget: sum.error_budget,
                deviation: None,
                relative_error: None,
                verdict: Verdict::NoExact,
                bound_kind: sum.bound_kind,
            })
        }
    }
}

/// The nine-series identity of the state `(1/2, 7/2)`, as printed.
pub fn identity24_terms() -> Vec<(SeriesFamily, ExactValue)> {
    let q = |n: i64, d: i64| Rational::from((n, d));
    vec![
        (SeriesFamily::EvenBesselSq { p: 1, e: 4 }, ExactValue::new(q(9, 1), -4)),
        (SeriesFamily::OddBesselSq { p: 1, e: 2 }, ExactValue::int(4)),
        (SeriesFamily::EvenBesselSq { p: 2, e: 6 }, ExactValue::new(q(576, 1), -8)),
        (SeriesFamily::EvenBesselSq { p: 2, e: 4 }, ExactValue::new(q(-96, 1), -4)),
        (SeriesFamily::EvenBesselSq { p: 2, e: 2 }, ExactValue::int(4)),
        (SeriesFamily::OddBesselSq { p: 2, e: 4 }, ExactValue::new(q(81, 1), -4)),
        (SeriesFamily::EvenBesselProd { p: 1, q: 2, e: 5 }, ExactValue::new(q(-144, 1), -6)),
        (SeriesFamily::EvenBesselProd { p: 1, q: 2, e: 3 }, ExactValue::new(q(12, 1), -2)),
        (SeriesFamily::OddBesselProd { p: 1, q: 2, e: 3 }, ExactValue::new(q(-36, 1), -2)),
    ]
}

/// Right-hand side of [`identity24_terms`].
pub fn identity24_target() -> ExactSum {
    ExactValue::frac(4, 9).into()
}

/// `Σ c_i S_i` over the given series against `target`, with the tail bounds
/// and budgets combined as `Σ |c_i| bound_i`.
pub fn linear_combination_check(
    label: &str,
    terms: &[(SeriesFamily, ExactValue)],
    target: &ExactSum,
    count: usize,
    ctx: &PrecisionContext,
) -> Result<SumResult> {
    check_terms(count)?;
    let prec = ctx.working_bits();
    let wide = PrecisionContext::new(prec)?;
    let mut values = Vec::with_capacity(terms.len());
    let mut tail = Float::new(prec);
    let mut errs = Float::new(prec);
    let mut kind = BoundKind::Rigorous;
    for (f, c) in terms {
        let s = sum_series(f, count, ctx)?;
        let cf = c.to_float(&wide);
        let ca = Float::with_val(prec, cf.abs_ref());
        values.push(Float::with_val(prec, &cf * &s.partial));
        tail += Float::with_val(prec, &ca * &s.tail_bound);
        errs += Float::with_val(prec, &ca * &s.error_budget) + Float::with_val(prec, s.partial.abs_ref()) * ctx.target_abs_error();
        if s.bound_kind == BoundKind::Heuristic {
            kind = BoundKind::Heuristic;
        }
    }
    let combined = SeriesSum {
        partial: block_tree_sum(&values, prec),
        tail_bound: tail,
        bound_kind: kind,
        error_budget: errs,
        terms: count,
    };
    Ok(judge(label.to_string(), target, combined, ctx))
}

/// The nine-series identity against 4/9.
pub fn identity24_check(count: usize, ctx: &PrecisionContext) -> Result<SumResult> {
    linear_combination_check("identity24", &identity24_terms(), &identity24_target(), count, ctx)
}

/// `Σ_{n ≤ N} |C_n|²` against 1, requiring `0 < 1 − partial ≤ tail bound`.
///
/// Uses the Bessel route, with a rigorous tail, when `α = β` is a half-integer,
/// and the hypergeometric route with a fitted tail otherwise.
pub fn parseval_certify(s: &WaveState, count: usize, ctx: &PrecisionContext) -> Result<SumResult> {
    check_terms(count)?;
    let prec = ctx.working_bits();
    let route = if CoeffRoute::BesselEqual.applies_to(s) {
        CoeffRoute::BesselEqual
    } else {
        CoeffRoute::Hypergeometric
    };
    let squares: Vec<Float> = coeffs(s, count, route, ctx)?
        .into_iter()
        .map(|c| Float::with_val(prec, c.square_ref()))
        .collect();
    let (tail, kind) = if route == CoeffRoute::BesselEqual {
        // C_n² = (2/K) π Γ(α+1)² π^(−2ν) J_ν²(nπ/2) / n^(2ν) on odd n
        let nu = (s.alpha() + Rational::from((1, 2)))
            .numer()
            .to_u32()
            .expect("integer order");
        let g = gamma_exact(&Rational::from(s.alpha() + 1u32))?.powi(2)?;
        let scale = ExactValue::int(2) * normalization_constant(s)? * g * ExactValue::pi_pow(2 - 4 * nu as i32);
        let scale = scale.to_float(&PrecisionContext::new(prec)?);
        let first_odd = (count as u64 + 1) | 1;
        (landau_tail(&scale, 2 * nu, first_odd, 2, ctx)?, BoundKind::Rigorous)
    } else {
        (fitted_tail(&squares, ctx)?, BoundKind::Heuristic)
    };
    let sum = summed(squares, tail, kind, ctx);
    let deficit = Float::with_val(prec, 1u32) - &sum.partial;
    let neg_budget = Float::with_val(prec, -&sum.error_budget);
    let allowed = Float::with_val(prec, &sum.tail_bound + &sum.error_budget);
    let verdict = if deficit > neg_budget && deficit <= allowed {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let relative = Some(Float::with_val(prec, deficit.abs_ref()));
    Ok(SumResult {
        family: format!("parseval a={} b={}", s.alpha(), s.beta()),
        exact: Some(ExactValue::one().into()),
        numeric: sum.partial,
        terms: sum.terms,
        tail_bound: sum.tail_bound,
        error_budget: sum.error_budget,
        deviation: Some(deficit.abs()),
        relative_error: relative,
        verdict,
        bound_kind: sum.bound_kind,
    })
}

/// `⟨H⟩` or `⟨H²⟩` three ways, in units `ħ²/2m = a = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentCheck {
    pub moment: u32,
    /// From the weighted series closed form: `(2/K) π^(2+2m) B²(α+2, β+1) Σ n^(2m+2) F_n²`.
    pub from_series: ExactValue,
    /// The moment integral evaluated exactly.
    pub from_integral: ExactValue,
    /// The moment integral by quadrature.
    pub quadrature: Float,
    /// `|from_series − quadrature|`.
    pub deviation: Float,
}

/// Energy moment `m ∈ {1, 2}` of a state from the series closed forms,
/// compared with the exact and numerical moment integrals.
pub fn moment_check(s: &WaveState, moment: u32, ctx: &PrecisionContext) -> Result<MomentCheck> {
    let (a, b) = (s.alpha(), s.beta());
    let series = match moment {
        1 => n4_sum_closed(a, b)?,
        2 => n6_sum_closed(a, b)?,
        _ => return Err(Error::domain(format!("moment must be 1 or 2, got {moment}"))),
    };
    let beta_sq = beta_exact(&Rational::from(a + 2u32), &Rational::from(b + 1u32))?.powi(2)?;
    let from_series = ExactValue::int(2)
        * normalization_constant(s)?
        * ExactValue::pi_pow(4 + 4 * moment as i32)
        * beta_sq
        * series;
    let from_integral = energy_moment_integral(s, moment)?;
    let quadrature = energy_moment_quadrature(s, moment, ctx)?;
    let prec = ctx.working_bits();
    let x = from_series.to_float(&PrecisionContext::new(prec)?);
    let deviation = Float::with_val(prec, &x - &quadrature).abs();
    Ok(MomentCheck {
        moment,
        from_series,
        from_integral,
        quadrature,
        deviation,
    })
}
