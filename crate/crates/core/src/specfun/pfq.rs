//! Generalized hypergeometric series with rational parameters.

use std::sync::Arc;

use rug::{Float, Integer, Rational};

use super::context::PrecisionContext;
use super::grid::{cached_grid, par_grid, FoldedSeries, TAIL_RUN};
use super::pi;
use crate::error::{Error, Result};

const MAX_TERMS: u32 = 1_000_000;

fn is_non_positive_integer(r: &Rational) -> bool {
    *r.denom() == 1 && *r <= 0
}

fn check_lowers(lowers: &[Rational]) -> Result<()> {
    if let Some(b) = lowers.iter().find(|b| is_non_positive_integer(b)) {
        return Err(Error::domain(format!(
            "pfq lower parameter {b} is a non-positive integer"
        )));
    }
    Ok(())
}

/// Ratio of consecutive terms, without the `z` factor:
/// `∏(a_i + k) / (∏(b_j + k) · (k + 1))`.
fn term_ratio(uppers: &[Rational], lowers: &[Rational], k: u32) -> Rational {
    let mut r = Rational::from(1);
    for a in uppers {
        r *= Rational::from(a + k);
    }
    let mut d = Rational::from(k + 1);
    for b in lowers {
        d *= Rational::from(b + k);
    }
    r / d
}

/// Ends the series when a term vanishes exactly (terminating series) or after
/// [`TAIL_RUN`] consecutive terms below `tol · |sum|`.
struct Cutoff {
    tol: Float,
    run: usize,
}

impl Cutoff {
    fn new(prec: u32, target_log2: i32) -> Self {
        Self {
            tol: Float::with_val(prec, Float::i_exp(1, target_log2 - 2)),
            run: 0,
        }
    }

    fn done(&mut self, term: &Float, sum: &Float) -> bool {
        if term.is_zero() {
            return true;
        }
        let scale = if sum.is_zero() {
            Float::with_val(self.tol.prec(), 1)
        } else {
            Float::with_val(self.tol.prec(), sum.abs_ref())
        };
        let bound = Float::with_val(self.tol.prec(), &self.tol * &scale);
        if Float::with_val(self.tol.prec(), term.abs_ref()) <= bound {
            self.run += 1;
        } else {
            self.run = 0;
        }
        self.run >= TAIL_RUN
    }
}

/// `pFq(uppers; lowers; z)`.
///
/// Converges for all finite `z` when `p ≤ q`. With `p = q + 1` the series must
/// either terminate or have `|z| < 1`.
pub fn pfq(uppers: &[Rational], lowers: &[Rational], z: &Float, ctx: &PrecisionContext) -> Result<Float> {
    check_lowers(lowers)?;
    if !z.is_finite() {
        return Err(Error::domain("pfq argument is not finite"));
    }
    let terminates = uppers.iter().any(is_non_positive_integer);
    let p = uppers.len();
    let q = lowers.len();
    if !terminates && p > q && (p > q + 1 || Float::with_val(64, z.abs_ref()) >= 1) {
        return Err(Error::domain(format!(
            "{p}F{q} series diverges at z = {}",
            z.to_f64()
        )));
    }
    let out = ctx.working_bits();
    if z.is_zero() {
        return Ok(Float::with_val(out, 1));
    }
    let magnitude = 2.0 * z.to_f64().abs().sqrt();
    let prec = ctx.escalated_bits(magnitude);
    let zz = Float::with_val(prec, z);
    let mut term = Float::with_val(prec, 1);
    let mut sum = Float::with_val(prec, 1);
    let mut cut = Cutoff::new(prec, ctx.target_log2());
    for k in 0..MAX_TERMS {
        term *= &zz;
        term *= &term_ratio(uppers, lowers, k);
        sum += &term;
        if cut.done(&term, &sum) {
            return Ok(Float::with_val(out, sum));
        }
    }
    Err(Error::Convergence(format!(
        "{p}F{q} needs more than {MAX_TERMS} terms"
    )))
}

/// `[₁F₁(ν; d; ib) − ₁F₁(ν; d; −ib)] / (2i)` for real `b`, with `d = μ + ν`,
/// summed as the real series `Σ_m (−1)^m (ν)_{2m+1} b^{2m+1} / ((2m+1)! (d)_{2m+1})`.
pub fn kummer_diff(nu: &Rational, denom: &Rational, b: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let mu = Rational::from(denom - nu);
    if mu <= 0 || *nu <= -1 || *nu == 0 {
        return Err(Error::domain(format!(
            "kummer_diff needs μ > 0, ν > −1, ν ≠ 0 (ν = {nu}, μ + ν = {denom})"
        )));
    }
    if !b.is_finite() {
        return Err(Error::domain("kummer_diff argument is not finite"));
    }
    let out = ctx.working_bits();
    if b.is_zero() {
        return Ok(Float::new(out));
    }
    let prec = ctx.escalated_bits(b.to_f64());
    let bb = Float::with_val(prec, b);
    let b2 = Float::with_val(prec, bb.square_ref());
    let mut term = Float::with_val(prec, &bb * &(nu / denom.clone()));
    let mut sum = term.clone();
    let mut cut = Cutoff::new(prec, ctx.target_log2());
    for m in 0..MAX_TERMS {
        term *= &b2;
        term *= &kummer_ratio(nu, denom, m);
        term = -term;
        sum += &term;
        if cut.done(&term, &sum) {
            return Ok(Float::with_val(out, sum));
        }
    }
    Err(Error::Convergence(format!(
        "kummer_diff needs more than {MAX_TERMS} terms"
    )))
}

fn kummer_ratio(nu: &Rational, denom: &Rational, m: u32) -> Rational {
    let j = 2 * m + 1;
    let num = Rational::from(nu + j) * Rational::from(nu + (j + 1));
    let den = Rational::from(denom + j) * Rational::from(denom + (j + 1)) * Integer::from((j + 1) as u64 * (j + 2) as u64);
    num / den
}

fn fmt_params(ps: &[Rational]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
}

/// `pFq(uppers; lowers; scale · π² · n²)` for `n = 1..=n_max`, cached.
///
/// The series is folded into a power series in `n²` so that each point costs one
/// Horner pass; each point is evaluated at the precision [`pfq`] would use.
pub fn pfq_pi_square_grid(
    uppers: &[Rational],
    lowers: &[Rational],
    scale: &Rational,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<Arc<Vec<Float>>> {
    check_lowers(lowers)?;
    if uppers.len() > lowers.len() {
        return Err(Error::domain("pfq grid needs p ≤ q"));
    }
    let key = format!(
        "pfq/{}/{}/{}/{}/{}",
        fmt_params(uppers),
        fmt_params(lowers),
        scale,
        ctx.precision_bits(),
        ctx.guard_bits()
    );
    let sqrt_scale = scale.to_f64().abs().sqrt();
    let magnitude = |n: u64| 2.0 * n as f64 * std::f64::consts::PI * sqrt_scale;
    cached_grid(&key, n_max, |n_max| {
        if n_max == 0 {
            return Ok(Vec::new());
        }
        let build_prec = ctx.escalated_bits(magnitude(n_max as u64));
        let base = Float::with_val(build_prec, pi(build_prec).square_ref()) * scale;
        let tol = ctx.target_log2() as f64 - 2.0;
        let t_max = (n_max as u64) * (n_max as u64);
        let series = FoldedSeries::build(
            Float::with_val(build_prec, 1),
            &base,
            |k| term_ratio(uppers, lowers, k),
            t_max,
            tol,
        )?;
        let out = ctx.working_bits();
        Ok(par_grid(n_max, |n| {
            let s = series.eval(n * n, ctx.escalated_bits(magnitude(n)), tol);
            Float::with_val(out, s)
        }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    fn assert_close(a: &Float, b: &Float, log2: i32) {
        let d = Float::with_val(a.prec().max(b.prec()), a - b).abs();
        assert!(d <= Float::with_val(64, Float::i_exp(1, log2)), "{a} vs {b}");
    }

    #[test]
    fn zero_argument() {
        let z = Float::new(256);
        assert_eq!(pfq(&[q(2, 1)], &[q(9, 4), q(11, 4)], &z, &ctx()).unwrap(), 1);
        assert!(kummer_diff(&q(5, 2), &q(4, 1), &z, &ctx()).unwrap().is_zero());
    }

    #[test]
    fn terminating_gauss_sum() {
        let one = Float::with_val(256, 1);
        let v = pfq(&[q(-1, 1), q(2, 1)], &[q(3, 1)], &one, &ctx()).unwrap();
        assert_close(&v, &(Float::with_val(256, 1) / 3u32), -250);
    }

    #[test]
    fn invalid_lower_and_divergence() {
        let z = Float::with_val(64, 0.5);
        assert!(matches!(pfq(&[], &[q(-2, 1)], &z, &ctx()), Err(Error::Domain(_))));
        let one = Float::with_val(64, 1);
        assert!(matches!(pfq(&[q(1, 2), q(1, 2)], &[q(3, 1)], &one, &ctx()), Err(Error::Domain(_))));
        assert!(matches!(kummer_diff(&q(2, 1), &q(2, 1), &one, &ctx()), Err(Error::Domain(_))));
    }

    #[test]
    fn bessel_as_0f1() {
        // J_1(x) = (x/2) 0F1(;2;−x²/4)
        let c = ctx();
        let x = Float::with_val(400, 7.25);
        let z = -Float::with_val(400, x.square_ref()) / 4u32;
        let f = pfq(&[], &[q(2, 1)], &z, &c).unwrap();
        let j = Float::with_val(400, &f * &x) / 2u32;
        assert_close(&j, &Float::with_val(400, x.j1_ref()), c.target_log2());
    }

    #[test]
    fn grid_matches_direct() {
        let c = PrecisionContext::new(128).unwrap();
        let ups = [q(3, 2), q(2, 1)];
        let lows = [q(9, 4), q(11, 4), q(3, 2)];
        let scale = q(-1, 4);
        let grid = pfq_pi_square_grid(&ups, &lows, &scale, 40, &c).unwrap();
        for n in [1u32, 5, 40] {
            let p = c.escalated_bits(2.0 * n as f64 * 3.2);
            let z = Float::with_val(p, pi(p).square_ref()) * Rational::from(&scale * Integer::from(n * n));
            let direct = pfq(&ups, &lows, &z, &c).unwrap();
            assert_close(&grid[n as usize - 1], &direct, c.target_log2());
        }
    }
}
