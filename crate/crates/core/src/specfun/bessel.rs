//! Bessel functions of the first kind, integer order, by the ascending series
//!
//! ```text
//! J_p(x) = Σ_k (−1)^k (x/2)^(p+2k) / (k! (p+k)!)
//! ```
//!
//! evaluated with enough extra precision to absorb the e^x-sized cancellation.

use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::context::PrecisionContext;
use super::grid::{cached_grid, par_grid, FoldedSeries, TAIL_RUN};
use super::pi;
use crate::error::{Error, Result};

/// Largest supported order.
pub const MAX_ORDER: u32 = 64;

/// Hard cap on series length.
const MAX_TERMS: u32 = 1_000_000;

/// J_p(x) for `x ≥ 0`, with absolute error below the context target.
///
/// The result carries `ctx.working_bits()` bits.
pub fn bessel_j(order: u32, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if order > MAX_ORDER {
        return Err(Error::domain(format!(
            "bessel_j order {order} exceeds {MAX_ORDER}"
        )));
    }
    if x.is_nan() || *x < 0 {
        return Err(Error::domain(format!("bessel_j needs x ≥ 0, got {x}")));
    }
    let out = ctx.working_bits();
    if x.is_zero() {
        return Ok(Float::with_val(out, if order == 0 { 1 } else { 0 }));
    }
    if x.is_infinite() {
        return Err(Error::domain("bessel_j argument is infinite"));
    }
    let prec = ctx.escalated_bits(x.to_f64());
    let half = Float::with_val(prec, x) / 2u32;
    let y = Float::with_val(prec, half.square_ref());
    let mut term = Float::with_val(prec, half.pow(order));
    term /= Integer::from(Integer::factorial(order));
    let mut sum = term.clone();
    let tol = Float::with_val(prec, Float::i_exp(1, ctx.target_log2() - 2));
    let mut run = 0usize;
    let mut k = 0u32;
    loop {
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::Convergence(format!(
                "J_{order}({}) needs more than {MAX_TERMS} terms",
                x.to_f64()
            )));
        }
        term *= &y;
        term /= k;
        term /= order + k;
        term = -term;
        sum += &term;
        let bound = Float::with_val(prec, sum.abs_ref()) * &tol;
        if Float::with_val(prec, term.abs_ref()) <= bound {
            run += 1;
            if run >= TAIL_RUN {
                break;
            }
        } else {
            run = 0;
        }
    }
    Ok(Float::with_val(out, sum))
}

/// J_p(nπ/2) for `n = 1..=n_max`, cached per (order, context).
///
/// Same ascending series as [`bessel_j`], rewritten as a power series in `n²`:
/// `J_p(nπ/2) = n^p Σ_k a_k (n²)^k` with `a_k = (−1)^k (π/4)^(p+2k) / (k!(p+k)!)`.
/// Each point is evaluated at the precision [`bessel_j`] would use for it.
pub fn bessel_j_half_pi_grid(
    order: u32,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<Arc<Vec<Float>>> {
    if order > MAX_ORDER {
        return Err(Error::domain(format!(
            "bessel_j order {order} exceeds {MAX_ORDER}"
        )));
    }
    let key = format!(
        "besselj/{order}/{}/{}",
        ctx.precision_bits(),
        ctx.guard_bits()
    );
    cached_grid(&key, n_max, |n_max| compute_half_pi_grid(order, n_max, ctx))
}

fn half_pi_arg(n: u64) -> f64 {
    n as f64 * std::f64::consts::FRAC_PI_2
}

fn compute_half_pi_grid(order: u32, n_max: usize, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let build_prec = ctx.escalated_bits(half_pi_arg(n_max as u64));
    let quarter_pi = pi(build_prec) / 4u32;
    let mut first = Float::with_val(build_prec, (&quarter_pi).pow(order));
    first /= Integer::from(Integer::factorial(order));
    let base = -Float::with_val(build_prec, quarter_pi.square_ref());
    let tol = ctx.target_log2() as f64 - 2.0;
    // n^p multiplies the folded sum, so the sum itself needs n^p more headroom.
    let build_tol = tol - order as f64 * (n_max as f64).log2();
    let t_max = (n_max as u64) * (n_max as u64);
    let series = FoldedSeries::build(
        first,
        &base,
        |k| Rational::from((1, (k + 1) as u64 * (order + k + 1) as u64)),
        t_max,
        build_tol,
    )?;
    let out = ctx.working_bits();
    Ok(par_grid(n_max, |n| {
        let prec = ctx.escalated_bits(half_pi_arg(n));
        let local_tol = tol - order as f64 * (n as f64).log2();
        let s = series.eval(n * n, prec, local_tol);
        let scale = Integer::from(n).pow(order);
        Float::with_val(out, s * scale)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(320).unwrap()
    }

    fn close(a: &Float, b: &Float, log2_tol: i32) -> bool {
        let d = Float::with_val(a.prec().max(b.prec()), a - b).abs();
        d <= Float::with_val(64, Float::i_exp(1, log2_tol))
    }

    #[test]
    fn values_at_zero() {
        let z = Float::new(320);
        assert_eq!(bessel_j(1, &z, &ctx()).unwrap(), 0);
        assert_eq!(bessel_j(0, &z, &ctx()).unwrap(), 1);
    }

    #[test]
    fn negative_argument_rejected() {
        let x = Float::with_val(64, -1);
        assert!(matches!(bessel_j(0, &x, &ctx()), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(65, &Float::with_val(64, 1), &ctx()), Err(Error::Domain(_))));
    }

    #[test]
    fn agrees_with_mpfr_jn() {
        let c = ctx();
        for &(p, x) in &[(0u32, 0.3f64), (1, 1.25), (3, 10.0), (10, 25.5), (2, 200.25), (7, 1234.5)] {
            let xf = Float::with_val(400, x);
            let ours = bessel_j(p, &xf, &c).unwrap();
            let reference = Float::with_val(600, xf.jn(p as i32));
            assert!(close(&ours, &reference, c.target_log2()), "J_{p}({x})");
        }
    }

    #[test]
    fn grid_matches_direct_series() {
        let c = PrecisionContext::new(128).unwrap();
        let grid = bessel_j_half_pi_grid(3, 60, &c).unwrap();
        for n in [1u64, 2, 7, 31, 60] {
            let x = Float::with_val(c.escalated_bits(half_pi_arg(n)), pi(c.escalated_bits(half_pi_arg(n))) * n) / 2u32;
            let direct = bessel_j(3, &x, &c).unwrap();
            assert!(close(&grid[n as usize - 1], &direct, c.target_log2()), "n={n}");
        }
    }
}
