//! Bounds on the unsummed remainder of a series.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::specfun::{pi, PrecisionContext};

/// Landau's uniform constant: `|J_ν(x)| ≤ b x^(−1/3)` for all `ν ≥ 0`, `x > 0`,
/// with `b = 0.785746…`, rounded up.
pub const LANDAU_B: (u32, u32) = (7858, 10000);

/// Multiplier applied to fitted tails.
pub const HEURISTIC_SAFETY: u32 = 64;

/// Share of the computed terms used by the power-law fit.
const FIT_FRACTION: usize = 4;

/// Number of envelope points in the fit.
const FIT_CHUNKS: usize = 8;

/// `Σ_{n = M, M+step, …} n^(−s) ≤ M^(−s) + M^(1−s) / (step (s − 1))` for `s > 1`.
pub fn power_tail(m: u64, step: u64, s: &Float) -> Result<Float> {
    let prec = s.prec();
    if *s <= 1 {
        return Err(Error::Convergence(format!("tail exponent {} ≤ 1", s.to_f64())));
    }
    let mf = Float::with_val(prec, m);
    let first = Float::with_val(prec, (&mf).pow(&-s.clone()));
    let s1 = Float::with_val(prec, s - 1u32);
    let rest = Float::with_val(prec, (&mf).pow(&-s1.clone())) / (s1 * step);
    Ok(first + rest)
}

/// `b² (π/2)^(−2/3)`: the constant in `|J_p J_q(nπ/2)| ≤ b² (π/2)^(−2/3) n^(−2/3)`.
pub fn landau_pair_constant(prec: u32) -> Float {
    let b = Float::with_val(prec, Rational::from(LANDAU_B));
    let half_pi = pi(prec) / 2u32;
    let ex = Float::with_val(prec, -2) / 3u32;
    let factor = half_pi.pow(&ex);
    Float::with_val(prec, b.square_ref()) * factor
}

/// Rigorous tail of `scale · Σ_{n ≥ m, step} J_p J_q(nπ/2) / n^e`.
pub fn landau_tail(scale: &Float, e: u32, m: u64, step: u64, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.working_bits();
    let s = Float::with_val(prec, Rational::from((3 * e as i64 + 2, 3)));
    let t = power_tail(m, step, &s)?;
    Ok(Float::with_val(prec, scale.abs_ref()) * landau_pair_constant(prec) * t)
}

/// Fitted tail of `Σ_{n > N} t_n` from the computed terms `t_1 … t_N`.
///
/// The trailing quarter is split into chunks; the chunk maxima are fitted to
/// `A n^(−s)` by least squares in log-log space, `A` is raised until the power
/// law dominates every chunk maximum, and the integral-test tail is multiplied
/// by [`HEURISTIC_SAFETY`].
pub fn fitted_tail(terms: &[Float], ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.working_bits();
    let n = terms.len();
    let start = n - n / FIT_FRACTION;
    let tail = &terms[start..];
    let chunk = (tail.len() / FIT_CHUNKS).max(1);
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (i, c) in tail.chunks(chunk).enumerate() {
        let idx = start + i * chunk + 1;
        let mx = c
            .iter()
            .map(|t| Float::with_val(prec, t.abs_ref()))
            .fold(Float::new(prec), |a, b| if b > a { b } else { a });
        if mx.is_zero() {
            continue;
        }
        let (mant, exp) = mx.to_f64_exp();
        points.push(((idx as f64).ln(), mant.ln() + exp as f64 * std::f64::consts::LN_2));
    }
    if points.is_empty() {
        return Ok(ctx.target_abs_error());
    }
    if points.len() < 2 {
        return Err(Error::Convergence("too few non-zero terms to fit a tail".into()));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let s = -sxy / sxx;
    if !s.is_finite() || s <= 1.0 {
        return Err(Error::Convergence(format!(
            "fitted tail exponent {s:.3} does not give a convergent tail"
        )));
    }
    // log A = max over points of (log t + s log n)
    let log_a = points
        .iter()
        .map(|p| p.1 + s * p.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let sf = Float::with_val(prec, s);
    let t = power_tail(n as u64 + 1, 1, &sf)?;
    let a = Float::with_val(prec, log_a).exp();
    Ok(a * t * HEURISTIC_SAFETY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_tail_dominates_partial_sums() {
        let s = Float::with_val(128, 2);
        let bound = power_tail(10, 1, &s).unwrap();
        // Σ_{n≥10} 1/n² = ψ'(10) = 0.105166…
        assert!(bound > 0.105166 && bound < 0.2);
        let odd = power_tail(11, 2, &s).unwrap();
        // Σ_{n≥11, odd} 1/n² = 0.04767…
        assert!(odd > 0.0476 && odd < 0.1);
        assert!(power_tail(10, 1, &Float::with_val(64, 1)).is_err());
    }

    #[test]
    fn landau_constant() {
        let c = landau_pair_constant(128).to_f64();
        assert!((c - 0.4571).abs() < 1e-3, "{c}");
    }

    #[test]
    fn fit_recovers_power_law() {
        let ctx = PrecisionContext::new(128).unwrap();
        let terms: Vec<Float> = (1..=400u32)
            .map(|n| {
                let sign = if n % 3 == 0 { 0.5 } else { 1.0 };
                Float::with_val(128, sign / (n as f64).powi(3))
            })
            .collect();
        let t = fitted_tail(&terms, &ctx).unwrap().to_f64();
        // true tail ≈ 1/(2·400²) ≈ 3.1e-6
        assert!(t > 3.1e-6 && t < 1e-3, "{t}");
    }
}
