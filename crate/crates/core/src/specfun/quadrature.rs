//! Tanh-sinh quadrature for integrands `x^α (1−x)^β w(x)` on subintervals of [0, 1].
//!
//! The substitution `s = 1/(1 + e^{−π sinh t})` sends [0, 1] to the real line with
//! doubly exponential decay at both ends, which absorbs the algebraic endpoint
//! behaviour. `s` and `1 − s` are formed separately so neither loses digits near
//! its own endpoint.

use rug::ops::Pow;
use rug::{Float, Rational};

use super::context::PrecisionContext;
use crate::error::{Error, Result};

/// Refinement levels tried before giving up; level `k` uses step `2^−k`.
const MAX_LEVEL: u32 = 14;

/// Extra bits carried by node generation.
const NODE_GUARD_BITS: u32 = 32;

/// Non-singular factor `w(x)` of the integrand.
#[derive(Clone, Debug)]
pub enum Weight {
    One,
    Sin(Float),
    Cos(Float),
    /// Coefficients in increasing powers of `x`.
    Poly(Vec<Rational>),
}

/// `x^alpha (1−x)^beta w(x)`.
#[derive(Clone, Debug)]
pub struct Integrand {
    pub alpha: Rational,
    pub beta: Rational,
    pub weight: Weight,
}

impl Integrand {
    pub fn new(alpha: Rational, beta: Rational, weight: Weight) -> Self {
        Self {
            alpha,
            beta,
            weight,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.alpha <= -1 || self.beta <= -1 {
            return Err(Error::domain(format!(
                "integrand exponents must exceed −1 (α = {}, β = {})",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }

    fn eval(&self, x: &Float, one_minus_x: &Float, prec: u32) -> Float {
        let mut v = power(x, &self.alpha, prec);
        v *= power(one_minus_x, &self.beta, prec);
        match &self.weight {
            Weight::One => {}
            Weight::Sin(c) => v *= Float::with_val(prec, c * x).sin(),
            Weight::Cos(c) => v *= Float::with_val(prec, c * x).cos(),
            Weight::Poly(cs) => {
                let mut acc = Float::new(prec);
                for c in cs.iter().rev() {
                    acc *= x;
                    acc += c;
                }
                v *= acc;
            }
        }
        v
    }
}

fn power(base: &Float, e: &Rational, prec: u32) -> Float {
    if *e == 0 {
        return Float::with_val(prec, 1);
    }
    if base.is_zero() {
        return Float::new(prec);
    }
    if *e.denom() == 1 {
        if let Some(k) = e.numer().to_i32() {
            return Float::with_val(prec, base.pow(k));
        }
    }
    if *e.denom() == 2 {
        if let Some(k) = e.numer().to_i32() {
            let r = Float::with_val(prec, base.sqrt_ref());
            return Float::with_val(prec, (&r).pow(k));
        }
    }
    let e = Float::with_val(prec, e);
    Float::with_val(prec, base.pow(&e))
}

/// One abscissa pair `t, −t` mapped into [a, b].
struct Node {
    /// `x(t)`, `1 − x(t)`, `x(−t)`, `1 − x(−t)`.
    xs: [(Float, Float); 2],
    /// `ds/dt`; identical for `±t`.
    weight: Float,
}

struct Mapping {
    prec: u32,
    a: Float,
    width: Float,
    one_minus_b: Float,
    t_max: f64,
}

impl Mapping {
    fn new(a: &Float, b: &Float, gamma: f64, prec: u32) -> Self {
        let a = Float::with_val(prec, a);
        let width = Float::with_val(prec, b - &a);
        let one_minus_b = Float::with_val(prec, 1 - Float::with_val(prec, b));
        let decay = (1.0 + gamma).max(1e-3);
        let sinh_t = prec as f64 * std::f64::consts::LN_2 / (std::f64::consts::PI * decay);
        Self {
            prec,
            a,
            width,
            one_minus_b,
            t_max: sinh_t.asinh(),
        }
    }

    fn node(&self, t: &Float) -> Node {
        let p = self.prec;
        let pi = super::pi(p);
        let (sh, ch) = t.clone().sinh_cosh(Float::new(p));
        // e = e^{−π sinh t}; s = 1/(1+e), c = e/(1+e) = 1 − s
        let e = Float::with_val(p, -Float::with_val(p, &pi * &sh)).exp();
        let denom = Float::with_val(p, 1 + &e);
        let s = Float::with_val(p, 1 / &denom);
        let c = Float::with_val(p, &e / &denom);
        let weight = Float::with_val(p, &pi * &ch) * &s * &c;
        let place = |lo: &Float, hi: &Float| {
            let x = Float::with_val(p, &self.width * lo) + &self.a;
            let y = Float::with_val(p, &self.width * hi) + &self.one_minus_b;
            (x, y)
        };
        Node {
            xs: [place(&s, &c), place(&c, &s)],
            weight,
        }
    }

    /// Nodes `t = j·h` with odd `j` (or every `j ≥ 1` at level 0).
    fn level_nodes(&self, level: u32) -> Vec<Node> {
        let h = 0.5f64.powi(level as i32);
        let count = (self.t_max / h).ceil() as u64;
        let step = if level == 0 { 1 } else { 2 };
        let start = 1u64;
        (0..)
            .map(|i| start + i * step)
            .take_while(|j| *j <= count)
            .map(|j| {
                let t = Float::with_val(self.prec, j) >> level;
                self.node(&t)
            })
            .collect()
    }

    /// The `t = 0` node.
    fn centre(&self) -> (Float, Float, Float) {
        let p = self.prec;
        let half = Float::with_val(p, 0.5f64);
        let x = Float::with_val(p, &self.width * &half) + &self.a;
        let y = Float::with_val(p, &self.width * &half) + &self.one_minus_b;
        let w = super::pi(p) / 4u32;
        (x, y, w)
    }
}

fn check_interval(a: &Float, b: &Float) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) || *a < 0 || *b > 1 || a >= b {
        return Err(Error::domain(format!(
            "quadrature interval must satisfy 0 ≤ a < b ≤ 1, got [{}, {}]",
            a.to_f64(),
            b.to_f64()
        )));
    }
    Ok(())
}

fn gamma_of(alpha: &Rational, beta: &Rational) -> f64 {
    alpha.to_f64().min(beta.to_f64()).min(0.0)
}

/// `∫_a^b f(x) dx` for `0 ≤ a < b ≤ 1`, to absolute error below the context target.
pub fn quadrature(f: &Integrand, a: &Float, b: &Float, ctx: &PrecisionContext) -> Result<Float> {
    f.validate()?;
    check_interval(a, b)?;
    let prec = ctx.working_bits() + NODE_GUARD_BITS;
    let map = Mapping::new(a, b, gamma_of(&f.alpha, &f.beta), prec);
    let tol = Float::with_val(prec, Float::i_exp(1, ctx.target_log2() - 2));

    let (cx, cy, cw) = map.centre();
    let mut raw = Float::with_val(prec, f.eval(&cx, &cy, prec) * &cw);
    let mut previous: Option<Float> = None;
    for level in 0..=MAX_LEVEL {
        for node in map.level_nodes(level) {
            for (x, y) in &node.xs {
                raw += Float::with_val(prec, f.eval(x, y, prec) * &node.weight);
            }
        }
        let estimate = Float::with_val(prec, &raw * &map.width) >> level;
        if let Some(prev) = &previous {
            if Float::with_val(prec, &estimate - prev).abs() <= tol {
                return Ok(Float::with_val(ctx.working_bits(), estimate));
            }
        }
        previous = Some(estimate);
    }
    Err(Error::Convergence(format!(
        "tanh-sinh did not settle by level {MAX_LEVEL}"
    )))
}

/// `∫_0^1 x^α (1−x)^β sin(nπx) dx` for `n = 1..=n_max`, sharing nodes across `n`.
///
/// `sin(nπx)` is generated by the three-term recurrence in `n`.
pub fn sine_moments(
    alpha: &Rational,
    beta: &Rational,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<Float>> {
    Integrand::new(alpha.clone(), beta.clone(), Weight::One).validate()?;
    if n_max == 0 {
        return Ok(Vec::new());
    }
    // The recurrence loses about log2(n) bits.
    let prec = ctx.working_bits() + NODE_GUARD_BITS + (n_max as f64).log2().ceil() as u32;
    let zero = Float::new(prec);
    let one = Float::with_val(prec, 1);
    let map = Mapping::new(&zero, &one, gamma_of(alpha, beta), prec);
    let pi = super::pi(prec);
    let tol = Float::with_val(prec, Float::i_exp(1, ctx.target_log2() - 2));
    let base = Integrand::new(alpha.clone(), beta.clone(), Weight::One);

    let mut raw = vec![Float::new(prec); n_max];
    let accumulate = |raw: &mut [Float], x: &Float, y: &Float, w: &Float| {
        let g = Float::with_val(prec, base.eval(x, y, prec) * w);
        let theta = Float::with_val(prec, &pi * x);
        let (s1, c1) = theta.sin_cos(Float::new(prec));
        let two_c = Float::with_val(prec, &c1 * 2u32);
        let mut prev = Float::new(prec);
        let mut cur = s1;
        for slot in raw.iter_mut() {
            *slot += Float::with_val(prec, &g * &cur);
            let next = Float::with_val(prec, &two_c * &cur) - &prev;
            prev = std::mem::replace(&mut cur, next);
        }
    };

    let (cx, cy, cw) = map.centre();
    accumulate(&mut raw, &cx, &cy, &cw);
    let mut previous: Option<Vec<Float>> = None;
    for level in 0..=MAX_LEVEL {
        for node in map.level_nodes(level) {
            for (x, y) in &node.xs {
                accumulate(&mut raw, x, y, &node.weight);
            }
        }
        let estimates: Vec<Float> = raw.iter().map(|r| Float::with_val(prec, r) >> level).collect();
        if let Some(prev) = &previous {
            let settled = estimates
                .iter()
                .zip(prev)
                .all(|(e, p)| Float::with_val(prec, e - p).abs() <= tol);
            if settled {
                return Ok(estimates
                    .into_iter()
                    .map(|e| Float::with_val(ctx.working_bits(), e))
                    .collect());
            }
        }
        previous = Some(estimates);
    }
    Err(Error::Convergence(format!(
        "tanh-sinh sine moments did not settle by level {MAX_LEVEL}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn unit() -> (Float, Float) {
        (Float::new(64), Float::with_val(64, 1))
    }

    fn assert_close(a: &Float, b: &Float, log2: i32) {
        let d = Float::with_val(a.prec().max(b.prec()), a - b).abs();
        assert!(d <= Float::with_val(64, Float::i_exp(1, log2)), "{a} vs {b}");
    }

    #[test]
    fn polynomial_and_beta() {
        let ctx = PrecisionContext::new(256).unwrap();
        let (a, b) = unit();
        let f = Integrand::new(q(1, 1), q(1, 1), Weight::One);
        let v = quadrature(&f, &a, &b, &ctx).unwrap();
        assert_close(&v, &(Float::with_val(300, 1) / 6u32), ctx.target_log2());

        let f = Integrand::new(q(2, 1), q(1, 1), Weight::One);
        let v = quadrature(&f, &a, &b, &ctx).unwrap();
        assert_close(&v, &(Float::with_val(300, 1) / 12u32), ctx.target_log2());
    }

    #[test]
    fn singular_endpoints() {
        // ∫ x^{-1/2}(1−x)^{-1/2} = π
        let ctx = PrecisionContext::new(256).unwrap();
        let (a, b) = unit();
        let f = Integrand::new(q(-1, 2), q(-1, 2), Weight::One);
        let v = quadrature(&f, &a, &b, &ctx).unwrap();
        assert_close(&v, &Float::with_val(300, Constant::Pi), ctx.target_log2());
    }

    #[test]
    fn polynomial_weight_and_subinterval() {
        let ctx = PrecisionContext::new(128).unwrap();
        let f = Integrand::new(q(0, 1), q(0, 1), Weight::Poly(vec![q(0, 1), q(0, 1), q(3, 1)]));
        let a = Float::with_val(64, 0.25f64);
        let b = Float::with_val(64, 0.5f64);
        let v = quadrature(&f, &a, &b, &ctx).unwrap();
        // x³ from 1/4 to 1/2
        assert_close(&v, &(Float::with_val(200, 7) / 64u32), ctx.target_log2());
    }

    #[test]
    fn bad_inputs() {
        let ctx = PrecisionContext::new(64).unwrap();
        let (a, b) = unit();
        let f = Integrand::new(q(-1, 1), q(0, 1), Weight::One);
        assert!(matches!(quadrature(&f, &a, &b, &ctx), Err(Error::Domain(_))));
        let f = Integrand::new(q(0, 1), q(0, 1), Weight::One);
        assert!(matches!(quadrature(&f, &b, &a, &ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn batch_sine_moments_match_single() {
        let ctx = PrecisionContext::new(192).unwrap();
        let (a, b) = unit();
        let batch = sine_moments(&q(1, 2), &q(3, 2), 6, &ctx).unwrap();
        for n in 1..=6u32 {
            let c = Float::with_val(300, Constant::Pi) * n;
            let f = Integrand::new(q(1, 2), q(3, 2), Weight::Sin(c));
            let v = quadrature(&f, &a, &b, &ctx).unwrap();
            assert_close(&batch[n as usize - 1], &v, ctx.target_log2() + 2);
        }
    }
}
