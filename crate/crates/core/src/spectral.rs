//! States `ψ_{αβ}(x) = C x^α (1−x)^β` of the unit infinite well and their
//! expansion in the eigenbasis `√2 sin(nπx)`.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::decimal;
use crate::error::{Error, Result};
use crate::exactval::{beta_exact, gamma_exact, ExactValue, Rational};
use crate::specfun::{
    bessel_j, bessel_j_half_pi_grid, block_tree_sum, gamma_real, pfq, pfq_pi_square_grid, pi,
    quadrature, sine_moments, Integrand, PrecisionContext, Weight,
};

/// The pair (α, β) naming `ψ_{αβ}`; both at least 1/2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WaveState {
    alpha: Rational,
    beta: Rational,
}

impl WaveState {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self> {
        let half = Rational::from((1, 2));
        if alpha < half || beta < half {
            return Err(Error::domain(format!(
                "state needs α, β ≥ 1/2, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Shorthand for small rationals, `WaveState::frac((1, 2), (5, 2))`.
    pub fn frac(alpha: (i64, i64), beta: (i64, i64)) -> Result<Self> {
        Self::new(Rational::from(alpha), Rational::from(beta))
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// `ψ_{βα}(x) = ψ_{αβ}(1 − x)`.
    pub fn reflected(&self) -> Self {
        Self {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    /// Parameters of the ₂F₃ in the hypergeometric form of the coefficients:
    /// `((α+2)/2, (α+3)/2; (α+β+3)/2, (α+β+4)/2, 3/2)`.
    pub fn hyper_params(&self) -> (Vec<Rational>, Vec<Rational>) {
        let a = &self.alpha;
        let s = Rational::from(&self.alpha + &self.beta);
        let uppers = vec![
            Rational::from(a + 2u32) / 2u32,
            Rational::from(a + 3u32) / 2u32,
        ];
        let lowers = vec![
            Rational::from(&s + 3u32) / 2u32,
            Rational::from(&s + 4u32) / 2u32,
            Rational::from((3, 2)),
        ];
        (uppers, lowers)
    }
}

impl fmt::Display for WaveState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// Independent ways of computing the expansion coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRoute {
    /// α = β half-integer: a single Bessel function of integer order.
    BesselEqual,
    /// Any state: a ₂F₃ at `−n²π²/4`.
    Hypergeometric,
    /// Direct tanh-sinh quadrature of the overlap integral.
    Quadrature,
}

impl CoeffRoute {
    pub const ALL: [CoeffRoute; 3] = [
        CoeffRoute::BesselEqual,
        CoeffRoute::Hypergeometric,
        CoeffRoute::Quadrature,
    ];

    pub fn applies_to(&self, s: &WaveState) -> bool {
        match self {
            CoeffRoute::BesselEqual => s.alpha == s.beta && *s.alpha.denom() == 2,
            _ => true,
        }
    }

    fn check(&self, s: &WaveState) -> Result<()> {
        if self.applies_to(s) {
            Ok(())
        } else {
            Err(Error::Route(format!(
                "route {self} needs α = β half-integer, got {s}"
            )))
        }
    }
}

impl fmt::Display for CoeffRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoeffRoute::BesselEqual => "bessel",
            CoeffRoute::Hypergeometric => "hyper",
            CoeffRoute::Quadrature => "quad",
        })
    }
}

impl FromStr for CoeffRoute {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bessel" => Ok(CoeffRoute::BesselEqual),
            "hyper" => Ok(CoeffRoute::Hypergeometric),
            "quad" => Ok(CoeffRoute::Quadrature),
            other => Err(Error::Parse(format!(
                "unknown route {other:?} (expected bessel, hyper or quad)"
            ))),
        }
    }
}

fn twice(r: &Rational) -> Rational {
    Rational::from(r * 2u32)
}

/// `1/K_{αβ} = 1/B(2α+1, 2β+1)`, the squared normalization constant.
pub fn normalization_constant(s: &WaveState) -> Result<ExactValue> {
    let a = twice(&s.alpha) + 1u32;
    let b = twice(&s.beta) + 1u32;
    beta_exact(&a, &b)?.recip()
}

/// Numeric `1/K_{αβ}` for any rational state.
pub fn normalization_constant_float(s: &WaveState, ctx: &PrecisionContext) -> Result<Float> {
    if let Ok(v) = normalization_constant(s) {
        return Ok(v.to_float(&wider(ctx)));
    }
    let prec = ctx.working_bits();
    let a = Float::with_val(prec, twice(&s.alpha) + 1u32);
    let b = Float::with_val(prec, twice(&s.beta) + 1u32);
    let ab = Float::with_val(prec, &a + &b);
    let num = gamma_real(&ab, ctx)?;
    let den = gamma_real(&a, ctx)? * gamma_real(&b, ctx)?;
    Ok(num / den)
}

fn wider(ctx: &PrecisionContext) -> PrecisionContext {
    PrecisionContext::with_guard(ctx.working_bits(), ctx.guard_bits()).expect("wider context")
}

fn beta_float(a: &Rational, b: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    if let Ok(v) = beta_exact(a, b) {
        return Ok(v.to_float(&wider(ctx)));
    }
    let prec = ctx.working_bits();
    let fa = Float::with_val(prec, a);
    let fb = Float::with_val(prec, b);
    let fab = Float::with_val(prec, &fa + &fb);
    Ok(gamma_real(&fa, ctx)? * gamma_real(&fb, ctx)? / gamma_real(&fab, ctx)?)
}

/// `sin(nπ/2)` for integer `n`.
fn sin_half_pi(n: u64) -> i32 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// Integer Bessel order `α + 1/2` of the equal-exponent route.
fn bessel_order(s: &WaveState) -> Result<u32> {
    let nu = &s.alpha + Rational::from((1, 2));
    nu.numer()
        .to_u32()
        .filter(|_| *nu.denom() == 1)
        .ok_or_else(|| Error::Route(format!("no integer Bessel order for {s}")))
}

/// `√(2/K) · √π Γ(α+1) · π^{−ν}`: the n-independent part of the Bessel route,
/// which reads `C_n = prefactor · n^{−ν} sin(nπ/2) J_ν(nπ/2)`.
fn bessel_prefactor(s: &WaveState, nu: u32, ctx: &PrecisionContext) -> Result<Float> {
    let w = wider(ctx);
    let two_over_k = normalization_constant(s)? * ExactValue::int(2);
    let g = gamma_exact(&Rational::from(&s.alpha + 1u32))? * ExactValue::pi_pow(1);
    let prec = ctx.working_bits();
    let root = two_over_k.to_float(&w).sqrt();
    let rest = (g * ExactValue::pi_pow(-2 * nu as i32)).to_float(&w);
    Ok(Float::with_val(prec, root * rest))
}

/// `√(2/K) · π · B(α+2, β+1)`: the hypergeometric route reads
/// `C_n = prefactor · n · ₂F₃(…; −n²π²/4)`.
fn hyper_prefactor(s: &WaveState, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.working_bits();
    let root = normalization_constant_float(s, ctx)?.sqrt() * Float::with_val(prec, 2u32).sqrt();
    let b = beta_float(&Rational::from(&s.alpha + 2u32), &Rational::from(&s.beta + 1u32), ctx)?;
    Ok(Float::with_val(prec, root * b) * pi(prec))
}

fn quad_prefactor(s: &WaveState, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.working_bits();
    let two_over_k = normalization_constant_float(s, ctx)? * 2u32;
    Ok(Float::with_val(prec, two_over_k.sqrt()))
}

/// `C_n = ∫₀¹ ψ_{αβ}(x) √2 sin(nπx) dx` by the chosen route.
pub fn coeff(s: &WaveState, n: u64, route: CoeffRoute, ctx: &PrecisionContext) -> Result<Float> {
    route.check(s)?;
    if n == 0 {
        return Err(Error::domain("coefficient index starts at 1"));
    }
    let prec = ctx.working_bits();
    match route {
        CoeffRoute::BesselEqual => {
            let nu = bessel_order(s)?;
            let sign = sin_half_pi(n);
            if sign == 0 {
                return Ok(Float::new(prec));
            }
            let xp = ctx.escalated_bits(n as f64 * std::f64::consts::FRAC_PI_2);
            let x = Float::with_val(xp, pi(xp) * n) / 2u32;
            let j = bessel_j(nu, &x, ctx)?;
            let scale = Float::with_val(prec, Integer::from(n).pow(nu));
            let v = bessel_prefactor(s, nu, ctx)? * j / scale;
            Ok(if sign < 0 { -v } else { v })
        }
        CoeffRoute::Hypergeometric => {
            let (ups, lows) = s.hyper_params();
            let zp = ctx.escalated_bits(n as f64 * std::f64::consts::PI);
            let z = -Float::with_val(zp, pi(zp).square_ref()) * Integer::from(n * n) / 4u32;
            let f = pfq(&ups, &lows, &z, ctx)?;
            Ok(hyper_prefactor(s, ctx)? * f * n)
        }
        CoeffRoute::Quadrature => {
            let c = Float::with_val(prec + 32, pi(prec + 32) * n);
            let f = Integrand::new(s.alpha.clone(), s.beta.clone(), Weight::Sin(c));
            let zero = Float::new(prec);
            let one = Float::with_val(prec, 1);
            let v = quadrature(&f, &zero, &one, ctx)?;
            Ok(quad_prefactor(s, ctx)? * v)
        }
    }
}

/// `C_1 … C_{n_max}` by the chosen route, sharing work across `n`.
pub fn coeffs(s: &WaveState, n_max: usize, route: CoeffRoute, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    route.check(s)?;
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let prec = ctx.working_bits();
    match route {
        CoeffRoute::BesselEqual => {
            let nu = bessel_order(s)?;
            let grid = bessel_j_half_pi_grid(nu, n_max, ctx)?;
            let pre = bessel_prefactor(s, nu, ctx)?;
            Ok((1..=n_max as u64)
                .map(|n| match sin_half_pi(n) {
                    0 => Float::new(prec),
                    sign => {
                        let scale = Float::with_val(prec, Integer::from(n).pow(nu));
                        let v = Float::with_val(prec, &pre * &grid[n as usize - 1]) / scale;
                        if sign < 0 {
                            -v
                        } else {
                            v
                        }
                    }
                })
                .collect())
        }
        CoeffRoute::Hypergeometric => {
            let (ups, lows) = s.hyper_params();
            let grid = pfq_pi_square_grid(&ups, &lows, &Rational::from((-1, 4)), n_max, ctx)?;
            let pre = hyper_prefactor(s, ctx)?;
            Ok((1..=n_max as u64)
                .map(|n| Float::with_val(prec, &pre * &grid[n as usize - 1]) * n)
                .collect())
        }
        CoeffRoute::Quadrature => {
            let pre = quad_prefactor(s, ctx)?;
            Ok(sine_moments(&s.alpha, &s.beta, n_max, ctx)?
                .into_iter()
                .map(|m| Float::with_val(prec, &pre * &m))
                .collect())
        }
    }
}

/// `Σ_{n ≤ N} |C_n|²`.
pub fn parseval_partial(s: &WaveState, n_terms: usize, route: CoeffRoute, ctx: &PrecisionContext) -> Result<Float> {
    if n_terms == 0 {
        return Err(Error::domain("parseval_partial needs N ≥ 1"));
    }
    let prec = ctx.working_bits();
    let squares: Vec<Float> = coeffs(s, n_terms, route, ctx)?
        .into_iter()
        .map(|c| Float::with_val(prec, c.square_ref()))
        .collect();
    Ok(block_tree_sum(&squares, prec))
}

/// `P` in `(x^α(1−x)^β)'' = x^{α−2}(1−x)^{β−2} P(x)`, as coefficients of 1, x, x².
pub fn second_derivative_poly(s: &WaveState) -> [Rational; 3] {
    let a = &s.alpha;
    let b = &s.beta;
    let aa = a * Rational::from(a - 1u32);
    let bb = b * Rational::from(b - 1u32);
    let ab2 = Rational::from(a * b) * 2u32;
    let p0 = aa.clone();
    let p1 = (-(aa.clone() * 2u32)) - &ab2;
    let p2 = aa + &ab2 + &bb;
    [p0, p1, p2]
}

fn poly_square(p: &[Rational; 3]) -> Vec<Rational> {
    let mut out = vec![Rational::new(); 5];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in p.iter().enumerate() {
            out[i + j] += Rational::from(a * b);
        }
    }
    out
}

fn check_moment_domain(s: &WaveState, moment: u32) -> Result<()> {
    let bound = match moment {
        1 => Rational::from((1, 2)),
        2 => Rational::from((3, 2)),
        m => return Err(Error::domain(format!("energy moment {m} is not 1 or 2"))),
    };
    if s.alpha <= bound || s.beta <= bound {
        return Err(Error::domain(format!(
            "⟨H^{moment}⟩ needs α, β > {bound}, got {s}"
        )));
    }
    Ok(())
}

fn gamma_q(z: Rational) -> Result<ExactValue> {
    gamma_exact(&z)
}

/// Exact `⟨H⟩` (moment 1) or `⟨H²⟩` (moment 2) in units ħ²/2m = a = 1.
pub fn energy_moment_integral(s: &WaveState, moment: u32) -> Result<ExactValue> {
    check_moment_domain(s, moment)?;
    let a = &s.alpha;
    let b = &s.beta;
    let inv_k = normalization_constant(s)?;
    match moment {
        1 => {
            // αβ B(2α−1, 2β−1) / ((2α+2β−1) K)
            let bb = beta_exact(&(twice(a) - 1u32), &(twice(b) - 1u32))?;
            let num = Rational::from(a * b);
            let den = twice(a) + twice(b) - 1u32;
            Ok(ExactValue::rational(num / den) * bb * inv_k)
        }
        _ => {
            // 3αβ(β−1)Γ(2α−1)Γ(2β−3) / (2(2α−3)(2α+2β−5)(2α+2β−3)Γ(2α+2β−6) K)
            let s2 = twice(a) + twice(b);
            let num = Rational::from(a * b) * Rational::from(b - 1u32) * 3u32;
            let den = (twice(a) - 3u32)
                * Rational::from(&s2 - 5u32)
                * Rational::from(&s2 - 3u32)
                * 2u32;
            let g = gamma_q(twice(a) - 1u32)? * gamma_q(twice(b) - 3u32)?;
            let g = g.checked_div(&gamma_q(s2 - 6u32)?)?;
            Ok(ExactValue::rational(num / den) * g * inv_k)
        }
    }
}

/// Direct quadrature of `∫ψ(−ψ'')` (moment 1) or `∫(ψ'')²` (moment 2).
pub fn energy_moment_quadrature(s: &WaveState, moment: u32, ctx: &PrecisionContext) -> Result<Float> {
    check_moment_domain(s, moment)?;
    let c2 = normalization_constant_float(s, ctx)?;
    let p = second_derivative_poly(s);
    let prec = ctx.working_bits();
    let zero = Float::new(prec);
    let one = Float::with_val(prec, 1);
    let (shift, weight, sign) = match moment {
        1 => (2u32, Weight::Poly(p.to_vec()), -1),
        _ => (4u32, Weight::Poly(poly_square(&p)), 1),
    };
    let f = Integrand::new(twice(&s.alpha) - shift, twice(&s.beta) - shift, weight);
    let v = quadrature(&f, &zero, &one, ctx)? * c2;
    Ok(if sign < 0 { -v } else { v })
}

/// `ψ_{αβ}` on a uniform grid of `points` nodes over [0, 1], endpoints included.
pub fn sample_wavefunction(s: &WaveState, points: usize, ctx: &PrecisionContext) -> Result<Vec<(Float, Float)>> {
    if points < 2 {
        return Err(Error::domain("sample_wavefunction needs at least 2 points"));
    }
    let prec = ctx.working_bits();
    let c = normalization_constant_float(s, ctx)?.sqrt();
    let a = Float::with_val(prec, &s.alpha);
    let b = Float::with_val(prec, &s.beta);
    let last = (points - 1) as u64;
    Ok((0..=last)
        .map(|i| {
            let x = Float::with_val(prec, i) / last;
            let psi = if i == 0 || i == last {
                Float::new(prec)
            } else {
                let one_minus = Float::with_val(prec, Rational::from((last - i, last)));
                let xa = Float::with_val(prec, (&x).pow(&a));
                let yb = Float::with_val(prec, (&one_minus).pow(&b));
                Float::with_val(prec, &c * &xa) * yb
            };
            (x, psi)
        })
        .collect())
}

/// CSV with header `x,psi`, fixed-point with `digits` fractional digits.
pub fn samples_csv(samples: &[(Float, Float)], digits: usize) -> String {
    let mut out = String::from("x,psi\n");
    for (x, psi) in samples {
        out.push_str(&decimal::fixed(x, digits));
        out.push(',');
        out.push_str(&decimal::fixed(psi, digits));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(a: (i64, i64), b: (i64, i64)) -> WaveState {
        WaveState::frac(a, b).unwrap()
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(192).unwrap()
    }

    fn close(a: &Float, b: &Float, log2: i32) -> bool {
        Float::with_val(a.prec().max(b.prec()), a - b).abs() <= Float::with_val(64, Float::i_exp(1, log2))
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalization_constant(&st((1, 2), (1, 2))).unwrap(), ExactValue::int(6));
        assert_eq!(normalization_constant(&st((1, 1), (1, 1))).unwrap(), ExactValue::int(30));
        assert_eq!(normalization_constant(&st((3, 2), (1, 2))).unwrap(), ExactValue::int(20));
        assert!(normalization_constant(&st((2, 3), (1, 1))).is_err());
        let v = normalization_constant_float(&st((2, 3), (1, 1)), &ctx()).unwrap();
        assert!(v > 0);
        assert!(WaveState::frac((1, 4), (1, 1)).is_err());
    }

    #[test]
    fn bessel_route_examples() {
        let c = ctx();
        let s = st((1, 2), (1, 2));
        assert!(coeff(&s, 2, CoeffRoute::BesselEqual, &c).unwrap().is_zero());
        let c1 = coeff(&s, 1, CoeffRoute::BesselEqual, &c).unwrap();
        let x = Float::with_val(300, pi(300) / 2u32);
        let want = Float::with_val(300, 3u32).sqrt() * bessel_j(1, &x, &c).unwrap();
        assert!(close(&c1, &want, c.target_log2()));
        assert!(matches!(
            coeff(&st((1, 1), (1, 2)), 1, CoeffRoute::BesselEqual, &c),
            Err(Error::Route(_))
        ));
    }

    #[test]
    fn routes_agree_on_small_states() {
        let c = ctx();
        for s in [st((1, 2), (1, 2)), st((1, 1), (1, 2)), st((3, 2), (5, 2))] {
            for n in [1u64, 2, 5] {
                let h = coeff(&s, n, CoeffRoute::Hypergeometric, &c).unwrap();
                let q = coeff(&s, n, CoeffRoute::Quadrature, &c).unwrap();
                assert!(close(&h, &q, c.target_log2() + 8), "{s} n={n}: {h} vs {q}");
            }
        }
    }

    #[test]
    fn batch_matches_single() {
        let c = ctx();
        let s = st((3, 2), (3, 2));
        for route in CoeffRoute::ALL {
            let batch = coeffs(&s, 6, route, &c).unwrap();
            for n in 1..=6u64 {
                let single = coeff(&s, n, route, &c).unwrap();
                assert!(close(&batch[n as usize - 1], &single, c.target_log2() + 8), "{route} n={n}");
            }
        }
    }

    #[test]
    fn parseval_first_term() {
        let c = ctx();
        let s = st((1, 2), (1, 2));
        let p1 = parseval_partial(&s, 1, CoeffRoute::BesselEqual, &c).unwrap();
        assert!((p1.to_f64() - 0.963_868_643_291_922_2).abs() < 1e-15);
        let p5 = parseval_partial(&st((1, 1), (1, 1)), 5, CoeffRoute::Hypergeometric, &c).unwrap();
        assert!((p5.to_f64() - 0.999_988_681_849_771_5).abs() < 1e-15);
    }

    #[test]
    fn energy_moments() {
        assert_eq!(energy_moment_integral(&st((1, 1), (1, 1)), 1).unwrap(), ExactValue::int(10));
        assert!(matches!(energy_moment_integral(&st((1, 2), (1, 2)), 1), Err(Error::Domain(_))));
        assert!(matches!(energy_moment_integral(&st((3, 2), (2, 1)), 2), Err(Error::Domain(_))));
        assert_eq!(
            energy_moment_integral(&st((2, 1), (5, 2)), 2).unwrap(),
            energy_moment_integral(&st((5, 2), (2, 1)), 2).unwrap()
        );
        assert_eq!(energy_moment_integral(&st((2, 1), (2, 1)), 2).unwrap(), ExactValue::int(504));
        let c = ctx();
        let q = energy_moment_quadrature(&st((1, 1), (1, 1)), 1, &c).unwrap();
        assert!(close(&q, &Float::with_val(64, 10), c.target_log2() + 8));
    }

    #[test]
    fn sampling() {
        let c = ctx();
        let s = st((1, 2), (1, 2));
        let pts = sample_wavefunction(&s, 3, &c).unwrap();
        assert!(pts[0].1.is_zero() && pts[2].1.is_zero());
        let want = Float::with_val(200, 6u32).sqrt() / 2u32;
        assert!(close(&pts[1].1, &want, -180));
        let csv = samples_csv(&pts, 4);
        assert_eq!(csv, "x,psi\n0.0000,0.0000\n0.5000,1.2247\n1.0000,0.0000\n");
        assert!(sample_wavefunction(&s, 1, &c).is_err());
    }
}
