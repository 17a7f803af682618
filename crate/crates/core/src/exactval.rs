//! Exact arithmetic over the rationals extended by powers of √π.
//!
//! Every closed form produced by this crate has the shape `r · π^(k/2)` or a short
//! sum of such terms. [`ExactValue`] is one such monomial and [`ExactSum`] is the
//! canonical sum: terms ordered by strictly increasing π power, none of them zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::specfun::{pi, PrecisionContext};

pub use rug::Rational;

/// `coeff · π^(pi_half_power / 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactValue {
    coeff: Rational,
    pi_half_power: i32,
}

impl ExactValue {
    pub fn new(coeff: Rational, pi_half_power: i32) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Self {
                coeff,
                pi_half_power,
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            coeff: Rational::new(),
            pi_half_power: 0,
        }
    }

    pub fn one() -> Self {
        Self::rational(Rational::from(1))
    }

    pub fn rational(r: impl Into<Rational>) -> Self {
        Self::new(r.into(), 0)
    }

    pub fn int(n: i64) -> Self {
        Self::rational(Rational::from(n))
    }

    /// `num/den`; panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::rational(Rational::from((num, den)))
    }

    /// `π^(half_power/2)`.
    pub fn pi_pow(half_power: i32) -> Self {
        Self::new(Rational::from(1), half_power)
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn pi_half_power(&self) -> i32 {
        self.pi_half_power
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }

    pub fn has_integer_pi_power(&self) -> bool {
        self.pi_half_power % 2 == 0
    }

    /// Sum of two monomials with the same π power. Mismatched powers are an
    /// algebra error; use [`ExactSum`] to mix them.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_half_power != other.pi_half_power {
            return Err(Error::Algebra(format!(
                "cannot add {self} and {other} as a single monomial"
            )));
        }
        Ok(Self::new(
            Rational::from(&self.coeff + &other.coeff),
            self.pi_half_power,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("reciprocal of zero"));
        }
        Ok(Self::new(
            Rational::from(self.coeff.recip_ref()),
            -self.pi_half_power,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn powi(&self, exp: i32) -> Result<Self> {
        if exp < 0 {
            return self.recip()?.powi(-exp);
        }
        let coeff = self.coeff.pow_ref_rational(exp as u32);
        Ok(Self::new(coeff, self.pi_half_power * exp))
    }

    /// Numeric value at the context precision.
    pub fn to_float(&self, ctx: &PrecisionContext) -> Float {
        let prec = ctx.precision_bits();
        if self.is_zero() {
            return Float::new(prec);
        }
        let work = prec + 32;
        let mut v = Float::with_val(work, &self.coeff);
        if self.pi_half_power != 0 {
            let p = pi(work);
            let mut factor = Float::with_val(work, p.clone().pow(self.pi_half_power.div_euclid(2)));
            if self.pi_half_power.rem_euclid(2) == 1 {
                factor *= p.sqrt();
            }
            v *= factor;
        }
        Float::with_val(prec, v)
    }
}

trait RationalPow {
    fn pow_ref_rational(&self, exp: u32) -> Rational;
}

impl RationalPow for Rational {
    fn pow_ref_rational(&self, exp: u32) -> Rational {
        let (n, d) = self.clone().into_numer_denom();
        Rational::from((n.pow(exp), d.pow(exp)))
    }
}

impl Default for ExactValue {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for ExactValue {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

impl From<i64> for ExactValue {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        ExactValue::new(-self.coeff, self.pi_half_power)
    }
}

impl Mul<&ExactValue> for &ExactValue {
    type Output = ExactValue;
    fn mul(self, rhs: &ExactValue) -> ExactValue {
        ExactValue::new(
            Rational::from(&self.coeff * &rhs.coeff),
            self.pi_half_power + rhs.pi_half_power,
        )
    }
}

impl Mul for ExactValue {
    type Output = ExactValue;
    fn mul(self, rhs: ExactValue) -> ExactValue {
        &self * &rhs
    }
}

impl Mul<&ExactValue> for ExactValue {
    type Output = ExactValue;
    fn mul(self, rhs: &ExactValue) -> ExactValue {
        &self * rhs
    }
}

/// Canonical sum of [`ExactValue`] terms with distinct π powers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactSum {
    terms: Vec<ExactValue>,
}

impl ExactSum {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Merges equal π powers, drops zeros, orders by π power.
    pub fn from_terms(terms: impl IntoIterator<Item = ExactValue>) -> Self {
        let mut terms: Vec<ExactValue> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        terms.sort_by_key(|t| t.pi_half_power);
        let mut merged: Vec<ExactValue> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.pi_half_power == t.pi_half_power => {
                    *last = last.try_add(&t).expect("equal powers");
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.is_zero());
        Self { terms: merged }
    }

    pub fn canonicalize(&self) -> Self {
        Self::from_terms(self.terms.iter().cloned())
    }

    pub fn terms(&self) -> &[ExactValue] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term, when the sum has at most one.
    pub fn as_single(&self) -> Option<ExactValue> {
        match self.terms.len() {
            0 => Some(ExactValue::zero()),
            1 => Some(self.terms[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, k: &ExactValue) -> Self {
        Self::from_terms(self.terms.iter().map(|t| t * k))
    }

    pub fn checked_div(&self, k: &ExactValue) -> Result<Self> {
        Ok(self.scale(&k.recip()?))
    }

    pub fn to_float(&self, ctx: &PrecisionContext) -> Float {
        let work = PrecisionContext::new(ctx.precision_bits() + 32).expect("valid precision");
        let mut acc = Float::new(work.precision_bits());
        for t in &self.terms {
            acc += t.to_float(&work);
        }
        Float::with_val(ctx.precision_bits(), acc)
    }
}

impl From<ExactValue> for ExactSum {
    fn from(v: ExactValue) -> Self {
        Self::from_terms([v])
    }
}

impl Add<&ExactSum> for &ExactSum {
    type Output = ExactSum;
    fn add(self, rhs: &ExactSum) -> ExactSum {
        ExactSum::from_terms(self.terms.iter().chain(rhs.terms.iter()).cloned())
    }
}

impl Add for ExactSum {
    type Output = ExactSum;
    fn add(self, rhs: ExactSum) -> ExactSum {
        &self + &rhs
    }
}

impl Neg for ExactSum {
    type Output = ExactSum;
    fn neg(self) -> ExactSum {
        ExactSum::from_terms(self.terms.into_iter().map(|t| -t))
    }
}

impl Sub<&ExactSum> for &ExactSum {
    type Output = ExactSum;
    fn sub(self, rhs: &ExactSum) -> ExactSum {
        self + &(-rhs.clone())
    }
}

impl Sub for ExactSum {
    type Output = ExactSum;
    fn sub(self, rhs: ExactSum) -> ExactSum {
        &self - &rhs
    }
}

/// Numeric value of an exact sum at context precision.
pub fn exact_to_float(v: &ExactSum, ctx: &PrecisionContext) -> Float {
    v.to_float(ctx)
}

fn half_integer_parts(z: &Rational) -> Option<(Integer, bool)> {
    let den = z.denom();
    if *den == 1 {
        Some((z.numer().clone(), false))
    } else if *den == 2 {
        // z = m + 1/2
        Some((Integer::from(z.numer() - 1u32) / 2u32, true))
    } else {
        None
    }
}

/// Γ(z) for positive integer or half-integer `z`.
pub fn gamma_exact(z: &Rational) -> Result<ExactValue> {
    if *z <= 0 {
        return Err(Error::domain(format!("gamma_exact needs z > 0, got {z}")));
    }
    let (m, half) = half_integer_parts(z)
        .ok_or_else(|| Error::domain(format!("gamma_exact needs an integer or half-integer, got {z}")))?;
    let m = m
        .to_u32()
        .ok_or_else(|| Error::domain(format!("gamma_exact argument too large: {z}")))?;
    if !half {
        let f = Integer::from(Integer::factorial(m - 1));
        Ok(ExactValue::rational(Rational::from(f)))
    } else {
        // Γ(m + 1/2) = (2m)! / (4^m m!) · √π
        let num = Integer::from(Integer::factorial(2 * m));
        let den = Integer::from(Integer::factorial(m)) * Integer::from(Integer::u_pow_u(4, m));
        Ok(ExactValue::new(Rational::from((num, den)), 1))
    }
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b) for positive integers or half-integers.
pub fn beta_exact(a: &Rational, b: &Rational) -> Result<ExactValue> {
    let ga = gamma_exact(a)?;
    let gb = gamma_exact(b)?;
    let gab = gamma_exact(&Rational::from(a + b))?;
    (ga * gb).checked_div(&gab)
}

/// Rising factorial (a)_k = a(a+1)…(a+k−1).
pub fn pochhammer_exact(a: &Rational, k: u32) -> Rational {
    let mut acc = Rational::from(1);
    let mut term = a.clone();
    for _ in 0..k {
        acc *= &term;
        term += 1;
    }
    acc
}

fn superscript(n: i64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s = String::new();
    if n < 0 {
        s.push('⁻');
    }
    for c in n.unsigned_abs().to_string().chars() {
        s.push(DIGITS[c.to_digit(10).unwrap() as usize]);
    }
    s
}

fn pi_factor(half_power: i32) -> String {
    let k = half_power.abs();
    if k % 2 == 1 {
        return format!("π^({k}/2)");
    }
    match k / 2 {
        1 => "π".to_string(),
        m => format!("π{}", superscript(m as i64)),
    }
}

/// Renders the magnitude (sign handled by the caller).
fn fmt_magnitude(v: &ExactValue) -> String {
    let r = Rational::from(v.coeff.abs_ref());
    let (num, den) = (r.numer(), r.denom());
    let k = v.pi_half_power;
    match k.cmp(&0) {
        Ordering::Equal => {
            if *den == 1 {
                num.to_string()
            } else {
                format!("{num}/{den}")
            }
        }
        Ordering::Greater => {
            let p = pi_factor(k);
            let top = if *num == 1 { p } else { format!("{num}{p}") };
            if *den == 1 {
                top
            } else {
                format!("{top}/{den}")
            }
        }
        Ordering::Less => {
            let p = pi_factor(k);
            let bottom = if *den == 1 { p } else { format!("({den}{p})") };
            format!("{num}/{bottom}")
        }
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.coeff < 0 {
            write!(f, "−")?;
        }
        write!(f, "{}", fmt_magnitude(self))
    }
}

impl fmt::Display for ExactSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = *t.coeff() < 0;
            match (i, neg) {
                (0, true) => write!(f, "−")?,
                (0, false) => {}
                (_, true) => write!(f, " − ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}", fmt_magnitude(t))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    num: String,
    den: String,
    pi_half_power: i32,
}

#[derive(Serialize, Deserialize)]
struct SumRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for ExactSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SumRepr {
            terms: self
                .terms
                .iter()
                .map(|t| TermRepr {
                    num: t.coeff.numer().to_string(),
                    den: t.coeff.denom().to_string(),
                    pi_half_power: t.pi_half_power,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactSum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SumRepr::deserialize(d)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            let num: Integer = t.num.parse().map_err(D::Error::custom)?;
            let den: Integer = t.den.parse().map_err(D::Error::custom)?;
            if den <= 0 {
                return Err(D::Error::custom("denominator must be positive"));
            }
            terms.push(ExactValue::new(Rational::from((num, den)), t.pi_half_power));
        }
        Ok(ExactSum::from_terms(terms))
    }
}

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExactSum::from(self.clone()).serialize(s)
    }
}
