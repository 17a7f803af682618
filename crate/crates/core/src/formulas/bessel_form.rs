//! Parseval identities of half-integer states written as Bessel series.
//!
//! For `α ≤ β` half-integers, `d = β − α` and `ν = α + 1/2`, the sine
//! coefficient of `x^α (1−x)^β` at frequency `nπ` is
//!
//! ```text
//! I_n = 2^(−α−β−1) c_ν [sin(z) E(z) + cos(z) O(z)],   z = nπ/2,
//! G(z) = z^(−ν) J_ν(z),   c_ν = √π Γ(ν+1/2) 2^ν,
//! E = Σ_{j even} C(d,j) (−1)^(j/2) G^(j),   O = Σ_{j odd} C(d,j) (−1)^((j−1)/2) G^(j).
//! ```
//!
//! Derivatives follow `d/dz[z^k J_m] = k z^(k−1) J_m + z^k (J_(m−1) − J_(m+1))/2` and
//! everything is reduced to the basis `{J_ν, J_(ν+1)}` with the three-term
//! recurrence. Since `sin(nπ/2)` vanishes on even `n` and `cos(nπ/2)` on odd
//! `n`, `Σ |C_n|² = 1` splits into odd-n series from `E²` and even-n series
//! from `O²`.

use std::collections::BTreeMap;

use rug::{Integer, Rational};

use super::closed::parseval_sum_closed;
use super::family::{Parity, SeriesFamily};
use crate::error::{Error, Result};
use crate::exactval::{beta_exact, gamma_exact, ExactSum, ExactValue};
use crate::spectral::{normalization_constant, WaveState};

/// `Σ_(order, z power) r · z^k J_m`.
type BesselExpr = BTreeMap<(i32, i32), Rational>;

/// `Σ_k r_k z^k`.
type Laurent = BTreeMap<i32, Rational>;

fn add_term(e: &mut BesselExpr, order: i32, zpow: i32, r: Rational) {
    if r == 0 {
        return;
    }
    let slot = e.entry((order, zpow)).or_default();
    *slot += r;
    if *slot == 0 {
        e.remove(&(order, zpow));
    }
}

fn derivative(e: &BesselExpr) -> BesselExpr {
    let mut out = BesselExpr::new();
    for (&(m, k), r) in e {
        if k != 0 {
            add_term(&mut out, m, k - 1, Rational::from(r * k));
        }
        let half = Rational::from(r / 2u32);
        add_term(&mut out, m - 1, k, half.clone());
        add_term(&mut out, m + 1, k, -half);
    }
    out
}

/// Rewrites every order in terms of `J_ν` and `J_(ν+1)`.
fn reduce(mut e: BesselExpr, nu: i32) -> (Laurent, Laurent) {
    loop {
        let top = e.keys().map(|&(m, _)| m).max();
        match top {
            Some(m) if m > nu + 1 => {
                // J_m = 2(m−1)/z J_(m−1) − J_(m−2)
                let terms: Vec<(i32, Rational)> = e
                    .iter()
                    .filter(|(&(mm, _), _)| mm == m)
                    .map(|(&(_, k), r)| (k, r.clone()))
                    .collect();
                for (k, r) in terms {
                    e.remove(&(m, k));
                    add_term(&mut e, m - 1, k - 1, Rational::from(&r * (2 * (m - 1))));
                    add_term(&mut e, m - 2, k, -r);
                }
            }
            _ => break,
        }
    }
    loop {
        let bottom = e.keys().map(|&(m, _)| m).min();
        match bottom {
            Some(m) if m < nu => {
                // J_m = 2(m+1)/z J_(m+1) − J_(m+2)
                let terms: Vec<(i32, Rational)> = e
                    .iter()
                    .filter(|(&(mm, _), _)| mm == m)
                    .map(|(&(_, k), r)| (k, r.clone()))
                    .collect();
                for (k, r) in terms {
                    e.remove(&(m, k));
                    add_term(&mut e, m + 1, k - 1, Rational::from(&r * (2 * (m + 1))));
                    add_term(&mut e, m + 2, k, -r);
                }
            }
            _ => break,
        }
    }
    let mut low = Laurent::new();
    let mut high = Laurent::new();
    for ((m, k), r) in e {
        let target = if m == nu { &mut low } else { &mut high };
        target.insert(k, r);
    }
    (low, high)
}

fn binomial(n: u32, k: u32) -> Rational {
    Rational::from(Integer::from(Integer::binomial_u(n, k)))
}

/// `(E, O)` with each part reduced to `(J_ν coefficient, J_(ν+1) coefficient)`.
fn quadratic_parts(nu: i32, d: u32) -> ((Laurent, Laurent), (Laurent, Laurent)) {
    let mut even = BesselExpr::new();
    let mut odd = BesselExpr::new();
    let mut g = BesselExpr::new();
    add_term(&mut g, nu, -nu, Rational::from(1));
    for j in 0..=d {
        let c = binomial(d, j);
        let (target, sign) = if j % 2 == 0 {
            (&mut even, if (j / 2) % 2 == 0 { 1 } else { -1 })
        } else {
            (&mut odd, if ((j - 1) / 2) % 2 == 0 { 1 } else { -1 })
        };
        for (&(m, k), r) in &g {
            add_term(target, m, k, Rational::from(r * &c) * sign);
        }
        g = derivative(&g);
    }
    (reduce(even, nu), reduce(odd, nu))
}

/// Squares `a J_ν + b J_(ν+1)` into `(p, q, z power) → coefficient`.
fn square(low: &Laurent, high: &Laurent, nu: i32) -> BTreeMap<(i32, i32, i32), Rational> {
    let mut out: BTreeMap<(i32, i32, i32), Rational> = BTreeMap::new();
    let mut push = |p: i32, q: i32, k: i32, r: Rational| {
        let slot = out.entry((p, q, k)).or_default();
        *slot += r;
    };
    for (&k1, a) in low {
        for (&k2, b) in low {
            push(nu, nu, k1 + k2, Rational::from(a * b));
        }
        for (&k2, b) in high {
            push(nu, nu + 1, k1 + k2, Rational::from(a * b) * 2u32);
        }
    }
    for (&k1, a) in high {
        for (&k2, b) in high {
            push(nu + 1, nu + 1, k1 + k2, Rational::from(a * b));
        }
    }
    out.retain(|_, r| *r != 0);
    out
}

/// `Σ coefficient · family = rhs` for one state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub alpha: Rational,
    pub beta: Rational,
    pub terms: Vec<(SeriesFamily, ExactValue)>,
    pub rhs: ExactSum,
}

impl Identity {
    pub fn coefficient(&self, f: &SeriesFamily) -> Option<&ExactValue> {
        self.terms.iter().find(|(g, _)| g == f).map(|(_, c)| c)
    }

    /// Multiplies both sides by `k`.
    pub fn scaled(&self, k: &ExactValue) -> Identity {
        Identity {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            terms: self.terms.iter().map(|(f, c)| (f.clone(), c * k)).collect(),
            rhs: self.rhs.scale(k),
        }
    }
}

fn half_odd(x: &Rational) -> bool {
    *x.denom() == 2
}

/// The Parseval identity of the half-integer state `(α, β)` as a linear
/// relation among Bessel series, for any `|α − β|`.
pub fn state_identity(alpha: &Rational, beta: &Rational) -> Result<Identity> {
    let state = WaveState::new(alpha.clone(), beta.clone())?;
    if !half_odd(alpha) || !half_odd(beta) {
        return Err(Error::Unsupported(format!(
            "Bessel form needs half-integer α and β, got ({alpha}, {beta})"
        )));
    }
    let (lo, hi) = if alpha <= beta { (alpha, beta) } else { (beta, alpha) };
    let nu_r = lo + Rational::from((1, 2));
    let nu = nu_r
        .numer()
        .to_i32()
        .filter(|&v| v <= 64)
        .ok_or_else(|| Error::domain(format!("state ({alpha}, {beta}) is too large")))?;
    let d = Rational::from(hi - lo)
        .numer()
        .to_u32()
        .filter(|&v| v <= 64)
        .ok_or_else(|| Error::domain(format!("state ({alpha}, {beta}) is too large")))?;

    // (2/K) 2^(−2(α+β+1)) π Γ(ν+1/2)² 4^ν
    let sum = Rational::from(alpha + beta).numer().to_i32().expect("integer α+β");
    let two = ExactValue::int(2);
    let pref = ExactValue::int(2)
        * normalization_constant(&state)?
        * two.powi(2 * nu - 2 * (sum + 1))?
        * gamma_exact(&(&nu_r + Rational::from((1, 2))))?.powi(2)?
        * ExactValue::pi_pow(2);

    let ((e_lo, e_hi), (o_lo, o_hi)) = quadratic_parts(nu, d);
    let mut acc: BTreeMap<SeriesFamily, ExactValue> = BTreeMap::new();
    for (parity, sq) in [(Parity::Odd, square(&e_lo, &e_hi, nu)), (Parity::Even, square(&o_lo, &o_hi, nu))] {
        for ((p, q, k), r) in sq {
            if k >= 0 {
                return Err(Error::Algebra(format!(
                    "state ({alpha}, {beta}) produced a non-decaying z^{k} term"
                )));
            }
            let family = SeriesFamily::bessel(parity, p as u32, q as u32, (-k) as u32);
            // z^k at z = nπ/2 is (π/2)^k n^k
            let c = &pref * &(ExactValue::new(r, 2 * k) * two.powi(-k)?);
            let slot = acc.entry(family).or_insert_with(ExactValue::zero);
            *slot = slot.try_add(&c)?;
        }
    }
    let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();

    // (2/K) π² B(α+2, β+1)² · Σ n² F_n², which is 1
    let b = beta_exact(&Rational::from(alpha + 2u32), &Rational::from(beta + 1u32))?;
    let rhs = ExactValue::int(2)
        * normalization_constant(&state)?
        * ExactValue::pi_pow(4)
        * b.powi(2)?
        * parseval_sum_closed(alpha, beta)?;
    Ok(Identity {
        alpha: alpha.clone(),
        beta: beta.clone(),
        terms,
        rhs: rhs.into(),
    })
}

/// [`state_identity`] restricted to the cases the solved chain relies on,
/// `|α − β| ≤ 2`.
pub fn bessel_conversion(alpha: &Rational, beta: &Rational) -> Result<Identity> {
    let d = Rational::from(alpha - beta).abs();
    if d > 2 {
        return Err(Error::Unsupported(format!(
            "Bessel conversion covers |α − β| ≤ 2, got ({alpha}, {beta})"
        )));
    }
    state_identity(alpha, beta)
}
