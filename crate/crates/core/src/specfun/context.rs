use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use rug::Float;

use crate::error::{Error, Result};

/// Guard bits subtracted from the nominal precision when stating error targets.
pub const DEFAULT_GUARD_BITS: u32 = 16;

/// Extra bits carried by every internal evaluation on top of the nominal precision.
pub const EVAL_GUARD_BITS: u32 = 32;

/// Working precision for one evaluation, immutable once built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    precision_bits: u32,
    guard_bits: u32,
}

impl PrecisionContext {
    pub fn new(precision_bits: u32) -> Result<Self> {
        Self::with_guard(precision_bits, DEFAULT_GUARD_BITS)
    }

    pub fn with_guard(precision_bits: u32, guard_bits: u32) -> Result<Self> {
        if precision_bits < 64 {
            return Err(Error::domain(format!(
                "precision must be at least 64 bits, got {precision_bits}"
            )));
        }
        if guard_bits < 16 || guard_bits >= precision_bits {
            return Err(Error::domain(format!(
                "guard bits must be in [16, {precision_bits}), got {guard_bits}"
            )));
        }
        Ok(Self {
            precision_bits,
            guard_bits,
        })
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// log2 of [`Self::target_abs_error`].
    pub fn target_log2(&self) -> i32 {
        self.guard_bits as i32 - self.precision_bits as i32
    }

    /// 2^(−precision_bits + guard_bits).
    pub fn target_abs_error(&self) -> Float {
        Float::with_val(self.precision_bits, Float::i_exp(1, self.target_log2()))
    }

    /// Precision used for ordinary internal evaluation.
    pub fn working_bits(&self) -> u32 {
        self.precision_bits + EVAL_GUARD_BITS
    }

    /// Precision for an alternating series whose argument has magnitude `magnitude`:
    /// the largest term is about e^magnitude, so that many bits cancel.
    pub fn escalated_bits(&self, magnitude: f64) -> u32 {
        let lost = (1.5 * magnitude.abs() * std::f64::consts::LOG2_E).ceil();
        self.precision_bits + lost as u32 + EVAL_GUARD_BITS
    }

    pub fn doubled(&self) -> Self {
        Self {
            precision_bits: self.precision_bits * 2,
            guard_bits: self.guard_bits,
        }
    }

    /// Decimal digits justified by the error target.
    pub fn decimal_digits(&self) -> usize {
        ((self.precision_bits - self.guard_bits) as f64 * std::f64::consts::LOG10_2).floor() as usize
    }
}

fn pi_cache() -> &'static Mutex<BTreeMap<u32, Float>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Float>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// π by the Gauss–Legendre arithmetic–geometric mean, at `prec` bits.
///
/// Values are cached per precision; a request below an already cached precision
/// is served by rounding the wider value.
pub fn pi(prec: u32) -> Float {
    {
        let cache = pi_cache().lock().expect("pi cache poisoned");
        if let Some(v) = cache.get(&prec) {
            return v.clone();
        }
        if let Some((_, wider)) = cache.range(prec + 16..).next() {
            return Float::with_val(prec, wider);
        }
    }
    let v = Float::with_val(prec, agm_pi(prec + 64));
    pi_cache()
        .lock()
        .expect("pi cache poisoned")
        .insert(prec, v.clone());
    v
}

fn agm_pi(prec: u32) -> Float {
    let mut a = Float::with_val(prec, 1);
    let mut b = Float::with_val(prec, 0.5f64).sqrt();
    let mut t = Float::with_val(prec, 0.25f64);
    let mut p = Float::with_val(prec, 1);
    let eps_exp = -(prec as i32) + 4;
    loop {
        let a_next = Float::with_val(prec, &a + &b) / 2u32;
        let b_next = Float::with_val(prec, &a * &b).sqrt();
        let d = Float::with_val(prec, &a - &a_next);
        let d2 = Float::with_val(prec, d.square_ref());
        t -= Float::with_val(prec, &p * &d2);
        p *= 2u32;
        let gap = Float::with_val(prec, &a_next - &b_next);
        a = a_next;
        b = b_next;
        if gap.is_zero() || gap.get_exp().is_none_or(|e| e < eps_exp) {
            break;
        }
    }
    let s = Float::with_val(prec, &a + &b);
    Float::with_val(prec, s.square_ref()) / (t * 4u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agm_matches_mpfr_constant() {
        for prec in [64u32, 320, 1000, 5000] {
            let ours = pi(prec);
            let reference = Float::with_val(prec, rug::float::Constant::Pi);
            assert_eq!(ours, reference, "prec {prec}");
        }
    }

    #[test]
    fn context_bounds() {
        assert!(PrecisionContext::new(63).is_err());
        assert!(PrecisionContext::with_guard(320, 8).is_err());
        let c = PrecisionContext::new(320).unwrap();
        assert_eq!(c.target_log2(), -304);
        assert!(c.escalated_bits(10.0) > 320 + 32);
    }
}
