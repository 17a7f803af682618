//! Alternating power series evaluated on the integer grid of π multiples.
//!
//! Every series in this crate is eventually evaluated at arguments such as
//! `nπ/2` or `−n²π²/4` with integer `n`. Writing the series in the variable
//! `t = n²` moves all powers of π into the coefficients, which are computed once
//! at the highest precision needed. Each grid point then costs one Horner pass
//! whose steps multiply by the small integer `n²` instead of a full-precision
//! float.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Hard cap on the number of retained coefficients.
const MAX_TERMS: usize = 1_000_000;

/// Consecutive negligible terms required before truncating.
pub(crate) const TAIL_RUN: usize = 64;

/// Coefficients `c_k` of `Σ c_k t^k`, with `c_{k+1} = c_k · base · ratio(k)`.
pub(crate) struct FoldedSeries {
    coeffs: Vec<Float>,
    log2_abs: Vec<f64>,
}

fn log2_abs(f: &Float) -> f64 {
    if f.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = f.to_f64_exp();
    m.abs().log2() + e as f64
}

impl FoldedSeries {
    /// Builds enough coefficients to evaluate at every `t ≤ t_max` with terms
    /// below `2^tol_log2` in magnitude once truncated.
    pub(crate) fn build(
        first: Float,
        base: &Float,
        ratio: impl Fn(u32) -> Rational,
        t_max: u64,
        tol_log2: f64,
    ) -> Result<Self> {
        let prec = first.prec();
        let log2_t = (t_max.max(1) as f64).log2();
        let mut coeffs = Vec::new();
        let mut logs = Vec::new();
        let mut c = first;
        let mut run = 0usize;
        let mut k = 0u32;
        loop {
            let l = log2_abs(&c);
            let term_log = l + k as f64 * log2_t;
            logs.push(l);
            let zero = c.is_zero();
            coeffs.push(c.clone());
            if zero {
                break;
            }
            if term_log < tol_log2 {
                run += 1;
                if run >= TAIL_RUN {
                    break;
                }
            } else {
                run = 0;
            }
            if coeffs.len() >= MAX_TERMS {
                return Err(Error::Convergence(format!(
                    "folded series needs more than {MAX_TERMS} terms"
                )));
            }
            let r = ratio(k);
            c *= base;
            c *= &r;
            c.set_prec(prec);
            k += 1;
        }
        Ok(Self {
            coeffs,
            log2_abs: logs,
        })
    }

    /// Number of leading coefficients needed at `t`.
    fn terms_needed(&self, t: u64, tol_log2: f64) -> usize {
        let log2_t = (t.max(1) as f64).log2();
        let mut run = 0usize;
        for (k, l) in self.log2_abs.iter().enumerate() {
            if l.is_infinite() {
                return k + 1;
            }
            if l + k as f64 * log2_t < tol_log2 {
                run += 1;
                if run >= TAIL_RUN {
                    return k + 1;
                }
            } else {
                run = 0;
            }
        }
        self.coeffs.len()
    }

    /// Horner evaluation of the truncated series at integer `t`, at `prec` bits.
    pub(crate) fn eval(&self, t: u64, prec: u32, tol_log2: f64) -> Float {
        let n = self.terms_needed(t, tol_log2);
        let mut acc = Float::with_val(prec, &self.coeffs[n - 1]);
        for c in self.coeffs[..n - 1].iter().rev() {
            if t <= u32::MAX as u64 {
                acc *= t as u32;
            } else {
                acc *= rug::Integer::from(t);
            }
            acc += c;
        }
        acc
    }
}

/// Grids are cached per exact length: the build precision grows with `n_max`,
/// so a longer grid can differ from a shorter one in the last working bits.
type GridKey = (String, usize);

fn grid_cache() -> &'static Mutex<HashMap<GridKey, Arc<Vec<Float>>>> {
    static CACHE: OnceLock<Mutex<HashMap<GridKey, Arc<Vec<Float>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns the grid `values[n-1]` for `n = 1..=n_max`, computing it with
/// `compute(n_max)` on first use.
pub(crate) fn cached_grid(
    key: &str,
    n_max: usize,
    compute: impl FnOnce(usize) -> Result<Vec<Float>>,
) -> Result<Arc<Vec<Float>>> {
    let full_key = (key.to_string(), n_max);
    if let Some(v) = grid_cache().lock().expect("grid cache poisoned").get(&full_key) {
        return Ok(v.clone());
    }
    let values = Arc::new(compute(n_max)?);
    let mut cache = grid_cache().lock().expect("grid cache poisoned");
    Ok(cache.entry(full_key).or_insert(values).clone())
}

/// Drops every cached grid.
pub fn clear_grid_cache() {
    grid_cache().lock().expect("grid cache poisoned").clear();
}

/// Evaluates `f(n)` for `n = 1..=n_max` in parallel, preserving order.
pub(crate) fn par_grid<F>(n_max: usize, f: F) -> Vec<Float>
where
    F: Fn(u64) -> Float + Sync + Send,
{
    (1..=n_max as u64).into_par_iter().map(f).collect()
}
