use rug::Float;

use super::context::PrecisionContext;
use crate::error::{Error, Result};

/// Γ(x) for real `x > 0`, at `ctx.working_bits()` bits.
pub fn gamma_real(x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if x.is_nan() || *x <= 0 || x.is_infinite() {
        return Err(Error::domain(format!("gamma_real needs finite x > 0, got {x}")));
    }
    Ok(Float::with_val(ctx.working_bits(), x.gamma_ref()))
}
