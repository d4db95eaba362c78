//! The integral indicator `I(c, t1, t2) = ∫_{t1}^{t2} e^{j2πct} dt`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{AfdmError, Result};
use crate::phase::cis_cycles;

/// Below this value of `|c|·(t2 − t1)` the sinc factor is taken from its series.
pub const C_EPS: f64 = 1e-9;

#[inline]
fn sinc(x: f64) -> f64 {
    if x.abs() < C_EPS {
        let px = PI * x;
        1.0 - px * px / 6.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// `e^{jπc(t1+t2)}·(t2 − t1)·sinc(c(t2 − t1))`, valid for either ordering of the limits.
#[inline]
pub(crate) fn indicator(c: f64, t1: f64, t2: f64) -> Complex64 {
    let len = t2 - t1;
    cis_cycles(0.5 * c * (t1 + t2)) * (len * sinc(c * len))
}

/// `∫_{t1}^{t2} e^{j2πct} dt` for `c` in Hz and limits in seconds.
///
/// Evaluated in the sinc form, which is continuous across `c = 0` and free of
/// the cancellation in `(e^{j2πct2} − e^{j2πct1})/(j2πc)` for small `c`.
pub fn integral_indicator(c: f64, t1: f64, t2: f64) -> Result<Complex64> {
    if t1 > t2 {
        return Err(AfdmError::Precondition(format!("integral limits reversed: {t1} > {t2}")));
    }
    Ok(indicator(c, t1, t2))
}
