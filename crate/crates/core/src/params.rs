//! AFDM parameter set.
//!
//! A waveform is fixed by the subcarrier count `N`, the wrapping count
//! `C = 2N·c1` and the second chirp parameter `c2`, plus the Nyquist
//! sampling interval `Δt`. Everything else (frame duration, subcarrier
//! spacing, subchirp duration, analog chirp rate) is derived once here.

use serde::{Deserialize, Serialize};

use crate::error::{AfdmError, Result};

/// Waveform parameters with derived quantities.
///
/// Constructed only through [`AfdmParams::new`], which enforces `N` even,
/// `C ≥ 1` and `Δt > 0`; the struct is immutable afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsSpec", into = "ParamsSpec")]
pub struct AfdmParams {
    n: usize,
    c_count: usize,
    c2: f64,
    delta_t: f64,
    // derived
    c1: f64,
    period: f64,
    delta_f: f64,
    t_sc: f64,
    c1_tilde: f64,
}

/// Serialized form of [`AfdmParams`]; derived fields are recomputed on load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsSpec {
    pub n: usize,
    pub c_count: usize,
    pub c2: f64,
    pub delta_t_s: f64,
}

impl TryFrom<ParamsSpec> for AfdmParams {
    type Error = AfdmError;

    fn try_from(spec: ParamsSpec) -> Result<Self> {
        AfdmParams::new(spec.n, spec.c_count, spec.c2, spec.delta_t_s)
    }
}

impl From<AfdmParams> for ParamsSpec {
    fn from(p: AfdmParams) -> Self {
        ParamsSpec {
            n: p.n,
            c_count: p.c_count,
            c2: p.c2,
            delta_t_s: p.delta_t,
        }
    }
}

impl AfdmParams {
    pub fn new(n: usize, c_count: usize, c2: f64, delta_t: f64) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(AfdmError::InvalidConfig(format!(
                "N must be even and at least 2, got {n}"
            )));
        }
        if c_count < 1 {
            return Err(AfdmError::InvalidConfig("C must be at least 1".into()));
        }
        if !(delta_t.is_finite() && delta_t > 0.0) {
            return Err(AfdmError::InvalidConfig(format!(
                "delta_t must be positive, got {delta_t}"
            )));
        }
        if !c2.is_finite() {
            return Err(AfdmError::InvalidConfig("c2 must be finite".into()));
        }
        let period = n as f64 * delta_t;
        let c1 = c_count as f64 / (2 * n) as f64;
        Ok(AfdmParams {
            n,
            c_count,
            c2,
            delta_t,
            c1,
            period,
            delta_f: 1.0 / period,
            t_sc: period / c_count as f64,
            c1_tilde: c1 / (delta_t * delta_t),
        })
    }

    /// Parameters with a given subcarrier spacing instead of a sampling interval.
    pub fn with_spacing(n: usize, c_count: usize, c2: f64, delta_f: f64) -> Result<Self> {
        if !(delta_f.is_finite() && delta_f > 0.0) {
            return Err(AfdmError::InvalidConfig(format!(
                "delta_f must be positive, got {delta_f}"
            )));
        }
        Self::new(n, c_count, c2, 1.0 / (n as f64 * delta_f))
    }

    /// Same waveform with a different `c2`.
    pub fn with_c2(&self, c2: f64) -> Result<Self> {
        Self::new(self.n, self.c_count, c2, self.delta_t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Wrapping count `C = 2N·c1`.
    pub fn c_count(&self) -> usize {
        self.c_count
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    /// Frame duration `T = N·Δt`.
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn delta_f(&self) -> f64 {
        self.delta_f
    }

    /// Subchirp duration `T/C`.
    pub fn t_sc(&self) -> f64 {
        self.t_sc
    }

    /// Analog chirp-rate half `c1/Δt²`.
    pub fn c1_tilde(&self) -> f64 {
        self.c1_tilde
    }

    pub fn bandwidth(&self) -> f64 {
        1.0 / self.delta_t
    }

    /// Errors unless `m < N`.
    pub fn check_index(&self, m: usize) -> Result<()> {
        if m >= self.n {
            Err(AfdmError::SubcarrierOutOfRange { index: m, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn spec(&self) -> ParamsSpec {
        (*self).into()
    }
}
