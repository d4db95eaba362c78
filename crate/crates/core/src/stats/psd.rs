//! Periodogram of a single continuous chirp subcarrier.

use std::io::Write;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{AfdmError, Result};
use crate::params::AfdmParams;
use crate::subcarrier::subcarrier_continuous;

pub const PSD_CSV_HEADER: [&str; 2] = ["freq_hz", "power_db"];

/// Zero-padding factor applied on top of the time-domain oversampling.
pub const PSD_ZERO_PAD: usize = 4;

/// Floor of the normalised spectrum, in dB.
pub const PSD_FLOOR_DB: f64 = -300.0;

/// Spectrum normalised so that its maximum is 0 dB, on ascending frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdCurve {
    pub freq: Vec<f64>,
    pub power_db: Vec<f64>,
}

impl PsdCurve {
    /// Fraction of the (linear) power falling in `[f_lo, f_hi]`.
    pub fn power_fraction(&self, f_lo: f64, f_hi: f64) -> f64 {
        let lin: Vec<f64> = self.power_db.iter().map(|d| 10f64.powf(d / 10.0)).collect();
        let total: f64 = lin.iter().sum();
        let inside: f64 = self
            .freq
            .iter()
            .zip(&lin)
            .filter(|(f, _)| **f >= f_lo && **f <= f_hi)
            .map(|(_, v)| v)
            .sum();
        inside / total
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(PSD_CSV_HEADER)?;
        for (f, d) in self.freq.iter().zip(&self.power_db) {
            wr.write_record(&[f.to_string(), d.to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Rectangular-window periodogram of `φ_m(t)` on `[0, T)`, sampled at `Δt/oversample`.
///
/// The record is zero-padded by [`PSD_ZERO_PAD`]; the frequency axis spans
/// `[−oversample·B/2, oversample·B/2)`.
pub fn psd(p: &AfdmParams, m: usize, oversample: usize) -> Result<PsdCurve> {
    if oversample < 8 {
        return Err(AfdmError::Precondition(format!("oversample must be at least 8, got {oversample}")));
    }
    p.check_index(m)?;
    let len = p.n() * oversample;
    let ts = p.delta_t() / oversample as f64;
    let nfft = len * PSD_ZERO_PAD;
    let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
    for (k, b) in buf.iter_mut().take(len).enumerate() {
        *b = subcarrier_continuous(p, m, k as f64 * ts)?;
    }
    FftPlanner::new().plan_fft_forward(nfft).process(&mut buf);
    let pow: Vec<f64> = buf.iter().map(|v| v.norm_sqr()).collect();
    let peak = pow.iter().cloned().fold(0.0, f64::max);
    let df = 1.0 / (nfft as f64 * ts);
    let half = nfft / 2;
    let mut freq = Vec::with_capacity(nfft);
    let mut power_db = Vec::with_capacity(nfft);
    for i in 0..nfft {
        let k = (i + half) % nfft;
        freq.push((i as f64 - half as f64) * df);
        power_db.push((10.0 * (pow[k] / peak).log10()).max(PSD_FLOOR_DB));
    }
    Ok(PsdCurve { freq, power_db })
}
