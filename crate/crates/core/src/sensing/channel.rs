//! Doubly selective channel model and the echo it produces.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{AfdmError, Result};
use crate::params::AfdmParams;
use crate::phase::cis_cycles;
use crate::signal::TimeSignal;

/// One propagation path: complex gain, delay (s) and Doppler (Hz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub h: Complex64,
    pub tau: f64,
    pub nu: f64,
}

impl Path {
    pub fn new(h: Complex64, tau: f64, nu: f64) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite() && nu.is_finite() && h.re.is_finite() && h.im.is_finite()) {
            return Err(AfdmError::InvalidConfig(format!("invalid path (h={h}, tau={tau}, nu={nu})")));
        }
        Ok(Path { h, tau, nu })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SensingMode {
    #[default]
    Monostatic,
    Bistatic,
}

/// Complex AWGN of power `n0` per sample, seeded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub n0: f64,
    pub seed: u64,
}

/// Paths plus an optional noise specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensingChannel {
    pub paths: Vec<Path>,
    pub noise: Option<NoiseSpec>,
    pub mode: SensingMode,
}

impl SensingChannel {
    pub fn noiseless(paths: Vec<Path>) -> Self {
        SensingChannel { paths, noise: None, mode: SensingMode::Monostatic }
    }
}

/// A path as written in scenario files, with delay and Doppler in grid units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioPath {
    pub h_re: f64,
    pub h_im: f64,
    pub tau_over_dt: f64,
    pub nu_over_df: f64,
}

/// Scenario document: `{paths: [...], snr_db: number | null, mode}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub paths: Vec<ScenarioPath>,
    #[serde(default)]
    pub snr_db: Option<f64>,
    #[serde(default)]
    pub mode: SensingMode,
}

impl Scenario {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_paths(p: &AfdmParams, paths: &[Path]) -> Self {
        Scenario {
            paths: paths
                .iter()
                .map(|x| ScenarioPath {
                    h_re: x.h.re,
                    h_im: x.h.im,
                    tau_over_dt: x.tau / p.delta_t(),
                    nu_over_df: x.nu / p.delta_f(),
                })
                .collect(),
            snr_db: None,
            mode: SensingMode::Monostatic,
        }
    }

    /// Converts to physical units. With an SNR the noise power is set
    /// relative to `signal_power` (mean `|s(t)|²` of the transmit signal).
    pub fn to_channel(&self, p: &AfdmParams, signal_power: f64, noise_seed: u64) -> Result<SensingChannel> {
        let paths = self
            .paths
            .iter()
            .map(|sp| Path::new(Complex64::new(sp.h_re, sp.h_im), sp.tau_over_dt * p.delta_t(), sp.nu_over_df * p.delta_f()))
            .collect::<Result<Vec<_>>>()?;
        if let Some(bad) = paths.iter().find(|x| x.tau >= p.period()) {
            return Err(AfdmError::InvalidConfig(format!("path delay {} s exceeds the frame duration", bad.tau)));
        }
        let noise = match self.snr_db {
            Some(snr) if snr.is_finite() => Some(NoiseSpec { n0: signal_power / 10f64.powf(snr / 10.0), seed: noise_seed }),
            Some(snr) => return Err(AfdmError::InvalidConfig(format!("SNR must be finite, got {snr}"))),
            None => None,
        };
        Ok(SensingChannel { paths, noise, mode: self.mode })
    }

    /// The four-target scene used to compare C = 1 against C = 13 (unit gains).
    pub fn four_target_demo() -> Self {
        let pts = [(0.0, 0.0), (3.4, 5.1), (9.7, 2.3), (11.8, -3.5)];
        Scenario {
            paths: pts
                .iter()
                .map(|&(t, n)| ScenarioPath { h_re: 1.0, h_im: 0.0, tau_over_dt: t, nu_over_df: n })
                .collect(),
            snr_db: None,
            mode: SensingMode::Monostatic,
        }
    }
}

/// Received signal `r(t) = Σ h_i·s(t − τ_i)·e^{j2πν_i t} + w(t)`.
///
/// Noise is piecewise constant on cells of one sample interval, starting
/// at the earliest echo arrival, so quadrature can integrate it exactly.
#[derive(Debug, Clone)]
pub struct Echo<S> {
    tx: S,
    paths: Vec<Path>,
    support: (f64, f64),
    noise: Vec<Complex64>,
    noise_start: f64,
}

impl<S: TimeSignal> Echo<S> {
    pub fn new(channel: &SensingChannel, tx: S) -> Self {
        let (s0, s1) = tx.support();
        let (lo, hi) = if channel.paths.is_empty() {
            (s0, s1)
        } else {
            let lo = channel.paths.iter().map(|p| s0 + p.tau).fold(f64::INFINITY, f64::min);
            let hi = channel.paths.iter().map(|p| s1 + p.tau).fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        };
        let dt = tx.sample_interval();
        let noise = match channel.noise {
            Some(NoiseSpec { n0, seed }) if n0 > 0.0 => {
                let cells = ((hi - lo) / dt).ceil() as usize;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let normal = Normal::new(0.0, (n0 / 2.0).sqrt()).expect("finite noise deviation");
                (0..cells).map(|_| Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))).collect()
            }
            _ => Vec::new(),
        };
        Echo { tx, paths: channel.paths.clone(), support: (lo, hi), noise, noise_start: lo }
    }

    fn noise_at(&self, t: f64) -> Complex64 {
        if self.noise.is_empty() || t < self.support.0 || t >= self.support.1 {
            return Complex64::new(0.0, 0.0);
        }
        let k = ((t - self.noise_start) / self.tx.sample_interval()).floor() as usize;
        self.noise.get(k).copied().unwrap_or_default()
    }

    /// The noiseless part of the echo.
    pub fn deterministic(&self, t: f64) -> Complex64 {
        self.paths.iter().map(|p| p.h * self.tx.eval(t - p.tau) * cis_cycles(p.nu * t)).sum()
    }
}

impl<S: TimeSignal> TimeSignal for Echo<S> {
    fn eval(&self, t: f64) -> Complex64 {
        self.deterministic(t) + self.noise_at(t)
    }

    fn support(&self) -> (f64, f64) {
        self.support
    }

    fn breakpoints(&self) -> Vec<f64> {
        let (s0, s1) = self.tx.support();
        let inner = self.tx.breakpoints();
        let mut b: Vec<f64> = self
            .paths
            .iter()
            .flat_map(|p| inner.iter().map(move |x| x + p.tau).chain([s0 + p.tau, s1 + p.tau]))
            .collect();
        let dt = self.tx.sample_interval();
        b.extend((1..self.noise.len()).map(|k| self.noise_start + k as f64 * dt));
        b.retain(|&x| x > self.support.0 && x < self.support.1);
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    fn sample_interval(&self) -> f64 {
        self.tx.sample_interval()
    }
}

/// `r(t)` for the given channel and transmit signal.
///
/// Builds the echo (and its noise realisation) on every call; use [`Echo`]
/// directly when evaluating many instants.
pub fn apply_channel<S: TimeSignal>(channel: &SensingChannel, tx: S, t: f64) -> Complex64 {
    Echo::new(channel, tx).eval(t)
}
