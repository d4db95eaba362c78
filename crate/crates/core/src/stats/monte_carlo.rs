//! Monte Carlo estimate of `E|A_{s,s}(τ, ν)|²` over random data-only frames.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curve::Curve;
use crate::ambiguity::frame_af::{caf_matrix, expected_sq_from_matrix};
use crate::ambiguity::surface::{AfSurface, DelayDopplerGrid, EvaluatorTag, SurfaceKind};
use crate::constellation::{constellation_moments, Constellation};
use crate::error::{AfdmError, Result};
use crate::frame::{make_frame_with_rng, Layout};
use crate::params::AfdmParams;

/// Trial count, master seed and symbol alphabet of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: usize,
    pub seed: u64,
    pub constellation: String,
}

/// Where in the delay-Doppler plane the statistic is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cut {
    /// `ν = 0`, delays in seconds.
    ZeroDoppler { taus: Vec<f64> },
    /// `τ = 0`, Dopplers in Hz.
    ZeroDelay { nus: Vec<f64> },
    Full { grid: DelayDopplerGrid },
}

impl Cut {
    /// Zero-Doppler cut over `[lo, hi]·Δt` with `n` points.
    pub fn zero_doppler_units(p: &AfdmParams, lo: f64, hi: f64, n: usize) -> Self {
        Cut::ZeroDoppler { taus: linspace(lo, hi, n).into_iter().map(|v| v * p.delta_t()).collect() }
    }

    /// Zero-delay cut over `[lo, hi]·Δf` with `n` points.
    pub fn zero_delay_units(p: &AfdmParams, lo: f64, hi: f64, n: usize) -> Self {
        Cut::ZeroDelay { nus: linspace(lo, hi, n).into_iter().map(|v| v * p.delta_f()).collect() }
    }

    /// `(τ, ν)` of every evaluation point, delay-major for [`Cut::Full`].
    pub fn points(&self) -> Vec<(f64, f64)> {
        match self {
            Cut::ZeroDoppler { taus } => taus.iter().map(|&t| (t, 0.0)).collect(),
            Cut::ZeroDelay { nus } => nus.iter().map(|&v| (0.0, v)).collect(),
            Cut::Full { grid } => {
                let nus = grid.nus();
                grid.taus().into_iter().flat_map(|t| nus.iter().map(move |&v| (t, v))).collect()
            }
        }
    }

    /// Abscissa of a one-dimensional cut; the flat point index for [`Cut::Full`].
    pub fn abscissa(&self) -> Vec<f64> {
        match self {
            Cut::ZeroDoppler { taus } => taus.clone(),
            Cut::ZeroDelay { nus } => nus.clone(),
            Cut::Full { grid } => (0..grid.len()).map(|k| k as f64).collect(),
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Sample mean of `|A|²` with its standard error at each cut point, in s².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub cut: Cut,
    pub trials: usize,
    pub seed: u64,
    pub mean: Vec<f64>,
    /// `√(s²/trials)` with the unbiased sample variance; NaN for a single trial.
    pub stderr: Vec<f64>,
}

impl McEstimate {
    /// Curve against the cut abscissa with values multiplied by `scale`.
    pub fn curve(&self, x_scale: f64, scale: f64) -> Result<Curve> {
        let x = self.cut.abscissa().into_iter().map(|v| v * x_scale).collect();
        Ok(Curve::new(x, self.mean.clone(), self.stderr.clone())?.scaled(scale))
    }

    /// Mean over a full grid as a real-valued surface.
    pub fn surface(&self, p: &AfdmParams) -> Result<AfSurface> {
        let Cut::Full { grid } = &self.cut else {
            return Err(AfdmError::Precondition("surface output needs a full-grid cut".into()));
        };
        let values = self.mean.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        AfSurface::new(p, *grid, values, SurfaceKind::ExpectedSq, EvaluatorTag::MonteCarlo)
    }
}

/// Averages `|A_{s,s}(τ, ν)|²` over `trials` independent data-only frames.
///
/// Trial `k` draws its symbols from a ChaCha8 stream `k` keyed by the master
/// seed, so the result does not depend on scheduling or thread count.
pub fn monte_carlo_expected_aaf_sq(p: &AfdmParams, cfg: &McConfig, cut: &Cut) -> Result<McEstimate> {
    if cfg.trials == 0 {
        return Err(AfdmError::Precondition("at least one trial is required".into()));
    }
    let constellation = Constellation::from_name(&cfg.constellation)?;
    let pts = cut.points();
    let n = p.n();
    let matrices: Vec<Vec<Complex64>> = pts.iter().map(|&(t, v)| caf_matrix(p, t, v)).collect();
    let per_trial: Vec<Vec<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let frame = make_frame_with_rng(p, Layout::DataOnly, None, 0.0, &constellation, &mut rng)?;
            let x = frame.x();
            Ok(matrices.iter().map(|a| quadratic_form(n, a, x).norm_sqr()).collect())
        })
        .collect::<Result<_>>()?;

    let k = pts.len();
    let mut sum = vec![0.0; k];
    for row in &per_trial {
        for (s, v) in sum.iter_mut().zip(row) {
            *s += v;
        }
    }
    let tr = cfg.trials as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / tr).collect();
    let stderr = if cfg.trials < 2 {
        vec![f64::NAN; k]
    } else {
        let mut ss = vec![0.0; k];
        for row in &per_trial {
            for ((s, v), m) in ss.iter_mut().zip(row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        ss.iter().map(|s| (s / (tr - 1.0) / tr).sqrt()).collect()
    };
    Ok(McEstimate { cut: cut.clone(), trials: cfg.trials, seed: cfg.seed, mean, stderr })
}

/// `Σ_m Σ_{m1} x[m]·x*[m1]·a[m·N + m1]`.
fn quadratic_form(n: usize, a: &[Complex64], x: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..n {
        let row = &a[m * n..(m + 1) * n];
        let inner: Complex64 = row.iter().zip(x).map(|(v, x1)| v * x1.conj()).sum();
        acc += x[m] * inner;
    }
    acc
}

/// Closed-form `E|A|²` at every cut point, in s².
pub fn expected_on_cut(p: &AfdmParams, constellation: &Constellation, cut: &Cut) -> Result<Vec<f64>> {
    let mom = constellation_moments(constellation);
    if (mom.power - 1.0).abs() > 1e-9 {
        return Err(AfdmError::Precondition("constellation must have unit power".into()));
    }
    Ok(cut
        .points()
        .into_iter()
        .map(|(t, v)| expected_sq_from_matrix(p.n(), &caf_matrix(p, t, v), &mom).0)
        .collect())
}
