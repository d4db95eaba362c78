//! Target read-out from a matched-filter surface.

use serde::{Deserialize, Serialize};

use super::channel::Path;
use super::parallelogram::Parallelogram;
use super::peaks::{detect_peaks, Peak};
use crate::ambiguity::surface::AfSurface;
use crate::error::{AfdmError, Result};
use crate::params::AfdmParams;

/// Detection settings for [`estimate_targets`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub rel_threshold: f64,
    /// Minimum peak separation `(seconds, Hz)`.
    pub min_sep: (f64, f64),
    /// Only peaks inside this cell are kept, which discards lattice replicas.
    pub region: Option<Parallelogram>,
    /// Peak magnitude of a unit-gain path, used to scale `|ĥ|`.
    pub unit_response: f64,
}

impl EstimateOptions {
    /// Threshold ½, separation `(Δt/2, Δf/2)`, unit response `T`.
    pub fn defaults(p: &AfdmParams) -> Self {
        EstimateOptions {
            rel_threshold: 0.5,
            min_sep: (0.5 * p.delta_t(), 0.5 * p.delta_f()),
            region: None,
            unit_response: p.period(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetEstimate {
    pub tau: f64,
    pub nu: f64,
    pub gain_mag: f64,
}

/// The `expected_count` strongest detected pulses as target estimates.
pub fn estimate_targets(surface: &AfSurface, expected_count: usize, opts: &EstimateOptions) -> Result<Vec<TargetEstimate>> {
    let peaks = detect_peaks(surface, opts.rel_threshold, opts.min_sep);
    let mut kept: Vec<Peak> = Vec::new();
    for pk in peaks.peaks {
        let inside = match &opts.region {
            Some(r) => r.contains(pk.tau, pk.nu)?,
            None => true,
        };
        if inside {
            kept.push(pk);
        }
        if kept.len() == expected_count {
            break;
        }
    }
    if kept.len() < expected_count {
        return Err(AfdmError::Precondition(format!(
            "found {} peaks, expected {expected_count}",
            kept.len()
        )));
    }
    Ok(kept
        .into_iter()
        .map(|pk| TargetEstimate { tau: pk.tau, nu: pk.nu, gain_mag: pk.magnitude / opts.unit_response })
        .collect())
}

/// A ground-truth path matched to an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetPairing {
    pub truth: usize,
    pub estimate: usize,
    /// Estimate minus truth, in seconds.
    pub dtau: f64,
    /// Estimate minus truth, in Hz.
    pub dnu: f64,
}

/// Greedy nearest-neighbour matching in units of `(Δt, Δf)`; each estimate is used once.
pub fn pair_targets(p: &AfdmParams, truth: &[Path], est: &[TargetEstimate]) -> Vec<TargetPairing> {
    let dist = |t: &Path, e: &TargetEstimate| {
        ((e.tau - t.tau) / p.delta_t()).hypot((e.nu - t.nu) / p.delta_f())
    };
    let mut pairs: Vec<(f64, usize, usize)> = truth
        .iter()
        .enumerate()
        .flat_map(|(i, t)| est.iter().enumerate().map(move |(j, e)| (dist(t, e), i, j)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut used_t = vec![false; truth.len()];
    let mut used_e = vec![false; est.len()];
    let mut out = Vec::new();
    for (_, i, j) in pairs {
        if used_t[i] || used_e[j] {
            continue;
        }
        used_t[i] = true;
        used_e[j] = true;
        out.push(TargetPairing { truth: i, estimate: j, dtau: est[j].tau - truth[i].tau, dnu: est[j].nu - truth[i].nu });
    }
    out.sort_by_key(|x| x.truth);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambiguity::surface::DelayDopplerGrid;
    use crate::sensing::channel::{Echo, SensingChannel};
    use crate::sensing::matched::matched_filter;
    use crate::subcarrier::Subcarrier;
    use num_complex::Complex64;

    #[test]
    fn static_target_at_origin() {
        let p = AfdmParams::new(64, 7, 0.0, 1e-6).unwrap();
        let s = Subcarrier::new(p, 3).unwrap();
        let ch = SensingChannel::noiseless(vec![Path::new(Complex64::new(1.0, 0.0), 0.0, 0.0).unwrap()]);
        let r = Echo::new(&ch, s);
        let g = DelayDopplerGrid::with_density(&p, (-2.0, 2.0), (-3.0, 3.0), 4).unwrap();
        let mf = matched_filter(&p, &r, &s, &g, 32).unwrap();
        let (cell, _) = crate::sensing::parallelogram::unambiguity_parallelogram(&p, 3).unwrap();
        let opts = EstimateOptions { region: Some(cell), ..EstimateOptions::defaults(&p) };
        let est = estimate_targets(&mf, 1, &opts).unwrap();
        assert!(est[0].tau.abs() < 0.05 * p.delta_t());
        assert!(est[0].nu.abs() < 0.05 * p.delta_f());
        assert!((est[0].gain_mag - 1.0).abs() < 1e-3);
        assert!(estimate_targets(&mf, 5, &opts).is_err());
    }

    #[test]
    fn pairing_is_one_to_one() {
        let p = AfdmParams::new(16, 1, 0.0, 1.0).unwrap();
        let truth = [
            Path::new(Complex64::new(1.0, 0.0), 0.0, 0.0).unwrap(),
            Path::new(Complex64::new(1.0, 0.0), 3.0, 0.0).unwrap(),
        ];
        let est = [
            TargetEstimate { tau: 2.9, nu: 0.01, gain_mag: 1.0 },
            TargetEstimate { tau: 0.1, nu: 0.0, gain_mag: 1.0 },
        ];
        let pr = pair_targets(&p, &truth, &est);
        assert_eq!(pr.len(), 2);
        assert_eq!((pr[0].truth, pr[0].estimate), (0, 1));
        assert_eq!((pr[1].truth, pr[1].estimate), (1, 0));
    }
}
