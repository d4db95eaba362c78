//! Matched filtering of an echo against a reference waveform.

use crate::ambiguity::oracle::{af_oracle_row, MIN_OVERSAMPLE};
use crate::ambiguity::surface::{evaluate_rows, AfSurface, DelayDopplerGrid, EvaluatorTag, SurfaceKind};
use crate::error::{AfdmError, Result};
use crate::params::AfdmParams;
use crate::signal::TimeSignal;

/// `R(τ, ν) = ∫ r(t)·s*(t − τ)·e^{−j2πνt} dt` over `grid`.
///
/// Uses the breakpoint-aware trapezoid rule with `oversample` panels per
/// sample interval; each delay row shares one set of products.
pub fn matched_filter<R, S>(p: &AfdmParams, received: &R, reference: &S, grid: &DelayDopplerGrid, oversample: usize) -> Result<AfSurface>
where
    R: TimeSignal + ?Sized,
    S: TimeSignal + ?Sized,
{
    if oversample < MIN_OVERSAMPLE / 2 {
        return Err(AfdmError::Precondition(format!("matched-filter oversample {oversample} is too coarse")));
    }
    let nus = grid.nus();
    let values = evaluate_rows(grid, |tau| Ok(af_oracle_row(received, reference, tau, &nus, oversample)))?;
    Ok(AfSurface::new(p, *grid, values, SurfaceKind::MfOutput, EvaluatorTag::Oracle)?
        .with_meta(serde_json::json!({ "oversample": oversample })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambiguity::exact::aaf_point_exact;
    use crate::phase::cis_cycles;
    use crate::sensing::channel::{Echo, Path, SensingChannel};
    use crate::subcarrier::Subcarrier;
    use num_complex::Complex64;

    #[test]
    fn identity_channel_origin() {
        let p = AfdmParams::new(64, 7, 0.2, 1e-6).unwrap();
        let s = Subcarrier::new(p, 4).unwrap();
        let ch = SensingChannel::noiseless(vec![Path::new(Complex64::new(1.0, 0.0), 0.0, 0.0).unwrap()]);
        let r = Echo::new(&ch, s);
        let out = matched_filter(&p, &r, &s, &DelayDopplerGrid::single(0.0, 0.0), 32).unwrap();
        assert!((out.values[0] - Complex64::new(p.period(), 0.0)).norm() < 1e-6 * p.period());
    }

    #[test]
    fn single_path_is_translated_aaf() {
        let p = AfdmParams::new(64, 7, 0.2, 1e-6).unwrap();
        let m = 9;
        let s = Subcarrier::new(p, m).unwrap();
        let (t1, n1) = (2.6 * p.delta_t(), -3.2 * p.delta_f());
        let h = Complex64::new(0.8, -0.3);
        let ch = SensingChannel::noiseless(vec![Path::new(h, t1, n1).unwrap()]);
        let r = Echo::new(&ch, s);
        let g = DelayDopplerGrid::in_units(&p, (0.0, 6.0), 13, (-8.0, 4.0), 13).unwrap();
        let out = matched_filter(&p, &r, &s, &g, 64).unwrap();
        for i in 0..g.n_tau {
            for j in 0..g.n_nu {
                let (tau, nu) = (g.tau(i), g.nu(j));
                // h̃ = h·e^{−j2π(ν−ν1)τ1}
                let ht = h * cis_cycles(-(nu - n1) * t1);
                let expect = ht * aaf_point_exact(&p, m, tau - t1, nu - n1).unwrap();
                assert!((out.at(i, j) - expect).norm() <= 1e-3 * p.period(), "({i},{j})");
            }
        }
    }
}
