//! Ambiguity functions of whole frames: pairwise-exact sums, the expected
//! squared AAF under i.i.d. data, and the pilot/data split of the
//! frame-to-pilot CAF.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::caf_norm;
use super::oracle::af_numeric_oracle;
use super::surface::{evaluate_grid, AfSurface, DelayDopplerGrid, EvaluatorTag, SurfaceKind};
use crate::constellation::Moments;
use crate::error::{AfdmError, Result};
use crate::frame::DaftFrame;
use crate::modem::FrameSignal;
use crate::params::AfdmParams;

/// Row-major `N × N` matrix of `A_{φm,φm1}(τ, ν)`, indexed `[m·N + m1]`.
pub fn caf_matrix(p: &AfdmParams, tau: f64, nu: f64) -> Vec<Complex64> {
    let n = p.n();
    let dt = p.delta_t();
    let (th, nh) = (tau / dt, nu * dt);
    (0..n)
        .into_par_iter()
        .flat_map_iter(|m| (0..n).map(move |m1| caf_norm(p, m, m1, th, nh) * dt))
        .collect()
}

fn check_len(p: &AfdmParams, x: &[Complex64]) -> Result<()> {
    if x.len() == p.n() {
        Ok(())
    } else {
        Err(AfdmError::LengthMismatch { expected: p.n(), actual: x.len() })
    }
}

/// `A_{s,s}(τ, ν) = Σ_m Σ_{m1} x[m]·x*[m1]·A_{φm,φm1}(τ, ν)` for `s(t) = Σ x[m]φ_m(t)`.
///
/// Pairwise-exact, `O(N²)` CAF evaluations; zero symbols are skipped.
pub fn frame_aaf_point(p: &AfdmParams, x: &[Complex64], tau: f64, nu: f64) -> Result<Complex64> {
    check_len(p, x)?;
    let dt = p.delta_t();
    let (th, nh) = (tau / dt, nu * dt);
    let active: Vec<(usize, Complex64)> = x.iter().copied().enumerate().filter(|(_, v)| v.norm_sqr() > 0.0).collect();
    let partial: Vec<Complex64> = active
        .par_iter()
        .map(|&(m, xm)| {
            let inner: Complex64 = active.iter().map(|&(m1, x1)| x1.conj() * caf_norm(p, m, m1, th, nh)).sum();
            xm * inner
        })
        .collect();
    Ok(partial.into_iter().sum::<Complex64>() * dt)
}

/// Frame AAF by quadrature of the summed continuous-time signal.
pub fn frame_aaf_point_oracle(p: &AfdmParams, x: &[Complex64], tau: f64, nu: f64, oversample: usize) -> Result<Complex64> {
    check_len(p, x)?;
    let s = FrameSignal::from_symbols(*p, x.to_vec(), false);
    af_numeric_oracle(&s, &s, tau, nu, oversample)
}

/// Pairwise-exact frame AAF over a grid.
pub fn frame_aaf_surface(p: &AfdmParams, x: &[Complex64], grid: &DelayDopplerGrid) -> Result<AfSurface> {
    check_len(p, x)?;
    let values = evaluate_grid(grid, |tau, nu| frame_aaf_point(p, x, tau, nu))?;
    AfSurface::new(p, *grid, values, SurfaceKind::Frame, EvaluatorTag::Exact)
}

/// Four-term closed form of `E|A_{s,s}|²` from a precomputed [`caf_matrix`].
pub(crate) fn expected_sq_from_matrix(n: usize, a: &[Complex64], mom: &Moments) -> (f64, f64) {
    let mut diag_sq = 0.0;
    let mut diag_sum = Complex64::new(0.0, 0.0);
    let mut off_sq = 0.0;
    let mut swap = Complex64::new(0.0, 0.0);
    for m in 0..n {
        let d = a[m * n + m];
        diag_sq += d.norm_sqr();
        diag_sum += d;
        for m1 in 0..n {
            if m1 != m {
                let v = a[m * n + m1];
                off_sq += v.norm_sqr();
                swap += v * a[m1 * n + m].conj();
            }
        }
    }
    let pair = diag_sum.norm_sqr() - diag_sq;
    let total = Complex64::new(mom.m4 * diag_sq + pair + off_sq, 0.0) + mom.m2c * mom.m2c_conj * swap;
    (total.re, total.im)
}

/// Expected `|A_{s,s}(τ, ν)|²` over frames of i.i.d. unit-power symbols.
///
/// `m4·Σ|A_mm|² + Σ_{m≠m2} A_mm·A*_{m2m2} + Σ_{m≠m1} |A_{m,m1}|² + E(x²)E((x*)²)·Σ_{m≠m1} A_{m,m1}·A*_{m1,m}`.
pub fn expected_aaf_sq(p: &AfdmParams, mom: &Moments, tau: f64, nu: f64) -> Result<f64> {
    if (mom.power - 1.0).abs() > 1e-9 {
        return Err(AfdmError::Precondition(format!("moments must come from a unit-power constellation (power {})", mom.power)));
    }
    let a = caf_matrix(p, tau, nu);
    let (re, im) = expected_sq_from_matrix(p.n(), &a, mom);
    debug_assert!(im.abs() <= 1e-9 * re.abs().max(p.period() * p.period()));
    Ok(re)
}

/// Split of the frame-to-pilot CAF into pilot and data parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PilotDataCaf {
    pub total: Complex64,
    pub pilot: Complex64,
    pub data: Complex64,
}

fn pilot_of(frame: &DaftFrame) -> Result<(usize, Complex64)> {
    let mp = frame
        .pilot_index()
        .ok_or_else(|| AfdmError::Layout("frame has no pilot".into()))?;
    Ok((mp, frame.pilot_value()))
}

/// CAF between the frame `s(t)` and the pilot reference `x_p·φ_{m_p}(t)`.
///
/// `pilot = |x_p|²·A_{m_p,m_p}`, `data = x_p*·Σ_{m∈𝒟} x_d[m]·A_{m,m_p}`, and
/// `total = x_p*·Σ_m x[m]·A_{m,m_p}` computed separately.
pub fn pilot_data_caf(p: &AfdmParams, frame: &DaftFrame, tau: f64, nu: f64) -> Result<PilotDataCaf> {
    check_len(p, frame.x())?;
    let (mp, xp) = pilot_of(frame)?;
    let dt = p.delta_t();
    let (th, nh) = (tau / dt, nu * dt);
    let xd = frame.data_component();
    let mut data = Complex64::new(0.0, 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    let mut pilot_aaf = Complex64::new(0.0, 0.0);
    for (m, (&xm, &dm)) in frame.x().iter().zip(&xd).enumerate() {
        if xm.norm_sqr() == 0.0 && dm.norm_sqr() == 0.0 && m != mp {
            continue;
        }
        let a = caf_norm(p, m, mp, th, nh) * dt;
        total += xm * a;
        data += dm * a;
        if m == mp {
            pilot_aaf = a;
        }
    }
    Ok(PilotDataCaf {
        total: xp.conj() * total,
        pilot: xp.norm_sqr() * pilot_aaf,
        data: xp.conj() * data,
    })
}

/// [`pilot_data_caf`] over a grid: total, pilot and data surfaces.
pub fn pilot_data_surfaces(p: &AfdmParams, frame: &DaftFrame, grid: &DelayDopplerGrid) -> Result<[AfSurface; 3]> {
    pilot_of(frame)?;
    let nus = grid.nus();
    let rows: Vec<Vec<PilotDataCaf>> = grid
        .taus()
        .into_par_iter()
        .map(|tau| nus.iter().map(|&nu| pilot_data_caf(p, frame, tau, nu)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let flat: Vec<PilotDataCaf> = rows.into_iter().flatten().collect();
    let make = |f: fn(&PilotDataCaf) -> Complex64, kind| {
        AfSurface::new(p, *grid, flat.iter().map(f).collect(), kind, EvaluatorTag::Exact)
    };
    Ok([
        make(|v| v.total, SurfaceKind::Frame)?,
        make(|v| v.pilot, SurfaceKind::PilotComponent)?,
        make(|v| v.data, SurfaceKind::DataComponent)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambiguity::exact::aaf_point_exact;
    use crate::constellation::{constellation_moments, Constellation};
    use crate::frame::{make_frame, Layout};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p16() -> AfdmParams {
        AfdmParams::new(16, 3, 0.4, 1e-6).unwrap()
    }

    #[test]
    fn single_symbol_reduces_to_aaf() {
        let p = p16();
        let mut x = vec![Complex64::new(0.0, 0.0); 16];
        x[5] = Complex64::new(1.0, 0.0);
        let (tau, nu) = (2.3 * p.delta_t(), -1.4 * p.delta_f());
        let f = frame_aaf_point(&p, &x, tau, nu).unwrap();
        let a = aaf_point_exact(&p, 5, tau, nu).unwrap();
        assert!((f - a).norm() < 1e-15 * p.period());
        let z = frame_aaf_point(&p, &vec![Complex64::new(0.0, 0.0); 16], tau, nu).unwrap();
        assert_eq!(z, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn pairwise_matches_oracle_on_sum() {
        let p = p16();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x: Vec<Complex64> = (0..16).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let l1: f64 = x.iter().map(|v| v.norm()).sum();
        for &(th, nh) in &[(0.0, 0.0), (1.7, 2.2), (-4.1, -0.6)] {
            let (tau, nu) = (th * p.delta_t(), nh * p.delta_f());
            let e = frame_aaf_point(&p, &x, tau, nu).unwrap();
            let o = frame_aaf_point_oracle(&p, &x, tau, nu, 128).unwrap();
            assert!((e - o).norm() <= 1e-3 * l1 * p.period(), "({th},{nh})");
        }
    }

    /// Expected |A|² by brute-force averaging over every BPSK frame of length 4.
    #[test]
    fn expected_sq_matches_enumeration() {
        let p = AfdmParams::new(4, 1, 0.3, 1.0).unwrap();
        let c = Constellation::bpsk();
        let mom = constellation_moments(&c);
        for &(tau, nu) in &[(0.0, 0.0), (0.7, 0.1), (-1.3, -0.05)] {
            let mut acc = 0.0;
            for bits in 0..16u32 {
                let x: Vec<Complex64> = (0..4).map(|k| c.points()[((bits >> k) & 1) as usize]).collect();
                acc += frame_aaf_point(&p, &x, tau, nu).unwrap().norm_sqr();
            }
            let closed = expected_aaf_sq(&p, &mom, tau, nu).unwrap();
            assert!((closed - acc / 16.0).abs() < 1e-9 * closed.max(1.0), "({tau},{nu})");
        }
        // QPSK has E x² = 0, exercising the other branch of the fourth term.
        let q = Constellation::qpsk();
        let mom = constellation_moments(&q);
        let mut acc = 0.0;
        for idx in 0..256u32 {
            let x: Vec<Complex64> = (0..4).map(|k| q.points()[((idx >> (2 * k)) & 3) as usize]).collect();
            acc += frame_aaf_point(&p, &x, 0.9, 0.2).unwrap().norm_sqr();
        }
        let closed = expected_aaf_sq(&p, &mom, 0.9, 0.2).unwrap();
        assert!((closed - acc / 256.0).abs() < 1e-9 * closed);
    }

    /// `E(x[m]x*[m1]x*[m2]x[m3])` for i.i.d. zero-mean symbols.
    fn fourth_order(mom: &Moments, m: usize, m1: usize, m2: usize, m3: usize) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        if m == m1 && m1 == m2 && m2 == m3 {
            Complex64::new(mom.m4, 0.0)
        } else if m == m1 && m2 == m3 {
            one
        } else if m == m2 && m1 == m3 {
            one
        } else if m == m3 && m1 == m2 {
            mom.m2c * mom.m2c_conj
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    #[test]
    fn expected_sq_matches_quadruple_sum() {
        let p = p16();
        for c in [Constellation::qam16(), Constellation::bpsk()] {
            let mom = constellation_moments(&c);
            for &(th, nh) in &[(0.0, 0.0), (1.25, 3.5)] {
                let (tau, nu) = (th * p.delta_t(), nh * p.delta_f());
                let a = caf_matrix(&p, tau, nu);
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..16 {
                    for m1 in 0..16 {
                        for m2 in 0..16 {
                            for m3 in 0..16 {
                                let e = fourth_order(&mom, m, m1, m2, m3);
                                if e.norm() > 0.0 {
                                    acc += e * a[m * 16 + m1] * a[m2 * 16 + m3].conj();
                                }
                            }
                        }
                    }
                }
                let v = expected_aaf_sq(&p, &mom, tau, nu).unwrap();
                assert!((v - acc.re).abs() < 1e-9 * v);
                assert!(acc.im.abs() < 1e-9 * v);
                assert!(v >= 0.0);
            }
        }
        let mom = constellation_moments(&Constellation::qam16());
        let bad = Moments { power: 2.0, ..mom };
        assert!(expected_aaf_sq(&p, &bad, 0.0, 0.0).is_err());
    }

    #[test]
    fn pilot_data_decomposition() {
        let p = AfdmParams::new(32, 3, 0.0, 1e-6).unwrap();
        let c = Constellation::qpsk();
        for layout in [Layout::Ep(4), Layout::Sp, Layout::GuardFreePilot] {
            let f = make_frame(&p, layout, Some(0), 10.0, &c, 3).unwrap();
            let (tau, nu) = (1.3 * p.delta_t(), 2.0 * p.delta_f());
            let r = pilot_data_caf(&p, &f, tau, nu).unwrap();
            assert!((r.total - (r.pilot + r.data)).norm() <= 1e-10 * r.total.norm());
            let full = frame_aaf_point(&p, f.x(), tau, nu).unwrap();
            assert!(full.norm() > 0.0);
        }
        let f = make_frame(&p, Layout::Ep(15), Some(0), 10.0, &c, 3).unwrap();
        assert_eq!(f.data_indices().len(), 1);
        let f0 = make_frame(&p, Layout::DataOnly, None, 0.0, &c, 3).unwrap();
        assert!(pilot_data_caf(&p, &f0, 0.0, 0.0).is_err());
    }
}
