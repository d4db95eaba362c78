//! Segment-exact cross-ambiguity function between two chirp subcarriers.
//!
//! Both subcarriers share the chirp rate `c̃1`, so in
//! `φ_m(t)·φ*_{m1}(t − τ)` the quadratic terms cancel. On every interval where
//! the wrapping indices `q_m(t)` and `q_{m1}(t − τ)` are both constant the
//! integrand is a single complex exponential and integrates in closed form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::indicator::indicator;
use crate::error::Result;
use crate::params::AfdmParams;
use crate::phase::{c2_phase, cis_cycles};
use crate::subcarrier::{q_tilde, wrap_point_norm};

/// Tolerance, in units of `Δt`, below which breakpoints merge and slivers are dropped.
const MERGE_EPS: f64 = 1e-9;

/// Bookkeeping class of a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentClass {
    /// Index difference equal to its value at the start of the overlap.
    Aligned,
    /// Index difference shifted by one wrap relative to the start.
    Misaligned,
}

/// A piece of the overlap interval on which the AF integrand is `e^{j(2π·freq·t + phase)}`
/// before the Doppler term `e^{−j2πνt}` is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AfSegment {
    pub t_start: f64,
    pub t_end: f64,
    /// Instantaneous frequency difference in Hz.
    pub freq: f64,
    /// Constant residual phase in radians, including the global prefactor.
    pub phase: f64,
    pub class: SegmentClass,
}

/// Segment in units of `Δt`; frequencies in cycles per `Δt`, phase in cycles.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NormSegment {
    pub us: f64,
    pub ue: f64,
    pub freq: f64,
    pub phase: f64,
    pub class: SegmentClass,
}

/// Decomposition for normalised delay `tau_hat = τ/Δt`; empty when `|τ| ≥ T`.
pub(crate) fn segments_norm(p: &AfdmParams, m: usize, m1: usize, tau_hat: f64) -> Vec<NormSegment> {
    let n = p.n() as f64;
    let c = p.c_count();
    let start = tau_hat.max(0.0);
    let end = (n + tau_hat).min(n);
    if end - start <= MERGE_EPS {
        return Vec::new();
    }

    let a_pts = (1..=c).map(|q| wrap_point_norm(p, m, q));
    let b_pts = (1..=c).map(|q| wrap_point_norm(p, m1, q) + tau_hat);
    let mut qa = a_pts.clone().filter(|&x| x <= start + MERGE_EPS).count();
    let mut qb = b_pts.clone().filter(|&x| x <= start + MERGE_EPS).count();

    // (position, is_a) events strictly inside the overlap.
    let mut events: Vec<(f64, bool)> = a_pts
        .map(|x| (x, true))
        .chain(b_pts.map(|x| (x, false)))
        .filter(|&(x, _)| x > start + MERGE_EPS && x < end - MERGE_EPS)
        .collect();
    events.sort_by(|x, y| x.0.total_cmp(&y.0));

    let base = c2_phase(p.c2(), m) - c2_phase(p.c2(), m1) - p.c1() * tau_hat * tau_hat
        + m1 as f64 * tau_hat / n;
    let chirp = 2.0 * p.c1() * tau_hat + (m as f64 - m1 as f64) / n;
    let d0 = qa as i64 - qb as i64;

    let mut out: Vec<NormSegment> = Vec::with_capacity(2 * c + 3);
    let mut emit = |us: f64, ue: f64, qa: usize, qb: usize| {
        let d = qa as i64 - qb as i64;
        let freq = chirp - d as f64;
        let phase = base - qb as f64 * tau_hat;
        // Neighbours that carry the same exponential are fused, so coincident
        // wrapping points (e.g. τ = 0, m = m1) leave a single piece.
        if let Some(last) = out.last_mut() {
            let dphi = phase - last.phase;
            if last.freq == freq && (dphi - dphi.round()).abs() < 1e-12 {
                last.ue = ue;
                return;
            }
        }
        out.push(NormSegment {
            us,
            ue,
            freq,
            phase,
            class: if d == d0 { SegmentClass::Aligned } else { SegmentClass::Misaligned },
        });
    };
    let mut cur = start;
    for (x, is_a) in events {
        if x - cur > MERGE_EPS {
            emit(cur, x, qa, qb);
            cur = x;
        }
        if is_a {
            qa += 1;
        } else {
            qb += 1;
        }
    }
    if end - cur > MERGE_EPS {
        emit(cur, end, qa, qb);
    }
    out
}

/// `A/Δt` for normalised arguments; `nu_hat = ν·Δt`.
pub(crate) fn caf_norm(p: &AfdmParams, m: usize, m1: usize, tau_hat: f64, nu_hat: f64) -> Complex64 {
    segments_norm(p, m, m1, tau_hat)
        .iter()
        .map(|s| cis_cycles(s.phase) * indicator(s.freq - nu_hat, s.us, s.ue))
        .sum()
}

/// The exponential pieces of `φ_m(t)·φ*_{m1}(t − τ)` over the support overlap.
///
/// Returns an empty list when `|τ| ≥ T`. Segments are sorted, disjoint and
/// tile `[max(0, τ), min(T, T + τ)]`.
pub fn af_segments(p: &AfdmParams, m: usize, m1: usize, tau: f64) -> Result<Vec<AfSegment>> {
    p.check_index(m)?;
    p.check_index(m1)?;
    let dt = p.delta_t();
    Ok(segments_norm(p, m, m1, tau / dt)
        .into_iter()
        .map(|s| AfSegment {
            t_start: s.us * dt,
            t_end: s.ue * dt,
            freq: s.freq / dt,
            phase: std::f64::consts::TAU * (s.phase - s.phase.round()),
            class: s.class,
        })
        .collect())
}

/// Exact `A_{φm,φm1}(τ, ν) = ∫ φ_m(t)·φ*_{m1}(t − τ)·e^{−j2πνt} dt`.
///
/// Valid for any sign of `τ`; returns zero when `|τ| ≥ T`.
pub fn caf_point_exact(p: &AfdmParams, m: usize, m1: usize, tau: f64, nu: f64) -> Result<Complex64> {
    p.check_index(m)?;
    p.check_index(m1)?;
    let dt = p.delta_t();
    Ok(caf_norm(p, m, m1, tau / dt, nu * dt) * dt)
}

/// Exact auto-ambiguity function of `φ_m`.
pub fn aaf_point_exact(p: &AfdmParams, m: usize, tau: f64, nu: f64) -> Result<Complex64> {
    caf_point_exact(p, m, m, tau, nu)
}

/// Which frequency-alignment condition to solve for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaCase {
    /// Aligns the `S_a` pieces: `ν = 2c̃1τ − (q̃ − 1)/Δt`.
    A,
    /// Aligns the `S_b` pieces: `ν = 2c̃1τ − q̃/Δt`.
    C,
}

/// Doppler on the frequency-alignment line through delay `tau`.
///
/// With `m1` given the line is shifted by `(m − m1)Δf`.
pub fn fa_doppler(p: &AfdmParams, m: usize, tau: f64, case: FaCase, m1: Option<usize>) -> Result<f64> {
    let qt = q_tilde(p, m, tau)? as f64;
    let wraps = match case {
        FaCase::A => qt - 1.0,
        FaCase::C => qt,
    };
    let mut nu = 2.0 * p.c1_tilde() * tau - wraps / p.delta_t();
    if let Some(m1) = m1 {
        p.check_index(m1)?;
        nu += (m as f64 - m1 as f64) * p.delta_f();
    }
    Ok(nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::cis_cycles;
    use crate::subcarrier::continuous_norm;

    fn p(n: usize, c: usize) -> AfdmParams {
        AfdmParams::new(n, c, 2f64.sqrt(), 1.0 / (15e3 * n as f64)).unwrap()
    }

    #[test]
    fn perfect_overlap_is_one_segment() {
        let p = p(128, 3);
        for m in [0, 5, 64, 127] {
            let s = af_segments(&p, m, m, 0.0).unwrap();
            assert_eq!(s.len(), 1);
            assert_eq!(s[0].t_start, 0.0);
            assert!((s[0].t_end - p.period()).abs() < 1e-12 * p.period());
            assert_eq!(s[0].freq, 0.0);
            assert!(s[0].phase.abs() < 1e-12);
        }
    }

    #[test]
    fn segments_tile_overlap() {
        let p = p(64, 7);
        for &(m, m1, tau_hat) in &[(13, 5, 3.7), (5, 13, -20.25), (0, 0, 63.999), (63, 0, 0.5), (10, 10, 9.142857142857142)] {
            let tau = tau_hat * p.delta_t();
            let s = af_segments(&p, m, m1, tau).unwrap();
            let lo = tau.max(0.0);
            let hi = (p.period() + tau).min(p.period());
            assert!((s[0].t_start - lo).abs() < 1e-15);
            assert!((s.last().unwrap().t_end - hi).abs() < 1e-12 * p.period());
            for w in s.windows(2) {
                assert_eq!(w[0].t_end, w[1].t_start);
            }
            let total: f64 = s.iter().map(|x| x.t_end - x.t_start).sum();
            assert!((total - (hi - lo)).abs() < 1e-12 * p.period());
        }
        assert!(af_segments(&p, 1, 2, p.period()).unwrap().is_empty());
        assert!(af_segments(&p, 1, 2, -p.period()).unwrap().is_empty());
    }

    #[test]
    fn segment_phases_reproduce_integrand() {
        // On each segment, φ_m(t)φ*_{m1}(t−τ) must equal e^{j(2π·freq·t + phase)}.
        let p = p(64, 7);
        for &(m, m1, tau_hat) in &[(13usize, 5usize, 3.7f64), (5, 13, -20.25), (40, 41, 11.0)] {
            let tau = tau_hat * p.delta_t();
            for s in af_segments(&p, m, m1, tau).unwrap() {
                let t = 0.5 * (s.t_start + s.t_end);
                let u = t / p.delta_t();
                let direct = continuous_norm(&p, m, u) * continuous_norm(&p, m1, u - tau_hat).conj();
                let model = cis_cycles(s.freq * t) * Complex64::from_polar(1.0, s.phase);
                assert!((direct - model).norm() < 1e-9, "m={m} m1={m1} t={t}");
            }
        }
    }

    #[test]
    fn origin_is_period() {
        let p = p(512, 13);
        for m in [0, 47, 255, 511] {
            let v = aaf_point_exact(&p, m, 0.0, 0.0).unwrap();
            assert!((v - Complex64::new(p.period(), 0.0)).norm() <= 1e-12 * p.period());
        }
    }

    #[test]
    fn representative_window_count() {
        // Inside the first-order window the decomposition has 2(C − q̃) + 3 pieces.
        let p = p(512, 13);
        let m = 47;
        for k in 0..13usize {
            let tau = (k as f64 * 512.0 / 13.0 + 1.5) * p.delta_t();
            let qt = q_tilde(&p, m, tau).unwrap();
            assert_eq!(qt, k + 1);
            let s = af_segments(&p, m, m, tau).unwrap();
            assert_eq!(s.len(), 2 * (13 - qt) + 3, "k={k}");
        }
    }

    #[test]
    fn fa_examples() {
        let p = p(512, 13);
        assert_eq!(fa_doppler(&p, 47, 0.0, FaCase::A, None).unwrap(), 0.0);
        let nu = fa_doppler(&p, 47, p.delta_t(), FaCase::A, None).unwrap();
        assert!((nu - 13.0 * p.delta_f()).abs() < 1e-9 * p.delta_f());
        let nu = fa_doppler(&p, 445, 0.0, FaCase::A, Some(440)).unwrap();
        assert!((nu - 5.0 * p.delta_f()).abs() < 1e-9 * p.delta_f());
        let a = fa_doppler(&p, 47, 2.0 * p.delta_t(), FaCase::A, None).unwrap();
        let c = fa_doppler(&p, 47, 2.0 * p.delta_t(), FaCase::C, None).unwrap();
        assert!((a - c - p.bandwidth()).abs() < 1e-6);
    }
}
