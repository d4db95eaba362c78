//! Chirp subcarriers in discrete and continuous time.
//!
//! The continuous subcarrier is a linear FM with slope `2·c̃1` whose
//! instantaneous frequency wraps from `B` back to 0 at the spectrum
//! wrapping points `t_{m,q}`. Internally times are measured in units of
//! `Δt`, so the wrapping points are `(N·q − m)/C`.

use num_complex::Complex64;

use crate::error::{AfdmError, Result};
use crate::params::AfdmParams;
use crate::phase::{c1_phase, c2_phase, cis_cycles, mn_phase};
use crate::signal::TimeSignal;

/// Snap tolerance for segment lookups, in units of subchirp index.
const SNAP: f64 = 1e-10;

/// Discrete subcarrier `φ_m[n]`, `n = 0..N`.
pub fn subcarrier_discrete(p: &AfdmParams, m: usize) -> Result<Vec<Complex64>> {
    p.check_index(m)?;
    let n_sub = p.n();
    let base = c2_phase(p.c2(), m);
    Ok((0..n_sub as i64)
        .map(|n| cis_cycles(base + c1_phase(p.c_count(), n_sub, n) + mn_phase(m, n, n_sub)))
        .collect())
}

/// Wrapping point `t_{m,q}` in units of `Δt`, for `q = 0..=C+1`.
pub(crate) fn wrap_point_norm(p: &AfdmParams, m: usize, q: usize) -> f64 {
    let c = p.c_count();
    if q == 0 {
        0.0
    } else if q <= c {
        (p.n() as f64 * q as f64 - m as f64) / c as f64
    } else {
        p.n() as f64
    }
}

/// The `C + 2` spectrum wrapping points `t_{m,0} = 0, …, t_{m,C+1} = T` in seconds.
///
/// For `m = 0` the last two entries coincide (`t_{0,C} = T`); the zero-length
/// segment is kept in the vector and skipped by [`segments`].
pub fn wrapping_points(p: &AfdmParams, m: usize) -> Result<Vec<f64>> {
    p.check_index(m)?;
    Ok((0..=p.c_count() + 1)
        .map(|q| wrap_point_norm(p, m, q) * p.delta_t())
        .collect())
}

/// A nonempty piece `[start, end)` of a subcarrier on which `q_m(t) = q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrapSegment {
    pub q: usize,
    pub start: f64,
    pub end: f64,
}

/// Nonempty wrapping segments tiling `[0, T)`.
pub fn segments(p: &AfdmParams, m: usize) -> Result<Vec<WrapSegment>> {
    let pts = wrapping_points(p, m)?;
    Ok(pts
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0])
        .map(|(q, w)| WrapSegment { q, start: w[0], end: w[1] })
        .collect())
}

/// `q_m(u)` for `u = t/Δt` in `[0, N)`; boundary points belong to the upper segment.
pub(crate) fn q_step_norm(p: &AfdmParams, m: usize, u: f64) -> usize {
    let c = p.c_count();
    let x = (c as f64 * u + m as f64) / p.n() as f64;
    let r = x.round();
    let q = if (x - r).abs() < SNAP { r } else { x.floor() };
    let mut q = q.max(0.0) as usize;
    if q > c {
        q = c;
    }
    // For m = 0 the last segment [t_{0,C}, T) is empty.
    if q == c && wrap_point_norm(p, m, c) >= p.n() as f64 {
        q = c - 1;
    }
    q
}

fn check_support(p: &AfdmParams, t: f64) -> Result<()> {
    if t >= 0.0 && t < p.period() {
        Ok(())
    } else {
        Err(AfdmError::OutsideSupport { t, period: p.period() })
    }
}

/// Wrapping index `q_m(t)`: the `q` with `t_{m,q} ≤ t < t_{m,q+1}`.
pub fn q_step(p: &AfdmParams, m: usize, t: f64) -> Result<usize> {
    p.check_index(m)?;
    check_support(p, t)?;
    Ok(q_step_norm(p, m, t / p.delta_t()))
}

/// Delay indicator `q̃_m(τ) = q_m(τ) + 1`.
pub fn q_tilde(p: &AfdmParams, m: usize, tau: f64) -> Result<usize> {
    q_step(p, m, tau).map(|q| q + 1)
}

/// Phase of `φ_m(t)` in cycles, `u = t/Δt`, given the wrapping index.
#[inline]
pub(crate) fn continuous_phase_norm(p: &AfdmParams, m: usize, u: f64, q: usize) -> f64 {
    let quad = p.c1() * u * u - q as f64 * u;
    c2_phase(p.c2(), m) + quad + m as f64 * u / p.n() as f64
}

#[inline]
pub(crate) fn continuous_norm(p: &AfdmParams, m: usize, u: f64) -> Complex64 {
    let q = q_step_norm(p, m, u);
    cis_cycles(continuous_phase_norm(p, m, u, q))
}

/// Continuous subcarrier `φ_m(t)` on `[0, T)`.
pub fn subcarrier_continuous(p: &AfdmParams, m: usize, t: f64) -> Result<Complex64> {
    p.check_index(m)?;
    check_support(p, t)?;
    Ok(continuous_norm(p, m, t / p.delta_t()))
}

/// Instantaneous frequency of `φ_m` at `t` in Hz; lies in `[0, B)`.
pub fn instantaneous_frequency(p: &AfdmParams, m: usize, t: f64) -> Result<f64> {
    let q = q_step(p, m, t)?;
    let u = t / p.delta_t();
    Ok((2.0 * p.c1() * u + m as f64 / p.n() as f64 - q as f64) / p.delta_t())
}

/// A single chirp subcarrier as a time function, zero outside `[0, T)`.
#[derive(Debug, Clone, Copy)]
pub struct Subcarrier {
    params: AfdmParams,
    m: usize,
}

impl Subcarrier {
    pub fn new(params: AfdmParams, m: usize) -> Result<Self> {
        params.check_index(m)?;
        Ok(Subcarrier { params, m })
    }

    pub fn index(&self) -> usize {
        self.m
    }

    pub fn params(&self) -> &AfdmParams {
        &self.params
    }
}

impl TimeSignal for Subcarrier {
    fn eval(&self, t: f64) -> Complex64 {
        if t < 0.0 || t >= self.params.period() {
            return Complex64::new(0.0, 0.0);
        }
        continuous_norm(&self.params, self.m, t / self.params.delta_t())
    }

    fn support(&self) -> (f64, f64) {
        (0.0, self.params.period())
    }

    fn breakpoints(&self) -> Vec<f64> {
        (1..=self.params.c_count())
            .map(|q| wrap_point_norm(&self.params, self.m, q) * self.params.delta_t())
            .collect()
    }

    fn sample_interval(&self) -> f64 {
        self.params.delta_t()
    }
}
