//! IDAFT modulation, DAFT demodulation, chirp-periodic prefix and the
//! continuous-time frame signal.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{AfdmError, Result};
use crate::frame::DaftFrame;
use crate::params::AfdmParams;
use crate::phase::{c1_phase, c2_phase, cis_cycles};
use crate::signal::TimeSignal;
use crate::subcarrier::{continuous_norm, wrap_point_norm};

fn plans(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    let mut planner = FftPlanner::new();
    (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
}

/// IDAFT: `s[n] = N^{-1/2} Σ_m x[m]·φ_m[n]`.
///
/// Evaluated as chirp · IDFT · chirp, `O(N log N)`.
pub fn modulate(p: &AfdmParams, x: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = p.n();
    if x.len() != n {
        return Err(AfdmError::LengthMismatch { expected: n, actual: x.len() });
    }
    let mut buf: Vec<Complex64> = x
        .iter()
        .enumerate()
        .map(|(m, &v)| v * cis_cycles(c2_phase(p.c2(), m)))
        .collect();
    plans(n).1.process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for (k, v) in buf.iter_mut().enumerate() {
        *v *= cis_cycles(c1_phase(p.c_count(), n, k as i64)) * scale;
    }
    Ok(buf)
}

/// DAFT: `y[m] = N^{-1/2} Σ_n r[n]·φ_m*[n]`.
pub fn demodulate(p: &AfdmParams, r: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = p.n();
    if r.len() != n {
        return Err(AfdmError::LengthMismatch { expected: n, actual: r.len() });
    }
    let mut buf: Vec<Complex64> = r
        .iter()
        .enumerate()
        .map(|(k, &v)| v * cis_cycles(-c1_phase(p.c_count(), n, k as i64)))
        .collect();
    plans(n).0.process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for (m, v) in buf.iter_mut().enumerate() {
        *v *= cis_cycles(-c2_phase(p.c2(), m)) * scale;
    }
    Ok(buf)
}

/// Phase factor `exp(-j2π·c1(N² + 2Nn))` of the chirp-periodic prefix at index `n`.
///
/// Computed exactly as `C(N + 2n)/2 mod 1`; equals 1 whenever `N` is even.
pub fn cpp_phase_factor(p: &AfdmParams, n: i64) -> Complex64 {
    let num = (p.c_count() as i128 * (p.n() as i128 + 2 * n as i128)).rem_euclid(2);
    cis_cycles(-(num as f64) / 2.0)
}

/// Prepends `l_cpp` prefix samples `s[n] = s[n+N]·exp(-j2π·c1(N² + 2Nn))`.
pub fn append_cpp(p: &AfdmParams, s: &[Complex64], l_cpp: usize) -> Result<Vec<Complex64>> {
    let n = p.n();
    if s.len() != n {
        return Err(AfdmError::LengthMismatch { expected: n, actual: s.len() });
    }
    if l_cpp >= n {
        return Err(AfdmError::InvalidConfig(format!(
            "CPP length {l_cpp} must be shorter than N = {n}"
        )));
    }
    let mut out = Vec::with_capacity(n + l_cpp);
    for k in -(l_cpp as i64)..0 {
        out.push(s[(k + n as i64) as usize] * cpp_phase_factor(p, k));
    }
    out.extend_from_slice(s);
    Ok(out)
}

/// Continuous-time frame signal `Σ_m x[m]·φ_m(t)` on `[0, T)`.
///
/// With `normalized` the sum is scaled by `N^{-1/2}` so its samples at
/// `t = nΔt` coincide with [`modulate`].
pub fn signal_continuous(p: &AfdmParams, x: &[Complex64], t: f64, normalized: bool) -> Result<Complex64> {
    if x.len() != p.n() {
        return Err(AfdmError::LengthMismatch { expected: p.n(), actual: x.len() });
    }
    if !(t >= 0.0 && t < p.period()) {
        return Err(AfdmError::OutsideSupport { t, period: p.period() });
    }
    Ok(FrameSignal::from_symbols(*p, x.to_vec(), normalized).eval(t))
}

/// A DAFT-domain symbol vector rendered as a continuous-time signal.
#[derive(Debug, Clone)]
pub struct FrameSignal {
    params: AfdmParams,
    active: Vec<(usize, Complex64)>,
    scale: f64,
}

impl FrameSignal {
    pub fn from_symbols(params: AfdmParams, x: Vec<Complex64>, normalized: bool) -> Self {
        let active = x
            .into_iter()
            .enumerate()
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .collect();
        let scale = if normalized { 1.0 / (params.n() as f64).sqrt() } else { 1.0 };
        FrameSignal { params, active, scale }
    }

    pub fn from_frame(params: AfdmParams, frame: &DaftFrame, normalized: bool) -> Self {
        Self::from_symbols(params, frame.x().to_vec(), normalized)
    }
}

impl TimeSignal for FrameSignal {
    fn eval(&self, t: f64) -> Complex64 {
        let p = &self.params;
        if t < 0.0 || t >= p.period() {
            return Complex64::new(0.0, 0.0);
        }
        let u = t / p.delta_t();
        let acc: Complex64 = self.active.iter().map(|&(m, v)| v * continuous_norm(p, m, u)).sum();
        acc * self.scale
    }

    fn support(&self) -> (f64, f64) {
        (0.0, self.params.period())
    }

    fn breakpoints(&self) -> Vec<f64> {
        let p = &self.params;
        let mut b: Vec<f64> = self
            .active
            .iter()
            .flat_map(|&(m, _)| (1..=p.c_count()).map(move |q| wrap_point_norm(p, m, q) * p.delta_t()))
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    fn sample_interval(&self) -> f64 {
        self.params.delta_t()
    }
}

/// A signal on `[0, T)` extended by a prefix of duration `l_cpp·Δt`.
///
/// In continuous time the chirp-periodic prefix is the cyclic copy
/// `s(t) = s(t + T)`, the wrapped chirp continued backwards.
#[derive(Debug, Clone)]
pub struct CppSignal<S> {
    inner: S,
    prefix: f64,
    period: f64,
}

impl<S: TimeSignal> CppSignal<S> {
    pub fn new(inner: S, l_cpp: usize) -> Result<Self> {
        let (start, period) = inner.support();
        if start != 0.0 {
            return Err(AfdmError::InvalidConfig("CPP requires a signal supported on [0, T)".into()));
        }
        let dt = inner.sample_interval();
        let prefix = l_cpp as f64 * dt;
        if prefix >= period {
            return Err(AfdmError::InvalidConfig("CPP longer than the frame".into()));
        }
        Ok(CppSignal { inner, prefix, period })
    }
}

impl<S: TimeSignal> TimeSignal for CppSignal<S> {
    fn eval(&self, t: f64) -> Complex64 {
        if t >= -self.prefix && t < 0.0 {
            self.inner.eval(t + self.period)
        } else {
            self.inner.eval(t)
        }
    }

    fn support(&self) -> (f64, f64) {
        (-self.prefix, self.period)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let inner = self.inner.breakpoints();
        let mut b: Vec<f64> = inner
            .iter()
            .filter(|&&x| x > self.period - self.prefix && x < self.period)
            .map(|x| x - self.period)
            .collect();
        b.push(0.0);
        b.extend(inner);
        b.sort_by(f64::total_cmp);
        b
    }

    fn sample_interval(&self) -> f64 {
        self.inner.sample_interval()
    }
}
