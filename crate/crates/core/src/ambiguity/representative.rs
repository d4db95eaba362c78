//! Closed forms for the representative delay windows.
//!
//! These transcribe the per-window sums of integral indicators term by term
//! and serve as an independent cross-check of the segment-exact evaluator.

use num_complex::Complex64;

use super::indicator::indicator;
use crate::error::{AfdmError, Result};
use crate::params::AfdmParams;
use crate::phase::{c2_phase, cis_cycles};
use crate::subcarrier::wrap_point_norm;

const WINDOW_TOL: f64 = 1e-9;

/// Locates `k` with `τ ∈ [kT_SC, kT_SC + width]` (normalised units) and returns `q̃ = k + 1`.
fn window_q_tilde(p: &AfdmParams, tau_hat: f64, width: f64) -> Result<usize> {
    let t_sc = p.n() as f64 / p.c_count() as f64;
    if tau_hat.is_nan() || tau_hat < -WINDOW_TOL {
        return Err(AfdmError::OutsideWindow { tau: tau_hat * p.delta_t() });
    }
    let k = ((tau_hat + WINDOW_TOL) / t_sc).floor().max(0.0) as usize;
    if k >= p.c_count() || tau_hat - k as f64 * t_sc > width + WINDOW_TOL {
        return Err(AfdmError::OutsideWindow { tau: tau_hat * p.delta_t() });
    }
    Ok(k + 1)
}

/// The bracketed sum shared by the AAF and CAF forms, in units of `Δt`.
///
/// `lead` supplies the wrapping points that open each aligned piece (those of
/// the delayed subcarrier), `trail` those that close it.
fn bracket(p: &AfdmParams, lead: usize, trail: usize, tau_hat: f64, e: f64, qt: usize) -> Complex64 {
    let c = p.c_count();
    let n = p.n() as f64;
    let wl = |q: usize| wrap_point_norm(p, lead, q);
    let wt = |q: usize| wrap_point_norm(p, trail, q);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..=(c - qt) {
        let rot = cis_cycles(-(i as f64) * tau_hat);
        let sa = indicator(e, wl(i) + tau_hat, wt(i + qt));
        let sb = indicator(e - 1.0, wt(i + qt), wl(i + 1) + tau_hat);
        acc += rot * (sa + sb);
    }
    let last = c - qt + 1;
    acc + cis_cycles(-(last as f64) * tau_hat) * indicator(e, wl(last) + tau_hat, n)
}

/// AAF of `φ_m` from the representative-window closed form.
///
/// Requires `τ ∈ [kT_SC, kT_SC + min(T_SC − t_{m,1}, t_{m,1})]` for some `k`;
/// otherwise returns [`AfdmError::OutsideWindow`].
pub fn aaf_representative_case(p: &AfdmParams, m: usize, tau: f64, nu: f64) -> Result<Complex64> {
    p.check_index(m)?;
    let dt = p.delta_t();
    let (tau_hat, nu_hat) = (tau / dt, nu * dt);
    let t1 = wrap_point_norm(p, m, 1);
    let width = (p.n() as f64 / p.c_count() as f64 - t1).min(t1);
    let qt = window_q_tilde(p, tau_hat, width)?;
    let e = 2.0 * p.c1() * tau_hat - (qt as f64 - 1.0) - nu_hat;
    let pre = cis_cycles(m as f64 * tau_hat / p.n() as f64 - p.c1() * tau_hat * tau_hat);
    Ok(pre * bracket(p, m, m, tau_hat, e, qt) * dt)
}

fn caf_representative_with(p: &AfdmParams, m: usize, m1: usize, tau: f64, nu: f64, lead_index: usize) -> Result<Complex64> {
    p.check_index(m)?;
    p.check_index(m1)?;
    if m <= m1 {
        return Err(AfdmError::Precondition(format!("representative CAF needs m > m1, got {m} ≤ {m1}")));
    }
    let dt = p.delta_t();
    let n = p.n() as f64;
    let (tau_hat, nu_hat) = (tau / dt, nu * dt);
    let width = (n / p.c_count() as f64 - wrap_point_norm(p, m1, 1)).min(wrap_point_norm(p, m, 1));
    let qt = window_q_tilde(p, tau_hat, width)?;
    let delta = (m - m1) as f64 / n;
    let e = 2.0 * p.c1() * tau_hat - (qt as f64 - 1.0) - nu_hat + delta;
    let pre = cis_cycles(
        c2_phase(p.c2(), m) - c2_phase(p.c2(), m1) - p.c1() * tau_hat * tau_hat + lead_index as f64 * tau_hat / n,
    );
    Ok(pre * bracket(p, m1, m, tau_hat, e, qt) * dt)
}

/// CAF between `φ_m` and `φ_{m1}`, `m > m1`, from the representative-window closed form.
///
/// Requires `τ ∈ [kT_SC, kT_SC + min(T_SC − t_{m1,1}, t_{m,1})]`. The global
/// phase carries `m1·τ/T`, the linear term left over from `φ*_{m1}(t − τ)`.
pub fn caf_representative_case(p: &AfdmParams, m: usize, m1: usize, tau: f64, nu: f64) -> Result<Complex64> {
    caf_representative_with(p, m, m1, tau, nu, m1)
}
