//! Brute-force quadrature of the ambiguity integral for arbitrary time signals.

use num_complex::Complex64;

use crate::error::{AfdmError, Result};
use crate::phase::cis_cycles;
use crate::signal::TimeSignal;

/// Smallest density accepted by [`af_numeric_oracle`].
pub const MIN_OVERSAMPLE: usize = 16;

/// Inward offset of panel end nodes, as a fraction of the sample interval.
///
/// Keeps one-sided evaluations on the correct side of a wrapping point.
const EDGE_NUDGE: f64 = 1e-7;

/// Composite trapezoid nodes and weights on the support overlap of
/// `a(t)` and `b(t − τ)`, with panels split at every breakpoint of either signal.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new<A: TimeSignal + ?Sized, B: TimeSignal + ?Sized>(a: &A, b: &B, tau: f64, oversample: usize) -> Self {
        let (a0, a1) = a.support();
        let (b0, b1) = b.support();
        let lo = a0.max(b0 + tau);
        let hi = a1.min(b1 + tau);
        let dt = a.sample_interval().min(b.sample_interval());
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        if hi <= lo {
            return QuadratureRule { nodes, weights };
        }
        let mut cuts: Vec<f64> = a
            .breakpoints()
            .into_iter()
            .chain(b.breakpoints().into_iter().map(|x| x + tau))
            .filter(|&x| x > lo && x < hi)
            .collect();
        cuts.push(lo);
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        let min_len = 4.0 * EDGE_NUDGE * dt;
        let cap = ((hi - lo) / dt * oversample as f64) as usize + 2 * cuts.len();
        nodes.reserve(cap);
        weights.reserve(cap);
        for w in cuts.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let len = x1 - x0;
            if len <= min_len {
                continue;
            }
            let panels = ((len / dt * oversample as f64).ceil() as usize).max(1);
            let h = len / panels as f64;
            let nudge = EDGE_NUDGE * dt;
            for k in 0..=panels {
                let t = if k == 0 {
                    x0 + nudge
                } else if k == panels {
                    x1 - nudge
                } else {
                    x0 + k as f64 * h
                };
                let wgt = if k == 0 || k == panels { 0.5 * h } else { h };
                nodes.push(t);
                weights.push(wgt);
            }
        }
        QuadratureRule { nodes, weights }
    }

    /// Weighted products `w_k·a(t_k)·b*(t_k − τ)`.
    pub fn products<A: TimeSignal + ?Sized, B: TimeSignal + ?Sized>(&self, a: &A, b: &B, tau: f64) -> Vec<Complex64> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| a.eval(t) * b.eval(t - tau).conj() * w)
            .collect()
    }

    /// `Σ_k g_k·e^{−j2πν t_k}` for precomputed weighted products.
    pub fn doppler_sum(&self, g: &[Complex64], nu: f64) -> Complex64 {
        self.nodes.iter().zip(g).map(|(&t, &v)| v * cis_cycles(-nu * t)).sum()
    }
}

/// `∫ a(t)·b*(t − τ)·e^{−j2πνt} dt` by discontinuity-aware trapezoidal quadrature.
///
/// `oversample` is the number of panels per sample interval.
pub fn af_numeric_oracle<A: TimeSignal + ?Sized, B: TimeSignal + ?Sized>(
    a: &A,
    b: &B,
    tau: f64,
    nu: f64,
    oversample: usize,
) -> Result<Complex64> {
    if oversample < MIN_OVERSAMPLE {
        return Err(AfdmError::Precondition(format!(
            "oracle oversample must be at least {MIN_OVERSAMPLE}, got {oversample}"
        )));
    }
    let rule = QuadratureRule::new(a, b, tau, oversample);
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| a.eval(t) * b.eval(t - tau).conj() * cis_cycles(-nu * t) * w)
        .sum())
}

/// One delay row of the oracle: the same quadrature reused for every Doppler in `nus`.
pub fn af_oracle_row<A: TimeSignal + ?Sized, B: TimeSignal + ?Sized>(
    a: &A,
    b: &B,
    tau: f64,
    nus: &[f64],
    oversample: usize,
) -> Vec<Complex64> {
    let rule = QuadratureRule::new(a, b, tau, oversample);
    let g = rule.products(a, b, tau);
    nus.iter().map(|&nu| rule.doppler_sum(&g, nu)).collect()
}
