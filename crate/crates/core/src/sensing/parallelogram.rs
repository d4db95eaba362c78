//! Unambiguity and interference-free parallelograms in the delay-Doppler plane.

use serde::{Deserialize, Serialize};

use crate::ambiguity::exact::caf_norm;
use crate::error::{AfdmError, Result};
use crate::params::AfdmParams;
use crate::sensing::channel::SensingChannel;

/// Cell `{anchor + a·v1 + b·v2 : |a|, |b| ≤ ½}`; coordinates are `(seconds, Hz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parallelogram {
    pub anchor: (f64, f64),
    pub v1: (f64, f64),
    pub v2: (f64, f64),
}

/// Base/height decomposition of a parallelogram's area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaFactors {
    /// `|v1|`.
    pub base: f64,
    /// Distance from `v2` to the line spanned by `v1`.
    pub height: f64,
    /// `|v1 × v2|`.
    pub cross: f64,
}

fn cross(u: (f64, f64), v: (f64, f64)) -> f64 {
    u.0 * v.1 - u.1 * v.0
}

impl Parallelogram {
    pub fn new(anchor: (f64, f64), v1: (f64, f64), v2: (f64, f64)) -> Result<Self> {
        let p = Parallelogram { anchor, v1, v2 };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        let c = cross(self.v1, self.v2);
        let scale = (self.v1.0.hypot(self.v1.1)) * (self.v2.0.hypot(self.v2.1));
        if !c.is_finite() || c.abs() <= 1e-12 * scale {
            return Err(AfdmError::DegenerateParallelogram);
        }
        Ok(())
    }

    /// `|v1 × v2|` with delay in seconds and Doppler in Hz.
    pub fn area(&self) -> Result<f64> {
        self.check()?;
        Ok(cross(self.v1, self.v2).abs())
    }

    /// Base `|v1|` times the height of `v2` above it; the product is checked
    /// against the cross product to `1e-9` relative.
    pub fn factors(&self) -> Result<AreaFactors> {
        let area = self.area()?;
        let base = self.v1.0.hypot(self.v1.1);
        let (ux, uy) = (self.v1.0 / base, self.v1.1 / base);
        let along = self.v2.0 * ux + self.v2.1 * uy;
        let height = (self.v2.0 - along * ux).hypot(self.v2.1 - along * uy);
        if (base * height - area).abs() > 1e-9 * area {
            return Err(AfdmError::Precondition(format!(
                "base·height = {} disagrees with cross-product area {area}",
                base * height
            )));
        }
        Ok(AreaFactors { base, height, cross: area })
    }

    /// Coordinates `(a, b)` with `(τ, ν) − anchor = a·v1 + b·v2`.
    pub fn coords(&self, tau: f64, nu: f64) -> Result<(f64, f64)> {
        self.check()?;
        let d = (tau - self.anchor.0, nu - self.anchor.1);
        let det = cross(self.v1, self.v2);
        Ok((cross(d, self.v2) / det, cross(self.v1, d) / det))
    }

    pub fn contains(&self, tau: f64, nu: f64) -> Result<bool> {
        let (a, b) = self.coords(tau, nu)?;
        let tol = 1e-12;
        Ok(a.abs() <= 0.5 + tol && b.abs() <= 0.5 + tol)
    }

    /// Corners in counter-clockwise order starting from `−v1/2 − v2/2`.
    pub fn vertices(&self) -> [(f64, f64); 4] {
        let corner = |a: f64, b: f64| {
            (self.anchor.0 + a * self.v1.0 + b * self.v2.0, self.anchor.1 + a * self.v1.1 + b * self.v2.1)
        };
        let mut v = [corner(-0.5, -0.5), corner(0.5, -0.5), corner(0.5, 0.5), corner(-0.5, 0.5)];
        if cross(self.v1, self.v2) < 0.0 {
            v.swap(1, 3);
        }
        v
    }
}

/// Closed-form base `√(Δt² + (2c̃1Δt)²)` and height `1/base` of the unit cell.
pub fn unit_cell_base_height(p: &AfdmParams) -> (f64, f64) {
    let dt = p.delta_t();
    let base = (dt * dt + (2.0 * p.c1_tilde() * dt).powi(2)).sqrt();
    (base, 1.0 / base)
}

/// Where the second lattice vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct V2Search {
    /// Offset `α` (in `Δt`) along the adjacent alignment line that maximises `|A|`.
    pub alpha_numeric: f64,
    /// Offset of the integer-delay pulse the lattice vector is snapped to.
    pub alpha_snapped: f64,
    pub magnitude_numeric: f64,
    pub magnitude_snapped: f64,
}

/// Step of the search along the adjacent alignment line, in units of `Δt`.
pub const V2_SEARCH_STEP: f64 = 1.0 / 64.0;

/// Unambiguity cell of `φ_m`, centred on the origin pulse.
///
/// `v1 = (Δt, CΔf)` joins neighbouring pulses on one alignment line. `v2`
/// joins the origin to the strongest pulse on the adjacent line
/// `ν = 2c̃1(τ − T_SC)`: the exact AAF is scanned for `τ = T_SC + αΔt`,
/// `|α| ≤ ½`, and the result is snapped to the integer-delay pulse nearest
/// the scan maximum. For `C = 1` the adjacent line lies outside the support
/// and `v2 = (T, 0)`.
pub fn unambiguity_parallelogram(p: &AfdmParams, m: usize) -> Result<(Parallelogram, Option<V2Search>)> {
    p.check_index(m)?;
    let (dt, df) = (p.delta_t(), p.delta_f());
    let c = p.c_count();
    let v1 = (dt, c as f64 * df);
    if c == 1 {
        return Ok((Parallelogram::new((0.0, 0.0), v1, (p.period(), 0.0))?, None));
    }
    let t_sc_hat = p.n() as f64 / c as f64;
    let steps = (0.5 / V2_SEARCH_STEP).round() as i64;
    let mag_at = |alpha: f64| {
        let tau_hat = t_sc_hat + alpha;
        caf_norm(p, m, m, tau_hat, 2.0 * p.c1() * alpha).norm() * dt
    };
    let (mut best_a, mut best_v) = (0.0, f64::NEG_INFINITY);
    for k in -steps..=steps {
        let a = k as f64 * V2_SEARCH_STEP;
        let v = mag_at(a);
        if v > best_v {
            best_a = a;
            best_v = v;
        }
    }
    let snapped = (t_sc_hat + best_a).round() - t_sc_hat;
    let tau2 = (t_sc_hat + snapped) * dt;
    let nu2 = 2.0 * p.c1_tilde() * snapped * dt;
    let search = V2Search {
        alpha_numeric: best_a,
        alpha_snapped: snapped,
        magnitude_numeric: best_v,
        magnitude_snapped: mag_at(snapped),
    };
    Ok((Parallelogram::new((0.0, 0.0), v1, (tau2, nu2))?, Some(search)))
}

/// Inner cell of an embedded-pilot frame with `Q` guards on each side of `m_p`.
///
/// Data subcarriers nearest to the pilot sit `Q + 1` subcarriers away, which
/// puts their CAF pulse lines at lattice coordinate `b = ±(Q + 1)/N`. The
/// guard band `|b| < min(½, (Q + 1)/N)` is halved symmetrically about the
/// pilot line, giving `|b| ≤ β = min(½, (Q + 1)/N)/2` with the full delay
/// extent `|a| ≤ ½`.
pub fn interference_free_parallelogram(p: &AfdmParams, q: usize, m_p: usize) -> Result<Parallelogram> {
    if q == 0 {
        return Err(AfdmError::Precondition("interference-free region needs Q ≥ 1 guards".into()));
    }
    if 2 * q + 1 > p.n() {
        return Err(AfdmError::Layout(format!("2Q+1 = {} exceeds N = {}", 2 * q + 1, p.n())));
    }
    let (cell, _) = unambiguity_parallelogram(p, m_p)?;
    let beta = ((q + 1) as f64 / p.n() as f64).min(0.5) / 2.0;
    Parallelogram::new(cell.anchor, cell.v1, (2.0 * beta * cell.v2.0, 2.0 * beta * cell.v2.1))
}

/// Containment verdict for one path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetCheck {
    pub index: usize,
    pub tau: f64,
    pub nu: f64,
    pub a: f64,
    pub b: f64,
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnambiguityReport {
    pub unambiguous: bool,
    pub targets: Vec<TargetCheck>,
    pub warning: Option<String>,
}

impl UnambiguityReport {
    pub fn offending(&self) -> impl Iterator<Item = &TargetCheck> {
        self.targets.iter().filter(|t| !t.inside)
    }
}

/// True when every path's `(τ, ν)` lies inside `cell`.
pub fn check_unambiguous(channel: &SensingChannel, cell: &Parallelogram) -> Result<UnambiguityReport> {
    let mut targets = Vec::with_capacity(channel.paths.len());
    for (index, path) in channel.paths.iter().enumerate() {
        let (a, b) = cell.coords(path.tau, path.nu)?;
        let inside = cell.contains(path.tau, path.nu)?;
        targets.push(TargetCheck { index, tau: path.tau, nu: path.nu, a, b, inside });
    }
    let warning = channel.paths.is_empty().then(|| "channel has no paths; verdict is vacuous".to_string());
    Ok(UnambiguityReport { unambiguous: targets.iter().all(|t| t.inside), targets, warning })
}
