//! Delay-Doppler grids, sampled ambiguity surfaces and their CSV/JSON output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::caf_point_exact;
use super::oracle::af_oracle_row;
use super::representative::{aaf_representative_case, caf_representative_case};
use crate::error::{AfdmError, Result};
use crate::params::{AfdmParams, ParamsSpec};
use crate::subcarrier::Subcarrier;

/// Header of the surface CSV.
pub const SURFACE_CSV_HEADER: [&str; 7] = ["tau_s", "nu_hz", "tau_over_dt", "nu_over_df", "re", "im", "mag"];

/// Uniform delay-Doppler grid with inclusive endpoints.
///
/// An axis with a single sample must have equal endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayDopplerGrid {
    pub tau_min: f64,
    pub tau_max: f64,
    pub nu_min: f64,
    pub nu_max: f64,
    pub n_tau: usize,
    pub n_nu: usize,
}

fn check_axis(name: &str, lo: f64, hi: f64, n: usize) -> Result<()> {
    let ok = lo.is_finite()
        && hi.is_finite()
        && match n {
            0 => false,
            1 => lo == hi,
            _ => lo < hi,
        };
    if ok {
        Ok(())
    } else {
        Err(AfdmError::InvalidConfig(format!("bad {name} axis: [{lo}, {hi}] with {n} samples")))
    }
}

impl DelayDopplerGrid {
    pub fn new(tau_min: f64, tau_max: f64, n_tau: usize, nu_min: f64, nu_max: f64, n_nu: usize) -> Result<Self> {
        check_axis("delay", tau_min, tau_max, n_tau)?;
        check_axis("Doppler", nu_min, nu_max, n_nu)?;
        Ok(DelayDopplerGrid { tau_min, tau_max, nu_min, nu_max, n_tau, n_nu })
    }

    /// Grid given in multiples of `Δt` and `Δf`.
    pub fn in_units(
        p: &AfdmParams,
        tau_range: (f64, f64),
        n_tau: usize,
        nu_range: (f64, f64),
        n_nu: usize,
    ) -> Result<Self> {
        let (dt, df) = (p.delta_t(), p.delta_f());
        Self::new(tau_range.0 * dt, tau_range.1 * dt, n_tau, nu_range.0 * df, nu_range.1 * df, n_nu)
    }

    /// Grid in units with a fixed number of cells per `Δt` and per `Δf`.
    pub fn with_density(p: &AfdmParams, tau_range: (f64, f64), nu_range: (f64, f64), cells_per_unit: usize) -> Result<Self> {
        let count = |r: (f64, f64)| ((r.1 - r.0) * cells_per_unit as f64).round() as usize + 1;
        Self::in_units(p, tau_range, count(tau_range), nu_range, count(nu_range))
    }

    pub fn single(tau: f64, nu: f64) -> Self {
        DelayDopplerGrid { tau_min: tau, tau_max: tau, nu_min: nu, nu_max: nu, n_tau: 1, n_nu: 1 }
    }

    pub fn tau_step(&self) -> f64 {
        if self.n_tau > 1 {
            (self.tau_max - self.tau_min) / (self.n_tau - 1) as f64
        } else {
            0.0
        }
    }

    pub fn nu_step(&self) -> f64 {
        if self.n_nu > 1 {
            (self.nu_max - self.nu_min) / (self.n_nu - 1) as f64
        } else {
            0.0
        }
    }

    pub fn tau(&self, i: usize) -> f64 {
        if i + 1 == self.n_tau {
            self.tau_max
        } else {
            self.tau_min + i as f64 * self.tau_step()
        }
    }

    pub fn nu(&self, j: usize) -> f64 {
        if j + 1 == self.n_nu {
            self.nu_max
        } else {
            self.nu_min + j as f64 * self.nu_step()
        }
    }

    pub fn taus(&self) -> Vec<f64> {
        (0..self.n_tau).map(|i| self.tau(i)).collect()
    }

    pub fn nus(&self) -> Vec<f64> {
        (0..self.n_nu).map(|j| self.nu(j)).collect()
    }

    pub fn len(&self) -> usize {
        self.n_tau * self.n_nu
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// What a surface represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    AafSubcarrier,
    CafPair,
    Frame,
    ExpectedSq,
    MfOutput,
    PilotComponent,
    DataComponent,
}

/// How a surface was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluatorTag {
    Exact,
    Representative,
    Oracle,
    MonteCarlo,
}

/// Complex samples on a [`DelayDopplerGrid`], stored delay-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AfSurface {
    pub grid: DelayDopplerGrid,
    pub values: Vec<Complex64>,
    pub kind: SurfaceKind,
    pub params: ParamsSpec,
    pub evaluator: EvaluatorTag,
    #[serde(default)]
    pub meta: serde_json::Value,
}

/// Contents of the JSON sidecar written next to the surface CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceSidecar {
    pub params: ParamsSpec,
    pub kind: SurfaceKind,
    pub evaluator: EvaluatorTag,
    pub grid: DelayDopplerGrid,
    pub delta_t_s: f64,
    pub delta_f_hz: f64,
    pub period_s: f64,
    pub max_mag: f64,
    #[serde(default)]
    pub meta: serde_json::Value,
}

impl AfSurface {
    pub fn new(
        p: &AfdmParams,
        grid: DelayDopplerGrid,
        values: Vec<Complex64>,
        kind: SurfaceKind,
        evaluator: EvaluatorTag,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(AfdmError::LengthMismatch { expected: grid.len(), actual: values.len() });
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(AfdmError::Precondition("surface contains non-finite values".into()));
        }
        Ok(AfSurface { grid, values, kind, params: p.spec(), evaluator, meta: serde_json::Value::Null })
    }

    pub fn with_meta(mut self, meta: serde_json::Value) -> Self {
        self.meta = meta;
        self
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.n_nu + j]
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_mag(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Cell `(i_tau, j_nu)` of the largest magnitude; ties resolve to the first in storage order.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, f64::NEG_INFINITY);
        for (k, v) in self.values.iter().enumerate() {
            let a = v.norm();
            if a > best.1 {
                best = (k, a);
            }
        }
        (best.0 / self.grid.n_nu, best.0 % self.grid.n_nu)
    }

    pub fn params(&self) -> Result<AfdmParams> {
        AfdmParams::try_from(self.params)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let p = self.params()?;
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(SURFACE_CSV_HEADER)?;
        for i in 0..self.grid.n_tau {
            let tau = self.grid.tau(i);
            for j in 0..self.grid.n_nu {
                let nu = self.grid.nu(j);
                let v = self.at(i, j);
                wr.serialize((tau, nu, tau / p.delta_t(), nu / p.delta_f(), v.re, v.im, v.norm()))?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    pub fn sidecar(&self) -> Result<SurfaceSidecar> {
        let p = self.params()?;
        Ok(SurfaceSidecar {
            params: self.params,
            kind: self.kind,
            evaluator: self.evaluator,
            grid: self.grid,
            delta_t_s: p.delta_t(),
            delta_f_hz: p.delta_f(),
            period_s: p.period(),
            max_mag: self.max_mag(),
            meta: self.meta.clone(),
        })
    }

    /// Writes `<stem>.csv` and `<stem>.json` into `dir`; returns the CSV path.
    pub fn save(&self, dir: &Path, stem: &str) -> Result<PathBuf> {
        let csv_path = dir.join(format!("{stem}.csv"));
        self.write_csv(BufWriter::new(File::create(&csv_path)?))?;
        let json = serde_json::to_string_pretty(&self.sidecar()?)?;
        std::fs::write(dir.join(format!("{stem}.json")), json)?;
        Ok(csv_path)
    }

    /// Reads a surface back from the CSV/JSON pair written by [`save`](Self::save).
    pub fn load(dir: &Path, stem: &str) -> Result<Self> {
        let side: SurfaceSidecar = serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{stem}.json")))?)?;
        let p = AfdmParams::try_from(side.params)?;
        let mut rd = csv::Reader::from_path(dir.join(format!("{stem}.csv")))?;
        let mut values = Vec::with_capacity(side.grid.len());
        for rec in rd.deserialize() {
            let (_, _, _, _, re, im, _): (f64, f64, f64, f64, f64, f64, f64) = rec?;
            values.push(Complex64::new(re, im));
        }
        Ok(AfSurface::new(&p, side.grid, values, side.kind, side.evaluator)?.with_meta(side.meta))
    }
}

/// Evaluates `f(τ, ν)` at every grid point, parallel over delay rows.
pub(crate) fn evaluate_grid<F>(grid: &DelayDopplerGrid, f: F) -> Result<Vec<Complex64>>
where
    F: Fn(f64, f64) -> Result<Complex64> + Sync,
{
    let nus = grid.nus();
    evaluate_rows(grid, |tau| nus.iter().map(|&nu| f(tau, nu)).collect())
}

/// Evaluates one delay row at a time, parallel over rows; rows come back in order.
pub(crate) fn evaluate_rows<F>(grid: &DelayDopplerGrid, row: F) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Result<Vec<Complex64>> + Sync,
{
    let rows: Vec<Vec<Complex64>> = grid.taus().into_par_iter().map(&row).collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Evaluator choice for subcarrier ambiguity surfaces. `m == m1` gives the AAF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "evaluator")]
pub enum AfEvaluator {
    Exact { m: usize, m1: usize },
    Representative { m: usize, m1: usize },
    Oracle { m: usize, m1: usize, oversample: usize },
}

impl AfEvaluator {
    fn indices(&self) -> (usize, usize) {
        match *self {
            AfEvaluator::Exact { m, m1 } | AfEvaluator::Representative { m, m1 } | AfEvaluator::Oracle { m, m1, .. } => {
                (m, m1)
            }
        }
    }
}

/// Samples `A_{φm,φm1}` over `grid` with the chosen evaluator.
///
/// The representative evaluator fails with [`AfdmError::OutsideWindow`] if
/// any grid delay falls outside its validity windows.
pub fn af_surface(p: &AfdmParams, spec: &AfEvaluator, grid: &DelayDopplerGrid) -> Result<AfSurface> {
    let (m, m1) = spec.indices();
    p.check_index(m)?;
    p.check_index(m1)?;
    let (values, tag) = match *spec {
        AfEvaluator::Exact { .. } => {
            (evaluate_grid(grid, |tau, nu| caf_point_exact(p, m, m1, tau, nu))?, EvaluatorTag::Exact)
        }
        AfEvaluator::Representative { .. } => {
            if m < m1 {
                return Err(AfdmError::Precondition(
                    "representative CAF is defined for m > m1 only".into(),
                ));
            }
            let f = |tau, nu| {
                if m == m1 {
                    aaf_representative_case(p, m, tau, nu)
                } else {
                    caf_representative_case(p, m, m1, tau, nu)
                }
            };
            (evaluate_grid(grid, f)?, EvaluatorTag::Representative)
        }
        AfEvaluator::Oracle { oversample, .. } => {
            if oversample < super::oracle::MIN_OVERSAMPLE {
                return Err(AfdmError::Precondition(format!("oracle oversample {oversample} below minimum")));
            }
            let a = Subcarrier::new(*p, m)?;
            let b = Subcarrier::new(*p, m1)?;
            let nus = grid.nus();
            (evaluate_rows(grid, |tau| Ok(af_oracle_row(&a, &b, tau, &nus, oversample)))?, EvaluatorTag::Oracle)
        }
    };
    let kind = if m == m1 { SurfaceKind::AafSubcarrier } else { SurfaceKind::CafPair };
    Ok(AfSurface::new(p, *grid, values, kind, tag)?.with_meta(serde_json::json!({ "m": m, "m1": m1 })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> AfdmParams {
        AfdmParams::new(64, 7, 2f64.sqrt(), 1.0 / 960e3).unwrap()
    }

    #[test]
    fn grid_validation() {
        let p = p();
        assert!(DelayDopplerGrid::new(0.0, 1.0, 2, -1.0, 1.0, 3).is_ok());
        assert!(DelayDopplerGrid::new(1.0, 0.0, 2, -1.0, 1.0, 3).is_err());
        assert!(DelayDopplerGrid::new(0.0, 1.0, 1, -1.0, 1.0, 3).is_err());
        let g = DelayDopplerGrid::with_density(&p, (-1.0, 1.0), (-2.0, 2.0), 8).unwrap();
        assert_eq!((g.n_tau, g.n_nu), (17, 33));
        assert_eq!(g.tau(16), p.delta_t());
        assert!((g.tau(8)).abs() < 1e-20);
    }

    #[test]
    fn single_point_origin() {
        let p = p();
        let s = af_surface(&p, &AfEvaluator::Exact { m: 9, m1: 9 }, &DelayDopplerGrid::single(0.0, 0.0)).unwrap();
        assert_eq!(s.values.len(), 1);
        assert!((s.values[0].re - p.period()).abs() < 1e-12 * p.period());
        assert_eq!(s.kind, SurfaceKind::AafSubcarrier);
    }

    #[test]
    fn deterministic_and_bounded() {
        let p = p();
        let g = DelayDopplerGrid::in_units(&p, (-3.0, 3.0), 13, (-10.0, 10.0), 21).unwrap();
        let spec = AfEvaluator::Exact { m: 10, m1: 10 };
        let a = af_surface(&p, &spec, &g).unwrap();
        let b = af_surface(&p, &spec, &g).unwrap();
        assert_eq!(a.values, b.values);
        assert!(a.max_mag() <= p.period() * (1.0 + 1e-12));
        let (i, j) = a.argmax();
        assert_eq!((g.tau(i), g.nu(j)), (0.0, 0.0));
    }

    #[test]
    fn representative_outside_window_fails() {
        let p = p();
        let g = DelayDopplerGrid::in_units(&p, (0.0, 5.0), 6, (0.0, 1.0), 2).unwrap();
        assert!(af_surface(&p, &AfEvaluator::Representative { m: 10, m1: 10 }, &g).is_err());
    }

    #[test]
    fn csv_and_sidecar_round_trip() {
        let p = p();
        let g = DelayDopplerGrid::in_units(&p, (0.0, 1.0), 3, (-1.0, 1.0), 3).unwrap();
        let s = af_surface(&p, &AfEvaluator::Exact { m: 3, m1: 1 }, &g).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = s.save(dir.path(), "caf").unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert!(text.starts_with("tau_s,nu_hz,tau_over_dt,nu_over_df,re,im,mag"));
        assert_eq!(text.lines().count(), 10);
        let back = AfSurface::load(dir.path(), "caf").unwrap();
        assert_eq!(back.grid, s.grid);
        for (a, b) in back.values.iter().zip(&s.values) {
            assert!((a - b).norm() <= 1e-12 * p.period());
        }
    }
}
