use afdm_core::sensing::{interference_free_parallelogram, unambiguity_parallelogram, Parallelogram, V2Search};
use afdm_core::AfdmParams;
use serde::Serialize;

use super::Outcome;
use crate::args::ParallelogramArgs;
use crate::context::{build_params, csv_err, CliResult, Context};

/// A parallelogram with derived quantities, in seconds/Hz and in grid units.
#[derive(Serialize)]
pub struct CellReport {
    pub anchor: (f64, f64),
    pub v1: (f64, f64),
    pub v2: (f64, f64),
    pub v1_units: (f64, f64),
    pub v2_units: (f64, f64),
    pub vertices: [(f64, f64); 4],
    pub vertices_units: [(f64, f64); 4],
    pub area: f64,
}

impl CellReport {
    pub fn new(p: &AfdmParams, c: &Parallelogram) -> CliResult<Self> {
        let u = |v: (f64, f64)| (v.0 / p.delta_t(), v.1 / p.delta_f());
        let vertices = c.vertices();
        Ok(CellReport {
            anchor: c.anchor,
            v1: c.v1,
            v2: c.v2,
            v1_units: u(c.v1),
            v2_units: u(c.v2),
            vertices,
            vertices_units: vertices.map(u),
            area: c.area()?,
        })
    }
}

#[derive(Serialize)]
struct Report {
    unambiguity: CellReport,
    base: f64,
    height: f64,
    v2_search: Option<V2Search>,
    interference_free: Option<CellReport>,
    contained: Option<bool>,
}

/// Writes `parallelogram.json` and the vertex table `parallelogram.csv`.
pub fn run(ctx: &Context, a: &ParallelogramArgs) -> CliResult<Outcome> {
    let p = build_params(&a.params)?;
    let (cell, search) = unambiguity_parallelogram(&p, a.m)?;
    let factors = cell.factors()?;
    let inner = a.q.map(|q| interference_free_parallelogram(&p, q, a.m_p)).transpose()?;
    let contained = match &inner {
        Some(r) => {
            let mut all = true;
            for (t, v) in r.vertices() {
                all &= cell.contains(t, v)?;
            }
            Some(all && r.area()? < cell.area()?)
        }
        None => None,
    };
    let report = Report {
        unambiguity: CellReport::new(&p, &cell)?,
        base: factors.base,
        height: factors.height,
        v2_search: search,
        interference_free: inner.as_ref().map(|r| CellReport::new(&p, r)).transpose()?,
        contained,
    };
    let json = ctx.write_json("parallelogram.json", &report)?;
    let (csv, mut w) = ctx.csv_writer("parallelogram.csv")?;
    w.write_record(["region", "vertex", "tau_s", "nu_hz", "tau_over_dt", "nu_over_df"]).map_err(csv_err)?;
    let mut regions = vec![("unambiguity", cell)];
    if let Some(r) = inner {
        regions.push(("interference_free", r));
    }
    for (name, r) in &regions {
        for (k, (t, v)) in r.vertices().into_iter().enumerate() {
            w.write_record(&[
                name.to_string(),
                k.to_string(),
                t.to_string(),
                v.to_string(),
                (t / p.delta_t()).to_string(),
                (v / p.delta_f()).to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    println!("unambiguity area {:.9}", report.unambiguity.area);
    Ok(Outcome { params: p, outputs: vec![json, csv] })
}
