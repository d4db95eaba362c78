use afdm_core::{instantaneous_frequency, subcarrier_continuous, wrapping_points};

use super::Outcome;
use crate::args::SubcarrierArgs;
use crate::context::{build_params, csv_err, CliError, CliResult, Context};

/// Writes `subcarrier.csv` with `oversample·N` rows on `[0, T)` and the `C + 2`
/// wrapping points `t_{m,0..=C+1}` to `wrapping_points.csv`.
pub fn run(ctx: &Context, a: &SubcarrierArgs) -> CliResult<Outcome> {
    let p = build_params(&a.params)?;
    if a.oversample == 0 {
        return Err(CliError::flags("--oversample must be positive"));
    }
    p.check_index(a.m)?;
    let (path, mut w) = ctx.csv_writer("subcarrier.csv")?;
    w.write_record(["t_s", "t_over_dt", "re", "im", "inst_freq_hz", "inst_freq_over_df"]).map_err(csv_err)?;
    let ts = p.delta_t() / a.oversample as f64;
    for k in 0..p.n() * a.oversample {
        let t = k as f64 * ts;
        let v = subcarrier_continuous(&p, a.m, t)?;
        let f = instantaneous_frequency(&p, a.m, t)?;
        w.write_record(&[
            t.to_string(),
            (t / p.delta_t()).to_string(),
            v.re.to_string(),
            v.im.to_string(),
            f.to_string(),
            (f / p.delta_f()).to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;

    let (wpath, mut ww) = ctx.csv_writer("wrapping_points.csv")?;
    ww.write_record(["q", "t_s", "t_over_dt"]).map_err(csv_err)?;
    for (q, t) in wrapping_points(&p, a.m)?.into_iter().enumerate() {
        ww.write_record(&[q.to_string(), t.to_string(), (t / p.delta_t()).to_string()]).map_err(csv_err)?;
    }
    ww.flush()?;
    Ok(Outcome { params: p, outputs: vec![path, wpath] })
}
