use afdm_core::stats::{expected_on_cut, monte_carlo_expected_aaf_sq, Cut, Curve, McConfig};
use afdm_core::Constellation;

use super::Outcome;
use crate::args::{CutArg, ExpectedAfArgs};
use crate::context::{build_params, csv_err, CliError, CliResult, Context};

/// Writes the closed-form and Monte Carlo `E|A|²` in units of `T²`.
///
/// One-dimensional cuts go to `closed_form.csv` and `monte_carlo.csv`
/// (`x,value,stderr`, with `x` in Δt or Δf unless `--si`); a full grid goes
/// to `expected_grid.csv`.
pub fn run(ctx: &Context, a: &ExpectedAfArgs) -> CliResult<Outcome> {
    let p = build_params(&a.params)?;
    let constellation = Constellation::from_name(&a.constellation)?;
    if a.cut != CutArg::Full && a.points == 0 {
        return Err(CliError::flags("--points must be positive"));
    }
    let lo_hi = |unit: f64| if ctx.si { (a.range.lo / unit, a.range.hi / unit) } else { (a.range.lo, a.range.hi) };
    let (cut, x_unit) = match a.cut {
        CutArg::ZeroDoppler => {
            let (lo, hi) = lo_hi(p.delta_t());
            (Cut::zero_doppler_units(&p, lo, hi, a.points), p.delta_t())
        }
        CutArg::ZeroDelay => {
            let (lo, hi) = lo_hi(p.delta_f());
            (Cut::zero_delay_units(&p, lo, hi, a.points), p.delta_f())
        }
        CutArg::Full => (Cut::Full { grid: ctx.grid(&p, &a.grid, ((-4.0, 4.0), (-4.0, 4.0)))? }, 1.0),
    };
    let t2 = p.period() * p.period();
    let x_scale = if ctx.si { 1.0 } else { 1.0 / x_unit };
    let closed: Vec<f64> = expected_on_cut(&p, &constellation, &cut)?.into_iter().map(|v| v / t2).collect();
    let mc = if a.trials > 0 {
        let cfg = McConfig { trials: a.trials, seed: a.seed, constellation: a.constellation.clone() };
        Some(monte_carlo_expected_aaf_sq(&p, &cfg, &cut)?)
    } else {
        None
    };

    let mut outputs = Vec::new();
    if let Cut::Full { .. } = cut {
        let (path, mut w) = ctx.csv_writer("expected_grid.csv")?;
        w.write_record(["tau_s", "nu_hz", "tau_over_dt", "nu_over_df", "closed_form", "monte_carlo", "stderr"])
            .map_err(csv_err)?;
        for (k, (t, v)) in cut.points().into_iter().enumerate() {
            let (m, s) = match &mc {
                Some(e) => ((e.mean[k] / t2).to_string(), (e.stderr[k] / t2).to_string()),
                None => (String::new(), String::new()),
            };
            w.write_record(&[
                t.to_string(),
                v.to_string(),
                (t / p.delta_t()).to_string(),
                (v / p.delta_f()).to_string(),
                closed[k].to_string(),
                m,
                s,
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        outputs.push(path);
    } else {
        let x: Vec<f64> = cut.abscissa().into_iter().map(|v| v * x_scale).collect();
        let (path, w) = ctx.file("closed_form.csv")?;
        Curve::exact(x, closed)?.write_csv(w)?;
        outputs.push(path);
        if let Some(e) = &mc {
            let (path, w) = ctx.file("monte_carlo.csv")?;
            e.curve(x_scale, 1.0 / t2)?.write_csv(w)?;
            outputs.push(path);
        }
    }
    outputs.push(ctx.write_json(
        "expected_af.json",
        &serde_json::json!({
            "normalization": "T^2",
            "period_s": p.period(),
            "constellation": a.constellation,
            "trials": a.trials,
            "seed": a.seed,
            "cut": cut,
        }),
    )?);
    Ok(Outcome { params: p, outputs })
}
