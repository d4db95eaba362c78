use afdm_core::ambiguity::{af_surface, AfEvaluator};
use afdm_core::sensing::detect_peaks;

use super::Outcome;
use crate::args::{AfArgs, AfMode, EvaluatorArg};
use crate::context::{build_params, write_peaks, CliError, CliResult, Context};

/// Writes `af.csv`, its `af.json` sidecar and the detected pulses in `af_peaks.csv`.
pub fn run(ctx: &Context, a: &AfArgs) -> CliResult<Outcome> {
    let p = build_params(&a.params)?;
    let m1 = match (a.mode, a.m1) {
        (AfMode::Aaf, None) => a.m,
        (AfMode::Aaf, Some(m1)) if m1 == a.m => a.m,
        (AfMode::Aaf, Some(_)) => return Err(CliError::flags("--m1 differs from --m in aaf mode")),
        (AfMode::Caf, Some(m1)) => m1,
        (AfMode::Caf, None) => return Err(CliError::flags("caf mode needs --m1")),
    };
    let spec = match a.evaluator {
        EvaluatorArg::Exact => AfEvaluator::Exact { m: a.m, m1 },
        EvaluatorArg::Representative => AfEvaluator::Representative { m: a.m, m1 },
        EvaluatorArg::Oracle => AfEvaluator::Oracle { m: a.m, m1, oversample: a.oversample },
    };
    let grid = ctx.grid(&p, &a.grid, ((-2.0, 2.0), (-2.0, 2.0)))?;
    let surface = af_surface(&p, &spec, &grid)?.with_meta(serde_json::to_value(spec)?);
    let csv = surface.save(&ctx.out_dir, "af")?;
    let peaks = detect_peaks(&surface, 0.5, (0.5 * p.delta_t(), 0.5 * p.delta_f()));
    let pk = write_peaks(ctx, &p, "af_peaks.csv", &peaks)?;
    Ok(Outcome { params: p, outputs: vec![csv, ctx.path("af.json"), pk] })
}
