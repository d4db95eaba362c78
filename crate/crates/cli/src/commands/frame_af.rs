use afdm_core::ambiguity::pilot_data_surfaces;
use afdm_core::{make_frame, Constellation, Layout};

use super::Outcome;
use crate::args::{FrameAfArgs, LayoutArg};
use crate::context::{build_params, CliResult, Context};

/// Writes `frame.json` and the `total`, `pilot` and `data` CAF surfaces against the pilot subcarrier.
pub fn run(ctx: &Context, a: &FrameAfArgs) -> CliResult<Outcome> {
    let p = build_params(&a.params)?;
    let layout = match a.layout {
        LayoutArg::Sp => Layout::Sp,
        LayoutArg::Ep => Layout::Ep(a.q),
        LayoutArg::GuardFree => Layout::GuardFreePilot,
        LayoutArg::DataOnly => Layout::DataOnly,
    };
    let constellation = Constellation::from_name(&a.constellation)?;
    let frame = make_frame(&p, layout, Some(a.m_p), a.pdr_db, &constellation, a.seed)?;
    let grid = ctx.grid(&p, &a.grid, ((-2.0, 2.0), (-16.0, 16.0)))?;
    let surfaces = pilot_data_surfaces(&p, &frame, &grid)?;
    let mut outputs = vec![ctx.path("frame.json")];
    std::fs::write(&outputs[0], frame.to_json()?)?;
    for (s, stem) in surfaces.iter().zip(["total", "pilot", "data"]) {
        outputs.push(s.save(&ctx.out_dir, stem)?);
        outputs.push(ctx.path(&format!("{stem}.json")));
    }
    Ok(Outcome { params: p, outputs })
}
