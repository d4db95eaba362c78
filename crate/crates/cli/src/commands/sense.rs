use afdm_core::ambiguity::frame_aaf_point;
use afdm_core::sensing::{
    check_unambiguous, detect_peaks, estimate_targets, matched_filter, pair_targets, unambiguity_parallelogram, Echo,
    EstimateOptions, Scenario, TargetEstimate, TargetPairing, UnambiguityReport,
};
use afdm_core::signal::TimeSignal;
use afdm_core::{make_frame, AfdmParams, Constellation, FrameSignal, Layout, Subcarrier};
use num_complex::Complex64;
use serde::Serialize;

use super::parallelogram::CellReport;
use super::Outcome;
use crate::args::{ReferenceArg, SenseArgs};
use crate::context::{build_params, csv_err, write_peaks, CliError, CliResult, Context};

#[derive(Serialize)]
struct SenseReport {
    unambiguous: bool,
    verdict: UnambiguityReport,
    parallelogram: CellReport,
    unit_response: f64,
    noise_n0: Option<f64>,
    estimates: Vec<TargetEstimate>,
    pairing: Vec<TargetPairing>,
    all_within_half_cell: Option<bool>,
    estimation_error: Option<String>,
}

/// Transmit waveform and matched-filter reference (the same signal).
enum Reference {
    Pilot(Subcarrier),
    Frame(FrameSignal),
}

/// Writes the MF surface, detected pulses, the unambiguity cell, the
/// containment verdict and the estimated-versus-true target table.
pub fn run(ctx: &Context, a: &SenseArgs) -> CliResult<Outcome> {
    let p = build_params(&a.params)?;
    p.check_index(a.m)?;
    let text = std::fs::read_to_string(&a.scenario)
        .map_err(|e| CliError::io(format!("cannot read scenario {}: {e}", a.scenario.display())))?;
    let mut scenario = Scenario::from_json(&text).map_err(|e| CliError::io(format!("bad scenario: {e}")))?;
    if scenario.paths.is_empty() {
        return Err(CliError::io("scenario has no paths"));
    }
    if a.snr_db.is_some() {
        scenario.snr_db = a.snr_db;
    }

    let (reference, unit_response) = match a.reference {
        ReferenceArg::Pilot => (Reference::Pilot(Subcarrier::new(p, a.m)?), p.period()),
        ReferenceArg::Frame => {
            let c = Constellation::from_name(&a.constellation)?;
            let frame = make_frame(&p, Layout::DataOnly, None, 0.0, &c, a.seed)?;
            let s = (p.n() as f64).sqrt().recip();
            let x: Vec<Complex64> = frame.x().iter().map(|v| v * s).collect();
            let peak = frame_aaf_point(&p, &x, 0.0, 0.0)?.norm();
            (Reference::Frame(FrameSignal::from_symbols(p, x, false)), peak)
        }
    };
    let signal_power = unit_response / p.period();
    let channel = scenario
        .to_channel(&p, signal_power, a.seed)
        .map_err(|e| CliError::io(format!("bad scenario: {e}")))?;

    let (cell, _) = unambiguity_parallelogram(&p, a.m)?;
    let verdict = check_unambiguous(&channel, &cell)?;

    let (t_hi, n_lo, n_hi) = channel.paths.iter().fold((0.0f64, 0.0f64, 0.0f64), |acc, x| {
        (acc.0.max(x.tau / p.delta_t()), acc.1.min(x.nu / p.delta_f()), acc.2.max(x.nu / p.delta_f()))
    });
    let default = ((-2.0, (t_hi + 2.0).ceil()), ((n_lo - 2.0).floor(), (n_hi + 2.0).ceil()));
    let grid = ctx.grid(&p, &a.grid, default)?;

    let mf = match &reference {
        Reference::Pilot(s) => mf(&p, &channel, s, &grid, a.oversample)?,
        Reference::Frame(s) => mf(&p, &channel, s, &grid, a.oversample)?,
    };
    let mut outputs = vec![mf.save(&ctx.out_dir, "mf")?, ctx.path("mf.json")];
    let min_sep = (0.5 * p.delta_t(), 0.5 * p.delta_f());
    let peaks = detect_peaks(&mf, a.rel_threshold, min_sep);
    outputs.push(write_peaks(ctx, &p, "peaks.csv", &peaks)?);

    let opts = EstimateOptions { rel_threshold: a.rel_threshold, min_sep, region: Some(cell), unit_response };
    let (estimates, estimation_error) = match estimate_targets(&mf, channel.paths.len(), &opts) {
        Ok(e) => (e, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let pairing = pair_targets(&p, &channel.paths, &estimates);
    let all_within = (estimation_error.is_none()).then(|| {
        pairing.len() == channel.paths.len()
            && pairing.iter().all(|x| x.dtau.abs() <= 0.5 * p.delta_t() && x.dnu.abs() <= 0.5 * p.delta_f())
    });

    let (tpath, mut w) = ctx.csv_writer("targets.csv")?;
    w.write_record([
        "truth_tau_over_dt",
        "truth_nu_over_df",
        "est_tau_over_dt",
        "est_nu_over_df",
        "dtau_over_dt",
        "dnu_over_df",
        "true_gain_mag",
        "est_gain_mag",
    ])
    .map_err(csv_err)?;
    for x in &pairing {
        let t = &channel.paths[x.truth];
        let e = &estimates[x.estimate];
        w.write_record(&[
            (t.tau / p.delta_t()).to_string(),
            (t.nu / p.delta_f()).to_string(),
            (e.tau / p.delta_t()).to_string(),
            (e.nu / p.delta_f()).to_string(),
            (x.dtau / p.delta_t()).to_string(),
            (x.dnu / p.delta_f()).to_string(),
            t.h.norm().to_string(),
            e.gain_mag.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    outputs.push(tpath);

    let report = SenseReport {
        unambiguous: verdict.unambiguous,
        verdict,
        parallelogram: CellReport::new(&p, &cell)?,
        unit_response,
        noise_n0: channel.noise.map(|n| n.n0),
        estimates,
        pairing,
        all_within_half_cell: all_within,
        estimation_error,
    };
    outputs.push(ctx.write_json("sense.json", &report)?);
    println!("unambiguous: {}", report.unambiguous);
    if let Some(w) = report.all_within_half_cell {
        println!("targets recovered within half a cell: {w}");
    }
    Ok(Outcome { params: p, outputs })
}

fn mf<S: TimeSignal + Clone>(
    p: &AfdmParams,
    channel: &afdm_core::sensing::SensingChannel,
    tx: &S,
    grid: &afdm_core::ambiguity::DelayDopplerGrid,
    oversample: usize,
) -> CliResult<afdm_core::ambiguity::AfSurface> {
    let echo = Echo::new(channel, tx.clone());
    Ok(matched_filter(p, &echo, tx, grid, oversample)?)
}
