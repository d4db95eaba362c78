//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "afdm", version, about = "AFDM chirp ambiguity, sensing and statistics toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Output directory (default: $AFDM_OUT_DIR, then ./afdm-out).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cap on worker threads for surface evaluation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Read delays in seconds and Dopplers in Hz instead of multiples of Δt and Δf.
    #[arg(long, global = true)]
    pub si: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Time samples and instantaneous frequency of one chirp subcarrier.
    Subcarrier(SubcarrierArgs),
    /// Auto- or cross-ambiguity surface of chirp subcarriers.
    Af(AfArgs),
    /// Frame-to-pilot CAF split into total, pilot and data components.
    FrameAf(FrameAfArgs),
    /// Expected squared frame AAF: closed form and Monte Carlo.
    ExpectedAf(ExpectedAfArgs),
    /// Matched-filter sensing of a channel scenario.
    Sense(SenseArgs),
    /// Unambiguity and interference-free parallelograms.
    Parallelogram(ParallelogramArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Subcarrier(_) => "subcarrier",
            Command::Af(_) => "af",
            Command::FrameAf(_) => "frame-af",
            Command::ExpectedAf(_) => "expected-af",
            Command::Sense(_) => "sense",
            Command::Parallelogram(_) => "parallelogram",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ParamsArgs {
    /// Number of subcarriers (even).
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Wrapping count C = 2N·c1.
    #[arg(long, default_value_t = 1)]
    pub c: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c2: f64,
    /// Subcarrier spacing in Hz.
    #[arg(long, default_value_t = 15e3)]
    pub delta_f: f64,
}

/// Inclusive range written `lo,hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl std::str::FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected 'lo,hi', got '{s}'"))?;
        let lo: f64 = a.trim().parse().map_err(|e| format!("bad lower bound '{a}': {e}"))?;
        let hi: f64 = b.trim().parse().map_err(|e| format!("bad upper bound '{b}': {e}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(format!("range must satisfy lo <= hi, got '{s}'"));
        }
        Ok(Range { lo, hi })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Delay range `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<Range>,
    /// Doppler range `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<Range>,
    /// Grid cells per Δt and per Δf.
    #[arg(long, default_value_t = 4)]
    pub density: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SubcarrierArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    #[arg(long)]
    pub m: usize,
    /// Samples per Δt.
    #[arg(long, default_value_t = 16)]
    pub oversample: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AfMode {
    Aaf,
    Caf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvaluatorArg {
    Exact,
    Oracle,
    Representative,
}

#[derive(Debug, Args, Serialize)]
pub struct AfArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    #[arg(long, value_enum, default_value_t = AfMode::Aaf)]
    pub mode: AfMode,
    #[arg(long)]
    pub m: usize,
    /// Second subcarrier index (CAF only).
    #[arg(long)]
    pub m1: Option<usize>,
    #[arg(long, value_enum, default_value_t = EvaluatorArg::Exact)]
    pub evaluator: EvaluatorArg,
    /// Quadrature panels per Δt for the oracle evaluator.
    #[arg(long, default_value_t = 16)]
    pub oversample: usize,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutArg {
    Sp,
    Ep,
    GuardFree,
    DataOnly,
}

#[derive(Debug, Args, Serialize)]
pub struct FrameAfArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    #[arg(long, value_enum, default_value_t = LayoutArg::Ep)]
    pub layout: LayoutArg,
    /// Guard subcarriers on each side of the pilot (EP layout).
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    /// Pilot subcarrier index.
    #[arg(long, default_value_t = 0)]
    pub m_p: usize,
    /// Pilot-to-data power ratio in dB.
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub pdr_db: f64,
    #[arg(long, default_value = "qpsk")]
    pub constellation: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutArg {
    ZeroDoppler,
    ZeroDelay,
    Full,
}

#[derive(Debug, Args, Serialize)]
pub struct ExpectedAfArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    #[arg(long, default_value = "qam256")]
    pub constellation: String,
    #[arg(long, value_enum, default_value_t = CutArg::ZeroDoppler)]
    pub cut: CutArg,
    /// Abscissa range `lo,hi` of a one-dimensional cut.
    #[arg(long, allow_hyphen_values = true, default_value = "-16,16")]
    pub range: Range,
    /// Number of points on a one-dimensional cut.
    #[arg(long, default_value_t = 33)]
    pub points: usize,
    /// Monte Carlo trials; 0 writes the closed form only.
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[arg(long, default_value_t = 2025)]
    pub seed: u64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceArg {
    /// Transmit and match the pilot chirp subcarrier alone.
    Pilot,
    /// Transmit and match a random data-only frame.
    Frame,
}

#[derive(Debug, Args, Serialize)]
pub struct SenseArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    /// Scenario JSON: `{paths: [{h_re, h_im, tau_over_dt, nu_over_df}], snr_db, mode}`.
    #[arg(long)]
    pub scenario: std::path::PathBuf,
    #[arg(long, value_enum, default_value_t = ReferenceArg::Pilot)]
    pub reference: ReferenceArg,
    /// Pilot subcarrier index.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Overrides the scenario SNR.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    /// Seed for noise and for the random frame reference.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "qpsk")]
    pub constellation: String,
    /// Quadrature panels per Δt.
    #[arg(long, default_value_t = 16)]
    pub oversample: usize,
    #[arg(long, default_value_t = 0.5)]
    pub rel_threshold: f64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ParallelogramArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    /// Subcarrier whose pulse lattice defines the cell.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Guard count Q; adds the interference-free region.
    #[arg(long)]
    pub q: Option<usize>,
    /// Pilot subcarrier index for the interference-free region.
    #[arg(long, default_value_t = 0)]
    pub m_p: usize,
}
