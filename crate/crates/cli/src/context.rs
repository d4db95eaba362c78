//! Shared plumbing: exit codes, unit conversion, output directory and provenance.

use std::fmt;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use afdm_core::ambiguity::DelayDopplerGrid;
use afdm_core::sensing::PeakList;
use afdm_core::{AfdmError, AfdmParams};
use serde::Serialize;

use crate::args::{Cli, GridArgs, ParamsArgs, Range};

pub const EXIT_FLAGS: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const OUT_DIR_ENV: &str = "AFDM_OUT_DIR";

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn flags(message: impl Into<String>) -> Self {
        CliError { code: EXIT_FLAGS, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { code: EXIT_IO, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<AfdmError> for CliError {
    fn from(e: AfdmError) -> Self {
        let code = match e {
            AfdmError::InvalidConfig(_) | AfdmError::SubcarrierOutOfRange { .. } | AfdmError::LengthMismatch { .. } => {
                EXIT_FLAGS
            }
            AfdmError::Io(_) | AfdmError::Json(_) | AfdmError::Csv(_) => EXIT_IO,
            _ => EXIT_SEMANTIC,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn build_params(a: &ParamsArgs) -> CliResult<AfdmParams> {
    Ok(AfdmParams::with_spacing(a.n, a.c, a.c2, a.delta_f)?)
}

/// Per-run state handed to every command.
pub struct Context {
    pub out_dir: PathBuf,
    pub si: bool,
}

impl Context {
    pub fn new(cli: &Cli) -> CliResult<Self> {
        let out_dir = cli
            .global
            .out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("afdm-out"));
        fs::create_dir_all(&out_dir).map_err(|e| CliError::io(format!("cannot create {}: {e}", out_dir.display())))?;
        Ok(Context { out_dir, si: cli.global.si })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    /// Range converted to multiples of `(Δt or Δf)`.
    fn to_units(&self, r: Range, unit: f64) -> (f64, f64) {
        if self.si {
            (r.lo / unit, r.hi / unit)
        } else {
            (r.lo, r.hi)
        }
    }

    /// Grid from flags, falling back to `default` (in units) for missing axes.
    pub fn grid(&self, p: &AfdmParams, g: &GridArgs, default: ((f64, f64), (f64, f64))) -> CliResult<DelayDopplerGrid> {
        if g.density == 0 {
            return Err(CliError::flags("--density must be positive"));
        }
        let tau = g.tau.map(|r| self.to_units(r, p.delta_t())).unwrap_or(default.0);
        let nu = g.nu.map(|r| self.to_units(r, p.delta_f())).unwrap_or(default.1);
        Ok(DelayDopplerGrid::with_density(p, tau, nu, g.density)?)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<PathBuf> {
        let path = self.path(name);
        fs::write(&path, serde_json::to_string_pretty(value)?)?;
        Ok(path)
    }

    pub fn csv_writer(&self, name: &str) -> CliResult<(PathBuf, csv::Writer<BufWriter<fs::File>>)> {
        let path = self.path(name);
        let f = fs::File::create(&path)?;
        Ok((path.clone(), csv::Writer::from_writer(BufWriter::new(f))))
    }

    pub fn file(&self, name: &str) -> CliResult<(PathBuf, BufWriter<fs::File>)> {
        let path = self.path(name);
        let f = fs::File::create(&path)?;
        Ok((path, BufWriter::new(f)))
    }
}

pub fn csv_err(e: csv::Error) -> CliError {
    CliError::io(e.to_string())
}

/// `run.json`: everything needed to replay the command.
#[derive(Serialize)]
struct RunRecord<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    argv: Vec<String>,
    config: &'a Cli,
    out_dir: &'a Path,
    params: Option<afdm_core::ParamsSpec>,
    outputs: &'a [PathBuf],
}

pub fn write_run_record(ctx: &Context, cli: &Cli, params: Option<&AfdmParams>, outputs: &[PathBuf]) -> CliResult<PathBuf> {
    let rec = RunRecord {
        tool: "afdm",
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        argv: std::env::args().collect(),
        config: cli,
        out_dir: &ctx.out_dir,
        params: params.map(|p| p.spec()),
        outputs,
    };
    ctx.write_json("run.json", &rec)
}

pub fn write_peaks(ctx: &Context, p: &AfdmParams, name: &str, peaks: &PeakList) -> CliResult<PathBuf> {
    let (path, mut w) = ctx.csv_writer(name)?;
    w.write_record(["tau_s", "nu_hz", "tau_over_dt", "nu_over_df", "magnitude"]).map_err(csv_err)?;
    for pk in &peaks.peaks {
        w.write_record(&[
            pk.tau.to_string(),
            pk.nu.to_string(),
            (pk.tau / p.delta_t()).to_string(),
            (pk.nu / p.delta_f()).to_string(),
            pk.magnitude.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(path)
}
