//! One module per subcommand; each returns the files it wrote.

use std::path::PathBuf;

use afdm_core::AfdmParams;

pub mod af;
pub mod expected_af;
pub mod frame_af;
pub mod parallelogram;
pub mod sense;
pub mod subcarrier;

/// Parameters used and the files written by a command.
pub struct Outcome {
    pub params: AfdmParams,
    pub outputs: Vec<PathBuf>,
}
