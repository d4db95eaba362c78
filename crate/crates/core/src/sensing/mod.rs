//! Doubly selective channel, matched filtering, pulse detection and the
//! unambiguity geometry of the delay-Doppler plane.

pub mod channel;
pub mod estimate;
pub mod matched;
pub mod parallelogram;
pub mod peaks;

pub use channel::{apply_channel, Echo, NoiseSpec, Path, Scenario, ScenarioPath, SensingChannel, SensingMode};
pub use estimate::{estimate_targets, pair_targets, EstimateOptions, TargetEstimate, TargetPairing};
pub use matched::matched_filter;
pub use parallelogram::{
    check_unambiguous, interference_free_parallelogram, unambiguity_parallelogram, unit_cell_base_height, AreaFactors,
    Parallelogram, TargetCheck, UnambiguityReport, V2Search,
};
pub use peaks::{detect_peaks, Peak, PeakList};
