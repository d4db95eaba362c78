//! Auto- and cross-ambiguity functions of chirp subcarriers and frames.

pub mod exact;
pub mod frame_af;
pub mod indicator;
pub mod oracle;
pub mod representative;
pub mod surface;

pub use exact::{aaf_point_exact, af_segments, caf_point_exact, fa_doppler, AfSegment, FaCase, SegmentClass};
pub use frame_af::{
    caf_matrix, expected_aaf_sq, frame_aaf_point, frame_aaf_point_oracle, frame_aaf_surface, pilot_data_caf,
    pilot_data_surfaces, PilotDataCaf,
};
pub use indicator::integral_indicator;
pub use oracle::{af_numeric_oracle, af_oracle_row, QuadratureRule};
pub use representative::{aaf_representative_case, caf_representative_case};
pub use surface::{af_surface, AfEvaluator, AfSurface, DelayDopplerGrid, EvaluatorTag, SurfaceKind, SurfaceSidecar};
