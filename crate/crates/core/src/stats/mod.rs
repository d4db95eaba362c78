//! Random-frame ambiguity statistics, spectra and surface comparison.

pub mod compare;
pub mod curve;
pub mod monte_carlo;
pub mod psd;

pub use compare::{compare_surfaces, SurfaceDiff};
pub use curve::{Curve, CURVE_CSV_HEADER};
pub use monte_carlo::{expected_on_cut, monte_carlo_expected_aaf_sq, Cut, McConfig, McEstimate};
pub use psd::{psd, PsdCurve, PSD_CSV_HEADER};
