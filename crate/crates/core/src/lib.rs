//! Affine frequency division multiplexing (AFDM) waveform analysis.
//!
//! The crate generates chirp subcarriers and frames, evaluates their auto- and
//! cross-ambiguity functions in closed form and by quadrature, and runs a
//! matched-filter sensing pipeline on top of them.

pub mod ambiguity;
pub mod constellation;
pub mod error;
pub mod frame;
pub mod modem;
pub mod params;
pub mod phase;
pub mod sensing;
pub mod signal;
pub mod stats;
pub mod subcarrier;

pub use constellation::{constellation_moments, Constellation, Moments};
pub use error::{AfdmError, Result};
pub use frame::{make_frame, make_frame_with_rng, DaftFrame, Layout};
pub use modem::{append_cpp, demodulate, modulate, signal_continuous, CppSignal, FrameSignal};
pub use params::{AfdmParams, ParamsSpec};
pub use signal::TimeSignal;
pub use subcarrier::{
    instantaneous_frequency, q_step, q_tilde, segments, subcarrier_continuous, subcarrier_discrete,
    wrapping_points, Subcarrier, WrapSegment,
};
