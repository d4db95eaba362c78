//! Time-domain signal abstraction shared by the quadrature oracle, the
//! channel model and the matched filter.

use num_complex::Complex64;

/// A finite-support complex baseband signal.
///
/// `breakpoints` lists the interior instants where the signal or its phase
/// derivative jumps; quadrature splits its panels there so every panel
/// integrates a smooth function.
pub trait TimeSignal: Sync {
    /// Value at `t` seconds; zero outside [`support`](Self::support).
    fn eval(&self, t: f64) -> Complex64;

    /// Half-open support `[start, end)` in seconds.
    fn support(&self) -> (f64, f64);

    fn breakpoints(&self) -> Vec<f64>;

    /// Nominal Nyquist interval; quadrature densities are given per this interval.
    fn sample_interval(&self) -> f64;
}

impl<S: TimeSignal + ?Sized> TimeSignal for &S {
    fn eval(&self, t: f64) -> Complex64 {
        (**self).eval(t)
    }
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
    fn sample_interval(&self) -> f64 {
        (**self).sample_interval()
    }
}
