//! Unit-power symbol alphabets and their low-order moments.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{AfdmError, Result};

/// A finite symbol alphabet normalised to unit mean power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constellation {
    name: String,
    points: Vec<Complex64>,
}

/// Moments of a uniformly drawn constellation symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    /// `E|x|⁴`
    pub m4: f64,
    /// `E x²`
    pub m2c: Complex64,
    /// `E (x*)²`
    pub m2c_conj: Complex64,
    /// `E|x|²`
    pub power: f64,
}

impl Constellation {
    /// Builds a constellation from arbitrary points, rescaling them to unit mean power.
    pub fn new(name: impl Into<String>, points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(AfdmError::InvalidConfig("constellation has no points".into()));
        }
        let power = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / points.len() as f64;
        if !(power > 0.0 && power.is_finite()) {
            return Err(AfdmError::InvalidConfig("constellation has zero power".into()));
        }
        let s = power.sqrt().recip();
        Ok(Constellation { name: name.into(), points: points.into_iter().map(|p| p * s).collect() })
    }

    pub fn bpsk() -> Self {
        Self::psk_named("bpsk", 2, 0.0)
    }

    /// QPSK on `e^{j(2k+1)π/4}`.
    pub fn qpsk() -> Self {
        Self::psk_named("qpsk", 4, PI / 4.0)
    }

    pub fn psk8() -> Self {
        Self::psk_named("psk8", 8, 0.0)
    }

    pub fn qam16() -> Self {
        Self::square_qam(16)
    }

    pub fn qam64() -> Self {
        Self::square_qam(64)
    }

    pub fn qam256() -> Self {
        Self::square_qam(256)
    }

    fn psk_named(name: &str, order: usize, offset: f64) -> Self {
        let points = (0..order)
            .map(|k| Complex64::from_polar(1.0, offset + 2.0 * PI * k as f64 / order as f64))
            .collect();
        Constellation { name: name.into(), points }
    }

    fn square_qam(order: usize) -> Self {
        let side = (order as f64).sqrt().round() as i64;
        let levels: Vec<f64> = (0..side).map(|i| (2 * i - side + 1) as f64).collect();
        let scale = (3.0 / (2.0 * (order as f64 - 1.0))).sqrt();
        let points = levels
            .iter()
            .flat_map(|&re| levels.iter().map(move |&im| Complex64::new(re, im) * scale))
            .collect();
        Constellation { name: format!("qam{order}"), points }
    }

    /// Looks up a preset by tag (`bpsk`, `qpsk`, `psk8`, `qam16`, `qam64`, `qam256`).
    pub fn from_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Self::bpsk()),
            "qpsk" => Ok(Self::qpsk()),
            "psk8" | "8psk" => Ok(Self::psk8()),
            "qam16" | "16qam" => Ok(Self::qam16()),
            "qam64" | "64qam" => Ok(Self::qam64()),
            "qam256" | "256qam" => Ok(Self::qam256()),
            other => Err(AfdmError::InvalidConfig(format!("unknown constellation '{other}'"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Draws one symbol uniformly.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        self.points[rng.random_range(0..self.points.len())]
    }
}

/// Exact averages over the constellation points.
pub fn constellation_moments(c: &Constellation) -> Moments {
    let k = c.points.len() as f64;
    let mut m4 = 0.0;
    let mut power = 0.0;
    let mut m2c = Complex64::new(0.0, 0.0);
    for p in &c.points {
        let e = p.norm_sqr();
        power += e;
        m4 += e * e;
        m2c += p * p;
    }
    let m2c = m2c / k;
    Moments { m4: m4 / k, m2c, m2c_conj: m2c.conj(), power: power / k }
}
