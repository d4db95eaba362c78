//! DAFT-domain frames with pilot, guard and data layouts.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constellation::Constellation;
use crate::error::{AfdmError, Result};
use crate::params::{AfdmParams, ParamsSpec};

/// Pilot/data arrangement of a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "q")]
pub enum Layout {
    /// Superimposed pilot: the pilot rides on top of a full data vector.
    Sp,
    /// Embedded pilot with `Q` cyclic guards on each side.
    Ep(usize),
    /// Embedded pilot without guards.
    GuardFreePilot,
    /// Data on every subcarrier, no pilot.
    DataOnly,
}

/// A DAFT-domain symbol vector together with its layout metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DaftFrame {
    #[serde(flatten)]
    params: ParamsSpec,
    layout: Layout,
    pilot_index: Option<usize>,
    pilot_value: Complex64,
    guard_indices: Vec<usize>,
    data_indices: Vec<usize>,
    pdr_db: f64,
    constellation: String,
    seed: Option<u64>,
    x: Vec<Complex64>,
}

/// Draws a frame with a [`ChaCha8Rng`] seeded from `seed`.
pub fn make_frame(
    p: &AfdmParams,
    layout: Layout,
    pilot_index: Option<usize>,
    pdr_db: f64,
    constellation: &Constellation,
    seed: u64,
) -> Result<DaftFrame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = make_frame_with_rng(p, layout, pilot_index, pdr_db, constellation, &mut rng)?;
    f.seed = Some(seed);
    Ok(f)
}

/// Draws a frame from a caller-owned generator; data symbols are taken in
/// increasing subcarrier order.
pub fn make_frame_with_rng<R: Rng + ?Sized>(
    p: &AfdmParams,
    layout: Layout,
    pilot_index: Option<usize>,
    pdr_db: f64,
    constellation: &Constellation,
    rng: &mut R,
) -> Result<DaftFrame> {
    let n = p.n();
    if !pdr_db.is_finite() {
        return Err(AfdmError::InvalidConfig(format!("PDR must be finite, got {pdr_db}")));
    }
    let pilot = match layout {
        Layout::DataOnly => None,
        _ => {
            let mp = pilot_index
                .ok_or_else(|| AfdmError::Layout(format!("{layout:?} layout needs a pilot index")))?;
            p.check_index(mp)?;
            Some(mp)
        }
    };
    let mut guards = BTreeSet::new();
    if let (Layout::Ep(q), Some(mp)) = (layout, pilot) {
        if 2 * q + 1 > n {
            return Err(AfdmError::Layout(format!("2Q+1 = {} exceeds N = {n}", 2 * q + 1)));
        }
        for d in 1..=q {
            guards.insert((mp + d) % n);
            guards.insert((mp + n - d) % n);
        }
    }
    let data: Vec<usize> = (0..n)
        .filter(|m| !guards.contains(m) && (layout == Layout::Sp || Some(*m) != pilot))
        .collect();

    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for &m in &data {
        x[m] = constellation.sample(rng);
    }
    let pilot_value = match pilot {
        Some(mp) => {
            let amp = 10f64.powf(pdr_db / 10.0).sqrt();
            x[mp] += amp;
            Complex64::new(amp, 0.0)
        }
        None => Complex64::new(0.0, 0.0),
    };
    Ok(DaftFrame {
        params: p.spec(),
        layout,
        pilot_index: pilot,
        pilot_value,
        guard_indices: guards.into_iter().collect(),
        data_indices: data,
        pdr_db,
        constellation: constellation.name().to_string(),
        seed: None,
        x,
    })
}

impl DaftFrame {
    pub fn x(&self) -> &[Complex64] {
        &self.x
    }

    pub fn params(&self) -> Result<AfdmParams> {
        AfdmParams::try_from(self.params)
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn pilot_index(&self) -> Option<usize> {
        self.pilot_index
    }

    pub fn pilot_value(&self) -> Complex64 {
        self.pilot_value
    }

    pub fn guard_indices(&self) -> &[usize] {
        &self.guard_indices
    }

    pub fn data_indices(&self) -> &[usize] {
        &self.data_indices
    }

    pub fn pdr_db(&self) -> f64 {
        self.pdr_db
    }

    pub fn constellation_id(&self) -> &str {
        &self.constellation
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `x_p`: the pilot alone.
    pub fn pilot_component(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.x.len()];
        if let Some(mp) = self.pilot_index {
            v[mp] = self.pilot_value;
        }
        v
    }

    /// `x_d = x − x_p`.
    pub fn data_component(&self) -> Vec<Complex64> {
        let mut v = self.x.clone();
        if let Some(mp) = self.pilot_index {
            v[mp] -= self.pilot_value;
        }
        v
    }

    /// Checks the layout invariants; used after deserialisation.
    pub fn validate(&self) -> Result<()> {
        let n = self.params()?.n();
        if self.x.len() != n {
            return Err(AfdmError::LengthMismatch { expected: n, actual: self.x.len() });
        }
        let guards: BTreeSet<usize> = self.guard_indices.iter().copied().collect();
        let data: BTreeSet<usize> = self.data_indices.iter().copied().collect();
        if guards.intersection(&data).next().is_some() {
            return Err(AfdmError::Layout("guard and data sets overlap".into()));
        }
        if guards.iter().chain(&data).any(|&m| m >= n) {
            return Err(AfdmError::Layout("index out of range".into()));
        }
        if let Some(mp) = self.pilot_index {
            if guards.contains(&mp) {
                return Err(AfdmError::Layout("pilot index is a guard".into()));
            }
        }
        let covered = |m: usize| guards.contains(&m) || data.contains(&m) || Some(m) == self.pilot_index;
        if !(0..n).all(covered) {
            return Err(AfdmError::Layout("layout does not cover every subcarrier".into()));
        }
        if guards.iter().any(|&g| self.x[g] != Complex64::new(0.0, 0.0)) {
            return Err(AfdmError::Layout("guard symbol is nonzero".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: DaftFrame = serde_json::from_str(s)?;
        f.validate()?;
        Ok(f)
    }
}
