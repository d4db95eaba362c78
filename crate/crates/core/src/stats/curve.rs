//! One-dimensional curves with per-point standard errors.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{AfdmError, Result};

pub const CURVE_CSV_HEADER: [&str; 3] = ["x", "value", "stderr"];

/// Sampled curve `value(x) ± stderr`; `stderr` is zero for deterministic curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub x: Vec<f64>,
    pub value: Vec<f64>,
    pub stderr: Vec<f64>,
}

impl Curve {
    pub fn new(x: Vec<f64>, value: Vec<f64>, stderr: Vec<f64>) -> Result<Self> {
        if value.len() != x.len() {
            return Err(AfdmError::LengthMismatch { expected: x.len(), actual: value.len() });
        }
        if stderr.len() != x.len() {
            return Err(AfdmError::LengthMismatch { expected: x.len(), actual: stderr.len() });
        }
        Ok(Curve { x, value, stderr })
    }

    /// A curve without uncertainty.
    pub fn exact(x: Vec<f64>, value: Vec<f64>) -> Result<Self> {
        let se = vec![0.0; x.len()];
        Self::new(x, value, se)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Values and errors multiplied by `s`, for unit changes such as dividing by `T²`.
    pub fn scaled(&self, s: f64) -> Self {
        Curve {
            x: self.x.clone(),
            value: self.value.iter().map(|v| v * s).collect(),
            stderr: self.stderr.iter().map(|v| v * s.abs()).collect(),
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(CURVE_CSV_HEADER)?;
        for k in 0..self.len() {
            wr.write_record(&[self.x[k].to_string(), self.value[k].to_string(), self.stderr[k].to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let (mut x, mut value, mut stderr) = (Vec::new(), Vec::new(), Vec::new());
        for rec in rd.deserialize::<(f64, f64, f64)>() {
            let (a, b, c) = rec?;
            x.push(a);
            value.push(b);
            stderr.push(c);
        }
        Self::new(x, value, stderr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip() {
        let c = Curve::new(vec![-1.0, 0.0, 0.5], vec![1.0, 2.5, 1e-20], vec![0.1, 0.0, 3.0]).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,value,stderr\n"));
        assert_eq!(Curve::read_csv(buf.as_slice()).unwrap(), c);
    }

    #[test]
    fn rejects_ragged() {
        assert!(Curve::new(vec![0.0], vec![], vec![0.0]).is_err());
    }
}
