use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Raw,
    MeasurementCorrected,
    FullyMitigated,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Raw => "raw",
            Stage::MeasurementCorrected => "measurement-corrected",
            Stage::FullyMitigated => "fully-mitigated",
        }
    }
}

/// Per-qubit polarization series `values[qubit][t]` for t = 0..=n_steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesPanel {
    pub values: Vec<Vec<f64>>,
    pub n_qubits: usize,
    pub n_steps: usize,
    pub stage: Stage,
    /// Only populated at the fully-mitigated stage.
    pub retained: Option<Vec<bool>>,
    pub initial_bits: Vec<u8>,
}

pub const RAW_RANGE_TOL: f64 = 0.05;

impl TimeSeriesPanel {
    pub fn new(values: Vec<Vec<f64>>, initial_bits: Vec<u8>, stage: Stage) -> Result<Self> {
        let n_qubits = values.len();
        if n_qubits == 0 {
            return Err(Error::InvalidConfig("panel has no qubits".into()));
        }
        if initial_bits.len() != n_qubits {
            return Err(Error::DimensionMismatch { expected: n_qubits, found: initial_bits.len() });
        }
        let len = values[0].len();
        if len == 0 {
            return Err(Error::InvalidConfig("panel has no time points".into()));
        }
        if let Some(bad) = values.iter().find(|v| v.len() != len) {
            return Err(Error::DimensionMismatch { expected: len, found: bad.len() });
        }
        Ok(Self { values, n_qubits, n_steps: len - 1, stage, retained: None, initial_bits })
    }

    /// Builds from a time-major table `rows[t][qubit]`.
    pub fn from_time_major(rows: &[Vec<f64>], initial_bits: Vec<u8>, stage: Stage) -> Result<Self> {
        let n = initial_bits.len();
        let mut values = vec![Vec::with_capacity(rows.len()); n];
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for (q, v) in row.iter().enumerate() {
                values[q].push(*v);
            }
        }
        Self::new(values, initial_bits, stage)
    }

    pub fn n_points(&self) -> usize {
        self.n_steps + 1
    }

    pub fn series(&self, qubit: usize) -> &[f64] {
        &self.values[qubit]
    }

    pub fn is_retained(&self, qubit: usize) -> bool {
        self.retained.as_ref().is_none_or(|r| r[qubit])
    }

    /// Qubits entering averages: the retained set if flags exist, else all.
    pub fn active_qubits(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|&q| self.is_retained(q)).collect()
    }

    pub fn signs(&self) -> Vec<f64> {
        self.initial_bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
    }

    /// Raw values must sit in [-1 - tol, 1 + tol].
    pub fn check_raw_range(&self) -> Result<()> {
        for (q, s) in self.values.iter().enumerate() {
            if let Some(v) = s.iter().find(|v| !(v.abs() <= 1.0 + RAW_RANGE_TOL)) {
                return Err(Error::Numerical(format!("raw value {v} on qubit {q} out of range")));
            }
        }
        Ok(())
    }

    pub fn with_stage(mut self, stage: Stage) -> Self {
        self.stage = stage;
        if stage != Stage::FullyMitigated {
            self.retained = None;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let p = TimeSeriesPanel::new(vec![vec![1.0, -1.0, 1.0]; 2], vec![0, 1], Stage::Raw).unwrap();
        assert_eq!(p.n_steps, 2);
        assert_eq!(p.active_qubits(), vec![0, 1]);
        assert!(TimeSeriesPanel::new(vec![vec![1.0], vec![1.0, 2.0]], vec![0, 0], Stage::Raw).is_err());
        let t = TimeSeriesPanel::from_time_major(&[vec![1.0, 2.0], vec![3.0, 4.0]], vec![0, 0], Stage::Raw)
            .unwrap();
        assert_eq!(t.series(1), &[2.0, 4.0]);
    }

    #[test]
    fn raw_range() {
        let p = TimeSeriesPanel::new(vec![vec![1.04, -1.0]], vec![0], Stage::Raw).unwrap();
        p.check_raw_range().unwrap();
        let p = TimeSeriesPanel::new(vec![vec![1.2, -1.0]], vec![0], Stage::Raw).unwrap();
        assert!(p.check_raw_range().is_err());
    }
}
