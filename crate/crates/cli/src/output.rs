//! Artifact files. Everything written here is a pure function of the experiment spec.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use dtc_core::analysis::{Autocorrelator, DecayResult, PhaseDiagram, SpectralResult};
use dtc_core::TimeSeriesPanel;

use crate::error::{CliError, CliResult};
use crate::spec::hex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileRecord {
    pub name: String,
    pub sha256: String,
}

/// Writes files into one directory and remembers their digests for the manifest.
pub struct OutputDir {
    dir: PathBuf,
    files: Vec<FileRecord>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> CliResult<Self> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[FileRecord] {
        &self.files
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.files.push(FileRecord { name: name.to_string(), sha256: hex(&Sha256::digest(bytes)) });
        Ok(())
    }

    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let path = self.dir.join(name);
        let to_io = |e: csv::Error| CliError::io(&path, std::io::Error::other(e));
        w.write_record(header).map_err(to_io)?;
        for row in rows {
            w.write_record(row).map_err(to_io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::io(&path, std::io::Error::other(e.to_string())))?;
        self.write_bytes(name, &bytes)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let mut bytes = serde_json::to_vec_pretty(value).expect("artifact serializes");
        bytes.push(b'\n');
        self.write_bytes(name, &bytes)
    }
}

fn num(v: f64) -> String {
    format!("{v}")
}

pub fn panel_rows(panels: &[&TimeSeriesPanel]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for p in panels {
        for t in 0..p.n_points() {
            for q in 0..p.n_qubits {
                rows.push(vec![
                    t.to_string(),
                    q.to_string(),
                    num(p.values[q][t]),
                    p.stage.name().to_string(),
                    p.is_retained(q).to_string(),
                ]);
            }
        }
    }
    rows
}

pub const PANEL_HEADER: [&str; 5] = ["step", "qubit", "value", "stage", "retained"];

/// Per-qubit rows followed by the average over active qubits under qubit `mean`.
pub fn autocorrelator_rows(ac: &Autocorrelator) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (t, m) in ac.mean.iter().enumerate() {
        for (q, s) in ac.per_qubit.iter().enumerate() {
            rows.push(vec![t.to_string(), q.to_string(), num(s[t])]);
        }
        rows.push(vec![t.to_string(), "mean".into(), num(*m)]);
    }
    rows
}

pub const AUTOCORRELATOR_HEADER: [&str; 3] = ["step", "qubit", "value"];

pub fn spectrum_rows(spec: &SpectralResult, active: &[usize]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (q, amps) in spec.amplitudes.iter().enumerate() {
        for (f, a) in spec.frequencies.iter().zip(amps) {
            rows.push(vec![q.to_string(), num(*f), num(*a)]);
        }
    }
    for (f, a) in spec.frequencies.iter().zip(spec.mean_amplitudes(active)) {
        rows.push(vec!["mean".into(), num(*f), num(a)]);
    }
    rows
}

pub const SPECTRUM_HEADER: [&str; 3] = ["qubit", "frequency", "amplitude"];

pub fn decay_rows(decay: &DecayResult) -> Vec<Vec<String>> {
    decay
        .delta
        .iter()
        .zip(&decay.fit_ok)
        .enumerate()
        .map(|(q, (d, ok))| vec![q.to_string(), num(*d), ok.to_string()])
        .collect()
}

pub const DECAY_HEADER: [&str; 3] = ["qubit", "delta", "fit_ok"];

pub fn phase_rows(diagram: &PhaseDiagram) -> Vec<Vec<String>> {
    diagram
        .rows
        .iter()
        .map(|r| vec![num(r.epsilon), num(r.var_h), num(r.delta_bar), num(r.n_retained)])
        .collect()
}

pub const PHASE_HEADER: [&str; 4] = ["epsilon", "var_h", "delta_bar", "n_retained"];

pub const TOMOGRAPHY_HEADER: [&str; 2] = ["pauli_string", "coefficient"];

pub fn tomography_rows(coeffs: &[(dtc_core::PauliString, f64)]) -> Vec<Vec<String>> {
    coeffs.iter().map(|(p, c)| vec![p.to_string(), num(*c)]).collect()
}
