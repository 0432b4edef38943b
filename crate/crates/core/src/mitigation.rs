//! Two-stage mitigation: readout correction with empirical normalization, then
//! depolarization rescaling against an epsilon = 0 reference run with qubit filtering.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_exponential_decay, ExponentialFit};
use crate::panel::{Stage, TimeSeriesPanel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MitigationParams {
    pub w0: f64,
    pub wf: f64,
    pub skip_steps: usize,
    pub avg_window: usize,
    /// Trailing points averaged for m_final. Even, so alternating residue cancels.
    pub final_window: usize,
    /// First step that gets rescaled; defaults to `skip_steps`.
    pub rescale_from: Option<usize>,
    /// RMS residual bound for the reference fit to count as converged.
    pub fit_rms_bound: f64,
}

impl Default for MitigationParams {
    fn default() -> Self {
        Self {
            w0: 0.15,
            wf: 0.1,
            skip_steps: 13,
            avg_window: 5,
            final_window: 4,
            rescale_from: None,
            fit_rms_bound: 0.05,
        }
    }
}

impl MitigationParams {
    pub fn validate(&self, n_steps: usize) -> Result<()> {
        if !(0.0 < self.wf && self.wf < self.w0 && self.w0 <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < wf < w0 <= 1, got wf = {}, w0 = {}",
                self.wf, self.w0
            )));
        }
        if self.avg_window == 0 || self.skip_steps + self.avg_window > n_steps {
            return Err(Error::InvalidConfig(format!(
                "skip_steps + avg_window = {} must be within 1..={n_steps}",
                self.skip_steps + self.avg_window
            )));
        }
        if self.final_window == 0 || self.final_window + 1 > n_steps + 1 {
            return Err(Error::InvalidConfig(format!(
                "final_window {} needs a series of at least {} points",
                self.final_window,
                self.final_window + 1
            )));
        }
        if !(self.fit_rms_bound > 0.0) {
            return Err(Error::InvalidConfig("fit_rms_bound must be positive".into()));
        }
        Ok(())
    }

    pub fn rescale_start(&self) -> usize {
        self.rescale_from.unwrap_or(self.skip_steps)
    }
}

/// sign with sign(0) = +1.
pub fn sign(m: f64) -> f64 {
    if m >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// (z_meas + delta) / (1 - 2 eta_bar).
pub fn correct_measurement(z_meas: f64, eta_bar: f64, delta: f64) -> Result<f64> {
    if !(eta_bar < 0.5) {
        return Err(Error::NonInvertibleChannel { eta_bar });
    }
    Ok((z_meas + delta) / (1.0 - 2.0 * eta_bar))
}

/// Expected measured value for a true polarization z under readout flips.
pub fn corrupt_measurement(z: f64, eta0: f64, eta1: f64) -> f64 {
    z * (1.0 - eta0 - eta1) - (eta0 - eta1)
}

pub fn final_mean(series: &[f64], final_window: usize) -> f64 {
    let tail = &series[series.len() - final_window..];
    tail.iter().sum::<f64>() / final_window as f64
}

fn normalization_gap(series: &[f64], final_window: usize) -> Result<(f64, f64)> {
    if final_window == 0 || series.len() < final_window + 1 {
        return Err(Error::InvalidConfig(format!(
            "series of {} points is too short for final_window {final_window}",
            series.len()
        )));
    }
    let f = final_mean(series, final_window);
    Ok((f, (series[0] - f).abs()))
}

/// (m - m_final) / |m(0) - m_final|.
pub fn normalize_empirical(series: &[f64], final_window: usize) -> Result<Vec<f64>> {
    let (f, gap) = normalization_gap(series, final_window)?;
    if gap < 1e-6 {
        return Err(Error::DegenerateNormalization { qubit: 0, gap });
    }
    Ok(series.iter().map(|m| (m - f) / gap).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaEstimate {
    pub eta0: f64,
    pub eta1: f64,
    /// Both values inside [0, 0.5].
    pub in_range: bool,
}

pub fn extract_eta(series: &[f64], final_window: usize) -> Result<EtaEstimate> {
    let (f, gap) = normalization_gap(series, final_window)?;
    if gap < 1e-6 {
        return Err(Error::DegenerateNormalization { qubit: 0, gap });
    }
    let eta0 = (1.0 - gap - f) / 2.0;
    let eta1 = (1.0 - gap + f) / 2.0;
    let ok = |e: f64| (0.0..=0.5).contains(&e);
    Ok(EtaEstimate { eta0, eta1, in_range: ok(eta0) && ok(eta1) })
}

/// Fit of the reference decay. The target is the magnitude of (m + sign m)/2, i.e.
/// (|m| + 1)/2; the signed version alternates with the drive and cannot follow a
/// single exponential.
pub fn fit_reference_decay(series: &[f64], params: &MitigationParams) -> ExponentialFit {
    let t: Vec<f64> = (0..series.len()).map(|t| t as f64).collect();
    let y: Vec<f64> = series.iter().map(|m| 0.5 * (m.abs() + 1.0)).collect();
    fit_exponential_decay(&t, &y, params.fit_rms_bound)
}

/// Mean of |m| over the averaging window after the skipped steps.
pub fn window_mean_abs(series: &[f64], params: &MitigationParams) -> f64 {
    let w = &series[params.skip_steps..params.skip_steps + params.avg_window];
    w.iter().map(|m| m.abs()).sum::<f64>() / params.avg_window as f64
}

/// Rescaled magnetization at one step.
pub fn rescale_value(m: f64, t: usize, ratio: f64, fit: &ExponentialFit) -> f64 {
    let s = sign(m);
    ratio * (m + s) / fit.eval(t as f64) - s
}

/// Per-qubit data taken from the reference run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCalibration {
    pub fits: Vec<Option<ExponentialFit>>,
    pub window_means: Vec<f64>,
    pub retained: Vec<bool>,
}

pub fn filter_qubits(reference: &TimeSeriesPanel, fits: &[Option<ExponentialFit>], params: &MitigationParams) -> Vec<bool> {
    (0..reference.n_qubits)
        .map(|q| {
            let fit_ok = fits.get(q).copied().flatten().is_some_and(|f| f.converged);
            fit_ok && window_mean_abs(reference.series(q), params) >= params.w0
        })
        .collect()
}

/// Fits and filters a measurement-corrected reference panel. `usable[q] = false`
/// marks qubits whose normalization already failed.
pub fn calibrate_reference(
    reference: &TimeSeriesPanel,
    usable: &[bool],
    params: &MitigationParams,
) -> Result<ReferenceCalibration> {
    params.validate(reference.n_steps)?;
    let fits: Vec<Option<ExponentialFit>> = (0..reference.n_qubits)
        .map(|q| usable[q].then(|| fit_reference_decay(reference.series(q), params)))
        .collect();
    let retained = filter_qubits(reference, &fits, params)
        .into_iter()
        .zip(usable)
        .map(|(r, u)| r && *u)
        .collect();
    let window_means = (0..reference.n_qubits).map(|q| window_mean_abs(reference.series(q), params)).collect();
    Ok(ReferenceCalibration { fits, window_means, retained })
}

/// Applies the rescaling to retained qubits outside the thermal branch. Values
/// before the rescale start pass through.
pub fn rescale_magnetization(
    panel: &TimeSeriesPanel,
    calibration: &ReferenceCalibration,
    params: &MitigationParams,
) -> Result<(TimeSeriesPanel, Vec<String>)> {
    params.validate(panel.n_steps)?;
    if calibration.retained.len() != panel.n_qubits {
        return Err(Error::DimensionMismatch { expected: panel.n_qubits, found: calibration.retained.len() });
    }
    let mut out = panel.clone();
    let mut retained = calibration.retained.clone();
    let mut notes = Vec::new();
    let start = params.rescale_start();
    for q in 0..panel.n_qubits {
        if !retained[q] {
            continue;
        }
        let Some(fit) = calibration.fits[q] else {
            notes.push(format!("qubit {q}: no reference fit, dropped"));
            retained[q] = false;
            continue;
        };
        let m_eps = window_mean_abs(panel.series(q), params);
        if m_eps <= params.wf {
            continue;
        }
        let ratio = m_eps / calibration.window_means[q];
        for t in start..panel.n_points() {
            out.values[q][t] = rescale_value(panel.values[q][t], t, ratio, &fit);
        }
    }
    out.stage = Stage::FullyMitigated;
    out.retained = Some(retained);
    Ok((out, notes))
}

/// Normalizes every qubit; degenerate qubits keep their input values and are flagged.
pub fn normalize_panel(panel: &TimeSeriesPanel, final_window: usize) -> Result<(TimeSeriesPanel, Vec<bool>, Vec<String>)> {
    let mut out = panel.clone().with_stage(Stage::MeasurementCorrected);
    let mut usable = vec![true; panel.n_qubits];
    let mut notes = Vec::new();
    for q in 0..panel.n_qubits {
        match normalize_empirical(panel.series(q), final_window) {
            Ok(v) => out.values[q] = v,
            Err(Error::DegenerateNormalization { gap, .. }) => {
                usable[q] = false;
                notes.push(Error::DegenerateNormalization { qubit: q, gap }.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    Ok((out, usable, notes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MitigationOutcome {
    pub measurement_corrected: TimeSeriesPanel,
    pub reference_corrected: TimeSeriesPanel,
    pub eta: Vec<Option<EtaEstimate>>,
    pub calibration: ReferenceCalibration,
    pub mitigated: TimeSeriesPanel,
    pub diagnostics: Vec<String>,
}

/// Full pipeline on a raw epsilon run and its raw epsilon = 0 reference.
pub fn mitigate(raw: &TimeSeriesPanel, reference_raw: &TimeSeriesPanel, params: &MitigationParams) -> Result<MitigationOutcome> {
    if raw.n_qubits != reference_raw.n_qubits || raw.n_steps != reference_raw.n_steps {
        return Err(Error::DimensionMismatch { expected: raw.n_qubits, found: reference_raw.n_qubits });
    }
    params.validate(raw.n_steps)?;
    let (corrected, usable_eps, mut notes) = normalize_panel(raw, params.final_window)?;
    let (reference, usable_ref, ref_notes) = normalize_panel(reference_raw, params.final_window)?;
    notes.extend(ref_notes.into_iter().map(|n| format!("reference: {n}")));
    let eta = (0..raw.n_qubits)
        .map(|q| extract_eta(raw.series(q), params.final_window).ok())
        .collect::<Vec<_>>();
    for (q, e) in eta.iter().enumerate() {
        if let Some(e) = e.filter(|e| !e.in_range) {
            notes.push(format!("qubit {q}: extracted eta ({:.4}, {:.4}) outside [0, 0.5]", e.eta0, e.eta1));
        }
    }
    let usable: Vec<bool> = usable_eps.iter().zip(&usable_ref).map(|(a, b)| *a && *b).collect();
    let calibration = calibrate_reference(&reference, &usable, params)?;
    for q in 0..raw.n_qubits {
        if usable[q] && !calibration.retained[q] {
            notes.push(format!("qubit {q}: excluded by reference filter"));
        }
    }
    let (mitigated, rescale_notes) = rescale_magnetization(&corrected, &calibration, params)?;
    notes.extend(rescale_notes);
    Ok(MitigationOutcome {
        measurement_corrected: corrected,
        reference_corrected: reference,
        eta,
        calibration,
        mitigated,
        diagnostics: notes,
    })
}
