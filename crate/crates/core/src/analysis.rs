//! Autocorrelators, spectra, subharmonic peak statistics, decay constants and
//! epsilon sweeps.

use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::chain::{make_initial, sample_coherent_errors, sample_disorder, ChainConfig, InitialKind, PauliTerm};
use crate::error::{Error, Result};
use crate::panel::TimeSeriesPanel;
use crate::pipeline::{run_realization, PipelineOptions};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Autocorrelator {
    /// z_i(0) <Z_i(t)>, indexed [qubit][t].
    pub per_qubit: Vec<Vec<f64>>,
    /// Average over the active qubits.
    pub mean: Vec<f64>,
    pub qubits: Vec<usize>,
}

/// Multiplies each series by the ideal initial sign and averages over active qubits.
pub fn autocorrelator(panel: &TimeSeriesPanel) -> Autocorrelator {
    let signs = panel.signs();
    let per_qubit: Vec<Vec<f64>> =
        panel.values.iter().zip(&signs).map(|(s, z)| s.iter().map(|v| v * z).collect()).collect();
    let qubits = panel.active_qubits();
    let mean = (0..panel.n_points())
        .map(|t| {
            if qubits.is_empty() {
                0.0
            } else {
                qubits.iter().map(|&q| per_qubit[q][t]).sum::<f64>() / qubits.len() as f64
            }
        })
        .collect();
    Autocorrelator { per_qubit, mean, qubits }
}

/// One-sided amplitude spectrum |X_k| / L for k = 0..=L/2, frequencies k/L in units
/// of the drive frequency. A pure (-1)^t tone gives amplitude 1 at 1/2.
pub fn spectrum_of_series(series: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let len = series.len();
    if len % 2 == 1 {
        return Err(Error::OddSeriesLength(len));
    }
    if len < 8 {
        return Err(Error::InvalidConfig(format!("spectrum needs at least 8 points, got {len}")));
    }
    let mut buf: Vec<Complex<f64>> = series.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let l = len as f64;
    let amps = buf[..=len / 2].iter().map(|c| c.norm() / l).collect();
    let freqs = (0..=len / 2).map(|k| k as f64 / l).collect();
    Ok((freqs, amps))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub frequencies: Vec<f64>,
    /// Indexed [qubit][bin].
    pub amplitudes: Vec<Vec<f64>>,
    /// Amplitude at half the drive frequency, per qubit.
    pub h: Vec<f64>,
    pub window_start: usize,
}

impl SpectralResult {
    pub fn half_drive_bin(&self) -> usize {
        self.frequencies.len() - 1
    }

    /// Average amplitude spectrum over the given qubits.
    pub fn mean_amplitudes(&self, qubits: &[usize]) -> Vec<f64> {
        (0..self.frequencies.len())
            .map(|k| qubits.iter().map(|&q| self.amplitudes[q][k]).sum::<f64>() / qubits.len().max(1) as f64)
            .collect()
    }
}

/// Spectrum of every qubit's series over t = window_start..=n_steps.
pub fn spectrum(panel: &TimeSeriesPanel, window_start: usize) -> Result<SpectralResult> {
    if window_start >= panel.n_points() {
        return Err(Error::InvalidConfig(format!("window start {window_start} beyond the series")));
    }
    let mut amplitudes = Vec::with_capacity(panel.n_qubits);
    let mut frequencies = Vec::new();
    for q in 0..panel.n_qubits {
        let (f, a) = spectrum_of_series(&panel.series(q)[window_start..])?;
        frequencies = f;
        amplitudes.push(a);
    }
    let h = amplitudes.iter().map(|a: &Vec<f64>| a[a.len() - 1]).collect();
    Ok(SpectralResult { frequencies, amplitudes, h, window_start })
}

/// Population variance of h over retained qubits.
pub fn variance_h(spectral: &SpectralResult, retained: &[bool]) -> Result<f64> {
    let hs: Vec<f64> = spectral.h.iter().zip(retained).filter(|(_, r)| **r).map(|(h, _)| *h).collect();
    if hs.len() < 2 {
        return Err(Error::UndefinedVariance(hs.len()));
    }
    if hs.iter().all(|h| *h == hs[0]) {
        return Ok(0.0);
    }
    let n = hs.len() as f64;
    let mean = hs.iter().sum::<f64>() / n;
    Ok(hs.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayResult {
    pub delta: Vec<f64>,
    pub delta_bar: f64,
    pub fit_ok: Vec<bool>,
}

const DECAY_FLOOR: f64 = 1e-3;
const DECAY_MIN_POINTS: usize = 4;

/// Log-linear fit of |value| for t >= skip_steps; rates are clamped at 0.
pub fn decay_rate(series: &[f64], skip_steps: usize) -> Option<f64> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .enumerate()
        .skip(skip_steps)
        .filter(|(_, v)| v.abs() >= DECAY_FLOOR)
        .map(|(t, v)| (t as f64, v.abs().ln()))
        .collect();
    if pts.len() < DECAY_MIN_POINTS {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(t, y)| (t - mt) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(t, _)| (t - mt).powi(2)).sum();
    Some((-sxy / sxx).max(0.0))
}

pub fn decay_constants(panel: &TimeSeriesPanel, skip_steps: usize) -> Result<DecayResult> {
    if panel.n_steps <= skip_steps + DECAY_MIN_POINTS {
        return Err(Error::InvalidConfig(format!(
            "decay fit needs more than {} steps, got {}",
            skip_steps + DECAY_MIN_POINTS,
            panel.n_steps
        )));
    }
    let rates: Vec<Option<f64>> = panel.values.iter().map(|s| decay_rate(s, skip_steps)).collect();
    let fit_ok: Vec<bool> = rates.iter().map(Option::is_some).collect();
    let delta: Vec<f64> = rates.iter().map(|r| r.unwrap_or(f64::NAN)).collect();
    let used: Vec<f64> = (0..panel.n_qubits).filter(|&q| fit_ok[q] && panel.is_retained(q)).map(|q| delta[q]).collect();
    let delta_bar = if used.is_empty() { f64::NAN } else { used.iter().sum::<f64>() / used.len() as f64 };
    Ok(DecayResult { delta, delta_bar, fit_ok })
}

/// How each sweep point's chains are built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTemplate {
    pub n_qubits: usize,
    pub coherent_amplitude: f64,
    pub extra_pauli_terms: Vec<PauliTerm>,
    /// Replaces disorder with this uniform coupling.
    pub uniform_coupling: Option<f64>,
    pub initial: InitialKind,
    pub realizations: usize,
    /// Reuse the same disorder, fields and initial states at every epsilon.
    pub pin_disorder: bool,
}

impl SweepTemplate {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            coherent_amplitude: 0.0,
            extra_pauli_terms: Vec::new(),
            uniform_coupling: None,
            initial: InitialKind::RandomBit,
            realizations: 1,
            pin_disorder: false,
        }
    }

    /// Chain and initial state for realization `r` at sweep point `k`.
    pub fn realization(&self, epsilon: f64, k: usize, r: usize, root_seed: u64) -> Result<(ChainConfig, crate::chain::InitialState)> {
        let idx = if self.pin_disorder { r as u64 } else { ((k as u64) << 32) | r as u64 };
        let mut config = match self.uniform_coupling {
            Some(j) => {
                let mut c = ChainConfig::uniform(self.n_qubits, j);
                c.seed = derive_seed(root_seed, "disorder", idx);
                c
            }
            None => sample_disorder(self.n_qubits, derive_seed(root_seed, "disorder", idx))?,
        };
        config.epsilon = epsilon;
        config.z_fields =
            sample_coherent_errors(self.n_qubits, self.coherent_amplitude, derive_seed(root_seed, "fields", idx))?;
        config.extra_pauli_terms = self.extra_pauli_terms.clone();
        let initial = make_initial(self.initial, self.n_qubits, derive_seed(root_seed, "initial", idx))?;
        Ok((config, initial))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    /// First step of the spectral window.
    pub spectrum_start: usize,
    /// Steps skipped by the decay fit.
    pub decay_skip: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { spectrum_start: 1, decay_skip: 13 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub epsilon: f64,
    pub var_h: f64,
    pub delta_bar: f64,
    /// Mean retained qubits per realization.
    pub n_retained: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub rows: Vec<PhaseRow>,
    pub epsilon_c: Option<f64>,
}

struct PointStats {
    var_h: Option<f64>,
    delta_bar: f64,
    retained: usize,
}

fn mean_finite(v: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = v.filter(|x| x.is_finite()).fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        s / n as f64
    }
}

/// Var(h) and delta-bar per epsilon, averaged over realizations; epsilon_c is the
/// grid argmax of Var(h).
pub fn sweep_epsilon(
    eps_list: &[f64],
    template: &SweepTemplate,
    pipeline: &PipelineOptions,
    options: &SweepOptions,
    root_seed: u64,
) -> Result<PhaseDiagram> {
    if eps_list.is_empty() || eps_list.iter().any(|e| !(0.0..=1.0).contains(e)) {
        return Err(Error::InvalidConfig("epsilon grid must be non-empty with values in [0, 1]".into()));
    }
    if template.realizations == 0 {
        return Err(Error::InvalidConfig("need at least one realization".into()));
    }
    let jobs: Vec<(usize, usize)> =
        (0..eps_list.len()).flat_map(|k| (0..template.realizations).map(move |r| (k, r))).collect();
    let stats: Vec<PointStats> = jobs
        .par_iter()
        .map(|&(k, r)| -> Result<PointStats> {
            let (config, initial) = template.realization(eps_list[k], k, r, root_seed)?;
            let seed = derive_seed(root_seed, "realization", ((k as u64) << 32) | r as u64);
            let result = run_realization(&config, &initial, pipeline, seed)?;
            let panel = result.final_panel();
            let spec = spectrum(panel, options.spectrum_start)?;
            let retained: Vec<bool> = (0..panel.n_qubits).map(|q| panel.is_retained(q)).collect();
            let decay = decay_constants(panel, options.decay_skip)?;
            Ok(PointStats {
                var_h: variance_h(&spec, &retained).ok(),
                delta_bar: decay.delta_bar,
                retained: retained.iter().filter(|r| **r).count(),
            })
        })
        .collect::<Result<_>>()?;

    let rows: Vec<PhaseRow> = eps_list
        .iter()
        .enumerate()
        .map(|(k, &epsilon)| {
            let chunk = &stats[k * template.realizations..(k + 1) * template.realizations];
            PhaseRow {
                epsilon,
                var_h: mean_finite(chunk.iter().filter_map(|s| s.var_h)),
                delta_bar: mean_finite(chunk.iter().map(|s| s.delta_bar)),
                n_retained: chunk.iter().map(|s| s.retained as f64).sum::<f64>() / chunk.len() as f64,
            }
        })
        .collect();
    let epsilon_c = rows
        .iter()
        .filter(|r| r.var_h.is_finite())
        .fold(None::<&PhaseRow>, |best, r| match best {
            Some(b) if b.var_h >= r.var_h => Some(b),
            _ => Some(r),
        })
        .map(|r| r.epsilon);
    Ok(PhaseDiagram { rows, epsilon_c })
}

/// Mean of the flat disorder interval; used when disorder is switched off.
pub const CLEAN_COUPLING: f64 = FRAC_PI_4;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::Stage;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn alt(n: usize, f: impl Fn(usize) -> f64) -> Vec<f64> {
        (0..n).map(|t| if t % 2 == 0 { f(t) } else { -f(t) }).collect()
    }

    #[test]
    fn echo_autocorrelator() {
        let bits = vec![0, 1, 1];
        let values: Vec<Vec<f64>> =
            bits.iter().map(|&b| alt(11, |_| if b == 0 { 1.0 } else { -1.0 })).collect();
        let panel = TimeSeriesPanel::new(values, bits, Stage::Raw).unwrap();
        let ac = autocorrelator(&panel);
        for q in 0..3 {
            assert_eq!(ac.per_qubit[q], alt(11, |_| 1.0));
        }
        assert_eq!(ac.mean, alt(11, |_| 1.0));
        let zero = TimeSeriesPanel::new(vec![vec![0.0; 5]; 2], vec![0, 1], Stage::Raw).unwrap();
        assert!(autocorrelator(&zero).mean.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn pure_tone_and_constant() {
        let (f, a) = spectrum_of_series(&alt(50, |_| 1.0)).unwrap();
        assert_eq!(f[25], 0.5);
        assert_abs_diff_eq!(a[25], 1.0, epsilon = 1e-12);
        a[..25].iter().for_each(|x| assert_abs_diff_eq!(*x, 0.0, epsilon = 1e-12));
        let (_, a) = spectrum_of_series(&[0.7; 50]).unwrap();
        assert_abs_diff_eq!(a[25], 0.0, epsilon = 1e-12);
        assert!(matches!(spectrum_of_series(&[1.0; 51]), Err(Error::OddSeriesLength(51))));
    }

    #[test]
    fn damped_tone_matches_geometric_sum() {
        let l = 50;
        let s = alt(l, |t| (-0.05 * t as f64).exp());
        let (_, a) = spectrum_of_series(&s).unwrap();
        let r = (-0.05f64).exp();
        let want = (1.0 - r.powi(l as i32)) / (1.0 - r) / l as f64;
        assert_abs_diff_eq!(a[25], want, epsilon = 1e-12);
    }

    #[test]
    fn variance_examples() {
        let mk = |h: Vec<f64>| SpectralResult { frequencies: vec![0.0, 0.5], amplitudes: vec![], h, window_start: 0 };
        assert_eq!(variance_h(&mk(vec![0.3, 0.3, 0.3]), &[true; 3]).unwrap(), 0.0);
        assert_abs_diff_eq!(variance_h(&mk(vec![0.0, 1.0]), &[true; 2]).unwrap(), 0.25, epsilon = 1e-15);
        assert!(matches!(variance_h(&mk(vec![0.0, 1.0]), &[true, false]), Err(Error::UndefinedVariance(1))));
    }

    #[test]
    fn decay_examples() {
        let s = alt(51, |t| (-0.1 * t as f64).exp());
        assert_abs_diff_eq!(decay_rate(&s, 13).unwrap(), 0.1, epsilon = 1e-6);
        assert_eq!(decay_rate(&alt(51, |_| 1.0), 13).unwrap(), 0.0);
        assert!(decay_rate(&[1e-4; 51], 13).is_none());
        let panel = TimeSeriesPanel::new(vec![s, alt(51, |_| 1.0)], vec![0, 0], Stage::Raw).unwrap();
        let d = decay_constants(&panel, 13).unwrap();
        assert_abs_diff_eq!(d.delta_bar, 0.05, epsilon = 1e-6);
    }

    #[test]
    fn trivial_sweep() {
        let mut tpl = SweepTemplate::new(6);
        tpl.realizations = 2;
        let pd = sweep_epsilon(&[0.0], &tpl, &PipelineOptions::default(), &SweepOptions::default(), 3).unwrap();
        assert!(pd.rows[0].delta_bar.abs() < 1e-10);
        let again = sweep_epsilon(&[0.0], &tpl, &PipelineOptions::default(), &SweepOptions::default(), 3).unwrap();
        assert_eq!(pd, again);
    }

    proptest! {
        #[test]
        fn parseval(v in proptest::collection::vec(-1.0f64..1.0, 4..40)) {
            let mut v = v;
            if v.len() % 2 == 1 { v.pop(); }
            prop_assume!(v.len() >= 8);
            let (_, a) = spectrum_of_series(&v).unwrap();
            let l = a.len() - 1;
            let lhs = a[0].powi(2) + 2.0 * a[1..l].iter().map(|x| x * x).sum::<f64>() + a[l].powi(2);
            let rhs = v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64;
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }

        #[test]
        fn h_is_sign_invariant(v in proptest::collection::vec(-1.0f64..1.0, 8..9)) {
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            let (_, a) = spectrum_of_series(&v).unwrap();
            let (_, b) = spectrum_of_series(&neg).unwrap();
            prop_assert!((a[4] - b[4]).abs() < 1e-15);
        }

        #[test]
        fn variance_permutation_and_scaling(h in proptest::collection::vec(0.0f64..1.0, 2..12), c in 0.1f64..5.0, rot in 0usize..12) {
            let n = h.len();
            let mk = |h: Vec<f64>| SpectralResult { frequencies: vec![0.0, 0.5], amplitudes: vec![], h, window_start: 0 };
            let base = variance_h(&mk(h.clone()), &vec![true; n]).unwrap();
            let mut p = h.clone();
            p.rotate_left(rot % n);
            let perm = variance_h(&mk(p), &vec![true; n]).unwrap();
            prop_assert!((base - perm).abs() < 1e-12);
            let scaled = variance_h(&mk(h.iter().map(|x| x * c).collect()), &vec![true; n]).unwrap();
            prop_assert!((scaled - c * c * base).abs() < 1e-10);
            let all_equal = h.iter().all(|x| *x == h[0]);
            prop_assert_eq!(base == 0.0, all_equal);
        }

        #[test]
        fn decay_ignores_alternation(rate in 0.0f64..0.3, amp in 0.1f64..1.0) {
            let plain: Vec<f64> = (0..51).map(|t| amp * (-rate * t as f64).exp()).collect();
            let flipped = alt(51, |t| amp * (-rate * t as f64).exp());
            let a = decay_rate(&plain, 13);
            let b = decay_rate(&flipped, 13);
            prop_assert_eq!(a, b);
        }
    }
}
