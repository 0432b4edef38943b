//! simulate -> noise -> mitigate -> analyze, then write artifacts.

use std::path::{Path, PathBuf};

use serde::Serialize;

use dtc_core::analysis::{autocorrelator, decay_constants, spectrum, sweep_epsilon, variance_h, PhaseDiagram};
use dtc_core::pipeline::run_realization;
use dtc_core::tomography::{error_generator, ptm_of_floquet_step, tomographic_reconstruction, Sampling};
use dtc_core::{TimeSeriesPanel, VERSION as CORE_VERSION};

use crate::error::{CliError, CliResult};
use crate::output::*;
use crate::spec::{Analysis, DerivedSeeds, ExperimentSpec};

pub const DEFAULT_OUTPUT_DIR: &str = "dtc-out";

#[derive(Debug, Clone, Serialize)]
pub struct RealizationSummary {
    pub engine: String,
    pub initial_bits: String,
    pub retained_qubits: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_drive_mean_amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_bar: Option<f64>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TomographySummary {
    pub shots_per_setting: Option<u64>,
    pub dissipative_residual_norm: f64,
    pub coefficients: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub name: Option<String>,
    pub n_qubits: usize,
    pub epsilon: f64,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realization: Option<RealizationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_diagram: Option<PhaseDiagram>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tomography: Option<TomographySummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
    pub config_hash: String,
    pub root_seed: u64,
    pub seeds: DerivedSeeds,
    pub files: Vec<FileRecord>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub output_dir: PathBuf,
    pub summary: Summary,
    pub files: Vec<FileRecord>,
}

#[derive(Serialize)]
struct PanelsDocument<'a> {
    name: Option<&'a str>,
    root_seed: u64,
    engine: &'a str,
    n_qubits: usize,
    steps: usize,
    epsilon: f64,
    initial_bits: String,
    panels: Vec<&'a TimeSeriesPanel>,
    reference_raw: Option<&'a TimeSeriesPanel>,
}

/// Output directory: explicit argument, then the spec file, then the default.
pub fn resolve_output_dir(spec: &ExperimentSpec, explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| spec.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}

pub fn execute(spec: &ExperimentSpec, output_dir: &Path) -> CliResult<RunReport> {
    spec.validate()?;
    let config = spec.chain_config()?;
    let seeds = spec.seeds();
    let mut out = OutputDir::create(output_dir)?;

    let realization = if spec.runs_single() { Some(single(spec, &config, &seeds, &mut out)?) } else { None };

    let phase_diagram = match (&spec.sweep, spec.sweep_template()) {
        (Some(sweep), Some(template)) => {
            let diagram =
                sweep_epsilon(&sweep.epsilons, &template, &spec.pipeline_options()?, &spec.sweep_options(), seeds.sweep)?;
            out.write_csv("phase_diagram.csv", &PHASE_HEADER, &phase_rows(&diagram))?;
            Some(diagram)
        }
        _ => None,
    };

    let tomography = match &spec.tomography {
        Some(t) => {
            let sampling = t.shots.map_or(Sampling::Exact, Sampling::Shots);
            let noise = spec.noise_model()?;
            let g = tomographic_reconstruction(&config, noise.as_ref(), sampling, seeds.tomography)?;
            let mut ideal = config.clone();
            ideal.extra_pauli_terms.clear();
            ideal.z_fields.iter_mut().for_each(|b| *b = 0.0);
            let h = ptm_of_floquet_step(&ideal)?;
            let generator = error_generator(&g, &h)?;
            out.write_csv("tomography.csv", &TOMOGRAPHY_HEADER, &tomography_rows(&generator.hamiltonian_coeffs))?;
            Some(TomographySummary {
                shots_per_setting: t.shots,
                dissipative_residual_norm: generator.dissipative_residual_norm,
                coefficients: generator.hamiltonian_coeffs.iter().map(|(p, c)| (p.to_string(), *c)).collect(),
            })
        }
        None => None,
    };

    let summary = Summary {
        name: spec.name.clone(),
        n_qubits: spec.n_qubits(),
        epsilon: spec.model.epsilon,
        steps: spec.steps,
        realization,
        phase_diagram,
        tomography,
    };
    out.write_json("summary.json", &summary)?;
    let mut stored = spec.clone();
    stored.output_dir = None;
    out.write_json("spec.json", &stored)?;
    let manifest = Manifest {
        tool: "dtc",
        version: env!("CARGO_PKG_VERSION"),
        core_version: CORE_VERSION,
        config_hash: spec.config_hash(),
        root_seed: spec.seed,
        seeds,
        files: out.files().to_vec(),
    };
    out.write_json("manifest.json", &manifest)?;
    Ok(RunReport { output_dir: out.path().to_path_buf(), summary, files: out.files().to_vec() })
}

fn single(
    spec: &ExperimentSpec,
    config: &dtc_core::ChainConfig,
    seeds: &DerivedSeeds,
    out: &mut OutputDir,
) -> CliResult<RealizationSummary> {
    let initial = spec.initial_state()?;
    let result = run_realization(config, &initial, &spec.pipeline_options()?, seeds.run)?;
    let mut panels = vec![&result.raw];
    let mut diagnostics = Vec::new();
    if let Some(m) = &result.mitigation {
        panels.push(&m.measurement_corrected);
        panels.push(&m.mitigated);
        diagnostics.extend(m.diagnostics.iter().cloned());
    }
    out.write_csv("panels.csv", &PANEL_HEADER, &panel_rows(&panels))?;
    out.write_json(
        "panels.json",
        &PanelsDocument {
            name: spec.name.as_deref(),
            root_seed: spec.seed,
            engine: result.engine.name(),
            n_qubits: spec.n_qubits(),
            steps: spec.steps,
            epsilon: spec.model.epsilon,
            initial_bits: initial.bit_string(),
            panels: panels.clone(),
            reference_raw: result.reference_raw.as_ref(),
        },
    )?;

    let panel = result.final_panel();
    let active = panel.active_qubits();
    let mut summary = RealizationSummary {
        engine: result.engine.name().to_string(),
        initial_bits: initial.bit_string(),
        retained_qubits: active.clone(),
        half_drive_mean_amplitude: None,
        var_h: None,
        delta_bar: None,
        diagnostics,
    };
    if spec.has(Analysis::Autocorrelator) {
        out.write_csv("autocorrelator.csv", &AUTOCORRELATOR_HEADER, &autocorrelator_rows(&autocorrelator(panel)))?;
    }
    if spec.has(Analysis::Spectrum) || spec.has(Analysis::VarianceH) {
        let spectral = spectrum(panel, spec.analysis_options.spectrum_start)?;
        if spec.has(Analysis::Spectrum) {
            out.write_csv("spectra.csv", &SPECTRUM_HEADER, &spectrum_rows(&spectral, &active))?;
            summary.half_drive_mean_amplitude = Some(spectral.mean_amplitudes(&active)[spectral.half_drive_bin()]);
        }
        if spec.has(Analysis::VarianceH) {
            let retained: Vec<bool> = (0..panel.n_qubits).map(|q| panel.is_retained(q)).collect();
            match variance_h(&spectral, &retained) {
                Ok(v) => summary.var_h = Some(v),
                Err(e) => summary.diagnostics.push(e.to_string()),
            }
        }
    }
    if spec.has(Analysis::Decay) {
        let decay = decay_constants(panel, spec.analysis_options.decay_skip)?;
        out.write_csv("decay.csv", &DECAY_HEADER, &decay_rows(&decay))?;
        summary.delta_bar = Some(decay.delta_bar);
    }
    Ok(summary)
}

/// Narrows a spec to its sweep.
pub fn sweep_only(mut spec: ExperimentSpec) -> CliResult<ExperimentSpec> {
    if spec.sweep.is_none() {
        return Err(CliError::schema("sweep", "the sweep command needs a sweep section"));
    }
    spec.analyses = vec![Analysis::Sweep];
    spec.tomography = None;
    Ok(spec)
}

/// Narrows a spec to its tomography section.
pub fn tomography_only(mut spec: ExperimentSpec) -> CliResult<ExperimentSpec> {
    if spec.tomography.is_none() {
        return Err(CliError::schema("tomography", "the tomo command needs a tomography section"));
    }
    spec.analyses.clear();
    spec.sweep = None;
    Ok(spec)
}
