//! One realization end to end: simulate, optionally add noise, optionally mitigate.

use serde::{Deserialize, Serialize};

use crate::chain::{ChainConfig, InitialState};
use crate::error::{Error, Result};
use crate::fermion::evolve_covariance;
use crate::mitigation::{mitigate, MitigationOutcome, MitigationParams};
use crate::noise::{run_noisy_experiment, NoiseModel};
use crate::panel::{Stage, TimeSeriesPanel};
use crate::rng::derive_seed;
use crate::statevector::{evolve_polarizations, DEFAULT_MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Statevector,
    Fermion,
    Auto,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Statevector => "statevector",
            Engine::Fermion => "fermion",
            Engine::Auto => "auto",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSettings {
    pub model: NoiseModel,
    pub trajectories: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    pub engine: Engine,
    pub steps: usize,
    pub noise: Option<NoiseSettings>,
    pub mitigation: Option<MitigationParams>,
    pub dense_limit: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { engine: Engine::Auto, steps: 50, noise: None, mitigation: None, dense_limit: DEFAULT_MAX_QUBITS }
    }
}

/// Picks a concrete engine. Interacting or noisy models never go to the fermion engine.
pub fn resolve_engine(engine: Engine, config: &ChainConfig, noisy: bool, dense_limit: usize) -> Result<Engine> {
    let n = config.n_qubits;
    match engine {
        Engine::Fermion => {
            if !config.is_free_fermion() {
                return Err(Error::UnsupportedModel(
                    "the fermion engine cannot represent coherent error terms".into(),
                ));
            }
            if noisy {
                return Err(Error::UnsupportedModel("the fermion engine does not support noise".into()));
            }
            Ok(Engine::Fermion)
        }
        Engine::Statevector => {
            if n > dense_limit {
                return Err(Error::UnsupportedSize { n, limit: dense_limit });
            }
            Ok(Engine::Statevector)
        }
        Engine::Auto => {
            if config.is_free_fermion() && !noisy {
                Ok(Engine::Fermion)
            } else if n > dense_limit {
                Err(Error::UnsupportedSize { n, limit: dense_limit })
            } else {
                Ok(Engine::Statevector)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RealizationResult {
    pub engine: Engine,
    pub raw: TimeSeriesPanel,
    pub reference_raw: Option<TimeSeriesPanel>,
    pub mitigation: Option<MitigationOutcome>,
}

impl RealizationResult {
    /// The most processed panel available.
    pub fn final_panel(&self) -> &TimeSeriesPanel {
        self.mitigation.as_ref().map_or(&self.raw, |m| &m.mitigated)
    }

    pub fn panel_at(&self, stage: Stage) -> Option<&TimeSeriesPanel> {
        match stage {
            Stage::Raw => Some(&self.raw),
            Stage::MeasurementCorrected => self.mitigation.as_ref().map(|m| &m.measurement_corrected),
            Stage::FullyMitigated => self.mitigation.as_ref().map(|m| &m.mitigated),
        }
    }
}

fn simulate(
    engine: Engine,
    config: &ChainConfig,
    initial: &InitialState,
    options: &PipelineOptions,
    noise_seed: u64,
) -> Result<TimeSeriesPanel> {
    if let Some(noise) = &options.noise {
        return Ok(run_noisy_experiment(
            config,
            initial,
            &noise.model,
            options.steps,
            noise.trajectories,
            noise_seed,
            options.dense_limit,
        )?
        .panel);
    }
    match engine {
        Engine::Fermion => evolve_covariance(config, initial, options.steps),
        _ => {
            let rows = evolve_polarizations(config, initial, options.steps, options.dense_limit)?;
            TimeSeriesPanel::from_time_major(&rows, initial.bits.clone(), Stage::Raw)
        }
    }
}

/// Runs `config` and, when mitigation is on, the matching epsilon = 0 reference with
/// the same couplings, coherent errors and noise.
pub fn run_realization(
    config: &ChainConfig,
    initial: &InitialState,
    options: &PipelineOptions,
    root_seed: u64,
) -> Result<RealizationResult> {
    config.validate()?;
    let engine = resolve_engine(options.engine, config, options.noise.is_some(), options.dense_limit)?;
    let raw = simulate(engine, config, initial, options, derive_seed(root_seed, "noise-run", 0))?;
    let Some(params) = &options.mitigation else {
        return Ok(RealizationResult { engine, raw, reference_raw: None, mitigation: None });
    };
    let reference_config = config.clone().with_epsilon(0.0);
    let reference_raw = simulate(
        engine,
        &reference_config,
        initial,
        options,
        derive_seed(root_seed, "noise-reference", 0),
    )?;
    let outcome = mitigate(&raw, &reference_raw, params)?;
    Ok(RealizationResult { engine, raw, reference_raw: Some(reference_raw), mitigation: Some(outcome) })
}
