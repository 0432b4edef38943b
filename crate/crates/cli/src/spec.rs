//! Experiment description read from JSON, and its expansion into core inputs.

use std::path::{Path, PathBuf};

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use dtc_core::analysis::{SweepOptions, SweepTemplate};
use dtc_core::chain::{make_initial, sample_coherent_errors, sample_disorder, PauliTerm};
use dtc_core::mitigation::MitigationParams;
use dtc_core::noise::{NoiseModel, DEFAULT_SHOTS, DEFAULT_STEPS};
use dtc_core::pipeline::{Engine, NoiseSettings, PipelineOptions};
use dtc_core::rng::derive_seed;
use dtc_core::statevector::DEFAULT_MAX_QUBITS;
use dtc_core::{ChainConfig, InitialKind, InitialState};

use crate::error::{CliError, CliResult};

pub const DEFAULT_TRAJECTORIES: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Root seed; every random quantity derives from it.
    #[serde(default)]
    pub seed: u64,
    pub model: ModelSpec,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default, with = "noise_field")]
    pub noise: Option<NoiseSpec>,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_engine")]
    pub engine: Engine,
    #[serde(default, with = "mitigation_field")]
    pub mitigation: Option<MitigationParams>,
    #[serde(default)]
    pub analyses: Vec<Analysis>,
    #[serde(default)]
    pub analysis_options: AnalysisOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tomography: Option<TomographySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

fn default_engine() -> Engine {
    Engine::Auto
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub n_qubits: usize,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub couplings: CouplingSpec,
    #[serde(default)]
    pub coherent_errors: FieldSpec,
    #[serde(default)]
    pub extra_pauli_terms: Vec<PauliTerm>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CouplingSpec {
    /// J_i drawn uniformly from [pi/8, 3pi/8].
    #[default]
    Disorder,
    Uniform { value: f64 },
    Explicit { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    #[default]
    None,
    /// b_i drawn uniformly from [-amplitude, amplitude].
    Random { amplitude: f64 },
    Explicit { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub kind: InitialKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<String>,
    /// Overrides the seed derived from the root seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Default for InitialSpec {
    fn default() -> Self {
        Self { kind: InitialKind::RandomBit, bits: None, seed: None }
    }
}

/// A scalar applied to every qubit, or one value per qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerQubit {
    Uniform(f64),
    Each(Vec<f64>),
}

impl PerQubit {
    fn expand(&self, n: usize, path: &str) -> CliResult<Vec<f64>> {
        match self {
            PerQubit::Uniform(v) => Ok(vec![*v; n]),
            PerQubit::Each(v) if v.len() == n => Ok(v.clone()),
            PerQubit::Each(v) => Err(CliError::schema(path, format!("expected {n} values, got {}", v.len()))),
        }
    }
}

impl Default for PerQubit {
    fn default() -> Self {
        PerQubit::Uniform(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    #[serde(default)]
    pub eta0: PerQubit,
    #[serde(default)]
    pub eta1: PerQubit,
    #[serde(default)]
    pub depol_rate: PerQubit,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default = "default_trajectories")]
    pub trajectories: usize,
}

fn default_shots() -> u64 {
    DEFAULT_SHOTS
}

fn default_trajectories() -> usize {
    DEFAULT_TRAJECTORIES
}

impl NoiseSpec {
    pub fn model(&self, n: usize) -> CliResult<NoiseModel> {
        Ok(NoiseModel {
            eta0: self.eta0.expand(n, "noise.eta0")?,
            eta1: self.eta1.expand(n, "noise.eta1")?,
            depol_rate: self.depol_rate.expand(n, "noise.depol_rate")?,
            shots: self.shots,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Autocorrelator,
    Spectrum,
    VarianceH,
    Decay,
    Sweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisOptions {
    pub spectrum_start: usize,
    pub decay_skip: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        let d = SweepOptions::default();
        Self { spectrum_start: d.spectrum_start, decay_skip: d.decay_skip }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub epsilons: Vec<f64>,
    #[serde(default = "one")]
    pub realizations: usize,
    /// Same disorder, fields and initial states at every epsilon.
    #[serde(default)]
    pub pin_disorder: bool,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TomographySpec {
    /// Shots per (preparation, basis) setting; absent means exact probabilities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
}

/// `"none"`/`"off"`-or-object fields. Inner errors keep their own field path.
fn keyword_or_object<'de, D, T>(d: D, keyword: &str) -> Result<Option<T>, D::Error>
where
    D: Deserializer<'de>,
    T: DeserializeOwned,
{
    match serde_json::Value::deserialize(d)? {
        serde_json::Value::Null => Ok(None),
        serde_json::Value::String(s) if s == keyword => Ok(None),
        serde_json::Value::String(s) => {
            Err(D::Error::custom(format!("expected \"{keyword}\" or an object, found \"{s}\"")))
        }
        other => serde_path_to_error::deserialize(other).map(Some).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                D::Error::custom(e.into_inner())
            } else {
                D::Error::custom(format!("{path}: {}", e.into_inner()))
            }
        }),
    }
}

fn keyword_or_serialize<S: Serializer, T: Serialize>(v: &Option<T>, keyword: &str, s: S) -> Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_str(keyword),
        Some(v) => v.serialize(s),
    }
}

mod noise_field {
    use super::*;

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<NoiseSpec>, D::Error> {
        keyword_or_object(d, "none")
    }

    pub fn serialize<S: Serializer>(v: &Option<NoiseSpec>, s: S) -> Result<S::Ok, S::Error> {
        keyword_or_serialize(v, "none", s)
    }
}

mod mitigation_field {
    use super::*;

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<MitigationParams>, D::Error> {
        keyword_or_object(d, "off")
    }

    pub fn serialize<S: Serializer>(v: &Option<MitigationParams>, s: S) -> Result<S::Ok, S::Error> {
        keyword_or_serialize(v, "off", s)
    }
}

/// Parses JSON, reporting the field path of the first schema violation.
pub fn parse_spec(text: &str) -> CliResult<ExperimentSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: ExperimentSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::schema(path, e.into_inner().to_string())
    })?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_spec(path: &Path) -> CliResult<ExperimentSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_spec(&text)
}

/// Seeds derived from the root seed, recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedSeeds {
    pub disorder: u64,
    pub fields: u64,
    pub initial: u64,
    pub run: u64,
    pub sweep: u64,
    pub tomography: u64,
}

impl ExperimentSpec {
    pub fn n_qubits(&self) -> usize {
        self.model.n_qubits
    }

    pub fn has(&self, a: Analysis) -> bool {
        self.analyses.contains(&a)
    }

    /// Whether a single realization is simulated (as opposed to only a sweep or tomography).
    pub fn runs_single(&self) -> bool {
        self.analyses.iter().any(|a| *a != Analysis::Sweep) || (self.analyses.is_empty() && self.tomography.is_none())
    }

    pub fn seeds(&self) -> DerivedSeeds {
        let s = self.seed;
        DerivedSeeds {
            disorder: derive_seed(s, "disorder", 0),
            fields: derive_seed(s, "fields", 0),
            initial: self.initial.seed.unwrap_or_else(|| derive_seed(s, "initial", 0)),
            run: derive_seed(s, "run", 0),
            sweep: derive_seed(s, "sweep", 0),
            tomography: derive_seed(s, "tomography", 0),
        }
    }

    /// SHA-256 of the canonical JSON form, ignoring where outputs go.
    pub fn config_hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output_dir = None;
        let json = serde_json::to_string(&canonical).expect("spec serializes");
        hex(&Sha256::digest(json.as_bytes()))
    }

    pub fn validate(&self) -> CliResult<()> {
        let n = self.model.n_qubits;
        if n < 2 {
            return Err(CliError::schema("model.n_qubits", "need at least 2 qubits"));
        }
        if !(0.0..=1.0).contains(&self.model.epsilon) {
            return Err(CliError::schema("model.epsilon", "must lie in [0, 1]"));
        }
        match &self.model.couplings {
            CouplingSpec::Explicit { values } if values.len() != n - 1 => {
                return Err(CliError::schema(
                    "model.couplings.values",
                    format!("expected {} values, got {}", n - 1, values.len()),
                ));
            }
            CouplingSpec::Uniform { value } if !value.is_finite() => {
                return Err(CliError::schema("model.couplings.value", "must be finite"));
            }
            _ => {}
        }
        match &self.model.coherent_errors {
            FieldSpec::Explicit { values } if values.len() != n => {
                return Err(CliError::schema(
                    "model.coherent_errors.values",
                    format!("expected {n} values, got {}", values.len()),
                ));
            }
            FieldSpec::Random { amplitude } if !(amplitude.is_finite() && *amplitude >= 0.0) => {
                return Err(CliError::schema("model.coherent_errors.amplitude", "must be finite and >= 0"));
            }
            _ => {}
        }
        for (i, t) in self.model.extra_pauli_terms.iter().enumerate() {
            if t.pauli.len() != n {
                return Err(CliError::schema(
                    format!("model.extra_pauli_terms[{i}].pauli"),
                    format!("expected {n} letters, got {}", t.pauli.len()),
                ));
            }
        }
        match (self.initial.kind, &self.initial.bits) {
            (InitialKind::Bitstring, None) => {
                return Err(CliError::schema("initial.bits", "required when kind is \"bitstring\""));
            }
            (InitialKind::Bitstring, Some(bits)) if bits.len() != n => {
                return Err(CliError::schema("initial.bits", format!("expected {n} bits, got {}", bits.len())));
            }
            (InitialKind::Bitstring, Some(_)) => {}
            (_, Some(_)) => {
                return Err(CliError::schema("initial.bits", "only allowed when kind is \"bitstring\""));
            }
            (_, None) => {}
        }
        if let Some(noise) = &self.noise {
            noise.model(n)?;
            if noise.trajectories == 0 {
                return Err(CliError::schema("noise.trajectories", "must be positive"));
            }
            if noise.shots == 0 {
                return Err(CliError::schema("noise.shots", "must be positive"));
            }
        }
        if self.steps == 0 {
            return Err(CliError::schema("steps", "must be positive"));
        }
        match (self.has(Analysis::Sweep), &self.sweep) {
            (true, None) => return Err(CliError::schema("sweep", "required when analyses includes \"sweep\"")),
            (false, Some(_)) => {
                return Err(CliError::schema("sweep", "present but analyses does not include \"sweep\""));
            }
            _ => {}
        }
        if let Some(sweep) = &self.sweep {
            if sweep.epsilons.is_empty() {
                return Err(CliError::schema("sweep.epsilons", "must not be empty"));
            }
            if let Some(i) = sweep.epsilons.iter().position(|e| !(0.0..=1.0).contains(e)) {
                return Err(CliError::schema(format!("sweep.epsilons[{i}]"), "must lie in [0, 1]"));
            }
            if sweep.realizations == 0 {
                return Err(CliError::schema("sweep.realizations", "must be positive"));
            }
            if let CouplingSpec::Explicit { .. } = self.model.couplings {
                return Err(CliError::schema("model.couplings", "a sweep needs \"disorder\" or \"uniform\" couplings"));
            }
            if let FieldSpec::Explicit { .. } = self.model.coherent_errors {
                return Err(CliError::schema(
                    "model.coherent_errors",
                    "a sweep needs \"none\" or \"random\" coherent errors",
                ));
            }
            if self.initial.kind == InitialKind::Bitstring {
                return Err(CliError::schema("initial.kind", "a sweep draws its own initial states"));
            }
        }
        if let Some(m) = &self.mitigation {
            m.validate(self.steps + 1)?;
        }
        Ok(())
    }

    pub fn chain_config(&self) -> CliResult<ChainConfig> {
        let n = self.model.n_qubits;
        let seeds = self.seeds();
        let mut config = match &self.model.couplings {
            CouplingSpec::Disorder => sample_disorder(n, seeds.disorder)?,
            CouplingSpec::Uniform { value } => ChainConfig::uniform(n, *value),
            CouplingSpec::Explicit { values } => {
                let mut c = ChainConfig::uniform(n, 0.0);
                c.couplings = values.clone();
                c
            }
        };
        config.seed = seeds.disorder;
        config.epsilon = self.model.epsilon;
        config.z_fields = match &self.model.coherent_errors {
            FieldSpec::None => vec![0.0; n],
            FieldSpec::Random { amplitude } => sample_coherent_errors(n, *amplitude, seeds.fields)?,
            FieldSpec::Explicit { values } => values.clone(),
        };
        config.extra_pauli_terms = self.model.extra_pauli_terms.clone();
        config.validate()?;
        Ok(config)
    }

    pub fn initial_state(&self) -> CliResult<InitialState> {
        let n = self.model.n_qubits;
        match (&self.initial.bits, self.initial.kind) {
            (Some(bits), InitialKind::Bitstring) => Ok(InitialState::parse_bits(bits)?),
            _ => Ok(make_initial(self.initial.kind, n, self.seeds().initial)?),
        }
    }

    pub fn noise_model(&self) -> CliResult<Option<NoiseModel>> {
        self.noise.as_ref().map(|s| s.model(self.n_qubits())).transpose()
    }

    pub fn pipeline_options(&self) -> CliResult<PipelineOptions> {
        let noise = match &self.noise {
            Some(spec) => Some(NoiseSettings { model: spec.model(self.n_qubits())?, trajectories: spec.trajectories }),
            None => None,
        };
        Ok(PipelineOptions {
            engine: self.engine,
            steps: self.steps,
            noise,
            mitigation: self.mitigation.clone(),
            dense_limit: DEFAULT_MAX_QUBITS,
        })
    }

    pub fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            spectrum_start: self.analysis_options.spectrum_start,
            decay_skip: self.analysis_options.decay_skip,
        }
    }

    pub fn sweep_template(&self) -> Option<SweepTemplate> {
        let sweep = self.sweep.as_ref()?;
        let mut t = SweepTemplate::new(self.n_qubits());
        t.coherent_amplitude = match self.model.coherent_errors {
            FieldSpec::Random { amplitude } => amplitude,
            _ => 0.0,
        };
        t.extra_pauli_terms = self.model.extra_pauli_terms.clone();
        t.uniform_coupling = match self.model.couplings {
            CouplingSpec::Uniform { value } => Some(value),
            _ => None,
        };
        t.initial = self.initial.kind;
        t.realizations = sweep.realizations;
        t.pin_disorder = sweep.pin_disorder;
        Some(t)
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"model": {"n_qubits": 4}}"#;

    #[test]
    fn defaults_fill_in() {
        let spec = parse_spec(MINIMAL).unwrap();
        assert_eq!(spec.steps, 50);
        assert_eq!(spec.engine, Engine::Auto);
        assert!(spec.noise.is_none() && spec.mitigation.is_none());
        assert_eq!(spec.model.couplings, CouplingSpec::Disorder);
        assert!(spec.runs_single());
    }

    #[test]
    fn keywords_and_objects() {
        let spec = parse_spec(
            r#"{"model": {"n_qubits": 3}, "noise": {"eta0": 0.02, "eta1": [0.01, 0.02, 0.03]}, "mitigation": "off"}"#,
        )
        .unwrap();
        let model = spec.noise_model().unwrap().unwrap();
        assert_eq!(model.eta0, vec![0.02; 3]);
        assert_eq!(model.eta1, vec![0.01, 0.02, 0.03]);
        let spec = parse_spec(r#"{"model": {"n_qubits": 3}, "noise": "none", "mitigation": {}}"#).unwrap();
        assert!(spec.noise.is_none());
        assert_eq!(spec.mitigation, Some(MitigationParams::default()));
    }

    #[test]
    fn schema_errors_name_the_field() {
        let cases = [
            (r#"{"model": {"n_qubits": 4, "epsilom": 0.1}}"#, "model"),
            (r#"{"model": {"n_qubits": "four"}}"#, "model.n_qubits"),
            (r#"{"model": {"n_qubits": 4}, "noise": "off"}"#, "noise"),
            (r#"{"model": {"n_qubits": 4}, "noise": {"eta0": "x"}}"#, "noise"),
            (r#"{"model": {"n_qubits": 4}, "analyses": ["sweep"]}"#, "sweep"),
            (r#"{"model": {"n_qubits": 4, "couplings": {"kind": "explicit", "values": [1.0]}}}"#, "model.couplings.values"),
            (r#"{"model": {"n_qubits": 4}, "initial": {"kind": "bitstring"}}"#, "initial.bits"),
        ];
        for (text, path) in cases {
            match parse_spec(text) {
                Err(CliError::Schema { path: p, message }) => {
                    assert!(p.starts_with(path), "{text}: got path {p} ({message})");
                }
                other => panic!("{text}: expected a schema error, got {other:?}"),
            }
        }
    }

    #[test]
    fn round_trips_through_json() {
        let spec = parse_spec(
            r#"{"seed": 9, "model": {"n_qubits": 5, "epsilon": 0.05, "coherent_errors": {"kind": "random", "amplitude": 0.1}},
                "noise": {"eta0": 0.03, "depol_rate": 0.01, "trajectories": 4}, "mitigation": {},
                "analyses": ["autocorrelator", "sweep"], "sweep": {"epsilons": [0.1, 0.2]}}"#,
        )
        .unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(parse_spec(&text).unwrap(), spec);
    }

    #[test]
    fn hash_ignores_output_dir() {
        let mut a = parse_spec(MINIMAL).unwrap();
        let h = a.config_hash();
        a.output_dir = Some("elsewhere".into());
        assert_eq!(a.config_hash(), h);
        a.seed = 1;
        assert_ne!(a.config_hash(), h);
    }

    #[test]
    fn chain_is_reproducible() {
        let spec = parse_spec(
            r#"{"seed": 3, "model": {"n_qubits": 6, "coherent_errors": {"kind": "random", "amplitude": 0.12}}}"#,
        )
        .unwrap();
        assert_eq!(spec.chain_config().unwrap(), spec.chain_config().unwrap());
        assert_eq!(spec.initial_state().unwrap(), spec.initial_state().unwrap());
        assert!(spec.chain_config().unwrap().z_fields.iter().all(|b| b.abs() <= 0.12));
    }
}
