//! Named experiment specs at desk scale.

use std::f64::consts::FRAC_PI_4;

use dtc_core::chain::{PauliTerm, DEFAULT_COHERENT_AMPLITUDE};
use dtc_core::mitigation::MitigationParams;
use dtc_core::noise::DEFAULT_SHOTS;
use dtc_core::pipeline::Engine;
use dtc_core::{InitialKind, PauliString};

use crate::error::{CliError, CliResult};
use crate::spec::{
    Analysis, AnalysisOptions, CouplingSpec, ExperimentSpec, FieldSpec, InitialSpec, ModelSpec, NoiseSpec, PerQubit,
    SweepSpec, TomographySpec, DEFAULT_TRAJECTORIES,
};

pub const PRESETS: &[(&str, &str)] = &[
    ("echo", "57-qubit fermion run at epsilon = 0, no noise"),
    ("fig2-dtc", "12 qubits, epsilon = 0.05, coherent errors, noise and mitigation"),
    ("fig2-thermal", "12 qubits, epsilon = 0.5, coherent errors, noise and mitigation"),
    ("fig3-sweep", "epsilon sweep 0.02..0.20 over 100 pinned disorder realizations"),
    ("s1-neel", "Neel initial state with disorder"),
    ("s1-polarized", "polarized initial state without disorder"),
    ("s1-no-disorder", "random-bit initial state without disorder"),
    ("s4-tomography", "3-qubit step with injected error terms, 1e5 shots per setting"),
];

pub const DESK_QUBITS: usize = 12;
pub const FERMION_QUBITS: usize = 57;
pub const SWEEP_REALIZATIONS: usize = 100;
pub const TOMOGRAPHY_SHOTS: u64 = 100_000;

/// Readout flip rates at the two ends of the reported hardware range.
pub const FIG2_ETA0: f64 = 0.037;
pub const FIG2_ETA1: f64 = 0.025;
pub const FIG2_DEPOL: f64 = 0.01;

/// Error-generator coefficients of the three-qubit tomography table, in table order.
/// `IXI` appears twice with the same value.
pub const TOMOGRAPHY_TABLE: [(&str, f64); 13] = [
    ("IIX", 0.118),
    ("IIY", 0.085),
    ("IIZ", 0.126),
    ("IXI", 0.023),
    ("IYI", 0.012),
    ("IZI", 0.033),
    ("IZX", 0.038),
    ("IZY", 0.033),
    ("XII", 0.024),
    ("IXI", 0.023),
    ("YZI", 0.023),
    ("ZII", 0.037),
    ("ZYI", 0.017),
];

/// Distinct terms of the table, first occurrence wins.
pub fn tomography_terms() -> Vec<PauliTerm> {
    let mut out: Vec<PauliTerm> = Vec::new();
    for (s, c) in TOMOGRAPHY_TABLE {
        let p: PauliString = s.parse().expect("table strings are valid");
        if !out.iter().any(|t| t.pauli == p) {
            out.push(PauliTerm::new(p, c));
        }
    }
    out
}

pub fn preset_names() -> Vec<String> {
    PRESETS.iter().map(|(n, _)| n.to_string()).collect()
}

fn base(name: &str, n_qubits: usize) -> ExperimentSpec {
    ExperimentSpec {
        name: Some(name.to_string()),
        seed: 0,
        model: ModelSpec {
            n_qubits,
            epsilon: 0.0,
            couplings: CouplingSpec::Disorder,
            coherent_errors: FieldSpec::None,
            extra_pauli_terms: Vec::new(),
        },
        initial: InitialSpec::default(),
        noise: None,
        steps: 50,
        engine: Engine::Auto,
        mitigation: None,
        analyses: vec![Analysis::Autocorrelator, Analysis::Spectrum, Analysis::VarianceH, Analysis::Decay],
        analysis_options: AnalysisOptions::default(),
        sweep: None,
        tomography: None,
        output_dir: None,
    }
}

fn fig2(name: &str, epsilon: f64) -> ExperimentSpec {
    let mut s = base(name, DESK_QUBITS);
    s.model.epsilon = epsilon;
    s.model.coherent_errors = FieldSpec::Random { amplitude: DEFAULT_COHERENT_AMPLITUDE };
    s.engine = Engine::Statevector;
    s.noise = Some(NoiseSpec {
        eta0: PerQubit::Uniform(FIG2_ETA0),
        eta1: PerQubit::Uniform(FIG2_ETA1),
        depol_rate: PerQubit::Uniform(FIG2_DEPOL),
        shots: DEFAULT_SHOTS,
        trajectories: DEFAULT_TRAJECTORIES,
    });
    s.mitigation = Some(MitigationParams::default());
    s
}

fn s1(name: &str, kind: InitialKind, disorder: bool) -> ExperimentSpec {
    let mut s = base(name, DESK_QUBITS);
    s.model.epsilon = 0.05;
    s.model.coherent_errors = FieldSpec::Random { amplitude: DEFAULT_COHERENT_AMPLITUDE };
    if !disorder {
        s.model.couplings = CouplingSpec::Uniform { value: FRAC_PI_4 };
    }
    s.initial.kind = kind;
    s.engine = Engine::Statevector;
    s
}

pub fn preset(name: &str) -> CliResult<ExperimentSpec> {
    let spec = match name {
        "echo" => {
            let mut s = base(name, FERMION_QUBITS);
            s.engine = Engine::Fermion;
            s.analyses = vec![Analysis::Autocorrelator, Analysis::Spectrum];
            s
        }
        "fig2-dtc" => fig2(name, 0.05),
        "fig2-thermal" => fig2(name, 0.5),
        "fig3-sweep" => {
            let mut s = base(name, DESK_QUBITS);
            s.model.coherent_errors = FieldSpec::Random { amplitude: DEFAULT_COHERENT_AMPLITUDE };
            s.engine = Engine::Statevector;
            s.analyses = vec![Analysis::Sweep];
            s.sweep = Some(SweepSpec {
                epsilons: (1..=10).map(|k| k as f64 / 50.0).collect(),
                realizations: SWEEP_REALIZATIONS,
                pin_disorder: true,
            });
            s
        }
        "s1-neel" => s1(name, InitialKind::Neel, true),
        "s1-polarized" => s1(name, InitialKind::Polarized, false),
        "s1-no-disorder" => s1(name, InitialKind::RandomBit, false),
        "s4-tomography" => {
            let mut s = base(name, 3);
            s.model.extra_pauli_terms = tomography_terms();
            s.engine = Engine::Statevector;
            s.analyses = Vec::new();
            s.tomography = Some(TomographySpec { shots: Some(TOMOGRAPHY_SHOTS) });
            s
        }
        _ => return Err(CliError::UnknownPreset { name: name.to_string(), available: preset_names() }),
    };
    spec.validate()?;
    Ok(spec)
}
