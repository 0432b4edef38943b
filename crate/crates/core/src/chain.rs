//! Floquet model: one period is the imperfect global flip, then the Ising layer,
//! then the coherent error unitary exp(-i H_add).

use std::f64::consts::PI;

use rand::distr::{Distribution, Uniform};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::rng::rng_from_seed;

pub const J_MIN: f64 = PI / 8.0;
pub const J_MAX: f64 = 3.0 * PI / 8.0;
pub const DEFAULT_COHERENT_AMPLITUDE: f64 = PI / 25.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliTerm {
    pub pauli: PauliString,
    pub coefficient: f64,
}

impl PauliTerm {
    pub fn new(pauli: PauliString, coefficient: f64) -> Self {
        Self { pauli, coefficient }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub n_qubits: usize,
    pub epsilon: f64,
    pub couplings: Vec<f64>,
    pub z_fields: Vec<f64>,
    #[serde(default)]
    pub extra_pauli_terms: Vec<PauliTerm>,
    #[serde(default)]
    pub seed: u64,
}

impl ChainConfig {
    /// Uniform couplings, no errors.
    pub fn uniform(n_qubits: usize, coupling: f64) -> Self {
        Self {
            n_qubits,
            epsilon: 0.0,
            couplings: vec![coupling; n_qubits.saturating_sub(1)],
            z_fields: vec![0.0; n_qubits],
            extra_pauli_terms: Vec::new(),
            seed: 0,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_z_fields(mut self, z_fields: Vec<f64>) -> Self {
        self.z_fields = z_fields;
        self
    }

    pub fn with_extra_terms(mut self, terms: Vec<PauliTerm>) -> Self {
        self.extra_pauli_terms = terms;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        if n == 0 {
            return Err(Error::InvalidConfig("n_qubits must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::InvalidConfig(format!("epsilon {} outside [0, 1]", self.epsilon)));
        }
        if self.couplings.len() != n - 1 {
            return Err(Error::InvalidConfig(format!(
                "expected {} couplings for {n} qubits, got {}",
                n - 1,
                self.couplings.len()
            )));
        }
        if self.z_fields.len() != n {
            return Err(Error::InvalidConfig(format!(
                "expected {n} z_fields, got {}",
                self.z_fields.len()
            )));
        }
        if self.couplings.iter().chain(&self.z_fields).any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("non-finite coupling or field".into()));
        }
        for t in &self.extra_pauli_terms {
            t.pauli.check_sites(n)?;
            if t.pauli.weight() == 0 {
                return Err(Error::InvalidConfig("extra Pauli term must not be the identity".into()));
            }
            if !t.coefficient.is_finite() {
                return Err(Error::InvalidConfig(format!("non-finite coefficient on {}", t.pauli)));
            }
        }
        Ok(())
    }

    pub fn has_coherent_errors(&self) -> bool {
        self.z_fields.iter().any(|&b| b != 0.0)
            || self.extra_pauli_terms.iter().any(|t| t.coefficient != 0.0)
    }

    /// The bare flip + Ising model, which maps to free fermions.
    pub fn is_free_fermion(&self) -> bool {
        !self.has_coherent_errors()
    }
}

/// J_i uniform on [pi/8, 3pi/8], epsilon = 0, no coherent errors.
pub fn sample_disorder(n_qubits: usize, seed: u64) -> Result<ChainConfig> {
    if n_qubits < 2 {
        return Err(Error::InvalidConfig(format!(
            "disorder needs at least 2 qubits, got {n_qubits}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let dist = Uniform::new_inclusive(J_MIN, J_MAX).expect("static interval");
    let couplings = (0..n_qubits - 1).map(|_| dist.sample(&mut rng)).collect();
    Ok(ChainConfig {
        n_qubits,
        epsilon: 0.0,
        couplings,
        z_fields: vec![0.0; n_qubits],
        extra_pauli_terms: Vec::new(),
        seed,
    })
}

/// b_i uniform on [-amplitude, amplitude].
pub fn sample_coherent_errors(n_qubits: usize, amplitude: f64, seed: u64) -> Result<Vec<f64>> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "coherent error amplitude must be finite and >= 0, got {amplitude}"
        )));
    }
    if amplitude == 0.0 {
        return Ok(vec![0.0; n_qubits]);
    }
    let mut rng = rng_from_seed(seed);
    let dist = Uniform::new_inclusive(-amplitude, amplitude).expect("checked interval");
    Ok((0..n_qubits).map(|_| dist.sample(&mut rng)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialKind {
    Bitstring,
    Polarized,
    Neel,
    RandomBit,
}

impl InitialKind {
    pub fn name(self) -> &'static str {
        match self {
            InitialKind::Bitstring => "bitstring",
            InitialKind::Polarized => "polarized",
            InitialKind::Neel => "neel",
            InitialKind::RandomBit => "random-bit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialState {
    pub kind: InitialKind,
    pub bits: Vec<u8>,
}

impl InitialState {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() || bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidConfig("bits must be a non-empty 0/1 sequence".into()));
        }
        Ok(Self { kind: InitialKind::Bitstring, bits })
    }

    pub fn parse_bits(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidConfig(format!("bad bit '{c}' in \"{s}\""))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(bits)
    }

    pub fn n_qubits(&self) -> usize {
        self.bits.len()
    }

    /// z_i(0) = +1 for bit 0, -1 for bit 1.
    pub fn signs(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
    }

    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
    }
}

pub fn make_initial(kind: InitialKind, n_qubits: usize, seed: u64) -> Result<InitialState> {
    if n_qubits == 0 {
        return Err(Error::InvalidConfig("n_qubits must be positive".into()));
    }
    let bits = match kind {
        InitialKind::Bitstring => {
            return Err(Error::InvalidConfig(
                "a bitstring initial state needs explicit bits".into(),
            ))
        }
        InitialKind::Polarized => vec![0; n_qubits],
        InitialKind::Neel => (0..n_qubits).map(|i| (i % 2) as u8).collect(),
        InitialKind::RandomBit => {
            let mut rng = rng_from_seed(seed);
            (0..n_qubits).map(|_| rng.random_range(0..=1u8)).collect()
        }
    };
    Ok(InitialState { kind, bits })
}
