//! Readout bit flips, stochastic Pauli depolarization and shot sampling.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainConfig, InitialState};
use crate::error::{Error, Result};
use crate::panel::{Stage, TimeSeriesPanel};
use crate::pauli::Pauli;
use crate::rng::derived_rng;
use crate::statevector::{FloquetPropagator, PureState};

pub const DEFAULT_SHOTS: u64 = 32_768;
pub const DEFAULT_STEPS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    /// P(read 1 | state 0), per qubit.
    pub eta0: Vec<f64>,
    /// P(read 0 | state 1), per qubit.
    pub eta1: Vec<f64>,
    /// Per-step probability of a uniformly random X/Y/Z error, per qubit.
    pub depol_rate: Vec<f64>,
    pub shots: u64,
}

impl NoiseModel {
    pub fn uniform(n_qubits: usize, eta0: f64, eta1: f64, depol_rate: f64, shots: u64) -> Self {
        Self {
            eta0: vec![eta0; n_qubits],
            eta1: vec![eta1; n_qubits],
            depol_rate: vec![depol_rate; n_qubits],
            shots,
        }
    }

    pub fn noiseless(n_qubits: usize, shots: u64) -> Self {
        Self::uniform(n_qubits, 0.0, 0.0, 0.0, shots)
    }

    pub fn n_qubits(&self) -> usize {
        self.eta0.len()
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for (name, v) in [("eta0", &self.eta0), ("eta1", &self.eta1), ("depol_rate", &self.depol_rate)] {
            if v.len() != n_qubits {
                return Err(Error::InvalidConfig(format!(
                    "noise.{name} has {} entries for {n_qubits} qubits",
                    v.len()
                )));
            }
        }
        if let Some(x) = self.eta0.iter().chain(&self.eta1).find(|x| !(0.0..0.5).contains(*x)) {
            return Err(Error::InvalidConfig(format!("readout flip probability {x} outside [0, 0.5)")));
        }
        if let Some(x) = self.depol_rate.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return Err(Error::InvalidConfig(format!("depol_rate {x} outside [0, 1)")));
        }
        if self.shots == 0 {
            return Err(Error::InvalidConfig("shots must be positive".into()));
        }
        Ok(())
    }

    pub fn eta_bar(&self, q: usize) -> f64 {
        0.5 * (self.eta0[q] + self.eta1[q])
    }

    pub fn delta(&self, q: usize) -> f64 {
        self.eta0[q] - self.eta1[q]
    }

    fn has_readout_error(&self) -> bool {
        self.eta0.iter().chain(&self.eta1).any(|&e| e > 0.0)
    }
}

pub fn apply_readout_error<R: Rng + ?Sized>(true_bits: &[u8], noise: &NoiseModel, rng: &mut R) -> Vec<u8> {
    true_bits
        .iter()
        .enumerate()
        .map(|(q, &b)| {
            let p = if b == 0 { noise.eta0[q] } else { noise.eta1[q] };
            if p > 0.0 && rng.random::<f64>() < p {
                1 - b
            } else {
                b
            }
        })
        .collect()
}

fn flip_readout<R: Rng + ?Sized>(x: usize, noise: &NoiseModel, rng: &mut R) -> usize {
    let mut out = x;
    for q in 0..noise.n_qubits() {
        let bit = x >> q & 1;
        let p = if bit == 0 { noise.eta0[q] } else { noise.eta1[q] };
        if p > 0.0 && rng.random::<f64>() < p {
            out ^= 1 << q;
        }
    }
    out
}

/// Independent X/Y/Z kicks with probability `depol_rate[q]` on each qubit.
pub fn trajectory_step<R: Rng + ?Sized>(state: &mut PureState, depol_rate: &[f64], rng: &mut R) {
    for (q, &p) in depol_rate.iter().enumerate() {
        if p > 0.0 && rng.random::<f64>() < p {
            let letter = match rng.random_range(0..3u8) {
                0 => Pauli::X,
                1 => Pauli::Y,
                _ => Pauli::Z,
            };
            state.apply_pauli(q, letter);
        }
    }
}

/// Per-qubit count of measured 1s out of `shots`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotTally {
    pub ones: Vec<u64>,
    pub shots: u64,
}

impl ShotTally {
    pub fn z_estimates(&self) -> Vec<f64> {
        let s = self.shots as f64;
        self.ones.iter().map(|&k| (s - 2.0 * k as f64) / s).collect()
    }
}

/// Tallies per recorded step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotPanel {
    pub steps: Vec<ShotTally>,
    pub shots: u64,
}

impl ShotPanel {
    pub fn z_rows(&self) -> Vec<Vec<f64>> {
        self.steps.iter().map(ShotTally::z_estimates).collect()
    }
}

pub fn sample_shots<R: Rng + ?Sized>(state: &PureState, noise: &NoiseModel, rng: &mut R) -> Result<ShotTally> {
    sample_n_shots(state, noise, noise.shots, rng)
}

pub fn sample_n_shots<R: Rng + ?Sized>(
    state: &PureState,
    noise: &NoiseModel,
    shots: u64,
    rng: &mut R,
) -> Result<ShotTally> {
    let n = state.n_qubits();
    if noise.n_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, found: noise.n_qubits() });
    }
    let mut ones = vec![0u64; n];
    if shots == 0 {
        return Ok(ShotTally { ones, shots });
    }
    let mut cdf = Vec::with_capacity(1 << n);
    let mut acc = 0.0;
    for a in state.amplitudes() {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let last = cdf.len() - 1;
    let readout = noise.has_readout_error();
    for _ in 0..shots {
        let u = rng.random::<f64>() * acc;
        let mut x = cdf.partition_point(|&c| c <= u).min(last);
        if readout {
            x = flip_readout(x, noise, rng);
        }
        for (q, o) in ones.iter_mut().enumerate() {
            *o += (x >> q & 1) as u64;
        }
    }
    Ok(ShotTally { ones, shots })
}

#[derive(Debug, Clone)]
pub struct NoisyRun {
    pub panel: TimeSeriesPanel,
    pub shots: ShotPanel,
}

/// Splits `shots` over trajectories: floor share plus one for the first remainder.
pub fn shots_for_trajectory(shots: u64, n_trajectories: usize, k: usize) -> u64 {
    let n = n_trajectories as u64;
    shots / n + u64::from((k as u64) < shots % n)
}

/// Monte-Carlo trajectories of flip/Ising/error steps interleaved with Pauli kicks;
/// every recorded step (t = 0..=steps) is shot-sampled with readout errors. The total
/// shot budget per step is `noise.shots`, spread across trajectories.
pub fn run_noisy_experiment(
    config: &ChainConfig,
    initial: &InitialState,
    noise: &NoiseModel,
    steps: usize,
    n_trajectories: usize,
    root_seed: u64,
    dense_limit: usize,
) -> Result<NoisyRun> {
    config.validate()?;
    let n = config.n_qubits;
    if initial.n_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, found: initial.n_qubits() });
    }
    noise.validate(n)?;
    if n_trajectories == 0 {
        return Err(Error::InvalidConfig("need at least one trajectory".into()));
    }
    let prop = FloquetPropagator::with_limit(config, dense_limit)?;
    let start = PureState::from_initial(initial, dense_limit)?;

    let per_traj: Vec<Vec<Vec<u64>>> = (0..n_trajectories)
        .into_par_iter()
        .map(|k| -> Result<Vec<Vec<u64>>> {
            let shots = shots_for_trajectory(noise.shots, n_trajectories, k);
            let mut rng = derived_rng(root_seed, "trajectory", k as u64);
            let mut state = start.clone();
            let mut out = Vec::with_capacity(steps + 1);
            out.push(sample_n_shots(&state, noise, shots, &mut rng)?.ones);
            for _ in 0..steps {
                prop.apply(&mut state)?;
                trajectory_step(&mut state, &noise.depol_rate, &mut rng);
                out.push(sample_n_shots(&state, noise, shots, &mut rng)?.ones);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut totals = vec![vec![0u64; n]; steps + 1];
    for traj in &per_traj {
        for (row, counts) in totals.iter_mut().zip(traj) {
            for (a, b) in row.iter_mut().zip(counts) {
                *a += b;
            }
        }
    }
    let shot_panel = ShotPanel {
        steps: totals.into_iter().map(|ones| ShotTally { ones, shots: noise.shots }).collect(),
        shots: noise.shots,
    };
    let panel = TimeSeriesPanel::from_time_major(&shot_panel.z_rows(), initial.bits.clone(), Stage::Raw)?;
    Ok(NoisyRun { panel, shots: shot_panel })
}
