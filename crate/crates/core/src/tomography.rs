//! Pauli transfer matrices, linear-inversion process tomography and the post-gate
//! error generator L = log(G H^-1) with its Hamiltonian projection.
//!
//! Pauli index a runs over 4^n strings with qubit 0 as the least significant base-4
//! digit; R_ab = tr(P_a L(P_b)) / 2^n.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::ChainConfig;
use crate::error::{Error, Result};
use crate::linalg::logm;
use crate::noise::NoiseModel;
use crate::pauli::{Pauli, PauliString};
use crate::rng::derived_rng;
use crate::statevector::{FloquetPropagator, PureState};

pub const MAX_TOMOGRAPHY_QUBITS: usize = 3;

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_TOMOGRAPHY_QUBITS {
        return Err(Error::UnsupportedSize { n, limit: MAX_TOMOGRAPHY_QUBITS });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessTransferMatrix {
    pub entries: DMatrix<f64>,
    pub n_qubits: usize,
}

impl ProcessTransferMatrix {
    pub fn identity(n_qubits: usize) -> Self {
        let d = 1 << (2 * n_qubits);
        Self { entries: DMatrix::identity(d, d), n_qubits }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &ProcessTransferMatrix) -> ProcessTransferMatrix {
        ProcessTransferMatrix { entries: &self.entries * &first.entries, n_qubits: self.n_qubits }
    }

    pub fn orthogonality_error(&self) -> f64 {
        let d = self.dim();
        (&self.entries * self.entries.transpose() - DMatrix::<f64>::identity(d, d)).amax()
    }

    /// Deviation of the first row from (1, 0, ..., 0).
    pub fn trace_preservation_error(&self) -> f64 {
        (0..self.dim())
            .map(|b| (self.entries[(0, b)] - if b == 0 { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }

    /// Independent depolarization on each qubit: every non-identity letter on qubit
    /// q shrinks by 1 - 4 p_q / 3.
    pub fn depolarizing(rates: &[f64]) -> Result<Self> {
        let n = rates.len();
        check_n(n)?;
        let d = 1 << (2 * n);
        let diag = (0..d).map(|a| {
            let p = PauliString::from_index(a, n);
            p.letters()
                .iter()
                .zip(rates)
                .map(|(l, r)| if *l == Pauli::I { 1.0 } else { 1.0 - 4.0 * r / 3.0 })
                .product::<f64>()
        });
        Ok(Self { entries: DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d, diag)), n_qubits: n })
    }
}

fn pauli_matrices(n: usize) -> Vec<DMatrix<Complex64>> {
    (0..1 << (2 * n)).map(|a| PauliString::from_index(a, n).matrix()).collect()
}

/// PTM of an arbitrary linear map on 2^n x 2^n operators.
pub fn ptm_of_map<F>(n: usize, map: F) -> Result<ProcessTransferMatrix>
where
    F: Fn(&DMatrix<Complex64>) -> DMatrix<Complex64>,
{
    check_n(n)?;
    let paulis = pauli_matrices(n);
    let d = paulis.len();
    let norm = (1usize << n) as f64;
    let mut r = DMatrix::zeros(d, d);
    for (b, pb) in paulis.iter().enumerate() {
        let image = map(pb);
        for (a, pa) in paulis.iter().enumerate() {
            r[(a, b)] = (pa * &image).trace().re / norm;
        }
    }
    Ok(ProcessTransferMatrix { entries: r, n_qubits: n })
}

pub fn ptm_of_unitary(u: &DMatrix<Complex64>) -> Result<ProcessTransferMatrix> {
    let dim = u.nrows();
    if !dim.is_power_of_two() || u.ncols() != dim {
        return Err(Error::InvalidConfig(format!("unitary of shape {}x{} is not 2^n square", dim, u.ncols())));
    }
    let n = dim.trailing_zeros() as usize;
    let ud = u.adjoint();
    ptm_of_map(n, |p| u * p * &ud)
}

/// Dense unitary of one Floquet period.
pub fn unitary_of_step(config: &ChainConfig) -> Result<DMatrix<Complex64>> {
    check_n(config.n_qubits)?;
    let prop = FloquetPropagator::new(config)?;
    let n = config.n_qubits;
    let dim = 1 << n;
    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let bits: Vec<u8> = (0..n).map(|q| (col >> q & 1) as u8).collect();
        let mut s = PureState::from_bits(&bits)?;
        prop.apply(&mut s)?;
        for (row, a) in s.amplitudes().iter().enumerate() {
            u[(row, col)] = *a;
        }
    }
    Ok(u)
}

pub fn ptm_of_floquet_step(config: &ChainConfig) -> Result<ProcessTransferMatrix> {
    ptm_of_unitary(&unitary_of_step(config)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrepState {
    Zero,
    One,
    Plus,
    PlusI,
}

impl PrepState {
    pub const ALL: [PrepState; 4] = [PrepState::Zero, PrepState::One, PrepState::Plus, PrepState::PlusI];

    /// Single-qubit Pauli vector (I, X, Y, Z).
    fn bloch(self) -> [f64; 4] {
        match self {
            PrepState::Zero => [1.0, 0.0, 0.0, 1.0],
            PrepState::One => [1.0, 0.0, 0.0, -1.0],
            PrepState::Plus => [1.0, 1.0, 0.0, 0.0],
            PrepState::PlusI => [1.0, 0.0, 1.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Outcome probabilities used directly.
    Exact,
    /// Multinomial counts with this many shots per (preparation, basis) setting.
    Shots(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographySettings {
    pub preparations: Vec<Vec<PrepState>>,
    /// Measurement bases, one letter from {X, Y, Z} per qubit.
    pub bases: Vec<Vec<Pauli>>,
}

impl TomographySettings {
    /// All 4^n product preparations and all 3^n Pauli product bases.
    pub fn complete(n: usize) -> Self {
        let preparations = (0..1usize << (2 * n))
            .map(|i| (0..n).map(|k| PrepState::ALL[(i >> (2 * k)) & 3]).collect())
            .collect();
        let bases = (0..3usize.pow(n as u32))
            .map(|mut i| {
                (0..n)
                    .map(|_| {
                        let l = [Pauli::X, Pauli::Y, Pauli::Z][i % 3];
                        i /= 3;
                        l
                    })
                    .collect()
            })
            .collect();
        Self { preparations, bases }
    }

    pub fn n_qubits(&self) -> usize {
        self.preparations.first().map_or(0, Vec::len)
    }
}

fn prep_vector(prep: &[PrepState]) -> Vec<f64> {
    let n = prep.len();
    (0..1usize << (2 * n))
        .map(|a| prep.iter().enumerate().map(|(k, p)| p.bloch()[(a >> (2 * k)) & 3]).product())
        .collect()
}

/// Pauli index made of the basis letters on the qubits in `mask`, identity elsewhere.
fn masked_index(basis: &[Pauli], mask: usize) -> usize {
    basis
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(k, l)| l.index() << (2 * k))
        .sum()
}

/// Outcome distribution of measuring the state with Pauli vector `s` in `basis`,
/// followed by independent classical readout flips.
fn outcome_probabilities(s: &[f64], basis: &[Pauli], readout: Option<(&[f64], &[f64])>) -> Vec<f64> {
    let n = basis.len();
    let dim: usize = 1 << n;
    let scale = 1.0 / dim as f64;
    let mut p: Vec<f64> = (0..dim)
        .map(|o| {
            (0..dim)
                .map(|mask| {
                    let sign = if (o & mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                    sign * s[masked_index(basis, mask)]
                })
                .sum::<f64>()
                * scale
        })
        .collect();
    if let Some((eta0, eta1)) = readout {
        for q in 0..n {
            let bit = 1 << q;
            for o in 0..dim {
                if o & bit == 0 {
                    let (p0, p1) = (p[o], p[o | bit]);
                    p[o] = p0 * (1.0 - eta0[q]) + p1 * eta1[q];
                    p[o | bit] = p0 * eta0[q] + p1 * (1.0 - eta1[q]);
                }
            }
        }
    }
    p.iter().map(|x| x.max(0.0)).collect()
}

fn multinomial<R: rand::Rng + ?Sized>(probs: &[f64], shots: u64, rng: &mut R) -> Vec<u64> {
    let mut left = shots;
    let mut mass: f64 = probs.iter().sum();
    let mut out = vec![0u64; probs.len()];
    for (i, &p) in probs.iter().enumerate() {
        if left == 0 || mass <= 0.0 {
            break;
        }
        let k = if i + 1 == probs.len() {
            left
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q).expect("probability clamped into [0, 1]").sample(rng)
        };
        out[i] = k;
        left -= k;
        mass -= p;
    }
    out
}

/// Linear-inversion estimate of `process` from the given settings.
pub fn reconstruct_ptm(
    process: &ProcessTransferMatrix,
    settings: &TomographySettings,
    readout: Option<(&[f64], &[f64])>,
    sampling: Sampling,
    seed: u64,
) -> Result<ProcessTransferMatrix> {
    let n = process.n_qubits;
    check_n(n)?;
    let d = process.dim();
    if settings.preparations.iter().any(|p| p.len() != n) || settings.bases.iter().any(|b| b.len() != n) {
        return Err(Error::InvalidConfig("setting width does not match the process".into()));
    }
    if settings.bases.iter().flatten().any(|l| *l == Pauli::I) {
        return Err(Error::InvalidConfig("measurement bases use X, Y or Z on every qubit".into()));
    }
    if let Sampling::Shots(0) = sampling {
        return Err(Error::InvalidConfig("shots per setting must be positive".into()));
    }

    // which bases can estimate each Pauli: letters agree on its support
    let compatible: Vec<Vec<usize>> = (0..d)
        .map(|a| {
            let p = PauliString::from_index(a, n);
            (0..settings.bases.len())
                .filter(|&b| p.support().all(|k| settings.bases[b][k] == p.letters()[k]))
                .collect()
        })
        .collect();
    if let Some(a) = (1..d).find(|&a| compatible[a].is_empty()) {
        return Err(Error::Underdetermined(format!(
            "no measurement basis covers {}",
            PauliString::from_index(a, n)
        )));
    }

    let rin_cols: Vec<Vec<f64>> = settings.preparations.iter().map(|p| prep_vector(p)).collect();
    let rin = DMatrix::from_fn(d, rin_cols.len(), |a, j| rin_cols[j][a]);
    let sv = rin.clone().singular_values();
    let smax = sv.max();
    let rank = sv.iter().filter(|s| **s > 1e-10 * smax).count();
    if rank < d {
        return Err(Error::Underdetermined(format!("preparations span rank {rank} of {d}")));
    }

    let n_bases = settings.bases.len();
    let jobs: Vec<(usize, usize)> =
        (0..rin_cols.len()).flat_map(|j| (0..n_bases).map(move |b| (j, b))).collect();
    // per setting: (counts or probabilities, shots weight)
    let outcomes: Vec<(Vec<f64>, f64)> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, &(j, b))| {
            let s: Vec<f64> = (&process.entries * nalgebra::DVector::from_column_slice(&rin_cols[j])).iter().copied().collect();
            let probs = outcome_probabilities(&s, &settings.bases[b], readout);
            match sampling {
                Sampling::Exact => (probs, 1.0),
                Sampling::Shots(shots) => {
                    let mut rng = derived_rng(seed, "tomography-setting", idx as u64);
                    let counts = multinomial(&probs, shots, &mut rng);
                    (counts.iter().map(|&c| c as f64 / shots as f64).collect(), shots as f64)
                }
            }
        })
        .collect();

    let mut s_hat = DMatrix::zeros(d, rin_cols.len());
    for j in 0..rin_cols.len() {
        s_hat[(0, j)] = 1.0;
        for a in 1..d {
            let p = PauliString::from_index(a, n);
            let mask = p.support().fold(0usize, |m, k| m | (1 << k));
            let (mut num, mut den) = (0.0, 0.0);
            for &b in &compatible[a] {
                let (freq, w) = &outcomes[j * n_bases + b];
                let e: f64 = freq
                    .iter()
                    .enumerate()
                    .map(|(o, f)| if (o & mask).count_ones() % 2 == 1 { -f } else { *f })
                    .sum();
                num += w * e;
                den += w;
            }
            s_hat[(a, j)] = num / den;
        }
    }
    // least squares G = S Rin^T (Rin Rin^T)^-1
    let gram = &rin * rin.transpose();
    let gram_inv = gram
        .cholesky()
        .ok_or_else(|| Error::Underdetermined("preparation Gram matrix is not positive definite".into()))?
        .inverse();
    Ok(ProcessTransferMatrix { entries: s_hat * rin.transpose() * gram_inv, n_qubits: n })
}

/// Simulated tomography of one Floquet period, with the noise model's per-qubit
/// depolarization after the step and its readout flips on every outcome.
pub fn tomographic_reconstruction(
    config: &ChainConfig,
    noise: Option<&NoiseModel>,
    sampling: Sampling,
    seed: u64,
) -> Result<ProcessTransferMatrix> {
    let n = config.n_qubits;
    check_n(n)?;
    let mut process = ptm_of_floquet_step(config)?;
    let mut readout = None;
    if let Some(noise) = noise {
        noise.validate(n)?;
        process = ProcessTransferMatrix::depolarizing(&noise.depol_rate)?.after(&process);
        readout = Some((noise.eta0.as_slice(), noise.eta1.as_slice()));
    }
    reconstruct_ptm(&process, &TomographySettings::complete(n), readout, sampling, seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorGenerator {
    pub l_matrix: DMatrix<f64>,
    /// Every non-identity Pauli string in index order with its coefficient.
    pub hamiltonian_coeffs: Vec<(PauliString, f64)>,
    pub dissipative_residual_norm: f64,
}

impl ErrorGenerator {
    pub fn coefficient(&self, p: &PauliString) -> Option<f64> {
        self.hamiltonian_coeffs.iter().find(|(q, _)| q == p).map(|(_, c)| *c)
    }
}

/// PTMs of rho -> -i [P_a, rho] for every non-identity P_a.
pub fn hamiltonian_generators(n: usize) -> Result<Vec<(PauliString, DMatrix<f64>)>> {
    check_n(n)?;
    let mi = Complex64::new(0.0, -1.0);
    (1..1usize << (2 * n))
        .map(|a| {
            let p = PauliString::from_index(a, n);
            let pm = p.matrix();
            let g = ptm_of_map(n, |rho| (&pm * rho - rho * &pm) * mi)?;
            Ok((p, g.entries))
        })
        .collect()
}

/// Projects `l` onto the Hamiltonian generators; returns the coefficients and the
/// Frobenius norm of what is left.
pub fn hamiltonian_projection(l: &DMatrix<f64>, n: usize) -> Result<(Vec<(PauliString, f64)>, f64)> {
    let d = 1usize << (2 * n);
    if l.nrows() != d || l.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: l.nrows() });
    }
    let gens = hamiltonian_generators(n)?;
    for (i, (_, gi)) in gens.iter().enumerate() {
        for (_, gj) in gens.iter().skip(i + 1) {
            if gi.dot(gj).abs() > 1e-10 {
                return Err(Error::Numerical("Hamiltonian generators are not orthogonal".into()));
            }
        }
    }
    let mut residual = l.clone();
    let coeffs = gens
        .iter()
        .map(|(p, g)| {
            let c = g.dot(l) / g.dot(g);
            residual -= g * c;
            (p.clone(), c)
        })
        .collect();
    Ok((coeffs, residual.norm()))
}

/// L = log(G H^-1) and its Hamiltonian part.
pub fn error_generator(g: &ProcessTransferMatrix, h: &ProcessTransferMatrix) -> Result<ErrorGenerator> {
    if g.n_qubits != h.n_qubits || g.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: g.dim() });
    }
    let h_inv = h
        .entries
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("ideal process matrix is singular".into()))?;
    let l = logm(&(&g.entries * h_inv))?;
    let (hamiltonian_coeffs, dissipative_residual_norm) = hamiltonian_projection(&l, g.n_qubits)?;
    Ok(ErrorGenerator { l_matrix: l, hamiltonian_coeffs, dissipative_residual_norm })
}
