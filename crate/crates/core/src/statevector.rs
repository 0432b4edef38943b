//! Dense statevector simulation. Basis index bit i is qubit i; bit 0 means Z = +1.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::chain::{ChainConfig, InitialState};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

pub const DEFAULT_MAX_QUBITS: usize = 22;

const TAYLOR_SUBSTEP_NORM: f64 = 0.5;
const TAYLOR_MAX_ORDER: usize = 60;

pub fn check_dense_size(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::UnsupportedSize { n, limit });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    n_qubits: usize,
}

impl PureState {
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Self::from_bits_with_limit(bits, DEFAULT_MAX_QUBITS)
    }

    pub fn from_bits_with_limit(bits: &[u8], limit: usize) -> Result<Self> {
        let n = bits.len();
        if n == 0 {
            return Err(Error::InvalidConfig("empty bitstring".into()));
        }
        check_dense_size(n, limit)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[basis_index(bits)] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes, n_qubits: n })
    }

    pub fn from_initial(initial: &InitialState, limit: usize) -> Result<Self> {
        Self::from_bits_with_limit(&initial.bits, limit)
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidConfig(format!("dimension {dim} is not a power of two >= 2")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_dense_size(n_qubits, DEFAULT_MAX_QUBITS)?;
        Ok(Self { amplitudes, n_qubits })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Each qubit rotated by exp(i pi/2 (1-eps) X).
    pub fn apply_flip(&mut self, epsilon: f64) {
        let theta = FRAC_PI_2 * (1.0 - epsilon);
        let (s, c) = theta.sin_cos();
        let is = Complex64::new(0.0, s);
        for q in 0..self.n_qubits {
            let stride = 1usize << q;
            for block in self.amplitudes.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = x * c + y * is;
                    *b = x * is + y * c;
                }
            }
        }
    }

    /// exp(-i sum_i J_i Z_i Z_{i+1}).
    pub fn apply_ising(&mut self, couplings: &[f64]) -> Result<()> {
        if couplings.len() + 1 != self.n_qubits {
            return Err(Error::InvalidConfig(format!(
                "expected {} couplings, got {}",
                self.n_qubits - 1,
                couplings.len()
            )));
        }
        let zeros = vec![0.0; self.n_qubits];
        for (x, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= phase(diagonal_energy(x, couplings, &zeros));
        }
        Ok(())
    }

    /// exp(-i H_add) with H_add = sum b_i Z_i + sum c_k P_k.
    pub fn apply_coherent_errors(&mut self, z_fields: &[f64], extra: &[(PauliString, f64)]) -> Result<()> {
        if z_fields.len() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: z_fields.len() });
        }
        if extra.is_empty() {
            let none = vec![0.0; self.n_qubits.saturating_sub(1)];
            for (x, a) in self.amplitudes.iter_mut().enumerate() {
                *a *= phase(diagonal_energy(x, &none, z_fields));
            }
            return Ok(());
        }
        let mut terms: Vec<(PauliString, f64)> = z_fields
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0.0)
            .map(|(i, &b)| (PauliString::single(self.n_qubits, i, Pauli::Z), b))
            .collect();
        for (p, c) in extra {
            p.check_sites(self.n_qubits)?;
            terms.push((p.clone(), *c));
        }
        self.apply_exp_hamiltonian(&terms);
        Ok(())
    }

    /// exp(-i H) for a Pauli-sum H via a scaled Taylor series.
    pub fn apply_exp_hamiltonian(&mut self, terms: &[(PauliString, f64)]) {
        let h_norm: f64 = terms.iter().map(|(_, c)| c.abs()).sum();
        if h_norm == 0.0 {
            return;
        }
        let substeps = (h_norm / TAYLOR_SUBSTEP_NORM).ceil().max(1.0) as usize;
        let tau = 1.0 / substeps as f64;
        let dim = self.amplitudes.len();
        let mut term = vec![Complex64::new(0.0, 0.0); dim];
        let mut next = vec![Complex64::new(0.0, 0.0); dim];
        for _ in 0..substeps {
            term.copy_from_slice(&self.amplitudes);
            for k in 1..=TAYLOR_MAX_ORDER {
                apply_pauli_sum(terms, &term, &mut next);
                let scale = Complex64::new(0.0, -tau / k as f64);
                let mut size = 0.0;
                for (t, n) in term.iter_mut().zip(&next) {
                    *t = n * scale;
                    size += t.norm_sqr();
                }
                for (a, t) in self.amplitudes.iter_mut().zip(&term) {
                    *a += t;
                }
                if size < 1e-34 {
                    break;
                }
            }
        }
    }

    pub fn apply_pauli(&mut self, qubit: usize, p: Pauli) {
        let bit = 1usize << qubit;
        match p {
            Pauli::I => {}
            Pauli::Z => {
                for (x, a) in self.amplitudes.iter_mut().enumerate() {
                    if x & bit != 0 {
                        *a = -*a;
                    }
                }
            }
            Pauli::X | Pauli::Y => {
                let i = Complex64::new(0.0, 1.0);
                for x in 0..self.amplitudes.len() {
                    if x & bit == 0 {
                        let (a0, a1) = (self.amplitudes[x], self.amplitudes[x | bit]);
                        if p == Pauli::X {
                            self.amplitudes[x] = a1;
                            self.amplitudes[x | bit] = a0;
                        } else {
                            // Y|0> = i|1>, Y|1> = -i|0>
                            self.amplitudes[x] = -i * a1;
                            self.amplitudes[x | bit] = i * a0;
                        }
                    }
                }
            }
        }
    }

    pub fn apply_pauli_string(&mut self, p: &PauliString) -> Result<()> {
        p.check_sites(self.n_qubits)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (x, a) in self.amplitudes.iter().enumerate() {
            let (ph, y) = p.apply_to_basis(x);
            out[y] = ph * a;
        }
        self.amplitudes = out;
        Ok(())
    }

    pub fn exact_polarizations(&self) -> Vec<f64> {
        let mut z = vec![0.0; self.n_qubits];
        for (x, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            for (q, zq) in z.iter_mut().enumerate() {
                if x >> q & 1 == 0 {
                    *zq += p;
                } else {
                    *zq -= p;
                }
            }
        }
        z
    }

    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        p.check_sites(self.n_qubits)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, a) in self.amplitudes.iter().enumerate() {
            let (ph, y) = p.apply_to_basis(x);
            acc += self.amplitudes[y].conj() * ph * a;
        }
        Ok(acc.re)
    }
}

pub fn basis_index(bits: &[u8]) -> usize {
    bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((b as usize & 1) << i))
}

fn phase(energy: f64) -> Complex64 {
    let (s, c) = energy.sin_cos();
    Complex64::new(c, -s)
}

fn z_of(x: usize, q: usize) -> f64 {
    if x >> q & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn diagonal_energy(x: usize, couplings: &[f64], fields: &[f64]) -> f64 {
    let mut e = 0.0;
    for (i, j) in couplings.iter().enumerate() {
        e += j * z_of(x, i) * z_of(x, i + 1);
    }
    for (i, b) in fields.iter().enumerate() {
        if *b != 0.0 {
            e += b * z_of(x, i);
        }
    }
    e
}

fn apply_pauli_sum(terms: &[(PauliString, f64)], input: &[Complex64], out: &mut [Complex64]) {
    out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
    for (p, c) in terms {
        let xm = p.x_mask();
        let zm = p.z_mask();
        let yp = p.y_phase() * *c;
        for (y, o) in out.iter_mut().enumerate() {
            let x = y ^ xm;
            let v = input[x] * yp;
            if (x & zm).count_ones() % 2 == 1 {
                *o -= v;
            } else {
                *o += v;
            }
        }
    }
}

/// Precomputed Floquet period for repeated application.
#[derive(Debug, Clone)]
pub struct FloquetPropagator {
    n_qubits: usize,
    epsilon: f64,
    diagonal: Vec<Complex64>,
    extra: Vec<(PauliString, f64)>,
}

impl FloquetPropagator {
    pub fn new(config: &ChainConfig) -> Result<Self> {
        Self::with_limit(config, DEFAULT_MAX_QUBITS)
    }

    pub fn with_limit(config: &ChainConfig, limit: usize) -> Result<Self> {
        config.validate()?;
        let n = config.n_qubits;
        check_dense_size(n, limit)?;
        let nonzero_extra: Vec<(PauliString, f64)> = config
            .extra_pauli_terms
            .iter()
            .filter(|t| t.coefficient != 0.0)
            .map(|t| (t.pauli.clone(), t.coefficient))
            .collect();
        // with extra terms present the fields go through the exponential with them
        let fields = if nonzero_extra.is_empty() { config.z_fields.clone() } else { vec![0.0; n] };
        let diagonal = (0..1usize << n)
            .map(|x| phase(diagonal_energy(x, &config.couplings, &fields)))
            .collect();
        let mut extra = Vec::new();
        if !nonzero_extra.is_empty() {
            for (i, &b) in config.z_fields.iter().enumerate() {
                if b != 0.0 {
                    extra.push((PauliString::single(n, i, Pauli::Z), b));
                }
            }
            extra.extend(nonzero_extra);
        }
        Ok(Self { n_qubits: n, epsilon: config.epsilon, diagonal, extra })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn apply(&self, state: &mut PureState) -> Result<()> {
        if state.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: state.n_qubits });
        }
        state.apply_flip(self.epsilon);
        for (a, d) in state.amplitudes.iter_mut().zip(&self.diagonal) {
            *a *= d;
        }
        if !self.extra.is_empty() {
            state.apply_exp_hamiltonian(&self.extra);
        }
        Ok(())
    }
}

/// One period: flip, then Ising, then the coherent error unitary.
pub fn floquet_step(state: &mut PureState, config: &ChainConfig) -> Result<()> {
    config.validate()?;
    if state.n_qubits != config.n_qubits {
        return Err(Error::DimensionMismatch { expected: config.n_qubits, found: state.n_qubits });
    }
    let extra: Vec<(PauliString, f64)> = config
        .extra_pauli_terms
        .iter()
        .map(|t| (t.pauli.clone(), t.coefficient))
        .collect();
    state.apply_flip(config.epsilon);
    state.apply_ising(&config.couplings)?;
    state.apply_coherent_errors(&config.z_fields, &extra)
}

/// Noiseless polarization series, `rows[t][qubit]` for t = 0..=steps.
pub fn evolve_polarizations(
    config: &ChainConfig,
    initial: &InitialState,
    steps: usize,
    limit: usize,
) -> Result<Vec<Vec<f64>>> {
    if initial.n_qubits() != config.n_qubits {
        return Err(Error::DimensionMismatch { expected: config.n_qubits, found: initial.n_qubits() });
    }
    let prop = FloquetPropagator::with_limit(config, limit)?;
    let mut state = PureState::from_initial(initial, limit)?;
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(state.exact_polarizations());
    for _ in 0..steps {
        prop.apply(&mut state)?;
        rows.push(state.exact_polarizations());
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{make_initial, sample_disorder, InitialKind, PauliTerm};
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(n: usize, seed: u64) -> PureState {
        let mut rng = crate::rng::rng_from_seed(seed);
        let mut amps: Vec<Complex64> =
            (0..1 << n).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        PureState::from_amplitudes(amps).unwrap()
    }

    /// Dense exp(-iH) by eigendecomposition of the Hermitian matrix.
    fn dense_expm(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let eig = h.clone().symmetric_eigen();
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| c(l.cos(), -l.sin())));
        &eig.eigenvectors * d * eig.eigenvectors.adjoint()
    }

    #[test]
    fn flip_cases() {
        let mut s = PureState::from_bits(&[0, 0, 0]).unwrap();
        s.apply_flip(0.0);
        assert_abs_diff_eq!(s.amplitudes()[7].norm(), 1.0, epsilon = 1e-14);

        let mut s = random_state(3, 1);
        let before = s.clone();
        s.apply_flip(1.0);
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
        }

        let mut s = PureState::from_bits(&[0]).unwrap();
        s.apply_flip(0.05);
        assert_abs_diff_eq!(s.exact_polarizations()[0], (0.95 * std::f64::consts::PI).cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(s.exact_polarizations()[0], -0.98769, epsilon = 1e-5);
    }

    #[test]
    fn ising_phases() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // |00> and |01>: bit 0 of the index is qubit 0
        let mut s = PureState::from_amplitudes(vec![c(h, 0.0), c(0.0, 0.0), c(h, 0.0), c(0.0, 0.0)]).unwrap();
        s.apply_ising(&[std::f64::consts::FRAC_PI_4]).unwrap();
        let a = s.amplitudes();
        assert_abs_diff_eq!((a[0] - c(h, 0.0) * phase(std::f64::consts::FRAC_PI_4)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((a[2] - c(h, 0.0) * phase(-std::f64::consts::FRAC_PI_4)).norm(), 0.0, epsilon = 1e-15);
        assert!(s.apply_ising(&[0.1, 0.2]).is_err());

        let mut s = random_state(8, 2);
        s.apply_ising(&[0.3, 0.7, 1.1, 0.2, 0.9, 0.4, 0.5]).unwrap();
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ising_keeps_basis_probabilities() {
        let mut s = PureState::from_bits(&[0, 1, 1, 0, 1]).unwrap();
        let before = s.probabilities();
        s.apply_ising(&[0.4, 0.9, 1.3, 0.2]).unwrap();
        assert_eq!(s.probabilities(), before);
    }

    #[test]
    fn coherent_z_field_on_plus() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut s = PureState::from_amplitudes(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        s.apply_coherent_errors(&[0.126], &[]).unwrap();
        let x = s.expectation(&"X".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(x, (2.0 * 0.126f64).cos(), epsilon = 1e-14);

        let mut s = random_state(3, 3);
        let before = s.clone();
        s.apply_coherent_errors(&[0.0; 3], &[]).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn non_commuting_terms_match_dense_exponential() {
        let terms = vec![("X".parse::<PauliString>().unwrap(), 0.118)];
        let mut s = random_state(1, 4);
        let v0 = DMatrix::from_column_slice(2, 1, s.amplitudes());
        s.apply_coherent_errors(&[0.126], &terms).unwrap();
        let h = terms[0].0.matrix() * c(0.118, 0.0)
            + "Z".parse::<PauliString>().unwrap().matrix() * c(0.126, 0.0);
        let want = dense_expm(&h) * v0;
        for i in 0..2 {
            assert_abs_diff_eq!((s.amplitudes()[i] - want[i]).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn three_qubit_terms_match_dense_exponential() {
        let terms: Vec<(PauliString, f64)> = vec![
            ("IIX".parse().unwrap(), 0.118),
            ("IIY".parse().unwrap(), 0.085),
            ("ZZI".parse().unwrap(), 0.9),
            ("XYZ".parse().unwrap(), -0.7),
        ];
        let fields = [0.2, -0.1, 0.05];
        let mut s = random_state(3, 5);
        let v0 = DMatrix::from_column_slice(8, 1, s.amplitudes());
        s.apply_coherent_errors(&fields, &terms).unwrap();
        let mut h = DMatrix::zeros(8, 8);
        for (p, k) in &terms {
            h += p.matrix() * c(*k, 0.0);
        }
        for (i, b) in fields.iter().enumerate() {
            h += PauliString::single(3, i, Pauli::Z).matrix() * c(*b, 0.0);
        }
        let want = dense_expm(&h) * v0;
        for i in 0..8 {
            assert_abs_diff_eq!((s.amplitudes()[i] - want[i]).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pauli_application_matches_matrix() {
        for p in ["XIZ", "YYI", "IZY"] {
            let ps: PauliString = p.parse().unwrap();
            let mut s = random_state(3, 6);
            let v0 = DMatrix::from_column_slice(8, 1, s.amplitudes());
            let want = ps.matrix() * v0;
            s.apply_pauli_string(&ps).unwrap();
            for i in 0..8 {
                assert_abs_diff_eq!((s.amplitudes()[i] - want[i]).norm(), 0.0, epsilon = 1e-15);
            }
        }
        for (q, l) in [(0, Pauli::Y), (2, Pauli::X), (1, Pauli::Z)] {
            let mut a = random_state(3, 7);
            let mut b = a.clone();
            a.apply_pauli(q, l);
            b.apply_pauli_string(&PauliString::single(3, q, l)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn polarization_examples() {
        let s = PureState::from_bits(&[0, 1, 1, 0]).unwrap();
        assert_eq!(s.exact_polarizations(), vec![1.0, -1.0, -1.0, 1.0]);
        let n = 4;
        let amp = c(1.0 / 4.0, 0.0);
        let s = PureState::from_amplitudes(vec![amp; 1 << n]).unwrap();
        s.exact_polarizations().iter().for_each(|z| assert_abs_diff_eq!(*z, 0.0, epsilon = 1e-12));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ghz = PureState::from_amplitudes(vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
        ghz.exact_polarizations().iter().for_each(|z| assert_abs_diff_eq!(*z, 0.0, epsilon = 1e-12));
    }

    #[test]
    fn echo_and_norm_over_fifty_steps() {
        let cfg = sample_disorder(12, 3).unwrap();
        let init = make_initial(InitialKind::RandomBit, 12, 8).unwrap();
        let rows = evolve_polarizations(&cfg, &init, 50, DEFAULT_MAX_QUBITS).unwrap();
        let z0 = init.signs();
        for (t, row) in rows.iter().enumerate() {
            let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
            for (q, z) in row.iter().enumerate() {
                assert_abs_diff_eq!(z0[q] * z, sign, epsilon = 1e-12);
            }
        }

        let cfg = cfg.with_epsilon(0.05).with_z_fields(crate::chain::sample_coherent_errors(12, 0.12, 1).unwrap());
        let prop = FloquetPropagator::new(&cfg).unwrap();
        let mut s = PureState::from_initial(&init, DEFAULT_MAX_QUBITS).unwrap();
        for _ in 0..50 {
            prop.apply(&mut s).unwrap();
        }
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn propagator_matches_floquet_step() {
        let cfg = sample_disorder(4, 2)
            .unwrap()
            .with_epsilon(0.11)
            .with_z_fields(vec![0.1, -0.05, 0.02, 0.0])
            .with_extra_terms(vec![PauliTerm::new("XIIZ".parse().unwrap(), 0.07)]);
        let prop = FloquetPropagator::new(&cfg).unwrap();
        let mut a = random_state(4, 9);
        let mut b = a.clone();
        for _ in 0..5 {
            prop.apply(&mut a).unwrap();
            floquet_step(&mut b, &cfg).unwrap();
        }
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn size_cap() {
        assert!(matches!(
            PureState::from_bits_with_limit(&[0; 5], 4),
            Err(Error::UnsupportedSize { n: 5, limit: 4 })
        ));
        let cfg = ChainConfig::uniform(5, 0.1);
        assert!(FloquetPropagator::with_limit(&cfg, 4).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn norm_drift_per_step(seed in any::<u64>(), eps in 0.0f64..1.0, n in 2usize..8) {
            let cfg = sample_disorder(n, seed).unwrap().with_epsilon(eps)
                .with_z_fields(crate::chain::sample_coherent_errors(n, 0.2, seed ^ 1).unwrap());
            let mut s = random_state(n, seed);
            floquet_step(&mut s, &cfg).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn echo_holds_for_any_product_state(seed in any::<u64>(), n in 2usize..9) {
            let cfg = sample_disorder(n, seed).unwrap();
            let init = make_initial(InitialKind::RandomBit, n, seed).unwrap();
            let rows = evolve_polarizations(&cfg, &init, 6, DEFAULT_MAX_QUBITS).unwrap();
            let z0 = init.signs();
            for (t, row) in rows.iter().enumerate() {
                let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
                for q in 0..n {
                    prop_assert!((z0[q] * row[q] - sign).abs() < 1e-12);
                }
            }
        }
    }
}
