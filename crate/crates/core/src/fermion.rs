//! Free-fermion simulation of the bare flip + Ising model.
//!
//! Jordan-Wigner with X strings: m_{2j} = (prod_{k<j} X_k) Z_j and
//! m_{2j+1} = (prod_{k<j} X_k) Y_j. Then X_j = i m_{2j} m_{2j+1} and
//! Z_j Z_{j+1} = i m_{2j+1} m_{2j+2}, so both layers are quadratic and act on the
//! Majoranas as orthogonal rotations.
//!
//! In this frame Z_j is parity odd, so a product state is not Gaussian. It is the
//! even half of the cat (|z> + |zbar>)/sqrt(2), which is Gaussian, and the dynamics
//! preserve parity, so <Z_j(t)> = <z| Z_j(t) |z> follows from a mixed expectation
//! between the two cat halves. That reduces to a Pfaffian over the Heisenberg-picture
//! string of Z_j, which has 2j + 1 Majoranas. Sites past the middle are read off the
//! mirrored chain so no string is longer than about N.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::chain::{ChainConfig, InitialState};
use crate::error::{Error, Result};
use crate::panel::{Stage, TimeSeriesPanel};
use crate::pfaffian::pfaffian_in_place;

/// Gamma_ab = (i/2) <[m_a, m_b]>.
#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaCovariance {
    pub gamma: DMatrix<f64>,
    pub n_qubits: usize,
}

impl MajoranaCovariance {
    pub fn antisymmetry_error(&self) -> f64 {
        (&self.gamma + self.gamma.transpose()).amax()
    }

    pub fn max_singular_value(&self) -> f64 {
        self.gamma.clone().singular_values().max()
    }
}

/// Covariance of the even cat state built on `bits`.
pub fn covariance_from_bits(bits: &[u8]) -> MajoranaCovariance {
    let n = bits.len();
    let m = 2 * n;
    let z: Vec<f64> = bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect();
    let mut g = DMatrix::zeros(m, m);
    for j in 0..n.saturating_sub(1) {
        let v = z[j] * z[j + 1];
        g[(2 * j + 1, 2 * j + 2)] = v;
        g[(2 * j + 2, 2 * j + 1)] = -v;
    }
    if n > 0 {
        let v = z[0] * z[n - 1];
        g[(0, m - 1)] += v;
        g[(m - 1, 0)] -= v;
    }
    MajoranaCovariance { gamma: g, n_qubits: n }
}

/// One layer's action on Majorana operators, Gamma -> O Gamma O^T.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalUpdate {
    pub o: DMatrix<f64>,
}

impl OrthogonalUpdate {
    pub fn identity(n_qubits: usize) -> Self {
        Self { o: DMatrix::identity(2 * n_qubits, 2 * n_qubits) }
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &OrthogonalUpdate) -> OrthogonalUpdate {
        OrthogonalUpdate { o: &self.o * &first.o }
    }

    pub fn orthogonality_error(&self) -> f64 {
        let d = self.o.nrows();
        (&self.o * self.o.transpose() - DMatrix::<f64>::identity(d, d)).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.o.clone().determinant()
    }

    fn rotate(&mut self, a: usize, b: usize, phi: f64) {
        let (s, c) = (2.0 * phi).sin_cos();
        self.o[(a, a)] = c;
        self.o[(a, b)] = s;
        self.o[(b, a)] = -s;
        self.o[(b, b)] = c;
    }
}

pub fn flip_layer_update(epsilon: f64, n_qubits: usize) -> OrthogonalUpdate {
    let theta = FRAC_PI_2 * (1.0 - epsilon);
    let mut u = OrthogonalUpdate::identity(n_qubits);
    for j in 0..n_qubits {
        u.rotate(2 * j, 2 * j + 1, -theta);
    }
    u
}

pub fn ising_layer_update(couplings: &[f64], n_qubits: usize) -> Result<OrthogonalUpdate> {
    if couplings.len() + 1 != n_qubits {
        return Err(Error::InvalidConfig(format!(
            "expected {} couplings, got {}",
            n_qubits.saturating_sub(1),
            couplings.len()
        )));
    }
    let mut u = OrthogonalUpdate::identity(n_qubits);
    for (j, &jj) in couplings.iter().enumerate() {
        u.rotate(2 * j + 1, 2 * j + 2, jj);
    }
    Ok(u)
}

pub fn period_update(config: &ChainConfig) -> Result<OrthogonalUpdate> {
    let flip = flip_layer_update(config.epsilon, config.n_qubits);
    Ok(ising_layer_update(&config.couplings, config.n_qubits)?.after(&flip))
}

/// Cat-state covariance plus the two vectors O^t e_0 and O^t Gamma_0 e_0 that carry
/// the overlap between the cat halves.
#[derive(Debug, Clone)]
pub struct FermionState {
    covariance: MajoranaCovariance,
    u: DVector<f64>,
    v: DVector<f64>,
    z0: f64,
}

impl FermionState {
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() || bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidConfig("bits must be a non-empty 0/1 sequence".into()));
        }
        let covariance = covariance_from_bits(bits);
        let m = 2 * bits.len();
        let mut u = DVector::zeros(m);
        u[0] = 1.0;
        let v = covariance.gamma.column(0).into_owned();
        let z0 = if bits[0] == 0 { 1.0 } else { -1.0 };
        Ok(Self { covariance, u, v, z0 })
    }

    pub fn covariance(&self) -> &MajoranaCovariance {
        &self.covariance
    }

    pub fn n_qubits(&self) -> usize {
        self.covariance.n_qubits
    }

    pub fn apply(&mut self, update: &OrthogonalUpdate) {
        let o = &update.o;
        self.covariance.gamma = o * &self.covariance.gamma * o.transpose();
        self.u = o * &self.u;
        self.v = o * &self.v;
    }

    /// <Z_site>, from a Pfaffian of size 2 site + 2.
    pub fn polarization(&self, site: usize) -> f64 {
        let k = 2 * site + 2;
        let g = &self.covariance.gamma;
        let mut a = vec![Complex64::new(0.0, 0.0); k * k];
        for q in 0..k - 1 {
            let val = Complex64::new(self.u[q], self.v[q]);
            a[q + 1] = val;
            a[(q + 1) * k] = -val;
        }
        for p in 0..k - 1 {
            for q in p + 1..k - 1 {
                let val = Complex64::new(0.0, -g[(p, q)]);
                a[(p + 1) * k + q + 1] = val;
                a[(q + 1) * k + p + 1] = -val;
            }
        }
        let pf = pfaffian_in_place(&mut a, k);
        // multiply by i^site
        let rotated = match site % 4 {
            0 => pf,
            1 => Complex64::new(-pf.im, pf.re),
            2 => -pf,
            _ => Complex64::new(pf.im, -pf.re),
        };
        self.z0 * rotated.re
    }

    pub fn polarizations(&self) -> Vec<f64> {
        (0..self.n_qubits()).into_par_iter().map(|i| self.polarization(i)).collect()
    }
}

/// Noiseless <Z_i(t)> for t = 0..=steps. Refuses any coherent error term.
pub fn evolve_covariance(config: &ChainConfig, initial: &InitialState, steps: usize) -> Result<TimeSeriesPanel> {
    config.validate()?;
    if !config.is_free_fermion() {
        return Err(Error::UnsupportedModel(
            "coherent error terms make the model interacting; use the statevector engine".into(),
        ));
    }
    let n = config.n_qubits;
    if initial.n_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, found: initial.n_qubits() });
    }
    let n_fwd = n.div_ceil(2);
    let n_back = n - n_fwd;

    let mirrored_config = {
        let mut c = config.clone();
        c.couplings.reverse();
        c
    };
    let mut mirrored_bits = initial.bits.clone();
    mirrored_bits.reverse();

    let fwd_update = period_update(config)?;
    let back_update = period_update(&mirrored_config)?;
    let mut fwd = FermionState::from_bits(&initial.bits)?;
    let mut back = FermionState::from_bits(&mirrored_bits)?;

    let mut rows = Vec::with_capacity(steps + 1);
    for t in 0..=steps {
        let row: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| if i < n_fwd { fwd.polarization(i) } else { back.polarization(n - 1 - i) })
            .collect();
        rows.push(row);
        if t < steps {
            fwd.apply(&fwd_update);
            if n_back > 0 {
                back.apply(&back_update);
            }
        }
    }
    TimeSeriesPanel::from_time_major(&rows, initial.bits.clone(), Stage::Raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{make_initial, sample_disorder, InitialKind};
    use crate::statevector::{evolve_polarizations, DEFAULT_MAX_QUBITS};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn read_back_product_states() {
        let s = FermionState::from_bits(&[0, 0, 0, 0, 0]).unwrap();
        for z in s.polarizations() {
            assert_abs_diff_eq!(z, 1.0, epsilon = 1e-14);
        }
        let s = FermionState::from_bits(&[0, 1, 0, 1]).unwrap();
        let z = s.polarizations();
        for (a, b) in z.iter().zip([1.0, -1.0, 1.0, -1.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
        let cov = covariance_from_bits(&[1, 0, 1, 1, 0, 0]);
        assert!(cov.antisymmetry_error() < 1e-12);
        assert!(cov.max_singular_value() <= 1.0 + 1e-10);
    }

    #[test]
    fn flip_layer_cases() {
        let u = flip_layer_update(1.0, 4);
        assert!((&u.o - DMatrix::<f64>::identity(8, 8)).amax() < 1e-15);
        let u = flip_layer_update(0.0, 3);
        assert!((&u.o + DMatrix::<f64>::identity(6, 6)).amax() < 1e-15);
        for eps in [0.013, 0.31, 0.77] {
            let u = flip_layer_update(eps, 5);
            assert!(u.orthogonality_error() < 1e-12);
            assert_abs_diff_eq!(u.determinant().abs(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ising_layer_cases() {
        let u = ising_layer_update(&[0.0; 4], 5).unwrap();
        assert!((&u.o - DMatrix::<f64>::identity(10, 10)).amax() < 1e-15);
        assert!(ising_layer_update(&[0.1], 3).is_err());

        let mut s = FermionState::from_bits(&[0, 0]).unwrap();
        s.apply(&ising_layer_update(&[std::f64::consts::FRAC_PI_4], 2).unwrap());
        for z in s.polarizations() {
            assert_abs_diff_eq!(z, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn matches_statevector_small_chains() {
        for n in [2usize, 3, 5, 8] {
            for (k, eps) in [0.0, 0.05, 0.11, 0.5].into_iter().enumerate() {
                let cfg = sample_disorder(n, 40 + k as u64).unwrap().with_epsilon(eps);
                let init = make_initial(InitialKind::RandomBit, n, 7 + k as u64).unwrap();
                let panel = evolve_covariance(&cfg, &init, 50).unwrap();
                let rows = evolve_polarizations(&cfg, &init, 50, DEFAULT_MAX_QUBITS).unwrap();
                for (t, row) in rows.iter().enumerate() {
                    for q in 0..n {
                        assert_abs_diff_eq!(panel.values[q][t], row[q], epsilon = 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn refuses_interacting_models() {
        let cfg = sample_disorder(4, 1).unwrap().with_z_fields(vec![0.1, 0.0, 0.0, 0.0]);
        let init = make_initial(InitialKind::Polarized, 4, 0).unwrap();
        assert!(matches!(evolve_covariance(&cfg, &init, 3), Err(Error::UnsupportedModel(_))));
    }

    #[test]
    fn full_size_chain_keeps_invariants() {
        let n = 57;
        let cfg = sample_disorder(n, 5).unwrap().with_epsilon(0.05);
        let init = make_initial(InitialKind::RandomBit, n, 2).unwrap();
        let mut s = FermionState::from_bits(&init.bits).unwrap();
        let o = period_update(&cfg).unwrap();
        for _ in 0..50 {
            s.apply(&o);
        }
        assert!(s.covariance().antisymmetry_error() < 1e-9);
        assert!(s.covariance().max_singular_value() <= 1.0 + 1e-9);
        let panel = evolve_covariance(&cfg, &init, 50).unwrap();
        assert!(panel.values.iter().flatten().all(|z| z.abs() <= 1.0 + 1e-9));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn period_update_is_orthogonal(seed in any::<u64>(), eps in 0.0f64..1.0, n in 2usize..20) {
            let cfg = sample_disorder(n, seed).unwrap().with_epsilon(eps);
            let o = period_update(&cfg).unwrap();
            prop_assert!(o.orthogonality_error() < 1e-12);
            prop_assert!((o.determinant().abs() - 1.0).abs() < 1e-10);
        }
    }
}
