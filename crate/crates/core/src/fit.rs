//! Three-parameter exponential decay y = a exp(-b t) + c by Levenberg-Marquardt.

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::storage::Owned;
use nalgebra::{Dyn, OMatrix, OVector, Vector3, U3};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rms_residual: f64,
    pub converged: bool,
}

impl ExponentialFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.a * (-self.b * t).exp() + self.c
    }
}

struct DecayProblem<'a> {
    t: &'a [f64],
    y: &'a [f64],
    p: Vector3<f64>,
}

impl LeastSquaresProblem<f64, Dyn, U3> for DecayProblem<'_> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, U3>;
    type ParameterStorage = Owned<f64, U3>;

    fn set_params(&mut self, x: &Vector3<f64>) {
        self.p.copy_from(x);
    }

    fn params(&self) -> Vector3<f64> {
        self.p
    }

    fn residuals(&self) -> Option<OVector<f64, Dyn>> {
        let (a, b, c) = (self.p[0], self.p[1], self.p[2]);
        Some(OVector::<f64, Dyn>::from_iterator(
            self.t.len(),
            self.t.iter().zip(self.y).map(|(t, y)| a * (-b * t).exp() + c - y),
        ))
    }

    fn jacobian(&self) -> Option<OMatrix<f64, Dyn, U3>> {
        let (a, b) = (self.p[0], self.p[1]);
        let mut j = OMatrix::<f64, Dyn, U3>::zeros(self.t.len());
        for (r, t) in self.t.iter().enumerate() {
            let e = (-b * t).exp();
            j[(r, 0)] = e;
            j[(r, 1)] = -a * t * e;
            j[(r, 2)] = 1.0;
        }
        Some(j)
    }
}

/// Amplitudes below this count as "no decay"; b is then reported as 0.
const FLAT_AMPLITUDE: f64 = 1e-9;

/// Initial guess a = y(0) - y(end), b = 1/len, c = y(end). `converged` needs a
/// successful solver exit, finite parameters, b >= 0 and an RMS residual within
/// `rms_bound`.
pub fn fit_exponential_decay(t: &[f64], y: &[f64], rms_bound: f64) -> ExponentialFit {
    assert_eq!(t.len(), y.len(), "t and y lengths differ");
    let failed = ExponentialFit { a: 0.0, b: 0.0, c: 0.0, rms_residual: f64::INFINITY, converged: false };
    if y.len() < 3 || y.iter().chain(t).any(|v| !v.is_finite()) {
        return failed;
    }
    let first = y[0];
    let last = y[y.len() - 1];
    let problem = DecayProblem { t, y, p: Vector3::new(first - last, 1.0 / y.len() as f64, last) };
    let (problem, report) = LevenbergMarquardt::new().minimize(problem);
    let (mut a, mut b, c) = (problem.p[0], problem.p[1], problem.p[2]);
    if a.abs() < FLAT_AMPLITUDE {
        a = 0.0;
        b = 0.0;
    }
    let fit = ExponentialFit { a, b, c, rms_residual: 0.0, converged: false };
    let rms = (t.iter().zip(y).map(|(t, y)| (fit.eval(*t) - y).powi(2)).sum::<f64>() / y.len() as f64).sqrt();
    let finite = a.is_finite() && b.is_finite() && c.is_finite() && rms.is_finite();
    ExponentialFit {
        rms_residual: rms,
        converged: report.termination.was_successful() && finite && b >= 0.0 && rms <= rms_bound,
        ..fit
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|t| t as f64).collect()
    }

    #[test]
    fn constant_series() {
        let t = grid(51);
        let f = fit_exponential_decay(&t, &vec![1.0; 51], 1e-3);
        assert!(f.converged);
        assert_eq!(f.a, 0.0);
        assert_eq!(f.b, 0.0);
        assert_abs_diff_eq!(f.c, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn exact_data() {
        let t = grid(51);
        let y: Vec<f64> = t.iter().map(|t| 0.4 * (-0.05 * t).exp() + 0.55).collect();
        let f = fit_exponential_decay(&t, &y, 1e-3);
        assert!(f.converged);
        assert_abs_diff_eq!(f.a, 0.4, epsilon = 1e-8);
        assert_abs_diff_eq!(f.b, 0.05, epsilon = 1e-8);
        assert_abs_diff_eq!(f.c, 0.55, epsilon = 1e-8);
    }

    #[test]
    fn noisy_data_within_ten_percent() {
        let t = grid(51);
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(17);
        let noise = Normal::new(0.0, 0.005).unwrap();
        let y: Vec<f64> = t.iter().map(|t| 0.4 * (-0.05 * t).exp() + 0.55 + noise.sample(&mut rng)).collect();
        let f = fit_exponential_decay(&t, &y, 1e-2);
        assert!(f.converged);
        assert!((f.a - 0.4).abs() < 0.04);
        assert!((f.b - 0.05).abs() < 0.005);
        assert!((f.c - 0.55).abs() < 0.055);
    }

    #[test]
    fn diverging_oscillation_fails() {
        let t = grid(51);
        let y: Vec<f64> = t.iter().map(|t| 0.05 * t * if (*t as usize) % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let f = fit_exponential_decay(&t, &y, 1e-3);
        assert!(!f.converged);
    }
}
