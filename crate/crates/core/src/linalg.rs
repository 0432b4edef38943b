//! Real principal matrix logarithm by inverse scaling and squaring.

use nalgebra::DMatrix;
use nalgebra::linalg::Schur;

use crate::error::{Error, Result};

const SQRT_TOL: f64 = 1e-15;
const SQRT_MAX_ITER: usize = 100;
const MAX_ROOTS: usize = 64;
const SCHUR_MAX_ITER: usize = 2_000;
const ROUND_TRIP_TOL: f64 = 1e-8;

/// Denman-Beavers iteration for the principal square root.
pub fn sqrtm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = DMatrix::<f64>::identity(n, n);
    for _ in 0..SQRT_MAX_ITER {
        let yi = y.clone().try_inverse().ok_or_else(|| Error::Numerical("singular iterate in sqrtm".into()))?;
        let zi = z.clone().try_inverse().ok_or_else(|| Error::Numerical("singular iterate in sqrtm".into()))?;
        let y_next = (&y + zi) * 0.5;
        let z_next = (&z + yi) * 0.5;
        let change = (&y_next - &y).norm();
        y = y_next;
        z = z_next;
        if change <= SQRT_TOL * y.norm() {
            return Ok(y);
        }
    }
    Err(Error::Numerical("sqrtm did not converge".into()))
}

/// Fails when an eigenvalue is zero or sits on the closed negative real axis, where
/// no real principal logarithm exists.
pub fn check_log_branch(a: &DMatrix<f64>) -> Result<()> {
    let n = a.nrows();
    // Frobenius bounds the spectral radius of A - I; below 1 every eigenvalue is in the right half plane.
    if (a - DMatrix::<f64>::identity(n, n)).norm() < 1.0 {
        return Ok(());
    }
    // Unit-circle spectra can stall the real Schur iteration; logm then relies on its round-trip check.
    let Some(schur) = Schur::try_new(a.clone(), f64::EPSILON, SCHUR_MAX_ITER) else {
        return Ok(());
    };
    for lambda in schur.complex_eigenvalues().iter() {
        let r = lambda.norm();
        if r < 1e-12 {
            return Err(Error::BranchFailure(format!("eigenvalue {lambda} is (numerically) zero")));
        }
        if lambda.re < 0.0 && lambda.im.abs() <= 1e-9 * r {
            return Err(Error::BranchFailure(format!("eigenvalue {lambda} lies on the negative real axis")));
        }
    }
    Ok(())
}

pub fn logm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    check_log_branch(a)?;
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut x = a.clone();
    let mut roots = 0;
    while (&x - &id).norm() > 0.25 {
        if roots == MAX_ROOTS {
            return Err(Error::Numerical("logm: too many square roots".into()));
        }
        x = sqrtm(&x)?;
        roots += 1;
    }
    // log(I + E) = E - E^2/2 + E^3/3 - ...
    let e = &x - &id;
    let mut power = e.clone();
    let mut out = e.clone();
    for k in 2..200 {
        power = &power * &e;
        let term = &power / k as f64;
        if k % 2 == 0 {
            out -= &term;
        } else {
            out += &term;
        }
        if term.norm() < 1e-18 * out.norm().max(1e-300) {
            break;
        }
    }
    let log = out * 2f64.powi(roots as i32);
    let err = (expm(&log) - a).norm();
    if err > ROUND_TRIP_TOL * a.norm().max(1.0) {
        return Err(Error::BranchFailure(format!("exp(log A) misses A by {err:e}")));
    }
    Ok(log)
}

/// exp by scaling and squaring with a Taylor core; used to check logm.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.norm();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / 2f64.powi(s);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut out = term.clone();
    for k in 1..40 {
        term = &term * &scaled / k as f64;
        out += &term;
    }
    for _ in 0..s {
        out = &out * &out;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random(n: usize, seed: u64, scale: f64) -> DMatrix<f64> {
        use rand::Rng;
        let mut rng = crate::rng::rng_from_seed(seed);
        DMatrix::from_fn(n, n, |_, _| scale * (rng.random::<f64>() - 0.5))
    }

    #[test]
    fn identity_and_rotation() {
        let id = DMatrix::<f64>::identity(4, 4);
        assert!(logm(&id).unwrap().amax() < 1e-15);
        let th = 1.3f64;
        let r = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
        let l = logm(&r).unwrap();
        assert!((l[(0, 1)] + th).abs() < 1e-12 && (l[(1, 0)] - th).abs() < 1e-12);
        assert!(l[(0, 0)].abs() < 1e-12);
    }

    #[test]
    fn negative_axis_is_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 2.0]);
        assert!(matches!(logm(&a), Err(Error::BranchFailure(_))));
        let pi_rot = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(logm(&pi_rot), Err(Error::BranchFailure(_))));
    }

    #[test]
    fn sqrt_squares_back() {
        let a = expm(&random(6, 2, 1.0));
        let r = sqrtm(&a).unwrap();
        assert!((&r * &r - &a).amax() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn log_inverts_exp(seed in any::<u64>(), n in 1usize..9) {
            // spectrum well inside the principal strip
            let x = random(n, seed, 0.8);
            let back = logm(&expm(&x)).unwrap();
            prop_assert!((&back - &x).amax() < 1e-10);
        }
    }
}
