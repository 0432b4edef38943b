//! Pfaffian of a complex antisymmetric matrix by Parlett-Reid reduction with
//! partial pivoting (the LTL^T scheme).

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Pfaffian of the row-major `n x n` antisymmetric matrix in `a`. The buffer is
/// overwritten.
pub fn pfaffian_in_place(a: &mut [Complex64], n: usize) -> Complex64 {
    assert_eq!(a.len(), n * n, "buffer does not hold an n x n matrix");
    if n % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let mut pf = Complex64::new(1.0, 0.0);
    let mut tau = vec![Complex64::new(0.0, 0.0); n];
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut k = 0;
    while k + 1 < n {
        // pivot: largest entry in column k below the diagonal
        let mut kp = k + 1;
        let mut best = a[(k + 1) * n + k].norm();
        for i in k + 2..n {
            let m = a[i * n + k].norm();
            if m > best {
                best = m;
                kp = i;
            }
        }
        if kp != k + 1 {
            for col in 0..n {
                a.swap((k + 1) * n + col, kp * n + col);
            }
            for row in 0..n {
                a.swap(row * n + k + 1, row * n + kp);
            }
            pf = -pf;
        }
        let piv = a[k * n + k + 1];
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        pf *= piv;
        if k + 2 < n {
            for i in k + 2..n {
                tau[i] = a[k * n + i] / piv;
                w[i] = a[i * n + k + 1];
            }
            for i in k + 2..n {
                let (ti, wi) = (tau[i], w[i]);
                let row = &mut a[i * n..(i + 1) * n];
                for j in k + 2..n {
                    row[j] += ti * w[j] - wi * tau[j];
                }
            }
        }
        k += 2;
    }
    pf
}

pub fn pfaffian(a: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "Pfaffian needs a square matrix");
    let mut buf: Vec<Complex64> = (0..n * n).map(|idx| a[(idx / n, idx % n)]).collect();
    pfaffian_in_place(&mut buf, n)
}
