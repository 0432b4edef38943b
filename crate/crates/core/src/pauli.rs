//! Pauli strings. The leftmost letter acts on qubit 0, so `IIX` is X on qubit 2.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    pub fn from_index(i: usize) -> Pauli {
        Pauli::ALL[i & 3]
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    fn phases(self) -> bool {
        matches!(self, Pauli::Y | Pauli::Z)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters }
    }

    pub fn identity(n: usize) -> Self {
        Self { letters: vec![Pauli::I; n] }
    }

    /// Single letter `p` on `site`, identity elsewhere.
    pub fn single(n: usize, site: usize, p: Pauli) -> Self {
        let mut letters = vec![Pauli::I; n];
        letters[site] = p;
        Self { letters }
    }

    /// Base-4 index with qubit 0 as the least significant digit.
    pub fn from_index(index: usize, n: usize) -> Self {
        let letters = (0..n).map(|k| Pauli::from_index(index >> (2 * k))).collect();
        Self { letters }
    }

    pub fn index(&self) -> usize {
        self.letters
            .iter()
            .enumerate()
            .map(|(k, p)| p.index() << (2 * k))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(k, _)| k)
    }

    pub fn x_mask(&self) -> usize {
        self.mask(Pauli::flips)
    }

    pub fn z_mask(&self) -> usize {
        self.mask(Pauli::phases)
    }

    fn mask(&self, f: fn(Pauli) -> bool) -> usize {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| f(p))
            .fold(0, |m, (k, _)| m | (1 << k))
    }

    pub fn y_count(&self) -> usize {
        self.letters.iter().filter(|&&p| p == Pauli::Y).count()
    }

    /// i^{#Y}; the phase picked up on top of the (-1)^{x.z} sign.
    pub fn y_phase(&self) -> Complex64 {
        match self.y_count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// P|x> = phase |x'>.
    pub fn apply_to_basis(&self, x: usize) -> (Complex64, usize) {
        let zm = self.z_mask();
        let sign = if (x & zm).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        (self.y_phase() * sign, x ^ self.x_mask())
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.len();
        let mut m = DMatrix::zeros(dim, dim);
        for x in 0..dim {
            let (ph, y) = self.apply_to_basis(x);
            m[(y, x)] = ph;
        }
        m
    }

    /// Checks that the string fits an `n`-qubit register.
    pub fn check_sites(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::InvalidConfig(format!(
                "Pauli string {self} has {} letters for a {n}-qubit chain",
                self.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidConfig(format!("bad Pauli letter '{other}' in \"{s}\""))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::InvalidConfig("empty Pauli string".into()));
        }
        Ok(Self { letters })
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn single_matrix(p: Pauli) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match p {
            Pauli::I => [[one, o], [o, one]],
            Pauli::X => [[o, one], [one, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[one, o], [o, -one]],
        }
    }

    #[test]
    fn parse_roundtrip_and_weight() {
        let p: PauliString = "IXYZ".parse().unwrap();
        assert_eq!(p.to_string(), "IXYZ");
        assert_eq!(p.weight(), 3);
        assert!("IQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn leftmost_letter_is_qubit_zero() {
        let p: PauliString = "IIX".parse().unwrap();
        assert_eq!(p.x_mask(), 0b100);
        assert_eq!(p.support().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn index_roundtrip() {
        for idx in 0..64 {
            assert_eq!(PauliString::from_index(idx, 3).index(), idx);
        }
    }

    #[test]
    fn matrix_matches_kronecker_product() {
        // brute-force element-wise product over qubits, qubit k = bit k
        for idx in 0..16 {
            let p = PauliString::from_index(idx, 2);
            let m = p.matrix();
            for row in 0..4 {
                for col in 0..4 {
                    let mut v = Complex64::new(1.0, 0.0);
                    for (k, &l) in p.letters().iter().enumerate() {
                        let s = single_matrix(l);
                        v *= s[(row >> k) & 1][(col >> k) & 1];
                    }
                    assert_abs_diff_eq!(m[(row, col)].re, v.re, epsilon = 1e-15);
                    assert_abs_diff_eq!(m[(row, col)].im, v.im, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn commutation() {
        let a: PauliString = "XX".parse().unwrap();
        let b: PauliString = "ZZ".parse().unwrap();
        let c: PauliString = "ZI".parse().unwrap();
        assert!(a.commutes_with(&b));
        assert!(!a.commutes_with(&c));
    }

    #[test]
    fn serde_as_string() {
        let p: PauliString = "XYZ".parse().unwrap();
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, "\"XYZ\"");
        let back: PauliString = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }
}
