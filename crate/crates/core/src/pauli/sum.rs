use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::word::PauliWord;
use crate::error::{Error, Result};

/// Terms whose merged coefficient falls below this magnitude are dropped.
pub const COEFFICIENT_CUTOFF: f64 = 1e-12;

const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

#[inline]
pub fn i_pow(k: usize) -> Complex64 {
    I_POW[k & 3]
}

/// Real-coefficient sum of Pauli words, kept merged and sorted by the
/// canonical `(z_mask, x_mask)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliWord)>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, PauliWord)>,
    {
        let mut acc: BTreeMap<PauliWord, f64> = BTreeMap::new();
        for (c, w) in terms {
            if w.n_qubits() != n_qubits {
                return Err(Error::QubitMismatch {
                    left: n_qubits,
                    right: w.n_qubits(),
                });
            }
            *acc.entry(w).or_insert(0.0) += c;
        }
        Ok(Self::from_sorted_map(n_qubits, acc))
    }

    fn from_sorted_map(n_qubits: usize, acc: BTreeMap<PauliWord, f64>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.abs() >= COEFFICIENT_CUTOFF)
            .map(|(w, c)| (c, w))
            .collect();
        Self { n_qubits, terms }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn terms(&self) -> &[(f64, PauliWord)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &PauliWord) -> f64 {
        self.terms
            .binary_search_by(|(_, w)| w.cmp(word))
            .map(|i| self.terms[i].0)
            .unwrap_or(0.0)
    }

    /// Coefficient of the identity word.
    pub fn constant(&self) -> f64 {
        self.coefficient(&PauliWord::identity(self.n_qubits))
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Self::from_terms(
            self.n_qubits,
            self.terms.iter().chain(other.terms.iter()).copied(),
        )
    }

    pub fn scaled(&self, factor: f64) -> PauliSum {
        Self::from_terms(self.n_qubits, self.terms.iter().map(|&(c, w)| (c * factor, w)))
            .expect("same qubit count")
    }

    /// `P H P` for a Pauli word `P`: each term keeps its coefficient if it
    /// commutes with `P` and flips sign otherwise.
    pub fn conjugate_by(&self, p: &PauliWord) -> Result<PauliSum> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: p.n_qubits(),
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|&(c, w)| if w.commutes_unchecked(p) { (c, w) } else { (-c, w) })
            .collect();
        Ok(PauliSum {
            n_qubits: self.n_qubits,
            terms,
        })
    }

    /// True when every word has an even number of `Y` factors, i.e. the
    /// operator is a real symmetric matrix in the computational basis.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, w)| w.y_count() % 2 == 0)
    }

    /// Accumulates `out += H v`.
    pub fn apply_add(&self, v: &[Complex64], out: &mut [Complex64]) {
        let dim = 1usize << self.n_qubits;
        assert_eq!(v.len(), dim, "vector length does not match qubit count");
        assert_eq!(out.len(), dim);
        for &(c, w) in &self.terms {
            let x = w.x_mask() as usize;
            let z = w.z_mask() as usize;
            let base = i_pow(w.y_count()) * c;
            let neg = -base;
            for (b, &amp) in v.iter().enumerate() {
                let f = if (z & b).count_ones() & 1 == 0 { base } else { neg };
                out[b ^ x] += f * amp;
            }
        }
    }

    /// `H v` as a new vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        self.apply_add(v, &mut out);
        out
    }

    /// Dense `2^n × 2^n` matrix. Only sensible for small qubit counts.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for &(c, w) in &self.terms {
            let x = w.x_mask() as usize;
            let z = w.z_mask() as usize;
            let base = i_pow(w.y_count()) * c;
            for col in 0..dim {
                let sign = if (z & col).count_ones() & 1 == 0 { 1.0 } else { -1.0 };
                m[(col ^ x, col)] += base * sign;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, s: &str) -> PauliWord {
        PauliWord::from_str_factors(n, s)
    }

    #[test]
    fn merging_and_cutoff() {
        let s = PauliSum::from_terms(
            2,
            [
                (0.5, w(2, "Z0")),
                (0.25, w(2, "Z0")),
                (1e-13, w(2, "X1")),
                (0.1, w(2, "X0 X1")),
                (-0.1, w(2, "X0 X1")),
            ],
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(&w(2, "Z0")), 0.75);
    }

    #[test]
    fn canonical_order_is_z_then_x() {
        let s = PauliSum::from_terms(
            2,
            [(1.0, w(2, "Z1")), (1.0, w(2, "X0")), (1.0, w(2, "Z0")), (1.0, w(2, "Y0"))],
        )
        .unwrap();
        let order: Vec<String> = s.terms().iter().map(|(_, w)| w.to_string()).collect();
        assert_eq!(order, ["X0", "Z0", "Y0", "Z1"]);
    }

    #[test]
    fn conjugation_examples() {
        let z = PauliSum::from_terms(1, [(1.0, w(1, "Z0"))]).unwrap();
        let c = z.conjugate_by(&w(1, "X0")).unwrap();
        assert_eq!(c.coefficient(&w(1, "Z0")), -1.0);

        let zz = PauliSum::from_terms(2, [(1.0, w(2, "Z0 Z1"))]).unwrap();
        assert_eq!(zz.conjugate_by(&w(2, "X0 X1")).unwrap(), zz);

        let h = PauliSum::from_terms(
            3,
            [(0.3, w(3, "X0 Y1")), (-1.2, w(3, "Z2")), (0.7, PauliWord::identity(3))],
        )
        .unwrap();
        assert_eq!(h.conjugate_by(&PauliWord::identity(3)).unwrap(), h);
        assert!(h.conjugate_by(&PauliWord::identity(2)).is_err());
    }

    #[test]
    fn conjugation_is_an_involution() {
        let h = PauliSum::from_terms(
            3,
            [(0.3, w(3, "X0 Y1")), (-1.2, w(3, "Z2")), (0.5, w(3, "Y0 Y2"))],
        )
        .unwrap();
        for p in ["X0", "Y1 Z2", "X0 X1 X2"] {
            let p = w(3, p);
            let twice = h.conjugate_by(&p).unwrap().conjugate_by(&p).unwrap();
            assert_eq!(twice, h);
        }
    }

    #[test]
    fn apply_matches_dense() {
        let h = PauliSum::from_terms(
            3,
            [(0.3, w(3, "X0 Y1")), (-1.2, w(3, "Z2")), (0.5, w(3, "Y0 Y2 X1"))],
        )
        .unwrap();
        let v: Vec<Complex64> = (0..8)
            .map(|k| Complex64::new(k as f64 * 0.1 - 0.3, 0.05 * k as f64))
            .collect();
        let hv = h.apply(&v);
        let dense = h.to_dense();
        for r in 0..8 {
            let mut s = Complex64::new(0.0, 0.0);
            for c in 0..8 {
                s += dense[(r, c)] * v[c];
            }
            assert!((s - hv[r]).norm() < 1e-14);
        }
        // Hermitian
        assert!((dense.adjoint() - &dense).norm() < 1e-14);
    }
}
