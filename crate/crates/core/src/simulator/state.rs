use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ZERO};
use crate::pauli::{PauliSum, PauliWord};

#[inline]
fn word_phase(y_count: usize) -> Complex64 {
    crate::pauli::i_pow(y_count)
}

/// Normalized state on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state with qubit `q` set iff `bits[q]`.
    pub fn basis(bits: &[bool]) -> Self {
        let n = bits.len();
        assert!((1..=30).contains(&n), "unsupported qubit count {n}");
        let index = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (q, &b)| acc | (b as usize) << q);
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { n_qubits: n, amps }
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(n_qubits: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n_qubits {
            return Err(Error::InvalidInput(format!(
                "{} amplitudes for {n_qubits} qubits",
                amps.len()
            )));
        }
        if linalg::normalize(&mut amps) == 0.0 {
            return Err(Error::InvalidInput("zero state vector".into()));
        }
        Ok(Self { n_qubits, amps })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amps)
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        linalg::dot(&self.amps, &other.amps)
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: n,
            });
        }
        Ok(())
    }

    /// `P|ψ⟩` written into `out`. `P|b⟩ = i^y (-1)^{|z & b|} |b ⊕ x⟩`.
    pub(crate) fn pauli_into(amps: &[Complex64], word: &PauliWord, out: &mut [Complex64]) {
        let x = word.x_mask() as usize;
        let z = word.z_mask() as usize;
        let ph = word_phase(word.y_count());
        for (b, &a) in amps.iter().enumerate() {
            let v = if (z & b).count_ones() & 1 == 0 { ph * a } else { -ph * a };
            out[b ^ x] = v;
        }
    }

    /// `⟨φ|P|ψ⟩` without materializing `P|ψ⟩`.
    pub(crate) fn pauli_matrix_element(
        bra: &[Complex64],
        word: &PauliWord,
        ket: &[Complex64],
    ) -> Complex64 {
        let x = word.x_mask() as usize;
        let z = word.z_mask() as usize;
        let mut even = ZERO;
        let mut odd = ZERO;
        for (b, &a) in ket.iter().enumerate() {
            let t = bra[b ^ x].conj() * a;
            if (z & b).count_ones() & 1 == 0 {
                even += t;
            } else {
                odd += t;
            }
        }
        word_phase(word.y_count()) * (even - odd)
    }

    pub fn apply_pauli(&mut self, word: &PauliWord) -> Result<()> {
        self.check(word.n_qubits())?;
        let mut out = vec![ZERO; self.amps.len()];
        Self::pauli_into(&self.amps, word, &mut out);
        self.amps = out;
        Ok(())
    }

    /// In-place `exp(-iτP)` on raw amplitudes.
    pub(crate) fn exp_in_place(amps: &mut [Complex64], word: &PauliWord, tau: f64) {
        let (s, c) = tau.sin_cos();
        let x = word.x_mask() as usize;
        let z = word.z_mask() as usize;
        let ph = word_phase(word.y_count());
        // −i·sin(τ)·phase
        let m = Complex64::new(0.0, -s) * ph;
        let sign = |b: usize| if (z & b).count_ones() & 1 == 0 { 1.0 } else { -1.0 };
        if x == 0 {
            for (b, a) in amps.iter_mut().enumerate() {
                *a *= c + m * sign(b);
            }
            return;
        }
        let hi = 63 - (x as u64).leading_zeros() as usize;
        for b in 0..amps.len() {
            // visit each pair {b, b^x} once, from the member with bit `hi` clear
            if b >> hi & 1 == 1 {
                continue;
            }
            let b2 = b ^ x;
            let (a1, a2) = (amps[b], amps[b2]);
            // (Pψ)[b] = phase(b2)·ψ[b2]
            amps[b] = a1 * c + m * sign(b2) * a2;
            amps[b2] = a2 * c + m * sign(b) * a1;
        }
    }

    /// `|ψ⟩ ← exp(-iτP)|ψ⟩ = cos τ |ψ⟩ − i sin τ P|ψ⟩`.
    pub fn apply_pauli_exponential(&mut self, word: &PauliWord, tau: f64) -> Result<()> {
        self.check(word.n_qubits())?;
        Self::exp_in_place(&mut self.amps, word, tau);
        Ok(())
    }

    pub fn pauli_expectation(&self, word: &PauliWord) -> Result<f64> {
        self.check(word.n_qubits())?;
        Ok(Self::pauli_matrix_element(&self.amps, word, &self.amps).re)
    }

    /// `⟨ψ|H|ψ⟩` in hartree.
    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        self.check(h.n_qubits())?;
        Ok(h
            .terms()
            .iter()
            .map(|(c, w)| c * Self::pauli_matrix_element(&self.amps, w, &self.amps).re)
            .sum())
    }

    /// `H|ψ⟩` (not normalized).
    pub fn apply_hamiltonian(&self, h: &PauliSum) -> Result<Vec<Complex64>> {
        self.check(h.n_qubits())?;
        Ok(h.apply(&self.amps))
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }
}
