use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliWord};
use crate::simulator::StateVector;

/// Energy of `exp(-iτP)|ψ⟩` as `A + B cos 2τ + C sin 2τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinusoid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Sinusoid {
    /// Recovers the coefficients from energies at `τ = 0, π/4, −π/4`.
    pub fn from_samples(e0: f64, e_plus: f64, e_minus: f64) -> Self {
        let a = 0.5 * (e_plus + e_minus);
        Sinusoid {
            a,
            b: e0 - a,
            c: 0.5 * (e_plus - e_minus),
        }
    }

    pub fn energy(&self, tau: f64) -> f64 {
        self.a + self.b * (2.0 * tau).cos() + self.c * (2.0 * tau).sin()
    }

    pub fn amplitude(&self) -> f64 {
        self.b.hypot(self.c)
    }

    pub fn minimum(&self) -> f64 {
        self.a - self.amplitude()
    }

    /// `E(0) − min E`, evaluated without cancellation.
    pub fn descent(&self) -> f64 {
        let r = self.amplitude();
        if self.b >= 0.0 {
            self.b + r
        } else if r - self.b > 0.0 {
            self.c * self.c / (r - self.b)
        } else {
            0.0
        }
    }

    /// Minimizer in `(−π/2, π/2]`; zero for a flat curve.
    pub fn argmin(&self) -> f64 {
        if self.amplitude() == 0.0 {
            return 0.0;
        }
        // adding 0.0 turns −0.0 into +0.0 so the boundary maps to +π/2
        0.5 * (-self.c + 0.0).atan2(-self.b + 0.0)
    }
}

/// State and Hamiltonian data reused by every trial of one adaptive step.
///
/// With `e_i = ⟨ψ|P_i|ψ⟩` for the Hamiltonian terms, `⟨ψ|PHP|ψ⟩` is
/// `Σ a_i σ_i e_i` where `σ_i = ±1` records whether `P` commutes with `P_i`,
/// so a trial costs one pass over the terms and one matrix element.
#[derive(Debug, Clone)]
pub struct FrozenState<'a> {
    hamiltonian: &'a PauliSum,
    state: StateVector,
    h_psi: Vec<Complex64>,
    energy: f64,
    term_expectations: Vec<f64>,
}

impl<'a> FrozenState<'a> {
    pub fn new(state: StateVector, hamiltonian: &'a PauliSum) -> Result<Self> {
        let h_psi = state.apply_hamiltonian(hamiltonian)?;
        let energy = crate::linalg::dot(state.amplitudes(), &h_psi).re;
        let term_expectations = hamiltonian
            .terms()
            .par_iter()
            .map(|(_, w)| StateVector::pauli_matrix_element(state.amplitudes(), w, state.amplitudes()).re)
            .collect();
        Ok(Self {
            hamiltonian,
            state,
            h_psi,
            energy,
            term_expectations,
        })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn sinusoid(&self, word: &PauliWord) -> Result<Sinusoid> {
        if word.n_qubits() != self.state.n_qubits() {
            return Err(Error::QubitMismatch {
                left: self.state.n_qubits(),
                right: word.n_qubits(),
            });
        }
        let e1: f64 = self
            .hamiltonian
            .terms()
            .iter()
            .zip(&self.term_expectations)
            .map(|((c, p), e)| if p.commutes_unchecked(word) { c * e } else { -c * e })
            .sum();
        let z = StateVector::pauli_matrix_element(&self.h_psi, word, self.state.amplitudes());
        Ok(Sinusoid {
            a: 0.5 * (self.energy + e1),
            b: 0.5 * (self.energy - e1),
            c: z.im,
        })
    }

    /// `(descent, τ*)` for appending `exp(-iτP)`.
    pub fn score(&self, word: &PauliWord) -> Result<(f64, f64)> {
        let s = self.sinusoid(word)?;
        Ok((s.descent(), s.argmin()))
    }

    /// Scores every word in parallel, preserving input order.
    pub fn score_all(&self, words: &[PauliWord]) -> Result<Vec<(f64, f64)>> {
        words.par_iter().map(|w| self.score(w)).collect()
    }
}

/// `(descent, τ*)` of a single trial entangler on `state`.
pub fn score_entangler(state: &StateVector, h: &PauliSum, word: &PauliWord) -> Result<(f64, f64)> {
    FrozenState::new(state.clone(), h)?.score(word)
}

/// The same fit from three explicit energy evaluations.
pub fn score_entangler_by_samples(state: &StateVector, h: &PauliSum, word: &PauliWord) -> Result<Sinusoid> {
    let energy_at = |tau: f64| -> Result<f64> {
        let mut s = state.clone();
        s.apply_pauli_exponential(word, tau)?;
        s.expectation(h)
    };
    let q = std::f64::consts::FRAC_PI_4;
    Ok(Sinusoid::from_samples(energy_at(0.0)?, energy_at(q)?, energy_at(-q)?))
}
