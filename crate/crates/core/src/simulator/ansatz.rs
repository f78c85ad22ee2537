use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliWord};

/// Product of Pauli exponentials applied to a basis reference,
/// `∏ exp(-iτ_k P_k) |ref⟩` with layer 0 applied first.
#[derive(Debug, Clone, PartialEq)]
pub struct Ansatz {
    pub reference: Vec<bool>,
    pub layers: Vec<(PauliWord, f64)>,
}

/// Serializable layer listing: word text and angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub word: String,
    pub tau: f64,
}

impl Ansatz {
    pub fn new(reference: Vec<bool>) -> Self {
        Self {
            reference,
            layers: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.reference.len()
    }

    pub fn parameters(&self) -> Vec<f64> {
        self.layers.iter().map(|(_, t)| *t).collect()
    }

    pub fn set_parameters(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.layers.len());
        for (layer, &t) in self.layers.iter_mut().zip(params) {
            layer.1 = t;
        }
    }

    pub fn push(&mut self, word: PauliWord, tau: f64) {
        self.layers.push((word, tau));
    }

    pub fn state(&self) -> Result<StateVector> {
        let mut s = StateVector::basis(&self.reference);
        for (w, t) in &self.layers {
            s.apply_pauli_exponential(w, *t)?;
        }
        Ok(s)
    }

    fn check(&self, h: &PauliSum) -> Result<()> {
        if h.n_qubits() != self.n_qubits() {
            return Err(Error::QubitMismatch {
                left: self.n_qubits(),
                right: h.n_qubits(),
            });
        }
        if let Some((w, _)) = self.layers.iter().find(|(w, _)| w.n_qubits() != self.n_qubits()) {
            return Err(Error::QubitMismatch {
                left: self.n_qubits(),
                right: w.n_qubits(),
            });
        }
        Ok(())
    }

    /// Energy and gradient with one forward and one reverse sweep.
    ///
    /// With `λ = U_{k+1}† … U_N† H |ψ_N⟩` and `|ψ_k⟩` the state after layer
    /// `k`, `∂E/∂τ_k = 2 Im ⟨λ|P_k|ψ_k⟩`.
    pub fn energy_and_gradient(&self, h: &PauliSum) -> Result<(f64, Vec<f64>)> {
        self.check(h)?;
        let mut psi = self.state()?;
        let mut lambda = psi.apply_hamiltonian(h)?;
        let energy = crate::linalg::dot(psi.amplitudes(), &lambda).re;
        let mut grad = vec![0.0; self.layers.len()];
        for (k, (w, t)) in self.layers.iter().enumerate().rev() {
            let z: Complex64 = StateVector::pauli_matrix_element(&lambda, w, psi.amplitudes());
            grad[k] = 2.0 * z.im;
            StateVector::exp_in_place(psi.amps_mut(), w, -t);
            StateVector::exp_in_place(&mut lambda, w, -t);
        }
        Ok((energy, grad))
    }

    pub fn layer_records(&self) -> Vec<LayerRecord> {
        self.layers
            .iter()
            .map(|(w, t)| LayerRecord {
                word: w.to_string(),
                tau: *t,
            })
            .collect()
    }
}

/// Applies the layers to the reference and returns `(⟨H⟩, state)`.
pub fn evaluate_ansatz(ansatz: &Ansatz, h: &PauliSum) -> Result<(f64, StateVector)> {
    ansatz.check(h)?;
    let s = ansatz.state()?;
    let e = s.expectation(h)?;
    Ok((e, s))
}

/// `∂E/∂τ_k` for every layer by the adjoint method.
pub fn gradient(ansatz: &Ansatz, h: &PauliSum) -> Result<Vec<f64>> {
    ansatz.energy_and_gradient(h).map(|(_, g)| g)
}
