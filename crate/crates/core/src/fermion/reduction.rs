use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Hamiltonian with its stationary qubits substituted by their reference
/// eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedHamiltonian {
    pub hamiltonian: PauliSum,
    /// `(original qubit, Z eigenvalue ±1)` for each removed qubit.
    pub removed: Vec<(usize, i8)>,
    /// `index_map[new] = original` for every surviving qubit.
    pub index_map: Vec<usize>,
    /// Reference bits restricted to the surviving qubits.
    pub reference: Vec<bool>,
}

impl ReducedHamiltonian {
    pub fn n_removed(&self) -> usize {
        self.removed.len()
    }
}

/// Qubits on which every term acts as `I` or `Z`.
pub fn stationary_qubits(h: &PauliSum) -> Vec<usize> {
    let touched = h.terms().iter().fold(0u64, |acc, (_, w)| acc | w.x_mask());
    (0..h.n_qubits()).filter(|&q| touched >> q & 1 == 0).collect()
}

/// Removes every stationary qubit, replacing its `Z` by `(-1)^{reference[q]}`.
///
/// Surviving qubits are renumbered contiguously in their original order. If
/// every qubit is stationary the highest one is kept so the result still has
/// a register to act on.
pub fn reduce_stationary_qubits(h: &PauliSum, reference: &[bool]) -> Result<ReducedHamiltonian> {
    let n = h.n_qubits();
    if reference.len() != n {
        return Err(Error::QubitMismatch {
            left: n,
            right: reference.len(),
        });
    }
    let mut stationary = stationary_qubits(h);
    if stationary.len() == n {
        stationary.pop();
    }
    let removed_mask = stationary.iter().fold(0u64, |acc, &q| acc | 1 << q);
    let flip_mask = stationary
        .iter()
        .filter(|&&q| reference[q])
        .fold(0u64, |acc, &q| acc | 1 << q);
    let keep: Vec<usize> = (0..n).filter(|&q| removed_mask >> q & 1 == 0).collect();
    let terms = h.terms().iter().map(|&(c, w)| {
        let sign = if (w.z_mask() & flip_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        (c * sign, w.compress(&keep))
    });
    let hamiltonian = PauliSum::from_terms(keep.len(), terms)?;
    Ok(ReducedHamiltonian {
        hamiltonian,
        removed: stationary
            .iter()
            .map(|&q| (q, if reference[q] { -1 } else { 1 }))
            .collect(),
        reference: keep.iter().map(|&q| reference[q]).collect(),
        index_map: keep,
    })
}

/// Every assignment of the stationary qubits' bits on top of `reference`,
/// starting with `reference` itself. Used to scan all symmetry sectors.
pub fn sector_references(reference: &[bool], stationary: &[usize]) -> Vec<Vec<bool>> {
    (0..1u64 << stationary.len())
        .map(|choice| {
            let mut r = reference.to_vec();
            for (k, &q) in stationary.iter().enumerate() {
                r[q] ^= choice >> k & 1 == 1;
            }
            r
        })
        .collect()
}
