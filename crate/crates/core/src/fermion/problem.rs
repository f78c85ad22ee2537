use serde::{Deserialize, Serialize};

use super::encoding::{encode, grouping_permutation, hf_occupations, hf_reference, EncodingSpec};
use super::fcidump::MolecularIntegrals;
use super::operator::{build_hamiltonian, s_squared_operator};
use super::reduction::{reduce_stationary_qubits, sector_references, stationary_qubits};
use crate::error::Result;
use crate::pauli::PauliSum;

/// A qubit Hamiltonian with its Hartree-Fock reference, before and after
/// stationary-qubit removal.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitProblem {
    /// Encoded Hamiltonian on all `2 n_orbitals` qubits.
    pub full_hamiltonian: PauliSum,
    pub full_reference: Vec<bool>,
    /// Hamiltonian the adaptive run works on.
    pub hamiltonian: PauliSum,
    pub reference: Vec<bool>,
    /// `index_map[working] = full` qubit index.
    pub index_map: Vec<usize>,
    /// `(full qubit, Z eigenvalue)` of each removed qubit.
    pub removed: Vec<(usize, i8)>,
}

impl QubitProblem {
    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.n_qubits()
    }

    pub fn n_full_qubits(&self) -> usize {
        self.full_hamiltonian.n_qubits()
    }

    pub fn is_reduced(&self) -> bool {
        !self.removed.is_empty()
    }
}

/// Encodes `ints` per `spec`, optionally adding `λ S²` first.
pub fn build_qubit_problem(
    ints: &MolecularIntegrals,
    spec: &EncodingSpec,
    spin_penalty: Option<f64>,
) -> Result<QubitProblem> {
    let mut op = build_hamiltonian(ints);
    if let Some(lambda) = spin_penalty {
        op = op.add(&s_squared_operator(ints.n_orbitals).scaled(lambda));
    }
    let perm = grouping_permutation(ints.n_orbitals, spec.grouping);
    let op = op.permuted(&perm)?;
    let full_hamiltonian = encode(&op, spec.mapping)?;
    let occ = hf_occupations(ints.n_orbitals, ints.n_alpha(), ints.n_beta(), spec.grouping);
    let full_reference = hf_reference(spec.mapping, &occ, ints.n_electrons)?;
    from_encoded(full_hamiltonian, full_reference, spec.reduce_stationary)
}

/// Wraps an already encoded Hamiltonian, removing stationary qubits if asked.
pub fn from_encoded(full_hamiltonian: PauliSum, full_reference: Vec<bool>, reduce: bool) -> Result<QubitProblem> {
    if reduce {
        let r = reduce_stationary_qubits(&full_hamiltonian, &full_reference)?;
        Ok(QubitProblem {
            full_hamiltonian,
            full_reference,
            hamiltonian: r.hamiltonian,
            reference: r.reference,
            index_map: r.index_map,
            removed: r.removed,
        })
    } else {
        let n = full_hamiltonian.n_qubits();
        Ok(QubitProblem {
            hamiltonian: full_hamiltonian.clone(),
            reference: full_reference.clone(),
            full_hamiltonian,
            full_reference,
            index_map: (0..n).collect(),
            removed: Vec::new(),
        })
    }
}

/// Lowest energy of each stationary-qubit sector, HF sector first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorScan {
    pub energies: Vec<f64>,
    /// Index of the lowest sector; 0 is the Hartree-Fock sector.
    pub lowest: usize,
}

/// Ground energy in every sector of the stationary qubits of `h` using
/// `solver` on each reduced Hamiltonian.
pub fn scan_sectors<F>(h: &PauliSum, reference: &[bool], mut solver: F) -> Result<SectorScan>
where
    F: FnMut(&PauliSum) -> Result<f64>,
{
    let stationary = stationary_qubits(h);
    let energies = sector_references(reference, &stationary)
        .iter()
        .map(|r| solver(&reduce_stationary_qubits(h, r)?.hamiltonian))
        .collect::<Result<Vec<f64>>>()?;
    let lowest = (0..energies.len())
        .min_by(|&a, &b| energies[a].total_cmp(&energies[b]))
        .unwrap_or(0);
    Ok(SectorScan { energies, lowest })
}
