//! Molecular integrals to qubit Hamiltonians.
//!
//! Spin-orbitals are labelled internally as `2p + σ` (σ = 0 for α, 1 for β);
//! a [`Grouping`] permutation relabels them onto qubits before encoding.

mod encoding;
mod fcidump;
mod operator;
mod problem;
mod reduction;

pub use encoding::{
    encode, encoding_matrix, grouping_permutation, hf_occupations, hf_reference, EncodingSpec,
    Grouping, Mapping,
};
pub use fcidump::{parse_fcidump, MolecularIntegrals};
pub use operator::{
    build_hamiltonian, number_operator, s_squared_operator, FermionOperator, Ladder,
};
pub use problem::{build_qubit_problem, from_encoded, scan_sectors, QubitProblem, SectorScan};
pub use reduction::{reduce_stationary_qubits, sector_references, stationary_qubits, ReducedHamiltonian};
