//! Core algorithms for mutual-information assisted adaptive VQE with a
//! qubit-coupled-cluster (QCC) entangler pool.
//!
//! The pipeline runs from molecular integrals to a screened adaptive ansatz:
//!
//! 1. [`fermion`] reads FCIDUMP integrals, builds the second-quantized
//!    Hamiltonian and encodes it into a [`PauliSum`] (Jordan-Wigner, parity or
//!    Bravyi-Kitaev), optionally removing stationary qubits.
//! 2. [`reference`] approximates the ground state (exact Lanczos or a
//!    bond-limited MPS from DMRG) and computes the pairwise qubit mutual
//!    information.
//! 3. [`screening`] enumerates the QCC pool, scores each word by correlation
//!    strength and cuts it at a percentile.
//! 4. [`adaptive`] grows the ansatz one entangler at a time on the
//!    [`simulator`] and reports the screening rates `p_max` and `p_avg`.

pub mod adaptive;
pub mod error;
pub mod format;
pub mod fermion;
pub mod linalg;
pub mod pauli;
pub mod reference;
pub mod screening;
pub mod simulator;

pub use adaptive::{
    run_adaptive, AdaptiveConfig, AdaptiveProblem, Baseline, OptimizerConfig, RunReport, StepRecord,
    StopReason,
};
pub use error::{Error, Result};
pub use fermion::{
    EncodingSpec, FermionOperator, Grouping, Mapping, MolecularIntegrals, ReducedHamiltonian,
};
pub use pauli::{PauliSum, PauliWord};
pub use reference::{MiMatrix, MpsState};
pub use screening::{EntanglerPool, PercentileTable, PoolProvenance, ScoredEntangler};
pub use simulator::{Ansatz, StateVector};

pub use num_complex::Complex64;
