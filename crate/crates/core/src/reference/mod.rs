//! Reference ground states and pairwise qubit mutual information.
//!
//! Two backends produce the state the mutual information is read from: an
//! exact Lanczos solver on the dense state vector and a two-site DMRG
//! solver whose bond dimension and sweep count control how far the result
//! is from converged.

mod exact;
mod mi;
mod mpo;
mod mps;

pub use exact::{exact_ground_state, EXACT_MAX_QUBITS};
pub use mi::{entropy, mutual_information, spearman, MiMatrix, ReducedStates};
pub use mpo::{build_mpo, Mpo};
pub use mps::{mps_ground_state, DmrgOptions, MpsState};
