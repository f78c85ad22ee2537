//! Dense statevector engine. Qubit `q` is bit `q` of the basis index.

mod ansatz;
mod rdm;
mod state;

pub use ansatz::{evaluate_ansatz, gradient, Ansatz, LayerRecord};
pub use rdm::rdm;
pub use state::StateVector;
