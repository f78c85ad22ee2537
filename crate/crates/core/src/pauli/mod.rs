//! Pauli words in symplectic `(x, z)` bitmask form and real-coefficient
//! Hermitian sums of them.
//!
//! Qubit `q` is bit `q` of both masks. The factor on a qubit is `I`, `X`, `Z`
//! or `Y` for the bit pairs `(0,0)`, `(1,0)`, `(0,1)`, `(1,1)`.

mod sum;
mod text;
mod word;

pub use sum::{i_pow, PauliSum, COEFFICIENT_CUTOFF};
pub use text::{format_pauli_term, format_word_list, parse_pauli_line, parse_word_list};
pub use word::{Pauli, PauliWord, MAX_QUBITS};

pub(crate) use word::bits_of as word_bits;
