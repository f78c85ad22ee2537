use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("FCIDUMP: {0}")]
    Fcidump(String),

    #[error("operator is not Hermitian (imaginary residue {0:e})")]
    NonHermitian(f64),

    #[error("expected {expected} electrons in the reference occupation, found {found}")]
    ElectronCount { expected: usize, found: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("density matrix trace {0} deviates from 1")]
    Trace(f64),

    #[error("empty screened pool: p_cut {p_cut} keeps no entangler out of {pool_size}")]
    EmptyPool { p_cut: f64, pool_size: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
