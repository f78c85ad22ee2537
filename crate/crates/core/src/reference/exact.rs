use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{lanczos_lowest, LanczosOptions};
use crate::pauli::PauliSum;
use crate::simulator::StateVector;

/// Largest register the dense Lanczos backend accepts.
pub const EXACT_MAX_QUBITS: usize = 16;

const START_SEED: u64 = 0x6c61_6e63_7a6f_7321;

/// Lowest eigenpair of `h` by Lanczos on the full state vector.
pub fn exact_ground_state(h: &PauliSum) -> Result<(f64, StateVector)> {
    let n = h.n_qubits();
    if n > EXACT_MAX_QUBITS {
        return Err(Error::InvalidInput(format!(
            "exact ground state limited to {EXACT_MAX_QUBITS} qubits, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let start: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let pair = lanczos_lowest(|v, out| h.apply_add(v, out), start, &LanczosOptions::default())?;
    let state = StateVector::from_amplitudes(n, pair.vector)?;
    Ok((pair.value, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use crate::pauli::PauliWord;

    fn w(n: usize, s: &str) -> PauliWord {
        PauliWord::from_str_factors(n, s)
    }

    #[test]
    fn minus_z() {
        let h = PauliSum::from_terms(1, [(-1.0, w(1, "Z0"))]).unwrap();
        let (e, s) = exact_ground_state(&h).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
        assert!((s.amplitudes()[0].norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn x_ground_state_is_minus() {
        let h = PauliSum::from_terms(1, [(1.0, w(1, "X0"))]).unwrap();
        let (e, s) = exact_ground_state(&h).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
        let a = s.amplitudes();
        assert!((a[0] + a[1]).norm() < 1e-9);
        assert!((a[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn matches_dense_diagonalization() {
        let h = PauliSum::from_terms(
            4,
            [
                (-0.3, w(4, "Z0")),
                (0.2, w(4, "Z1 Z3")),
                (0.17, w(4, "X0 X1 Y2 Y3")),
                (-0.05, w(4, "Y0 Y1")),
                (0.4, w(4, "X2")),
                (0.1, w(4, "Z2 Z3")),
            ],
        )
        .unwrap();
        let dense = hermitian_eigenvalues(h.to_dense())[0];
        let (e, s) = exact_ground_state(&h).unwrap();
        assert!((e - dense).abs() < 1e-9);
        let hv = h.apply(s.amplitudes());
        let r: f64 = hv
            .iter()
            .zip(s.amplitudes())
            .map(|(a, b)| (a - b * e).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(r < 1e-9);
    }

    #[test]
    fn rejects_oversized_register() {
        let h = PauliSum::zero(17);
        assert!(exact_ground_state(&h).is_err());
    }
}
