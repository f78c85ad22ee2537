use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::StateVector;
use crate::error::{Error, Result};

/// Reduced density matrix of one or two qubits.
///
/// Local basis index bit `k` is the state of `qubits[k]`.
pub fn rdm(state: &StateVector, qubits: &[usize]) -> Result<DMatrix<Complex64>> {
    let n = state.n_qubits();
    match qubits {
        [q] if *q < n => Ok(rdm1(state.amplitudes(), *q)),
        [a, b] if *a < n && *b < n && a != b => Ok(rdm2(state.amplitudes(), *a, *b)),
        [_] | [_, _] => Err(Error::InvalidInput(format!(
            "qubits {qubits:?} out of range or repeated for {n} qubits"
        ))),
        _ => Err(Error::InvalidInput(format!(
            "reduced density matrices support 1 or 2 qubits, got {}",
            qubits.len()
        ))),
    }
}

fn rdm1(amps: &[Complex64], q: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(2, 2);
    let bit = 1usize << q;
    for b in 0..amps.len() {
        if b & bit != 0 {
            continue;
        }
        let (a0, a1) = (amps[b], amps[b | bit]);
        m[(0, 0)] += a0 * a0.conj();
        m[(0, 1)] += a0 * a1.conj();
        m[(1, 1)] += a1 * a1.conj();
    }
    m[(1, 0)] = m[(0, 1)].conj();
    m
}

fn rdm2(amps: &[Complex64], qa: usize, qb: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(4, 4);
    let (ba, bb) = (1usize << qa, 1usize << qb);
    for b in 0..amps.len() {
        if b & (ba | bb) != 0 {
            continue;
        }
        let v = [amps[b], amps[b | ba], amps[b | bb], amps[b | ba | bb]];
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn product_state_marginal() {
        // |01⟩ with qubit 0 = 0, qubit 1 = 1
        let s = StateVector::basis(&[false, true]);
        let r = rdm(&s, &[0]).unwrap();
        assert_eq!(r[(0, 0)].re, 1.0);
        assert_eq!(r[(1, 1)].re, 0.0);
    }

    #[test]
    fn bell_marginals_are_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let s = StateVector::from_amplitudes(2, vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)])
            .unwrap();
        for q in 0..2 {
            let r = rdm(&s, &[q]).unwrap();
            assert!((r[(0, 0)].re - 0.5).abs() < 1e-15);
            assert!((r[(1, 1)].re - 0.5).abs() < 1e-15);
            assert!(r[(0, 1)].norm() < 1e-15);
        }
    }

    #[test]
    fn random_traces_and_hermiticity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.random_range(2..=6);
            let amps = (0..1 << n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let s = StateVector::from_amplitudes(n, amps).unwrap();
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            for sub in [vec![a], vec![a, b]] {
                let r = rdm(&s, &sub).unwrap();
                assert!((r.trace().re - 1.0).abs() < 1e-12);
                assert!((r.adjoint() - &r).norm() < 1e-14);
                let eig = crate::linalg::hermitian_eigenvalues(r);
                assert!(eig[0] > -1e-10);
            }
        }
    }

    #[test]
    fn bad_subsets() {
        let s = StateVector::basis(&[false, false, false]);
        assert!(rdm(&s, &[0, 1, 2]).is_err());
        assert!(rdm(&s, &[1, 1]).is_err());
        assert!(rdm(&s, &[3]).is_err());
        assert!(rdm(&s, &[]).is_err());
    }
}
