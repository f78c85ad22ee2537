//! Small dense helpers and a matrix-free Lanczos solver.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C = Complex64;

pub(crate) const ZERO: C = C::new(0.0, 0.0);

#[inline]
pub fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[inline]
pub fn norm(a: &[C]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(a: &mut [C]) -> f64 {
    let n = norm(a);
    if n > 0.0 {
        let inv = 1.0 / n;
        a.iter_mut().for_each(|x| *x *= inv);
    }
    n
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
pub fn hermitian_eigen(m: DMatrix<C>) -> (Vec<f64>, DMatrix<C>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: DMatrix<C>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Thin SVD `m = u diag(s) vt` with singular values in descending order.
pub fn svd_real(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let fm = faer::Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let svd = fm.thin_svd().expect("SVD of a finite matrix");
    let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
    let k = s.nrows();
    (
        DMatrix::from_fn(m.nrows(), k, |i, j| u[(i, j)]),
        (0..k).map(|i| s[i]).collect(),
        DMatrix::from_fn(k, m.ncols(), |i, j| v[(j, i)]),
    )
}

/// Complex counterpart of [`svd_real`]; `vt` is the conjugate transpose of `v`.
pub fn svd_complex(m: &DMatrix<C>) -> (DMatrix<C>, Vec<f64>, DMatrix<C>) {
    let fm = faer::Mat::<faer::c64>::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        faer::c64::new(z.re, z.im)
    });
    let svd = fm.thin_svd().expect("SVD of a finite matrix");
    let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
    let k = s.nrows();
    (
        DMatrix::from_fn(m.nrows(), k, |i, j| {
            let z = u[(i, j)];
            C::new(z.re, z.im)
        }),
        (0..k).map(|i| s[i].re).collect(),
        DMatrix::from_fn(k, m.ncols(), |i, j| {
            let z = v[(j, i)];
            C::new(z.re, -z.im)
        }),
    )
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Krylov vectors per cycle before restarting from the current Ritz vector.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Required `‖A x − θ x‖`.
    pub tolerance: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            krylov_dim: 80,
            max_restarts: 200,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<C>,
    pub residual: f64,
    pub matvecs: usize,
}

/// Lowest eigenpair of a Hermitian operator given only its action.
///
/// Lanczos with full reorthogonalization, restarted from the Ritz vector.
/// `start` must have a nonzero overlap with the wanted eigenvector.
pub fn lanczos_lowest<F>(mut matvec: F, start: Vec<C>, opts: &LanczosOptions) -> Result<Eigenpair>
where
    F: FnMut(&[C], &mut [C]),
{
    let dim = start.len();
    let m = opts.krylov_dim.min(dim).max(1);
    let mut x = start;
    if normalize(&mut x) == 0.0 {
        return Err(Error::InvalidInput("zero Lanczos start vector".into()));
    }
    let mut w = vec![ZERO; dim];
    let mut matvecs = 0;
    let mut last_residual = f64::INFINITY;

    for _ in 0..=opts.max_restarts {
        let mut basis: Vec<Vec<C>> = vec![x.clone()];
        let mut alpha: Vec<f64> = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        loop {
            let j = basis.len() - 1;
            w.iter_mut().for_each(|v| *v = ZERO);
            matvec(&basis[j], &mut w);
            matvecs += 1;
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            // two rounds of Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
                }
            }
            let b = norm(&w);
            let scale = alpha.iter().fold(1.0f64, |s, a| s.max(a.abs()));
            if basis.len() == m || b <= 1e-13 * scale {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|v| v / b).collect());
        }

        let k = alpha.len();
        let t = DMatrix::from_fn(k, k, |r, c| {
            if r == c {
                C::new(alpha[r], 0.0)
            } else if r + 1 == c {
                C::new(beta[r], 0.0)
            } else if c + 1 == r {
                C::new(beta[c], 0.0)
            } else {
                ZERO
            }
        });
        let (_, vecs) = hermitian_eigen(t);
        let y: DVector<C> = vecs.column(0).into_owned();
        let mut ritz = vec![ZERO; dim];
        for (i, v) in basis.iter().enumerate() {
            let yi = y[i];
            ritz.iter_mut().zip(v).for_each(|(r, vi)| *r += yi * vi);
        }
        normalize(&mut ritz);

        w.iter_mut().for_each(|v| *v = ZERO);
        matvec(&ritz, &mut w);
        matvecs += 1;
        let theta = dot(&ritz, &w).re;
        let residual = w
            .iter()
            .zip(&ritz)
            .map(|(a, r)| (a - r * theta).norm_sqr())
            .sum::<f64>()
            .sqrt();
        x = ritz;
        last_residual = residual;
        if residual < opts.tolerance {
            return Ok(Eigenpair {
                value: theta,
                vector: x,
                residual,
                matvecs,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: matvecs,
        residual: last_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lanczos_finds_lowest_of_diagonal_plus_coupling() {
        let dim = 50;
        let a = DMatrix::from_fn(dim, dim, |r, c| {
            if r == c {
                C::new(r as f64 * 0.37 - 3.0, 0.0)
            } else if r.abs_diff(c) == 1 {
                C::new(0.2, 0.0)
            } else if r.abs_diff(c) == 3 {
                C::new(0.0, 0.05 * if r > c { 1.0 } else { -1.0 })
            } else {
                ZERO
            }
        });
        let exact = hermitian_eigenvalues(a.clone());
        let start: Vec<C> = (0..dim).map(|i| C::new(1.0 + (i as f64).sin(), 0.0)).collect();
        let opts = LanczosOptions {
            krylov_dim: 12,
            ..Default::default()
        };
        let pair = lanczos_lowest(
            |v, out| {
                for r in 0..dim {
                    out[r] = (0..dim).map(|c| a[(r, c)] * v[c]).sum();
                }
            },
            start,
            &opts,
        )
        .unwrap();
        assert!((pair.value - exact[0]).abs() < 1e-10);
        assert!(pair.residual < 1e-9);
    }

    #[test]
    fn lanczos_handles_tiny_spaces() {
        // 1x1 and an invariant start vector
        let pair = lanczos_lowest(
            |v, out| out[0] = v[0] * 2.5,
            vec![C::new(1.0, 0.0)],
            &LanczosOptions::default(),
        )
        .unwrap();
        assert!((pair.value - 2.5).abs() < 1e-14);
    }

    #[test]
    fn svd_reconstructs_rank_deficient_matrices() {
        // duplicated rows and many zero columns, as in term-by-term MPO sums
        let m = DMatrix::from_fn(60, 16, |r, c| if (r % 7) == c % 5 { 1.0 + (r / 7) as f64 * 0.0 } else { 0.0 });
        let (u, s, vt) = svd_real(&m);
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
        let rec = &u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(s)) * &vt;
        assert!((rec - &m).norm() < 1e-12);

        let mc = DMatrix::from_fn(9, 13, |r, c| C::new(((r * c) % 3) as f64, (r as f64 - c as f64).sin()));
        let (u, s, vt) = svd_complex(&mc);
        let sd = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(s.len(), s.iter().map(|&x| C::new(x, 0.0))));
        assert!((&u * sd * &vt - &mc).norm() < 1e-12);
        assert!(((u.adjoint() * &u) - DMatrix::identity(s.len(), s.len())).norm() < 1e-12);
    }

    #[test]
    fn eigen_sorted() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(0.0, -1.0), C::new(1.0, 0.0)],
        );
        let (vals, _) = hermitian_eigen(m);
        assert!((vals[0] - 0.0).abs() < 1e-14 && (vals[1] - 2.0).abs() < 1e-14);
    }
}
