use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::{round12, sig12};
use crate::linalg::hermitian_eigenvalues;
use crate::simulator::{rdm, StateVector};

const TRACE_TOLERANCE: f64 = 1e-8;
const ZERO_PROBABILITY: f64 = 1e-12;
const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DMatrix<Complex64>) -> Result<f64> {
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::Trace(trace));
    }
    Ok(hermitian_eigenvalues(rho.clone())
        .into_iter()
        .map(|p| p.clamp(0.0, 1.0))
        .filter(|&p| p > ZERO_PROBABILITY)
        .map(|p| -p * p.log2())
        .sum())
}

/// States that expose one- and two-qubit reduced density matrices.
pub trait ReducedStates {
    fn n_qubits(&self) -> usize;
    fn reduced(&self, qubits: &[usize]) -> Result<DMatrix<Complex64>>;
}

impl ReducedStates for StateVector {
    fn n_qubits(&self) -> usize {
        StateVector::n_qubits(self)
    }

    fn reduced(&self, qubits: &[usize]) -> Result<DMatrix<Complex64>> {
        rdm(self, qubits)
    }
}

/// Pairwise `I_ij = ½(S_i + S_j − S_ij)` over every qubit pair.
pub fn mutual_information<S: ReducedStates + Sync>(state: &S) -> Result<MiMatrix> {
    let n = state.n_qubits();
    let singles: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|q| entropy(&state.reduced(&[q])?))
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let joint: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| entropy(&state.reduced(&[i, j])?))
        .collect::<Result<_>>()?;
    let mut values = vec![0.0; n * n];
    for (&(i, j), s_ij) in pairs.iter().zip(joint) {
        let v = (0.5 * (singles[i] + singles[j] - s_ij)).clamp(0.0, 1.0);
        values[i * n + j] = v;
        values[j * n + i] = v;
    }
    Ok(MiMatrix { n_qubits: n, values })
}

/// Symmetric matrix of pairwise mutual information in bits.
///
/// Entries are non-negative, at most one, and zero on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct MiMatrix {
    n_qubits: usize,
    values: Vec<f64>,
}

impl MiMatrix {
    pub fn zeros(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            values: vec![0.0; n_qubits * n_qubits],
        }
    }

    /// Builds a matrix from row-major entries, validating the invariants.
    pub fn from_entries(n_qubits: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n_qubits * n_qubits {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for {n_qubits} qubits, got {}",
                n_qubits * n_qubits,
                values.len()
            )));
        }
        let mut m = Self { n_qubits, values };
        for i in 0..n_qubits {
            for j in 0..n_qubits {
                let v = m.values[i * n_qubits + j];
                if !v.is_finite() || !(-SYMMETRY_TOLERANCE..=1.0 + SYMMETRY_TOLERANCE).contains(&v) {
                    return Err(Error::InvalidInput(format!("entry ({i},{j}) = {v} outside [0, 1]")));
                }
                if i == j && v.abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::InvalidInput(format!("nonzero diagonal entry ({i},{i}) = {v}")));
                }
                if (v - m.values[j * n_qubits + i]).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::InvalidInput(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        for i in 0..n_qubits {
            m.values[i * n_qubits + i] = 0.0;
            for j in 0..i {
                let v = (0.5 * (m.values[i * n_qubits + j] + m.values[j * n_qubits + i])).clamp(0.0, 1.0);
                m.values[i * n_qubits + j] = v;
                m.values[j * n_qubits + i] = v;
            }
        }
        Ok(m)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_qubits + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_entry(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Every entry multiplied by `factor`, which must keep entries in `[0, 1]`.
    pub fn scaled(&self, factor: f64) -> Result<MiMatrix> {
        if !(factor > 0.0) || self.max_entry() * factor > 1.0 + SYMMETRY_TOLERANCE {
            return Err(Error::InvalidInput(format!("scale factor {factor} leaves [0, 1]")));
        }
        Ok(MiMatrix {
            n_qubits: self.n_qubits,
            values: self.values.iter().map(|v| (v * factor).min(1.0)).collect(),
        })
    }

    /// Places this matrix on the qubits `index_map` of an `n_full` register;
    /// rows and columns of the other qubits are zero.
    pub fn embed(&self, index_map: &[usize], n_full: usize) -> Result<MiMatrix> {
        if index_map.len() != self.n_qubits || index_map.iter().any(|&q| q >= n_full) {
            return Err(Error::InvalidInput("index map does not fit the target register".into()));
        }
        let mut out = MiMatrix::zeros(n_full);
        for (i, &fi) in index_map.iter().enumerate() {
            for (j, &fj) in index_map.iter().enumerate() {
                out.values[fi * n_full + fj] = self.get(i, j);
            }
        }
        Ok(out)
    }

    /// Every entry rounded to the 12 significant digits written by
    /// [`to_csv`](Self::to_csv), so `from_csv(to_csv(m)) == m.rounded()`.
    pub fn rounded(&self) -> MiMatrix {
        MiMatrix {
            n_qubits: self.n_qubits,
            values: self.values.iter().map(|&v| round12(v)).collect(),
        }
    }

    /// Square CSV, one row per qubit.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n_qubits {
            let row: Vec<String> = (0..self.n_qubits).map(|j| sig12(self.get(i, j))).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<MiMatrix> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::parse(k + 1, format!("bad MI entry {f:?}: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("MI CSV is not square".into()));
        }
        MiMatrix::from_entries(n, rows.into_iter().flatten().collect())
    }
}

/// Spearman rank correlation with average ranks for ties.
///
/// `None` when either input is constant or the lengths differ.
pub fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let mean = (a.len() as f64 + 1.0) / 2.0;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        let (dx, dy) = (x - mean, y - mean);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some(sab / (saa * sbb).sqrt())
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut out = vec![0.0; v.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && v[order[end]] == v[order[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            out[i] = avg;
        }
        start = end;
    }
    out
}
