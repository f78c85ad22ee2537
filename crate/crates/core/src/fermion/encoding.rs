use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::FermionOperator;
use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mapping {
    #[serde(alias = "jw")]
    JordanWigner,
    Parity,
    #[serde(alias = "bk")]
    BravyiKitaev,
}

impl Mapping {
    pub const ALL: [Mapping; 3] = [Mapping::JordanWigner, Mapping::Parity, Mapping::BravyiKitaev];

    pub fn short_name(self) -> &'static str {
        match self {
            Mapping::JordanWigner => "jw",
            Mapping::Parity => "parity",
            Mapping::BravyiKitaev => "bk",
        }
    }
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mapping::JordanWigner => "jordan_wigner",
            Mapping::Parity => "parity",
            Mapping::BravyiKitaev => "bravyi_kitaev",
        })
    }
}

impl FromStr for Mapping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jw" | "jordan_wigner" | "jordan-wigner" => Ok(Mapping::JordanWigner),
            "parity" => Ok(Mapping::Parity),
            "bk" | "bravyi_kitaev" | "bravyi-kitaev" => Ok(Mapping::BravyiKitaev),
            other => Err(Error::InvalidInput(format!("unknown mapping {other:?}"))),
        }
    }
}

/// Spin-orbital ordering on the qubit register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    /// α and β alternate: `α0 β0 α1 β1 …`.
    Abab,
    /// All α first: `α0 α1 … β0 β1 …`.
    Aabb,
}

impl Grouping {
    pub const ALL: [Grouping; 2] = [Grouping::Abab, Grouping::Aabb];
}

impl fmt::Display for Grouping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grouping::Abab => "abab",
            Grouping::Aabb => "aabb",
        })
    }
}

impl FromStr for Grouping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "abab" => Ok(Grouping::Abab),
            "aabb" => Ok(Grouping::Aabb),
            other => Err(Error::InvalidInput(format!("unknown grouping {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingSpec {
    pub mapping: Mapping,
    pub grouping: Grouping,
    pub reduce_stationary: bool,
}

/// `perm[2p + σ]` is the qubit index of spatial orbital `p` with spin `σ`.
pub fn grouping_permutation(n_orbitals: usize, grouping: Grouping) -> Vec<usize> {
    let mut perm = vec![0; 2 * n_orbitals];
    for p in 0..n_orbitals {
        for s in 0..2 {
            perm[2 * p + s] = match grouping {
                Grouping::Abab => 2 * p + s,
                Grouping::Aabb => p + s * n_orbitals,
            };
        }
    }
    perm
}

/// Binary matrix `M` (row-major bitmasks, `rows[i]` bit `j`) with qubit
/// values `b = M f mod 2` for occupation vector `f`.
///
/// Bravyi-Kitaev uses the Fenwick layout: qubit `j` stores the parity of
/// orbitals `(j+1) - lowbit(j+1) ..= j`, which is the power-of-two binary-tree
/// matrix truncated to `n` modes.
pub fn encoding_matrix(mapping: Mapping, n_modes: usize) -> Vec<u64> {
    (0..n_modes)
        .map(|i| match mapping {
            Mapping::JordanWigner => 1u64 << i,
            Mapping::Parity => (1u64 << (i + 1)) - 1,
            Mapping::BravyiKitaev => {
                let k = i + 1;
                let low = k & k.wrapping_neg();
                let first = k - low;
                ((1u64 << (i + 1)) - 1) & !((1u64 << first) - 1)
            }
        })
        .collect()
}

/// Inverse of a unit lower-triangular matrix over GF(2), by forward
/// substitution.
fn invert_unit_lower(rows: &[u64]) -> Vec<u64> {
    let n = rows.len();
    let mut inv = vec![0u64; n];
    for i in 0..n {
        // f_i = b_i + Σ_{j<i} M_ij f_j
        let mut r = 1u64 << i;
        let below = rows[i] & ((1u64 << i) - 1);
        for j in crate::pauli::word_bits(below) {
            r ^= inv[j];
        }
        inv[i] = r;
    }
    inv
}

fn apply_matrix(rows: &[u64], f: u64) -> u64 {
    rows.iter()
        .enumerate()
        .fold(0, |acc, (i, &r)| acc | (((r & f).count_ones() as u64) & 1) << i)
}

type CSum = HashMap<PauliWord, Complex64>;

const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Qubit form of `a_j` and `a†_j` for every mode:
/// `a_j = X_{col_j(M)} Z_{parity_j} (I − Z_{row_j(M⁻¹)}) / 2`.
fn ladder_table(mapping: Mapping, n: usize) -> Vec<[Vec<(Complex64, PauliWord)>; 2]> {
    let m = encoding_matrix(mapping, n);
    let inv = invert_unit_lower(&m);
    (0..n)
        .map(|j| {
            let col = (0..n).fold(0u64, |acc, i| acc | (m[i] >> j & 1) << i);
            let parity = inv[..j].iter().fold(0u64, |acc, r| acc ^ r);
            let occ = inv[j];
            let x = PauliWord::from_masks(n, col, 0).unwrap();
            let zp = PauliWord::from_masks(n, 0, parity).unwrap();
            let zo = PauliWord::from_masks(n, 0, occ).unwrap();
            let (ph1, w1) = x.multiply_unchecked(&zp);
            let (ph2, w2) = w1.multiply_unchecked(&zo);
            let c1 = I_POW[ph1 as usize] * 0.5;
            let c2 = -I_POW[((ph1 + ph2) % 4) as usize] * 0.5;
            let annihilate = vec![(c1, w1), (c2, w2)];
            let create = vec![(c1.conj(), w1), (c2.conj(), w2)];
            [annihilate, create]
        })
        .collect()
}

/// Encodes a Hermitian fermion operator on `n` modes as an `n`-qubit
/// [`PauliSum`]. Modes map to qubits one-to-one in index order.
pub fn encode(op: &FermionOperator, mapping: Mapping) -> Result<PauliSum> {
    let n = op.n_modes();
    if n == 0 || n > crate::pauli::MAX_QUBITS {
        return Err(Error::InvalidInput(format!("cannot encode {n} modes")));
    }
    let table = ladder_table(mapping, n);
    let identity = PauliWord::identity(n);
    let mut total: CSum = HashMap::new();
    let mut cur: CSum = HashMap::new();
    let mut next: CSum = HashMap::new();
    for (c, ops) in op.terms() {
        cur.clear();
        cur.insert(identity, Complex64::new(c, 0.0));
        for l in ops {
            next.clear();
            let factor = &table[l.mode][l.dagger as usize];
            for (w, &a) in &cur {
                for &(b, v) in factor {
                    let (ph, p) = w.multiply_unchecked(&v);
                    *next.entry(p).or_default() += a * b * I_POW[ph as usize];
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        for (w, a) in cur.drain() {
            *total.entry(w).or_default() += a;
        }
    }
    let residue = total.values().map(|c| c.im.abs()).fold(0.0, f64::max);
    if residue > 1e-10 {
        return Err(Error::NonHermitian(residue));
    }
    PauliSum::from_terms(n, total.into_iter().map(|(w, c)| (c.re, w)))
}

/// Occupied modes of the Hartree-Fock determinant after grouping: the
/// lowest `n_alpha` α and `n_beta` β spatial orbitals.
pub fn hf_occupations(
    n_orbitals: usize,
    n_alpha: usize,
    n_beta: usize,
    grouping: Grouping,
) -> Vec<bool> {
    let perm = grouping_permutation(n_orbitals, grouping);
    let mut occ = vec![false; 2 * n_orbitals];
    for p in 0..n_alpha {
        occ[perm[2 * p]] = true;
    }
    for p in 0..n_beta {
        occ[perm[2 * p + 1]] = true;
    }
    occ
}

/// Computational-basis bits of an occupation vector under a mapping.
pub fn hf_reference(mapping: Mapping, occupations: &[bool], n_electrons: usize) -> Result<Vec<bool>> {
    let found = occupations.iter().filter(|&&b| b).count();
    if found != n_electrons {
        return Err(Error::ElectronCount {
            expected: n_electrons,
            found,
        });
    }
    let n = occupations.len();
    let f = occupations
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | (b as u64) << i);
    let b = apply_matrix(&encoding_matrix(mapping, n), f);
    Ok((0..n).map(|i| b >> i & 1 == 1).collect())
}
