use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Masks are stored in a `u64`.
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Z => (false, true),
            Pauli::Y => (true, true),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// An n-qubit Pauli word without phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliWord {
    n_qubits: usize,
    x: u64,
    z: u64,
}

#[inline]
fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliWord {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(
            (1..=MAX_QUBITS).contains(&n_qubits),
            "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
        );
        Self {
            n_qubits,
            x: 0,
            z: 0,
        }
    }

    pub fn from_masks(n_qubits: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidInput(format!(
                "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        let m = full_mask(n_qubits);
        if (x_mask | z_mask) & !m != 0 {
            return Err(Error::InvalidInput(format!(
                "masks x={x_mask:#b} z={z_mask:#b} exceed {n_qubits} qubits"
            )));
        }
        Ok(Self {
            n_qubits,
            x: x_mask,
            z: z_mask,
        })
    }

    /// Builds a word from `(qubit, factor)` pairs. Each qubit may appear once.
    pub fn from_factors(n_qubits: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut w = Self::from_masks(n_qubits, 0, 0)?;
        let mut seen = 0u64;
        for &(q, p) in factors {
            if q >= n_qubits {
                return Err(Error::InvalidInput(format!(
                    "qubit index {q} out of range for {n_qubits} qubits"
                )));
            }
            if seen >> q & 1 == 1 {
                return Err(Error::InvalidInput(format!("duplicate qubit index {q}")));
            }
            seen |= 1 << q;
            let (xb, zb) = p.bits();
            w.x |= (xb as u64) << q;
            w.z |= (zb as u64) << q;
        }
        Ok(w)
    }

    /// Same as [`from_factors`](Self::from_factors) but panics on bad input.
    /// Meant for tests and literals.
    pub fn from_str_factors(n_qubits: usize, s: &str) -> Self {
        super::text::parse_factors(s, n_qubits)
            .and_then(|f| Self::from_factors(n_qubits, &f))
            .unwrap_or_else(|e| panic!("bad Pauli literal {s:?}: {e}"))
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Bitmask of qubits the word acts on non-trivially.
    #[inline]
    pub fn support_mask(&self) -> u64 {
        self.x | self.z
    }

    pub fn support(&self) -> Vec<usize> {
        bits_of(self.support_mask()).collect()
    }

    /// Number of qubits in the support.
    #[inline]
    pub fn weight(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    #[inline]
    pub fn y_count(&self) -> usize {
        (self.x & self.z).count_ones() as usize
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Every factor is `I` or `Z`.
    #[inline]
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn factor(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    /// Operator product `self · other = i^phase · product`.
    ///
    /// Writing each word as `i^{y} X^x Z^z`, moving `Z^{z_a}` past `X^{x_b}`
    /// costs `(-1)^{|z_a & x_b|}`.
    pub fn multiply(&self, other: &Self) -> Result<(u8, PauliWord)> {
        self.check_same(other)?;
        Ok(self.multiply_unchecked(other))
    }

    #[inline]
    pub(crate) fn multiply_unchecked(&self, other: &Self) -> (u8, PauliWord) {
        let product = PauliWord {
            n_qubits: self.n_qubits,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        };
        let exponent = self.y_count() as i64 + other.y_count() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - product.y_count() as i64;
        (exponent.rem_euclid(4) as u8, product)
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Drops the listed qubits (bitmask) and renumbers the rest contiguously.
    pub(crate) fn compress(&self, keep: &[usize]) -> PauliWord {
        let mut x = 0;
        let mut z = 0;
        for (new, &old) in keep.iter().enumerate() {
            x |= (self.x >> old & 1) << new;
            z |= (self.z >> old & 1) << new;
        }
        PauliWord {
            n_qubits: keep.len(),
            x,
            z,
        }
    }

    /// Inverse of [`compress`](Self::compress): places qubit `i` of this word
    /// on qubit `index_map[i]` of an `n_full`-qubit word.
    pub fn embed(&self, index_map: &[usize], n_full: usize) -> Result<PauliWord> {
        if index_map.len() != self.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: index_map.len(),
            });
        }
        let mut x = 0;
        let mut z = 0;
        for (i, &q) in index_map.iter().enumerate() {
            x |= (self.x >> i & 1) << q;
            z |= (self.z >> i & 1) << q;
        }
        PauliWord::from_masks(n_full, x, z)
    }
}

pub(crate) fn bits_of(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let q = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(q)
        }
    })
}

// Canonical order: lexicographic on (z_mask, x_mask).
impl Ord for PauliWord {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n_qubits, self.z, self.x).cmp(&(other.n_qubits, other.z, other.x))
    }
}

impl PartialOrd for PauliWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut first = true;
        for q in bits_of(self.support_mask()) {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}{}", self.factor(q).letter(), q)?;
        }
        Ok(())
    }
}
