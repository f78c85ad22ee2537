//! The QCC entangler pool and its mutual-information screening.
//!
//! A word's correlation strength is the mean pairwise mutual information over
//! its support. Its percentile is the fraction of a baseline pool whose
//! strength is at least as large, counting ties and the word itself, so the
//! strongest words have the smallest percentiles. Screening at `p_cut`
//! keeps exactly the words with percentile at most `p_cut`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig12;
use crate::pauli::{format_word_list, parse_word_list, PauliWord};
use crate::reference::MiMatrix;

/// Largest register for which a full pool may be enumerated.
pub const MAX_POOL_QUBITS: usize = 12;

/// Where a pool came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PoolProvenance {
    /// Every odd-Y word on the register.
    Original,
    /// Every odd-Y word on a register with stationary qubits removed.
    StationaryReduced { removed: usize },
    /// Kept by screening at `p_cut`.
    Screened { p_cut: f64 },
    /// Read from a word list.
    Imported,
}

/// Candidate entanglers in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglerPool {
    n_qubits: usize,
    words: Vec<PauliWord>,
    provenance: PoolProvenance,
}

/// Every word with an odd number of `Y` factors, `(4^n − 2^n)/2` in total.
pub fn generate_pool(n_qubits: usize) -> Result<EntanglerPool> {
    if n_qubits == 0 || n_qubits > MAX_POOL_QUBITS {
        return Err(Error::InvalidInput(format!(
            "pool generation supports 1..={MAX_POOL_QUBITS} qubits, got {n_qubits}"
        )));
    }
    let dim = 1u64 << n_qubits;
    let mut words = Vec::with_capacity(pool_size(n_qubits));
    for z in 0..dim {
        for x in 0..dim {
            if (x & z).count_ones() % 2 == 1 {
                words.push(PauliWord::from_masks(n_qubits, x, z)?);
            }
        }
    }
    Ok(EntanglerPool {
        n_qubits,
        words,
        provenance: PoolProvenance::Original,
    })
}

/// `(4^n − 2^n)/2`.
pub fn pool_size(n_qubits: usize) -> usize {
    ((1usize << (2 * n_qubits)) - (1usize << n_qubits)) / 2
}

impl EntanglerPool {
    /// Validates and sorts `words` into a pool.
    pub fn from_words(n_qubits: usize, mut words: Vec<PauliWord>, provenance: PoolProvenance) -> Result<Self> {
        for w in &words {
            if w.n_qubits() != n_qubits {
                return Err(Error::QubitMismatch {
                    left: n_qubits,
                    right: w.n_qubits(),
                });
            }
            if w.y_count() % 2 == 0 {
                return Err(Error::InvalidInput(format!("pool word {w} has an even number of Y factors")));
            }
        }
        words.sort();
        if let Some(pair) = words.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::InvalidInput(format!("duplicate pool word {}", pair[0])));
        }
        Ok(Self {
            n_qubits,
            words,
            provenance,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn words(&self) -> &[PauliWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn provenance(&self) -> PoolProvenance {
        self.provenance
    }

    pub fn with_provenance(mut self, provenance: PoolProvenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn contains(&self, word: &PauliWord) -> bool {
        self.words.binary_search(word).is_ok()
    }

    /// Word list in the Pauli text format without coefficients.
    pub fn to_text(&self) -> String {
        format_word_list(self.n_qubits, &self.words)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (n, words) = parse_word_list(text)?;
        Self::from_words(n, words, PoolProvenance::Imported)
    }
}

/// Mean of `I_jk` over the pairs of the word's support; zero below two qubits.
pub fn correlation_strength(word: &PauliWord, mi: &MiMatrix) -> f64 {
    let support = word.support();
    let l = support.len();
    if l < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    for (a, &j) in support.iter().enumerate() {
        for &k in &support[a + 1..] {
            sum += mi.get(j, k);
        }
    }
    2.0 * sum / (l * (l - 1)) as f64
}

fn check_register(n_pool: usize, mi: &MiMatrix) -> Result<()> {
    if n_pool != mi.n_qubits() {
        return Err(Error::QubitMismatch {
            left: n_pool,
            right: mi.n_qubits(),
        });
    }
    Ok(())
}

/// Strengths of every pool word, in pool order.
pub fn strengths(pool: &EntanglerPool, mi: &MiMatrix) -> Result<Vec<f64>> {
    check_register(pool.n_qubits, mi)?;
    Ok(pool.words.par_iter().map(|w| correlation_strength(w, mi)).collect())
}

/// Sorted strengths of a baseline pool for percentile lookups.
#[derive(Debug, Clone, PartialEq)]
pub struct PercentileTable {
    n_qubits: usize,
    ascending: Vec<f64>,
    mi: MiMatrix,
}

impl PercentileTable {
    pub fn new(baseline: &EntanglerPool, mi: &MiMatrix) -> Result<Self> {
        if baseline.is_empty() {
            return Err(Error::InvalidInput("percentile baseline pool is empty".into()));
        }
        let mut ascending = strengths(baseline, mi)?;
        ascending.sort_by(f64::total_cmp);
        Ok(Self {
            n_qubits: baseline.n_qubits,
            ascending,
            mi: mi.clone(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn baseline_size(&self) -> usize {
        self.ascending.len()
    }

    /// Fraction of the baseline with strength at least `strength`.
    pub fn percentile_of_strength(&self, strength: f64) -> f64 {
        let below = self.ascending.partition_point(|&s| s < strength);
        (self.ascending.len() - below) as f64 / self.ascending.len() as f64
    }

    /// Strength and percentile of a word on the baseline register.
    pub fn score(&self, word: &PauliWord) -> Result<ScoredEntangler> {
        if word.n_qubits() != self.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: word.n_qubits(),
            });
        }
        let strength = correlation_strength(word, &self.mi);
        Ok(ScoredEntangler {
            word: *word,
            strength,
            percentile: self.percentile_of_strength(strength),
        })
    }
}

/// A pool word with its correlation strength and percentile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredEntangler {
    pub word: PauliWord,
    pub strength: f64,
    pub percentile: f64,
}

/// Scores every word against the pool itself as baseline.
pub fn percentiles(pool: &EntanglerPool, mi: &MiMatrix) -> Result<Vec<ScoredEntangler>> {
    let table = PercentileTable::new(pool, mi)?;
    let s = strengths(pool, mi)?;
    Ok(pool
        .words
        .iter()
        .zip(s)
        .map(|(w, strength)| ScoredEntangler {
            word: *w,
            strength,
            percentile: table.percentile_of_strength(strength),
        })
        .collect())
}

fn check_cut(p_cut: f64) -> Result<()> {
    if !(p_cut > 0.0 && p_cut <= 1.0) {
        return Err(Error::InvalidInput(format!("p_cut must lie in (0, 1], got {p_cut}")));
    }
    Ok(())
}

/// Keeps the words whose percentile within `pool` is at most `p_cut`.
///
/// Ties at the boundary are kept together, so the kept fraction can exceed
/// `p_cut`.
pub fn screen_pool(pool: &EntanglerPool, mi: &MiMatrix, p_cut: f64) -> Result<EntanglerPool> {
    check_cut(p_cut)?;
    let words: Vec<PauliWord> = percentiles(pool, mi)?
        .into_iter()
        .filter(|s| s.percentile <= p_cut)
        .map(|s| s.word)
        .collect();
    if words.is_empty() {
        return Err(Error::EmptyPool {
            p_cut,
            pool_size: pool.len(),
        });
    }
    Ok(EntanglerPool {
        n_qubits: pool.n_qubits,
        words,
        provenance: PoolProvenance::Screened { p_cut },
    })
}

/// CSV with columns `word,strength,percentile,kept`.
pub fn screening_report(scored: &[ScoredEntangler], p_cut: f64) -> String {
    let mut out = String::from("word,strength,percentile,kept\n");
    for s in scored {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.word,
            sig12(s.strength),
            sig12(s.percentile),
            s.percentile <= p_cut
        ));
    }
    out
}
