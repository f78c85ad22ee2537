//! Canonical text format for Pauli sums and word lists.
//!
//! ```text
//! # comment
//! qubits: 4
//! -0.4738 Z0 Z1
//! 0.5 X0 Y2
//! 1.25
//! ```
//!
//! A line with only a coefficient is the identity term. Word lists (pools)
//! use the same layout with the coefficient column omitted.

use std::fmt::Write;

use super::sum::PauliSum;
use super::word::{Pauli, PauliWord};
use crate::error::{Error, Result};

pub(crate) fn parse_factors(s: &str, n_qubits: usize) -> Result<Vec<(usize, Pauli)>> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        let mut chars = tok.chars();
        let letter = chars.next().expect("non-empty token");
        let pauli = Pauli::from_letter(letter)
            .ok_or_else(|| Error::InvalidInput(format!("unknown Pauli factor {tok:?}")))?;
        let idx: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad qubit index in {tok:?}")))?;
        if idx >= n_qubits {
            return Err(Error::InvalidInput(format!(
                "qubit index {idx} out of range for {n_qubits} qubits"
            )));
        }
        if pauli != Pauli::I {
            out.push((idx, pauli));
        } else if out.iter().any(|&(q, _)| q == idx) {
            return Err(Error::InvalidInput(format!("duplicate qubit index {idx}")));
        }
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_term(body: &str, n_qubits: usize) -> Result<(f64, PauliWord)> {
    let (first, rest) = match body.split_once(char::is_whitespace) {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    let coefficient: f64 = first
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad coefficient {first:?}")))?;
    let word = PauliWord::from_factors(n_qubits, &parse_factors(rest, n_qubits)?)?;
    Ok((coefficient, word))
}

/// Parses one `<coefficient> <factor>*` line. Returns `None` for blank or
/// comment-only lines.
pub fn parse_pauli_line(line: &str, n_qubits: usize) -> Result<Option<(f64, PauliWord)>> {
    let body = strip_comment(line);
    if body.is_empty() {
        return Ok(None);
    }
    parse_term(body, n_qubits).map(Some)
}

fn fmt_word(out: &mut String, w: &PauliWord) {
    for q in w.support() {
        let _ = write!(out, " {}{}", w.factor(q).letter(), q);
    }
}

/// `<coefficient> <factor>*` with the shortest round-tripping coefficient.
pub fn format_pauli_term(coefficient: f64, word: &PauliWord) -> String {
    let mut s = format!("{coefficient:?}");
    fmt_word(&mut s, word);
    s
}

fn parse_header(body: &str) -> Option<Result<usize>> {
    let rest = body.strip_prefix("qubits:")?;
    Some(
        rest.trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad qubit count {:?}", rest.trim()))),
    )
}

impl PauliSum {
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits: {}\n", self.n_qubits());
        for (c, w) in self.terms() {
            s.push_str(&format_pauli_term(*c, w));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<PauliSum> {
        let mut n_qubits = None;
        let mut terms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let body = strip_comment(line);
            if body.is_empty() {
                continue;
            }
            if let Some(h) = parse_header(body) {
                if n_qubits.is_some() {
                    return Err(Error::parse(i + 1, "duplicate qubits header"));
                }
                let n = h.map_err(|e| Error::parse(i + 1, e.to_string()))?;
                if n == 0 || n > super::MAX_QUBITS {
                    return Err(Error::parse(i + 1, format!("unsupported qubit count {n}")));
                }
                n_qubits = Some(n);
                continue;
            }
            let n = n_qubits.ok_or_else(|| Error::parse(i + 1, "term before `qubits:` header"))?;
            terms.push(parse_term(body, n).map_err(|e| Error::parse(i + 1, e.to_string()))?);
        }
        let n = n_qubits.ok_or_else(|| Error::parse(0, "missing `qubits:` header"))?;
        PauliSum::from_terms(n, terms)
    }
}

/// Word list with a `qubits:` header and one word per line.
pub fn format_word_list(n_qubits: usize, words: &[PauliWord]) -> String {
    let mut s = format!("qubits: {n_qubits}\n");
    for w in words {
        s.push_str(&w.to_string());
        s.push('\n');
    }
    s
}

pub fn parse_word_list(text: &str) -> Result<(usize, Vec<PauliWord>)> {
    let mut n_qubits = None;
    let mut words = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = strip_comment(line);
        if body.is_empty() {
            continue;
        }
        if let Some(h) = parse_header(body) {
            n_qubits = Some(h.map_err(|e| Error::parse(i + 1, e.to_string()))?);
            continue;
        }
        let n = n_qubits.ok_or_else(|| Error::parse(i + 1, "word before `qubits:` header"))?;
        let factors = if body == "I" {
            Vec::new()
        } else {
            parse_factors(body, n).map_err(|e| Error::parse(i + 1, e.to_string()))?
        };
        words.push(
            PauliWord::from_factors(n, &factors).map_err(|e| Error::parse(i + 1, e.to_string()))?,
        );
    }
    let n = n_qubits.ok_or_else(|| Error::parse(0, "missing `qubits:` header"))?;
    Ok((n, words))
}
