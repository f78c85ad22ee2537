use std::collections::HashMap;

use crate::error::{Error, Result};

/// One- and two-electron integrals over spatial orbitals of an active space.
///
/// `two_body` is in chemist notation, `g[p,q,r,s] = (pq|rs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularIntegrals {
    pub n_orbitals: usize,
    pub n_electrons: usize,
    pub ms2: i64,
    pub core_energy: f64,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
}

impl MolecularIntegrals {
    /// Zero integrals; fill with [`set_one_body`](Self::set_one_body) and
    /// [`set_two_body`](Self::set_two_body), which apply the index symmetries.
    pub fn new(n_orbitals: usize, n_electrons: usize, ms2: i64) -> Result<Self> {
        if n_orbitals == 0 {
            return Err(Error::Fcidump("NORB must be positive".into()));
        }
        if n_electrons > 2 * n_orbitals {
            return Err(Error::Fcidump(format!(
                "{n_electrons} electrons do not fit in {n_orbitals} orbitals"
            )));
        }
        if ms2.unsigned_abs() as usize > n_electrons || (n_electrons as i64 + ms2) % 2 != 0 {
            return Err(Error::Fcidump(format!(
                "MS2={ms2} inconsistent with {n_electrons} electrons"
            )));
        }
        Ok(Self {
            n_orbitals,
            n_electrons,
            ms2,
            core_energy: 0.0,
            one_body: vec![0.0; n_orbitals * n_orbitals],
            two_body: vec![0.0; n_orbitals.pow(4)],
        })
    }

    #[inline]
    pub fn h(&self, p: usize, q: usize) -> f64 {
        self.one_body[p * self.n_orbitals + q]
    }

    #[inline]
    fn idx4(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        let n = self.n_orbitals;
        ((p * n + q) * n + r) * n + s
    }

    /// `(pq|rs)`.
    #[inline]
    pub fn g(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.two_body[self.idx4(p, q, r, s)]
    }

    pub fn set_one_body(&mut self, p: usize, q: usize, v: f64) {
        let n = self.n_orbitals;
        self.one_body[p * n + q] = v;
        self.one_body[q * n + p] = v;
    }

    pub fn set_two_body(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        for (a, b, c, d) in eightfold(p, q, r, s) {
            let i = self.idx4(a, b, c, d);
            self.two_body[i] = v;
        }
    }

    pub fn n_alpha(&self) -> usize {
        ((self.n_electrons as i64 + self.ms2) / 2) as usize
    }

    pub fn n_beta(&self) -> usize {
        ((self.n_electrons as i64 - self.ms2) / 2) as usize
    }
}

fn eightfold(p: usize, q: usize, r: usize, s: usize) -> [(usize, usize, usize, usize); 8] {
    [
        (p, q, r, s),
        (q, p, r, s),
        (p, q, s, r),
        (q, p, s, r),
        (r, s, p, q),
        (s, r, p, q),
        (r, s, q, p),
        (s, r, q, p),
    ]
}

const CONFLICT_TOLERANCE: f64 = 1e-10;

fn header_int(header: &str, key: &str) -> Option<Result<i64>> {
    let upper = header.to_ascii_uppercase();
    let mut search = 0;
    while let Some(pos) = upper[search..].find(key) {
        let at = search + pos;
        search = at + key.len();
        // must be a whole key: preceded by a separator
        let before = upper[..at].chars().last();
        if before.is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            continue;
        }
        let rest = upper[at + key.len()..].trim_start();
        let Some(rest) = rest.strip_prefix('=') else {
            continue;
        };
        let rest = rest.trim_start();
        let end = rest
            .find(|c: char| !(c.is_ascii_digit() || c == '-' || c == '+'))
            .unwrap_or(rest.len());
        return Some(
            rest[..end]
                .parse()
                .map_err(|_| Error::Fcidump(format!("bad value for {key}"))),
        );
    }
    None
}

/// Parses FCIDUMP text (`&FCI NORB=..,NELEC=..,MS2=.. /` or `&END`, then
/// `value i j k l` records with 1-based orbital indices).
pub fn parse_fcidump(text: &str) -> Result<MolecularIntegrals> {
    let upper = text.to_ascii_uppercase();
    let start = upper
        .find("&FCI")
        .ok_or_else(|| Error::Fcidump("missing &FCI header".into()))?;
    let (header_end, body_start) = {
        let after = &upper[start..];
        let end_kw = after.find("&END");
        let slash = after.find('/');
        match (end_kw, slash) {
            (Some(e), Some(s)) if s < e => (start + s, start + s + 1),
            (Some(e), _) => (start + e, start + e + 4),
            (None, Some(s)) => (start + s, start + s + 1),
            (None, None) => return Err(Error::Fcidump("unterminated header".into())),
        }
    };
    let header = &text[start + 4..header_end];
    let norb = header_int(header, "NORB")
        .ok_or_else(|| Error::Fcidump("missing NORB".into()))??;
    let nelec = header_int(header, "NELEC")
        .ok_or_else(|| Error::Fcidump("missing NELEC".into()))??;
    let ms2 = header_int(header, "MS2").transpose()?.unwrap_or(0);
    if norb <= 0 || nelec < 0 {
        return Err(Error::Fcidump(format!("invalid NORB={norb} NELEC={nelec}")));
    }
    let n = norb as usize;
    let mut ints = MolecularIntegrals::new(n, nelec as usize, ms2)?;

    let mut seen: HashMap<(usize, usize, usize, usize), f64> = HashMap::new();
    let mut check = |key: (usize, usize, usize, usize), v: f64, line: usize| -> Result<()> {
        if let Some(&old) = seen.get(&key) {
            if (old - v).abs() > CONFLICT_TOLERANCE {
                return Err(Error::Fcidump(format!(
                    "line {line}: conflicting duplicate for {key:?}: {old} vs {v}"
                )));
            }
        }
        seen.insert(key, v);
        Ok(())
    };

    let header_lines = text[..body_start].lines().count();
    for (offset, line) in text[body_start..].lines().enumerate() {
        let lineno = header_lines + offset;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(Error::Fcidump(format!(
                "line {lineno}: expected `value i j k l`, got {line:?}"
            )));
        }
        let value: f64 = toks[0]
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|_| Error::Fcidump(format!("line {lineno}: bad value {:?}", toks[0])))?;
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&toks[1..]) {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Fcidump(format!("line {lineno}: bad index {tok:?}")))?;
            if v > n {
                return Err(Error::Fcidump(format!(
                    "line {lineno}: index {v} out of range for NORB={n}"
                )));
            }
            *slot = v;
        }
        let [i, j, k, l] = idx;
        match (i, j, k, l) {
            (0, 0, 0, 0) => {
                check((0, 0, 0, 0), value, lineno)?;
                ints.core_energy = value;
            }
            // orbital energies; not needed
            (_, 0, 0, 0) => {}
            (i, j, 0, 0) if i > 0 && j > 0 => {
                let (p, q) = (i - 1, j - 1);
                for key in [(p, q), (q, p)] {
                    check((key.0 + 1, key.1 + 1, 0, 0), value, lineno)?;
                }
                ints.set_one_body(p, q, value);
            }
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (p, q, r, s) = (i - 1, j - 1, k - 1, l - 1);
                for key in eightfold(p, q, r, s) {
                    check((key.0 + 1, key.1 + 1, key.2 + 1, key.3 + 1), value, lineno)?;
                }
                ints.set_two_body(p, q, r, s, value);
            }
            _ => {
                return Err(Error::Fcidump(format!(
                    "line {lineno}: malformed index pattern {idx:?}"
                )))
            }
        }
    }
    Ok(ints)
}
