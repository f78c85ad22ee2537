use std::collections::BTreeMap;

use super::fcidump::MolecularIntegrals;
use crate::error::{Error, Result};

/// A creation (`dagger = true`) or annihilation operator on one spin-orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            mode,
            dagger: false,
        }
    }
}

const DROP: f64 = 1e-14;

/// Real linear combination of products of ladder operators, stored in normal
/// order: creators left of annihilators, each block sorted by descending mode.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FermionOperator {
    n_modes: usize,
    terms: BTreeMap<Vec<Ladder>, f64>,
}

impl FermionOperator {
    pub fn zero(n_modes: usize) -> Self {
        Self {
            n_modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_modes: usize, value: f64) -> Self {
        let mut op = Self::zero(n_modes);
        op.add_term(value, &[]);
        op
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> impl Iterator<Item = (f64, &[Ladder])> {
        self.terms.iter().map(|(k, &v)| (v, k.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coefficient · ops`, normal-ordering the product first.
    pub fn add_term(&mut self, coefficient: f64, ops: &[Ladder]) {
        assert!(
            ops.iter().all(|l| l.mode < self.n_modes),
            "ladder mode outside {} modes",
            self.n_modes
        );
        for (c, term) in normal_order(coefficient, ops.to_vec()) {
            *self.terms.entry(term).or_insert(0.0) += c;
        }
        self.terms.retain(|_, c| c.abs() > DROP);
    }

    pub fn add(&self, other: &FermionOperator) -> FermionOperator {
        let mut out = self.clone();
        out.n_modes = out.n_modes.max(other.n_modes);
        for (c, ops) in other.terms() {
            *out.terms.entry(ops.to_vec()).or_insert(0.0) += c;
        }
        out.terms.retain(|_, c| c.abs() > DROP);
        out
    }

    pub fn scaled(&self, factor: f64) -> FermionOperator {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c *= factor);
        out.terms.retain(|_, c| c.abs() > DROP);
        out
    }

    pub fn mul(&self, other: &FermionOperator) -> FermionOperator {
        let mut out = FermionOperator::zero(self.n_modes.max(other.n_modes));
        for (a, ta) in self.terms() {
            for (b, tb) in other.terms() {
                let mut ops = ta.to_vec();
                ops.extend_from_slice(tb);
                for (c, term) in normal_order(a * b, ops) {
                    *out.terms.entry(term).or_insert(0.0) += c;
                }
            }
        }
        out.terms.retain(|_, c| c.abs() > DROP);
        out
    }

    pub fn adjoint(&self) -> FermionOperator {
        let mut out = FermionOperator::zero(self.n_modes);
        for (c, ops) in self.terms() {
            let rev: Vec<Ladder> = ops
                .iter()
                .rev()
                .map(|l| Ladder {
                    mode: l.mode,
                    dagger: !l.dagger,
                })
                .collect();
            out.add_term(c, &rev);
        }
        out
    }

    /// Largest coefficient difference between the operator and its adjoint.
    pub fn hermiticity_error(&self) -> f64 {
        let adj = self.adjoint();
        let diff = self.add(&adj.scaled(-1.0));
        diff.terms().map(|(c, _)| c.abs()).fold(0.0, f64::max)
    }

    /// Relabels modes, `new = perm[old]`, and restores normal order.
    pub fn permuted(&self, perm: &[usize]) -> Result<FermionOperator> {
        if perm.len() != self.n_modes {
            return Err(Error::InvalidInput(format!(
                "permutation of length {} for {} modes",
                perm.len(),
                self.n_modes
            )));
        }
        let mut hit = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut hit[p], true) {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
        }
        let mut out = FermionOperator::zero(self.n_modes);
        for (c, ops) in self.terms() {
            let mapped: Vec<Ladder> = ops
                .iter()
                .map(|l| Ladder {
                    mode: perm[l.mode],
                    dagger: l.dagger,
                })
                .collect();
            out.add_term(c, &mapped);
        }
        Ok(out)
    }
}

/// Normal-orders a product by adjacent swaps, tracking signs and the
/// contraction `a_p a†_p = 1 − a†_p a_p`.
fn normal_order(coefficient: f64, ops: Vec<Ladder>) -> Vec<(f64, Vec<Ladder>)> {
    let mut out = Vec::new();
    let mut stack = vec![(coefficient, ops)];
    'outer: while let Some((mut c, mut ops)) = stack.pop() {
        // insertion sort: creators first, then descending mode within blocks
        for i in 1..ops.len() {
            let mut j = i;
            while j > 0 {
                let (left, right) = (ops[j - 1], ops[j]);
                let swap = match (left.dagger, right.dagger) {
                    (false, true) => true,
                    (l, r) if l == r => {
                        if left.mode == right.mode {
                            // a_p a_p = 0
                            continue 'outer;
                        }
                        right.mode > left.mode
                    }
                    _ => false,
                };
                if !swap {
                    break;
                }
                if !left.dagger && right.dagger && left.mode == right.mode {
                    let mut contracted = ops.clone();
                    contracted.drain(j - 1..=j);
                    stack.push((c, contracted));
                }
                ops.swap(j - 1, j);
                c = -c;
                j -= 1;
            }
        }
        out.push((c, ops));
    }
    out
}

fn mode(p: usize, spin: usize) -> usize {
    2 * p + spin
}

/// Electronic Hamiltonian over `2 n` spin-orbitals labelled `2p + σ`:
///
/// `E_core + Σ h_pq a†_pσ a_qσ + ½ Σ (pr|qs) a†_pσ a†_qτ a_sτ a_rσ`.
pub fn build_hamiltonian(ints: &MolecularIntegrals) -> FermionOperator {
    let n = ints.n_orbitals;
    let mut acc: BTreeMap<Vec<Ladder>, f64> = BTreeMap::new();
    let mut push = |c: f64, ops: Vec<Ladder>| {
        if c.abs() <= DROP {
            return;
        }
        for (c, term) in normal_order(c, ops) {
            *acc.entry(term).or_insert(0.0) += c;
        }
    };
    push(ints.core_energy, Vec::new());
    for p in 0..n {
        for q in 0..n {
            let h = ints.h(p, q);
            for s in 0..2 {
                push(h, vec![Ladder::create(mode(p, s)), Ladder::annihilate(mode(q, s))]);
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let g = 0.5 * ints.g(p, r, q, s);
                    if g.abs() <= DROP {
                        continue;
                    }
                    for sig in 0..2 {
                        for tau in 0..2 {
                            if sig == tau && (p == q || r == s) {
                                continue;
                            }
                            push(
                                g,
                                vec![
                                    Ladder::create(mode(p, sig)),
                                    Ladder::create(mode(q, tau)),
                                    Ladder::annihilate(mode(s, tau)),
                                    Ladder::annihilate(mode(r, sig)),
                                ],
                            );
                        }
                    }
                }
            }
        }
    }
    acc.retain(|_, c| c.abs() > DROP);
    FermionOperator {
        n_modes: 2 * n,
        terms: acc,
    }
}

/// `Σ_j a†_j a_j`.
pub fn number_operator(n_modes: usize) -> FermionOperator {
    let mut op = FermionOperator::zero(n_modes);
    for j in 0..n_modes {
        op.add_term(1.0, &[Ladder::create(j), Ladder::annihilate(j)]);
    }
    op
}

/// Total spin `S² = S_z² + ½(S₊S₋ + S₋S₊)` over `2 n` spin-orbitals
/// labelled `2p + σ`.
pub fn s_squared_operator(n_orbitals: usize) -> FermionOperator {
    let m = 2 * n_orbitals;
    let mut sz = FermionOperator::zero(m);
    let mut splus = FermionOperator::zero(m);
    let mut sminus = FermionOperator::zero(m);
    for p in 0..n_orbitals {
        let (a, b) = (mode(p, 0), mode(p, 1));
        sz.add_term(0.5, &[Ladder::create(a), Ladder::annihilate(a)]);
        sz.add_term(-0.5, &[Ladder::create(b), Ladder::annihilate(b)]);
        splus.add_term(1.0, &[Ladder::create(a), Ladder::annihilate(b)]);
        sminus.add_term(1.0, &[Ladder::create(b), Ladder::annihilate(a)]);
    }
    let raising = splus.mul(&sminus).add(&sminus.mul(&splus)).scaled(0.5);
    sz.mul(&sz).add(&raising)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Expectation value in an occupation-number basis state by direct
    /// action of the ladder strings.
    fn expectation(op: &FermionOperator, occ: &[bool]) -> f64 {
        let mut total = 0.0;
        for (c, ops) in op.terms() {
            let mut state = occ.to_vec();
            let mut sign = 1.0;
            let mut alive = true;
            for l in ops.iter().rev() {
                let parity = state[..l.mode].iter().filter(|&&b| b).count();
                if state[l.mode] == l.dagger {
                    alive = false;
                    break;
                }
                state[l.mode] = l.dagger;
                if parity % 2 == 1 {
                    sign = -sign;
                }
            }
            if alive && state == occ {
                total += c * sign;
            }
        }
        total
    }

    #[test]
    fn normal_order_contraction() {
        let mut op = FermionOperator::zero(2);
        op.add_term(1.0, &[Ladder::annihilate(0), Ladder::create(0)]);
        // a_0 a†_0 = 1 − a†_0 a_0
        let terms: Vec<_> = op.terms().map(|(c, t)| (c, t.to_vec())).collect();
        assert_eq!(terms.len(), 2);
        assert!(terms.contains(&(1.0, vec![])));
        assert!(terms.contains(&(-1.0, vec![Ladder::create(0), Ladder::annihilate(0)])));
        let mut zero = FermionOperator::zero(2);
        zero.add_term(1.0, &[Ladder::create(1), Ladder::create(1)]);
        assert!(zero.is_empty());
    }

    #[test]
    fn single_orbital_hamiltonian() {
        let mut ints = MolecularIntegrals::new(1, 1, 1).unwrap();
        ints.core_energy = 0.3;
        ints.set_one_body(0, 0, -0.8);
        let h = build_hamiltonian(&ints);
        let mut expected = FermionOperator::constant(2, 0.3);
        expected.add_term(-0.8, &[Ladder::create(0), Ladder::annihilate(0)]);
        expected.add_term(-0.8, &[Ladder::create(1), Ladder::annihilate(1)]);
        assert_eq!(h, expected);
    }

    #[test]
    fn number_in_closed_shell() {
        let n = number_operator(4);
        assert_eq!(expectation(&n, &[true, true, false, false]), 2.0);
    }

    #[test]
    fn s_squared_values() {
        let s2 = s_squared_operator(2);
        assert!(s2.hermiticity_error() < 1e-14);
        // closed shell α0 β0
        assert!(expectation(&s2, &[true, true, false, false]).abs() < 1e-14);
        // one electron
        assert!((expectation(&s2, &[true, false, false, false]) - 0.75).abs() < 1e-14);
        // α0 α1 triplet
        assert!((expectation(&s2, &[true, false, true, false]) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hamiltonian_is_hermitian_and_reproduces_hf_energy() {
        // two orbitals, hand-computed closed-shell energy h00*2 + (00|00)
        let mut ints = MolecularIntegrals::new(2, 2, 0).unwrap();
        ints.set_one_body(0, 0, -1.2);
        ints.set_one_body(1, 1, -0.4);
        ints.set_one_body(0, 1, 0.05);
        ints.set_two_body(0, 0, 0, 0, 0.6);
        ints.set_two_body(1, 1, 1, 1, 0.5);
        ints.set_two_body(0, 0, 1, 1, 0.55);
        ints.set_two_body(0, 1, 0, 1, 0.15);
        let h = build_hamiltonian(&ints);
        assert!(h.hermiticity_error() < 1e-14);
        let e = expectation(&h, &[true, true, false, false]);
        assert!((e - (2.0 * -1.2 + 0.6)).abs() < 1e-14);
        // α0 α1: 2 one-body + Coulomb − exchange
        let e_t = expectation(&h, &[true, false, true, false]);
        assert!((e_t - (-1.2 - 0.4 + 0.55 - 0.15)).abs() < 1e-14);
    }

    #[test]
    fn permutation_relabels() {
        let mut op = FermionOperator::zero(3);
        op.add_term(1.0, &[Ladder::create(0), Ladder::annihilate(2)]);
        let p = op.permuted(&[2, 1, 0]).unwrap();
        let back = p.permuted(&[2, 1, 0]).unwrap();
        assert_eq!(back, op);
        assert!(op.permuted(&[0, 0, 1]).is_err());
    }
}
