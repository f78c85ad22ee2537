use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mi::ReducedStates;
use super::mpo::{build_mpo, Mpo, MpoSite};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, lanczos_lowest, svd_complex, LanczosOptions};
use crate::pauli::PauliSum;
use crate::simulator::StateVector;

type C = Complex64;
const ZERO: C = C::new(0.0, 0.0);
const DENSE_LOCAL_DIM: usize = 256;
const SINGULAR_FLOOR: f64 = 1e-13;

/// Settings for [`mps_ground_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmrgOptions {
    /// Maximum bond dimension.
    pub chi: usize,
    /// Full sweeps, each one left-to-right pass and one right-to-left pass.
    pub sweeps: usize,
    pub seed: u64,
    pub mpo_tolerance: f64,
}

impl Default for DmrgOptions {
    fn default() -> Self {
        Self {
            chi: 16,
            sweeps: 10,
            seed: 0,
            mpo_tolerance: 1e-12,
        }
    }
}

/// MPS site tensor `A[α][s][β]` at `(α * 2 + s) * dr + β`.
#[derive(Debug, Clone)]
struct Site {
    dl: usize,
    dr: usize,
    data: Vec<C>,
}

impl Site {
    fn physical(&self, s: usize) -> DMatrix<C> {
        DMatrix::from_fn(self.dl, self.dr, |a, b| self.data[(a * 2 + s) * self.dr + b])
    }
}

/// Environment `E[a][α'][α]` at `(a * d + α') * d + α`; `α'` is the bra index.
#[derive(Debug, Clone)]
struct Env {
    da: usize,
    d: usize,
    data: Vec<C>,
}

impl Env {
    fn trivial() -> Self {
        Env {
            da: 1,
            d: 1,
            data: vec![C::new(1.0, 0.0)],
        }
    }
}

/// Bond-limited matrix product state from DMRG.
#[derive(Debug, Clone)]
pub struct MpsState {
    sites: Vec<Site>,
    chi: usize,
    energy: f64,
    sweep_energies: Vec<f64>,
    warnings: Vec<String>,
}

impl MpsState {
    pub fn n_qubits(&self) -> usize {
        self.sites.len()
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites.iter().skip(1).map(|s| s.dl).collect()
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// `⟨H⟩` of the final state.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Energy of the state at the end of each sweep.
    pub fn sweep_energies(&self) -> &[f64] {
        &self.sweep_energies
    }

    /// Sweeps whose energy rose above the previous sweep.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn norm_sqr(&self) -> f64 {
        right_transfers(&self.sites)[0][(0, 0)].re
    }

    /// Dense amplitudes; qubit `k` is bit `k`.
    pub fn to_state_vector(&self) -> Result<StateVector> {
        let n = self.n_qubits();
        if n > super::EXACT_MAX_QUBITS {
            return Err(Error::InvalidInput(format!("{n} qubits is too many to densify")));
        }
        // v[i * d + α]
        let mut v = vec![C::new(1.0, 0.0)];
        let mut d = 1;
        for (k, site) in self.sites.iter().enumerate() {
            let dim = 1usize << k;
            let mut next = vec![ZERO; 2 * dim * site.dr];
            for i in 0..dim {
                for a in 0..d {
                    let x = v[i * d + a];
                    if x == ZERO {
                        continue;
                    }
                    for s in 0..2 {
                        let row = (a * 2 + s) * site.dr;
                        let out = (i + s * dim) * site.dr;
                        for b in 0..site.dr {
                            next[out + b] += x * site.data[row + b];
                        }
                    }
                }
            }
            v = next;
            d = site.dr;
        }
        StateVector::from_amplitudes(n, v)
    }
}

fn left_transfers(sites: &[Site]) -> Vec<DMatrix<C>> {
    let mut out = vec![DMatrix::from_element(1, 1, C::new(1.0, 0.0))];
    for site in sites {
        let l = out.last().expect("nonempty");
        let mut next = DMatrix::zeros(site.dr, site.dr);
        for s in 0..2 {
            let a = site.physical(s);
            next += a.transpose() * l * a.conjugate();
        }
        out.push(next);
    }
    out
}

fn right_transfers(sites: &[Site]) -> Vec<DMatrix<C>> {
    let n = sites.len();
    let mut out = vec![DMatrix::from_element(1, 1, C::new(1.0, 0.0)); n + 1];
    for k in (0..n).rev() {
        let site = &sites[k];
        let mut next = DMatrix::zeros(site.dl, site.dl);
        for s in 0..2 {
            let a = site.physical(s);
            next += &a * &out[k + 1] * a.adjoint();
        }
        out[k] = next;
    }
    out
}

fn frobenius_dot(a: &DMatrix<C>, b: &DMatrix<C>) -> C {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

impl ReducedStates for MpsState {
    fn n_qubits(&self) -> usize {
        self.sites.len()
    }

    fn reduced(&self, qubits: &[usize]) -> Result<DMatrix<C>> {
        let n = self.n_qubits();
        let lt = left_transfers(&self.sites);
        let rt = right_transfers(&self.sites);
        let norm = rt[0][(0, 0)].re;
        match *qubits {
            [q] if q < n => {
                let site = &self.sites[q];
                let phys = [site.physical(0), site.physical(1)];
                let m = DMatrix::from_fn(2, 2, |s, t| {
                    frobenius_dot(&lt[q], &(&phys[s] * &rt[q + 1] * phys[t].adjoint())) / norm
                });
                Ok(m)
            }
            [a, b] if a < n && b < n && a != b => {
                let (i, j) = (a.min(b), a.max(b));
                let pi = [self.sites[i].physical(0), self.sites[i].physical(1)];
                let mut x: Vec<DMatrix<C>> = (0..4)
                    .map(|st| pi[st & 1].transpose() * &lt[i] * pi[st >> 1].conjugate())
                    .collect();
                for site in &self.sites[i + 1..j] {
                    let p = [site.physical(0), site.physical(1)];
                    for m in x.iter_mut() {
                        *m = p[0].transpose() * &*m * p[0].conjugate() + p[1].transpose() * &*m * p[1].conjugate();
                    }
                }
                let pj = [self.sites[j].physical(0), self.sites[j].physical(1)];
                let mut rho = DMatrix::zeros(4, 4);
                for s in 0..2 {
                    for s2 in 0..2 {
                        for t in 0..2 {
                            for t2 in 0..2 {
                                let right = &pj[t] * &rt[j + 1] * pj[t2].adjoint();
                                // local bit 0 is the lower qubit here
                                rho[(s + 2 * t, s2 + 2 * t2)] = frobenius_dot(&x[s + 2 * s2], &right) / norm;
                            }
                        }
                    }
                }
                if a > b {
                    let swap = |k: usize| ((k & 1) << 1) | (k >> 1);
                    rho = DMatrix::from_fn(4, 4, |r, c| rho[(swap(r), swap(c))]);
                }
                Ok(rho)
            }
            _ => Err(Error::InvalidInput(format!(
                "reduced density matrix needs 1 or 2 distinct in-range qubits, got {qubits:?}"
            ))),
        }
    }
}

fn update_left(l: &Env, a: &Site, w: &MpoSite) -> Env {
    let (da, db, dl, dr) = (w.dl, w.dr, a.dl, a.dr);
    debug_assert_eq!((l.da, l.d), (da, dl));
    // t1[a][α'][s][β]
    let mut t1 = vec![ZERO; da * dl * 2 * dr];
    for x in 0..da {
        for ap in 0..dl {
            let out = &mut t1[(x * dl + ap) * 2 * dr..(x * dl + ap + 1) * 2 * dr];
            for al in 0..dl {
                let c = l.data[(x * dl + ap) * dl + al];
                if c == ZERO {
                    continue;
                }
                for (o, v) in out.iter_mut().zip(&a.data[al * 2 * dr..(al + 1) * 2 * dr]) {
                    *o += c * v;
                }
            }
        }
    }
    // t2[b][α'][s'][β]
    let mut t2 = vec![ZERO; db * dl * 2 * dr];
    for x in 0..da {
        for y in 0..db {
            for so in 0..2 {
                for si in 0..2 {
                    let c = w.at(x, y, so, si);
                    if c == ZERO {
                        continue;
                    }
                    for ap in 0..dl {
                        let src = ((x * dl + ap) * 2 + si) * dr;
                        let dst = ((y * dl + ap) * 2 + so) * dr;
                        for b in 0..dr {
                            t2[dst + b] += c * t1[src + b];
                        }
                    }
                }
            }
        }
    }
    let mut out = vec![ZERO; db * dr * dr];
    for y in 0..db {
        for ap in 0..dl {
            for so in 0..2 {
                let src = ((y * dl + ap) * 2 + so) * dr;
                for bp in 0..dr {
                    let c = a.data[(ap * 2 + so) * dr + bp].conj();
                    if c == ZERO {
                        continue;
                    }
                    let dst = (y * dr + bp) * dr;
                    for b in 0..dr {
                        out[dst + b] += c * t2[src + b];
                    }
                }
            }
        }
    }
    Env { da: db, d: dr, data: out }
}

fn update_right(r: &Env, a: &Site, w: &MpoSite) -> Env {
    let (da, db, dl, dr) = (w.dl, w.dr, a.dl, a.dr);
    debug_assert_eq!((r.da, r.d), (db, dr));
    // t1[b][α][s][β'] = Σ_β A[α][s][β] R[b][β'][β]
    let mut t1 = vec![ZERO; db * dl * 2 * dr];
    for y in 0..db {
        for al in 0..dl {
            for s in 0..2 {
                let arow = &a.data[(al * 2 + s) * dr..(al * 2 + s + 1) * dr];
                let dst = ((y * dl + al) * 2 + s) * dr;
                for bp in 0..dr {
                    let rrow = &r.data[(y * dr + bp) * dr..(y * dr + bp + 1) * dr];
                    t1[dst + bp] = arow.iter().zip(rrow).map(|(x, z)| x * z).sum();
                }
            }
        }
    }
    // t2[a][α][s'][β']
    let mut t2 = vec![ZERO; da * dl * 2 * dr];
    for x in 0..da {
        for y in 0..db {
            for so in 0..2 {
                for si in 0..2 {
                    let c = w.at(x, y, so, si);
                    if c == ZERO {
                        continue;
                    }
                    for al in 0..dl {
                        let src = ((y * dl + al) * 2 + si) * dr;
                        let dst = ((x * dl + al) * 2 + so) * dr;
                        for bp in 0..dr {
                            t2[dst + bp] += c * t1[src + bp];
                        }
                    }
                }
            }
        }
    }
    // out[a][α'][α] = Σ conj(A[α'][s'][β']) t2[a][α][s'][β']
    let mut out = vec![ZERO; da * dl * dl];
    for x in 0..da {
        for ap in 0..dl {
            let brow = &a.data[ap * 2 * dr..(ap + 1) * 2 * dr];
            for al in 0..dl {
                let src = &t2[(x * dl + al) * 2 * dr..(x * dl + al + 1) * 2 * dr];
                out[(x * dl + ap) * dl + al] = brow.iter().zip(src).map(|(b, t)| b.conj() * t).sum();
            }
        }
    }
    Env { da, d: dl, data: out }
}

/// Two-site effective Hamiltonian acting on `θ[α][s1][s2][β]`.
struct TwoSite<'a> {
    l: &'a Env,
    r: &'a Env,
    w1: &'a MpoSite,
    w2: &'a MpoSite,
}

impl TwoSite<'_> {
    fn dim(&self) -> usize {
        self.l.d * 4 * self.r.d
    }

    fn apply(&self, theta: &[C], out: &mut [C]) {
        let (dl, dr) = (self.l.d, self.r.d);
        let (da, db, dc) = (self.w1.dl, self.w1.dr, self.w2.dr);
        let inner = 4 * dr;
        // t1[a][α'][s1 s2 β]
        let mut t1 = vec![ZERO; da * dl * inner];
        for x in 0..da {
            for ap in 0..dl {
                let dst = (x * dl + ap) * inner;
                for al in 0..dl {
                    let c = self.l.data[(x * dl + ap) * dl + al];
                    if c == ZERO {
                        continue;
                    }
                    for (o, v) in t1[dst..dst + inner].iter_mut().zip(&theta[al * inner..(al + 1) * inner]) {
                        *o += c * v;
                    }
                }
            }
        }
        // t2[b][α'][s1'][s2 β]
        let half = 2 * dr;
        let mut t2 = vec![ZERO; db * dl * inner];
        for x in 0..da {
            for y in 0..db {
                for so in 0..2 {
                    for si in 0..2 {
                        let c = self.w1.at(x, y, so, si);
                        if c == ZERO {
                            continue;
                        }
                        for ap in 0..dl {
                            let src = (x * dl + ap) * inner + si * half;
                            let dst = (y * dl + ap) * inner + so * half;
                            for k in 0..half {
                                t2[dst + k] += c * t1[src + k];
                            }
                        }
                    }
                }
            }
        }
        // t3[c][α'][s1'][s2'][β]
        let mut t3 = vec![ZERO; dc * dl * inner];
        for y in 0..db {
            for z in 0..dc {
                for so in 0..2 {
                    for si in 0..2 {
                        let c = self.w2.at(y, z, so, si);
                        if c == ZERO {
                            continue;
                        }
                        for ap in 0..dl {
                            for s1 in 0..2 {
                                let src = (y * dl + ap) * inner + s1 * half + si * dr;
                                let dst = (z * dl + ap) * inner + s1 * half + so * dr;
                                for b in 0..dr {
                                    t3[dst + b] += c * t2[src + b];
                                }
                            }
                        }
                    }
                }
            }
        }
        // out[α'][s1'][s2'][β'] = Σ R[c][β'][β] t3[c][α'][s1'][s2'][β]
        for z in 0..dc {
            for row in 0..dl * 4 {
                let src = &t3[(z * dl * 4 + row) * dr..(z * dl * 4 + row + 1) * dr];
                for bp in 0..dr {
                    let rrow = &self.r.data[(z * dr + bp) * dr..(z * dr + bp + 1) * dr];
                    out[row * dr + bp] += rrow.iter().zip(src).map(|(x, y)| x * y).sum::<C>();
                }
            }
        }
    }

    fn lowest(&self, start: Vec<C>) -> Result<(f64, Vec<C>)> {
        let dim = self.dim();
        if dim <= DENSE_LOCAL_DIM {
            let mut m = DMatrix::zeros(dim, dim);
            let mut e = vec![ZERO; dim];
            let mut col = vec![ZERO; dim];
            for c in 0..dim {
                e.iter_mut().for_each(|v| *v = ZERO);
                col.iter_mut().for_each(|v| *v = ZERO);
                e[c] = C::new(1.0, 0.0);
                self.apply(&e, &mut col);
                for r in 0..dim {
                    m[(r, c)] = col[r];
                }
            }
            let h = (&m + m.adjoint()) * C::new(0.5, 0.0);
            let (vals, vecs) = hermitian_eigen(h);
            return Ok((vals[0], vecs.column(0).iter().copied().collect()));
        }
        let opts = LanczosOptions {
            krylov_dim: 40,
            max_restarts: 200,
            tolerance: 1e-10,
        };
        let pair = lanczos_lowest(|v, out| self.apply(v, out), start, &opts)?;
        Ok((pair.value, pair.vector))
    }
}

/// Splits `θ` into two sites keeping at most `chi` normalized singular values.
///
/// With `left_canonical` the singular values go to the right site.
fn split(theta: &[C], dl: usize, dr: usize, chi: usize, left_canonical: bool) -> (Site, Site) {
    let m = DMatrix::from_fn(dl * 2, 2 * dr, |r, c| theta[r * 2 * dr + c]);
    let (u, s, vt) = svd_complex(&m);
    let s0 = s.first().copied().unwrap_or(0.0);
    let keep = s
        .iter()
        .take_while(|&&x| x > SINGULAR_FLOOR * s0)
        .count()
        .clamp(1, chi);
    let scale = s[..keep].iter().map(|x| x * x).sum::<f64>().sqrt();
    let sv: Vec<f64> = s[..keep].iter().map(|x| x / scale).collect();
    let left = Site {
        dl,
        dr: keep,
        data: (0..dl * 2)
            .flat_map(|r| (0..keep).map(move |c| (r, c)))
            .map(|(r, c)| if left_canonical { u[(r, c)] } else { u[(r, c)] * sv[c] })
            .collect(),
    };
    let right = Site {
        dl: keep,
        dr,
        data: (0..keep)
            .flat_map(|r| (0..2 * dr).map(move |c| (r, c)))
            .map(|(r, c)| if left_canonical { vt[(r, c)] * sv[r] } else { vt[(r, c)] })
            .collect(),
    };
    (left, right)
}

fn merge(a: &Site, b: &Site) -> Vec<C> {
    let (dl, dm, dr) = (a.dl, a.dr, b.dr);
    let mut theta = vec![ZERO; dl * 4 * dr];
    for al in 0..dl {
        for s1 in 0..2 {
            for m in 0..dm {
                let c = a.data[(al * 2 + s1) * dm + m];
                if c == ZERO {
                    continue;
                }
                for s2 in 0..2 {
                    let dst = ((al * 2 + s1) * 2 + s2) * dr;
                    let src = (m * 2 + s2) * dr;
                    for x in 0..dr {
                        theta[dst + x] += c * b.data[src + x];
                    }
                }
            }
        }
    }
    theta
}

fn expectation(sites: &[Site], mpo: &Mpo) -> f64 {
    let mut l = Env::trivial();
    for (site, w) in sites.iter().zip(&mpo.sites) {
        l = update_left(&l, site, w);
    }
    let norm = right_transfers(sites)[0][(0, 0)].re;
    l.data[0].re / norm
}

fn random_mps(n: usize, chi: usize, rng: &mut ChaCha8Rng) -> Vec<Site> {
    let bond = |k: usize| -> usize {
        let cap = |m: usize| if m >= 30 { usize::MAX } else { 1usize << m };
        chi.min(cap(k)).min(cap(n - k))
    };
    (0..n)
        .map(|k| {
            let (dl, dr) = (bond(k), bond(k + 1));
            Site {
                dl,
                dr,
                data: (0..dl * 2 * dr)
                    .map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect(),
            }
        })
        .collect()
}

/// Moves the orthogonality centre to site 0 by SVDs from the right.
fn right_canonicalize(sites: &mut [Site], chi: usize) {
    for k in (1..sites.len()).rev() {
        let theta = merge(&sites[k - 1], &sites[k]);
        let (a, b) = split(&theta, sites[k - 1].dl, sites[k].dr, chi, false);
        sites[k - 1] = a;
        sites[k] = b;
    }
}

/// Ground state of `h` by two-site DMRG.
///
/// The energy of every full sweep is recorded; sweeps that raise it are
/// listed in [`MpsState::warnings`] rather than treated as failures.
pub fn mps_ground_state(h: &PauliSum, opts: &DmrgOptions) -> Result<MpsState> {
    if opts.chi == 0 {
        return Err(Error::InvalidInput("bond dimension must be at least 1".into()));
    }
    let n = h.n_qubits();
    let mpo = build_mpo(h, opts.mpo_tolerance);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    if n == 1 {
        let w = &mpo.sites[0];
        let m = DMatrix::from_fn(2, 2, |r, c| w.at(0, 0, r, c));
        let (vals, vecs) = hermitian_eigen(m);
        let site = Site {
            dl: 1,
            dr: 1,
            data: vec![vecs[(0, 0)], vecs[(1, 0)]],
        };
        return Ok(MpsState {
            sites: vec![site],
            chi: opts.chi,
            energy: vals[0],
            sweep_energies: vec![vals[0]],
            warnings: Vec::new(),
        });
    }

    let mut sites = random_mps(n, opts.chi, &mut rng);
    right_canonicalize(&mut sites, opts.chi);
    let norm = sites[0].data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    sites[0].data.iter_mut().for_each(|x| *x /= norm);

    let mut left: Vec<Env> = vec![Env::trivial(); n + 1];
    let mut right: Vec<Env> = vec![Env::trivial(); n + 1];
    for k in (2..n).rev() {
        right[k] = update_right(&right[k + 1], &sites[k], &mpo.sites[k]);
    }

    let mut sweep_energies: Vec<f64> = Vec::with_capacity(opts.sweeps);
    let mut warnings = Vec::new();
    for sweep in 0..opts.sweeps {
        for k in 0..n - 1 {
            let theta = optimize_pair(&sites, &mpo, &left[k], &right[k + 2], k)?;
            let (a, b) = split(&theta, sites[k].dl, sites[k + 1].dr, opts.chi, true);
            sites[k] = a;
            sites[k + 1] = b;
            left[k + 1] = update_left(&left[k], &sites[k], &mpo.sites[k]);
        }
        for k in (0..n - 1).rev() {
            let theta = optimize_pair(&sites, &mpo, &left[k], &right[k + 2], k)?;
            let (a, b) = split(&theta, sites[k].dl, sites[k + 1].dr, opts.chi, false);
            sites[k] = a;
            sites[k + 1] = b;
            right[k + 1] = update_right(&right[k + 2], &sites[k + 1], &mpo.sites[k + 1]);
        }
        let e = expectation(&sites, &mpo);
        if let Some(&prev) = sweep_energies.last() {
            if e > prev + 1e-10 * prev.abs().max(1.0) {
                warnings.push(format!("sweep {sweep}: energy rose from {prev} to {e}"));
            }
        }
        sweep_energies.push(e);
    }
    let energy = expectation(&sites, &mpo);
    Ok(MpsState {
        sites,
        chi: opts.chi,
        energy,
        sweep_energies,
        warnings,
    })
}

fn optimize_pair(sites: &[Site], mpo: &Mpo, l: &Env, r: &Env, k: usize) -> Result<Vec<C>> {
    let op = TwoSite {
        l,
        r,
        w1: &mpo.sites[k],
        w2: &mpo.sites[k + 1],
    };
    let start = merge(&sites[k], &sites[k + 1]);
    Ok(op.lowest(start)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliWord;
    use crate::reference::{exact_ground_state, mutual_information};

    fn w(n: usize, s: &str) -> PauliWord {
        PauliWord::from_str_factors(n, s)
    }

    fn heisenberg_like(n: usize) -> PauliSum {
        let mut terms = Vec::new();
        for q in 0..n - 1 {
            terms.push((1.0, w(n, &format!("X{q} X{}", q + 1))));
            terms.push((0.7, w(n, &format!("Y{q} Y{}", q + 1))));
            terms.push((0.4, w(n, &format!("Z{q} Z{}", q + 1))));
        }
        terms.push((0.3, w(n, "Z0")));
        terms.push((-0.2, w(n, &format!("X0 Z2 X{}", n - 1))));
        PauliSum::from_terms(n, terms).unwrap()
    }

    #[test]
    fn sum_of_z_at_chi_one_is_a_product_state() {
        let n = 5;
        let h = PauliSum::from_terms(n, (0..n).map(|q| (1.0, w(n, &format!("Z{q}"))))).unwrap();
        let opts = DmrgOptions {
            chi: 1,
            sweeps: 3,
            ..Default::default()
        };
        let mps = mps_ground_state(&h, &opts).unwrap();
        assert!((mps.energy() + n as f64).abs() < 1e-10);
        assert_eq!(mps.max_bond(), 1);
        let mi = mutual_information(&mps).unwrap();
        assert!(mi.values().iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn large_chi_matches_exact() {
        let n = 6;
        let h = heisenberg_like(n);
        let (e_exact, psi) = exact_ground_state(&h).unwrap();
        let opts = DmrgOptions {
            chi: 8,
            sweeps: 6,
            seed: 3,
            ..Default::default()
        };
        let mps = mps_ground_state(&h, &opts).unwrap();
        assert!((mps.energy() - e_exact).abs() < 1e-8, "{} vs {e_exact}", mps.energy());
        assert!((mps.norm_sqr() - 1.0).abs() < 1e-8);
        let a = mutual_information(&psi).unwrap();
        let b = mutual_information(&mps).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn rdms_match_densified_state() {
        let n = 5;
        let h = heisenberg_like(n);
        let opts = DmrgOptions {
            chi: 2,
            sweeps: 2,
            seed: 11,
            ..Default::default()
        };
        let mps = mps_ground_state(&h, &opts).unwrap();
        let dense = mps.to_state_vector().unwrap();
        for q in 0..n {
            let d = mps.reduced(&[q]).unwrap() - crate::simulator::rdm(&dense, &[q]).unwrap();
            assert!(d.norm() < 1e-10);
            for p in 0..n {
                if p != q {
                    let d = mps.reduced(&[q, p]).unwrap() - crate::simulator::rdm(&dense, &[q, p]).unwrap();
                    assert!(d.norm() < 1e-10, "{q} {p}");
                }
            }
        }
        let e = dense.expectation(&h).unwrap();
        assert!((e - mps.energy()).abs() < 1e-10);
    }

    #[test]
    fn truncated_run_is_variational_and_reports_rises() {
        let n = 6;
        let h = heisenberg_like(n);
        let (e_exact, _) = exact_ground_state(&h).unwrap();
        let opts = DmrgOptions {
            chi: 2,
            sweeps: 4,
            seed: 1,
            ..Default::default()
        };
        let mps = mps_ground_state(&h, &opts).unwrap();
        assert!(mps.energy() > e_exact);
        assert!(mps.bond_dims().iter().all(|&d| d <= 2));
        let rises = mps
            .sweep_energies()
            .windows(2)
            .filter(|p| p[1] > p[0] + 1e-10 * p[0].abs().max(1.0))
            .count();
        assert_eq!(rises, mps.warnings().len());
    }

    #[test]
    fn untruncated_sweeps_descend() {
        let h = heisenberg_like(6);
        let opts = DmrgOptions {
            chi: 8,
            sweeps: 4,
            seed: 5,
            ..Default::default()
        };
        let mps = mps_ground_state(&h, &opts).unwrap();
        for pair in mps.sweep_energies().windows(2) {
            assert!(pair[1] <= pair[0] + 1e-10);
        }
        assert!(mps.warnings().is_empty());
    }

    #[test]
    fn deterministic_for_a_seed() {
        let h = heisenberg_like(5);
        let opts = DmrgOptions {
            chi: 2,
            sweeps: 2,
            seed: 9,
            ..Default::default()
        };
        let a = mps_ground_state(&h, &opts).unwrap();
        let b = mps_ground_state(&h, &opts).unwrap();
        assert_eq!(a.energy().to_bits(), b.energy().to_bits());
    }

    #[test]
    fn single_qubit_and_bad_chi() {
        let h = PauliSum::from_terms(1, [(2.0, w(1, "X0"))]).unwrap();
        let mps = mps_ground_state(&h, &DmrgOptions::default()).unwrap();
        assert!((mps.energy() + 2.0).abs() < 1e-12);
        let bad = DmrgOptions {
            chi: 0,
            ..Default::default()
        };
        assert!(mps_ground_state(&h, &bad).is_err());
    }
}
