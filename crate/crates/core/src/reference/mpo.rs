use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::linalg::svd_real;
use crate::pauli::{Pauli, PauliSum};

const LOSSLESS_FLOOR: f64 = 1e-14;

/// One MPO site: `W[a][b]` is a 2×2 operator on the site.
///
/// Entry `(a, b, out, in)` lives at `((a * dr + b) * 2 + out) * 2 + in`.
#[derive(Debug, Clone)]
pub(crate) struct MpoSite {
    pub dl: usize,
    pub dr: usize,
    pub data: Vec<Complex64>,
}

impl MpoSite {
    #[inline]
    pub fn at(&self, a: usize, b: usize, out: usize, inp: usize) -> Complex64 {
        self.data[((a * self.dr + b) * 2 + out) * 2 + inp]
    }
}

/// Matrix product operator with site `k` acting on qubit `k`.
#[derive(Debug, Clone)]
pub struct Mpo {
    pub(crate) sites: Vec<MpoSite>,
}

impl Mpo {
    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    /// Bond dimensions between neighbouring sites.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites.iter().skip(1).map(|s| s.dl).collect()
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Dense matrix in the computational basis; qubit `k` is bit `k`.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut blocks: Vec<DMatrix<Complex64>> = vec![DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0))];
        for (k, site) in self.sites.iter().enumerate() {
            let dim = 1usize << k;
            let mut next = vec![DMatrix::zeros(2 * dim, 2 * dim); site.dr];
            for (a, block) in blocks.iter().enumerate() {
                for (b, out) in next.iter_mut().enumerate() {
                    for so in 0..2 {
                        for si in 0..2 {
                            let w = site.at(a, b, so, si);
                            if w == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            let mut view = out.view_mut((so * dim, si * dim), (dim, dim));
                            view += block * w;
                        }
                    }
                }
            }
            blocks = next;
        }
        blocks.swap_remove(0)
    }

    /// `H v` through the dense matrix; intended for small checks.
    pub fn apply_dense(&self, v: &[Complex64]) -> Vec<Complex64> {
        let m = self.to_dense();
        (0..v.len())
            .map(|r| (0..v.len()).map(|c| m[(r, c)] * v[c]).sum())
            .collect()
    }
}

fn pauli_index(p: Pauli) -> usize {
    match p {
        Pauli::I => 0,
        Pauli::X => 1,
        Pauli::Y => 2,
        Pauli::Z => 3,
    }
}

fn pauli_matrix(p: usize) -> [[Complex64; 2]; 2] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match p {
        0 => [[one, o], [o, one]],
        1 => [[o, one], [one, o]],
        2 => [[o, -i], [i, o]],
        _ => [[one, o], [o, -one]],
    }
}

/// Real site tensor in the Pauli basis, entry `(a, p, b)` at `(a * 4 + p) * dr + b`.
struct PauliSite {
    dl: usize,
    dr: usize,
    data: Vec<f64>,
}

fn kept_rank(s: &[f64], tol: f64) -> usize {
    let s0 = s.first().copied().unwrap_or(0.0);
    let cut = tol.max(LOSSLESS_FLOOR) * s0;
    s.iter().take_while(|&&x| x > cut).count().max(1)
}

/// MPO of `h` as a sum of rank-one term MPOs followed by SVD compression.
///
/// A right-to-left pass drops only numerically zero singular values; the
/// left-to-right pass then discards singular values below `tolerance`
/// times the largest on each bond.
pub fn build_mpo(h: &PauliSum, tolerance: f64) -> Mpo {
    let n = h.n_qubits();
    let terms: Vec<(f64, Vec<usize>)> = if h.is_empty() {
        vec![(0.0, vec![0; n])]
    } else {
        h.terms()
            .iter()
            .map(|(c, w)| (*c, (0..n).map(|q| pauli_index(w.factor(q))).collect()))
            .collect()
    };
    let m = terms.len();

    let mut sites: Vec<PauliSite> = Vec::with_capacity(n);
    if n == 1 {
        let mut data = vec![0.0; 4];
        for (c, p) in &terms {
            data[p[0]] += c;
        }
        sites.push(PauliSite { dl: 1, dr: 1, data });
    } else {
        // carry[t][j]: contraction of term t's right part with the
        // compressed sites to its right
        let mut carry = DMatrix::<f64>::from_element(m, 1, 1.0);
        let mut right: Vec<PauliSite> = Vec::new();
        for k in (1..n).rev() {
            let r = carry.ncols();
            let mut mat = DMatrix::<f64>::zeros(m, 4 * r);
            for (t, (_, p)) in terms.iter().enumerate() {
                for j in 0..r {
                    mat[(t, p[k] * r + j)] = carry[(t, j)];
                }
            }
            let (u, s, vt) = svd_real(&mat);
            let keep = kept_rank(&s, 0.0);
            let mut data = vec![0.0; keep * 4 * r];
            for a in 0..keep {
                for col in 0..4 * r {
                    data[a * 4 * r + col] = vt[(a, col)];
                }
            }
            right.push(PauliSite { dl: keep, dr: r, data });
            carry = DMatrix::from_fn(m, keep, |t, a| u[(t, a)] * s[a]);
        }
        let r = carry.ncols();
        let mut data = vec![0.0; 4 * r];
        for (t, (c, p)) in terms.iter().enumerate() {
            for j in 0..r {
                data[p[0] * r + j] += c * carry[(t, j)];
            }
        }
        sites.push(PauliSite { dl: 1, dr: r, data });
        sites.extend(right.into_iter().rev());
    }

    for k in 0..n.saturating_sub(1) {
        let (dl, dr) = (sites[k].dl, sites[k].dr);
        let mat = DMatrix::from_fn(dl * 4, dr, |row, col| sites[k].data[row * dr + col]);
        let (u, s, vt) = svd_real(&mat);
        let keep = kept_rank(&s, tolerance);
        sites[k] = PauliSite {
            dl,
            dr: keep,
            data: (0..dl * 4)
                .flat_map(|row| (0..keep).map(move |a| (row, a)))
                .map(|(row, a)| u[(row, a)])
                .collect(),
        };
        let sv = DMatrix::from_fn(keep, dr, |a, b| s[a] * vt[(a, b)]);
        let next = &sites[k + 1];
        let (ndl, ndr) = (next.dl, next.dr);
        let mut data = vec![0.0; keep * 4 * ndr];
        for a in 0..keep {
            for b in 0..ndl {
                let f = sv[(a, b)];
                if f == 0.0 {
                    continue;
                }
                for col in 0..4 * ndr {
                    data[a * 4 * ndr + col] += f * next.data[b * 4 * ndr + col];
                }
            }
        }
        sites[k + 1] = PauliSite { dl: keep, dr: ndr, data };
    }

    let paulis: Vec<[[Complex64; 2]; 2]> = (0..4).map(pauli_matrix).collect();
    let sites = sites
        .into_iter()
        .map(|ps| {
            let mut data = vec![Complex64::new(0.0, 0.0); ps.dl * ps.dr * 4];
            for a in 0..ps.dl {
                for p in 0..4 {
                    for b in 0..ps.dr {
                        let v = ps.data[(a * 4 + p) * ps.dr + b];
                        if v == 0.0 {
                            continue;
                        }
                        for so in 0..2 {
                            for si in 0..2 {
                                data[((a * ps.dr + b) * 2 + so) * 2 + si] += paulis[p][so][si] * v;
                            }
                        }
                    }
                }
            }
            MpoSite {
                dl: ps.dl,
                dr: ps.dr,
                data,
            }
        })
        .collect();
    Mpo { sites }
}
