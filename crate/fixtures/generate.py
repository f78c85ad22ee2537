"""Regenerate the bundled FCIDUMP fixtures and their FCI reference energies.

Requires pyscf. Run from the repository root:

    python3 fixtures/generate.py
"""

import hashlib
import os

import numpy as np
from pyscf import ao2mo, fci, gto, mcscf, scf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))


def write(name, h1, h2, ncas, nelec, ecore, e_fci):
    path = os.path.join(HERE, name)
    fcidump.from_integrals(path, h1, h2, ncas, nelec, nuc=ecore, ms=0, tol=1e-14)
    return name, e_fci


def h2(d):
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {d}", basis="6-31g", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    h2e = ao2mo.restore(1, ao2mo.kernel(mol, c), c.shape[1])
    e, _ = fci.direct_spin1.kernel(h1, h2e, c.shape[1], 2, ecore=mol.energy_nuc())
    return write(f"h2/h2_{d:.1f}.fcidump", h1, h2e, c.shape[1], 2, mol.energy_nuc(), e)


def cas(mol, ncas, nelecas, irreps, core):
    mf = scf.RHF(mol).run()
    mc = mcscf.CASCI(mf, ncas, nelecas)
    mo = mcscf.sort_mo_by_irrep(mc, mf.mo_coeff, irreps, core)
    # order the active orbitals by their canonical orbital energy
    act = slice(mc.ncore, mc.ncore + ncas)
    fock = mf.get_fock()
    energies = np.einsum("pi,pq,qi->i", mo[:, act], fock, mo[:, act])
    mo[:, act] = mo[:, act][:, np.argsort(energies, kind="stable")]
    h1, ecore = mc.get_h1eff(mo)
    h2e = ao2mo.restore(1, mc.get_h2eff(mo), ncas)
    e = mc.kernel(mo)[0]
    return h1, h2e, ecore, e


def lih(d):
    mol = gto.M(atom=f"Li 0 0 0; H 0 0 {d}", basis="sto-3g", symmetry="c2v", verbose=0)
    h1, h2e, ecore, e = cas(mol, 3, 2, {"A1": 3}, {"A1": 1})
    return write(f"lih/lih_{d:.1f}.fcidump", h1, h2e, 3, 2, ecore, e)


def h2o(d):
    half = np.deg2rad(107.6 / 2)
    y, z = d * np.sin(half), d * np.cos(half)
    mol = gto.M(
        atom=f"O 0 0 0; H 0 {y} {z}; H 0 {-y} {z}",
        basis="6-31g",
        symmetry="c2v",
        verbose=0,
    )
    h1, h2e, ecore, e = cas(mol, 5, 4, {"B2": 2, "A1": 3}, {"A1": 2, "B1": 1})
    return write(f"h2o/h2o_{d:.1f}.fcidump", h1, h2e, 5, 4, ecore, e)


def main():
    for sub in ("h2", "lih", "h2o"):
        os.makedirs(os.path.join(HERE, sub), exist_ok=True)
    rows = []
    for i in range(13):
        rows.append(h2(round(0.6 + 0.1 * i, 1)))
    for i in range(13):
        rows.append(lih(round(1.2 + 0.1 * i, 1)))
    for d in (1.2, 1.8, 2.4):
        rows.append(h2o(d))
    with open(os.path.join(HERE, "fci_energies.csv"), "w") as f:
        f.write("fixture,e_fci\n")
        for name, e in rows:
            f.write(f"{name},{e:.12f}\n")
    with open(os.path.join(HERE, "SHA256SUMS"), "w") as f:
        for name, _ in rows:
            with open(os.path.join(HERE, name), "rb") as g:
                f.write(f"{hashlib.sha256(g.read()).hexdigest()}  {name}\n")


if __name__ == "__main__":
    main()
