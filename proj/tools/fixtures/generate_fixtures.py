#!/usr/bin/env python3
"""Regenerate the FCIDUMP fixtures under data/fixtures.

Integrals are produced with PySCF (STO-3G, restricted Hartree-Fock, canonical
MO basis).  Each FCIDUMP is written next to a JSON sidecar holding the
reference values the C++ tests compare against (RHF energy, orbital energies,
FCI energy computed by PySCF's own solver).

Usage: python3 tools/fixtures/generate_fixtures.py [--out data/fixtures]
"""
import argparse
import json
import os

import numpy as np
from pyscf import fci, gto, scf
from pyscf.tools import fcidump

H_CHAIN_REQ = 0.75  # angstrom


def linear_chain(n_atoms, spacing):
    return [("H", (0.0, 0.0, i * spacing)) for i in range(n_atoms)]


def fixtures():
    yield "h2_r0.735", linear_chain(2, 0.735), {"bond_length": 0.735}
    for ratio in (1.0, 1.25, 1.5, 1.75, 2.0, 2.5):
        r = ratio * H_CHAIN_REQ
        yield f"h4_r{ratio:.2f}", linear_chain(4, r), {"bond_length": r, "r_over_req": ratio}
    for ratio in (1.0, 1.5, 2.0):
        r = ratio * H_CHAIN_REQ
        yield f"h6_r{ratio:.2f}", linear_chain(6, r), {"bond_length": r, "r_over_req": ratio}


def build(name, atoms, meta, out):
    mol = gto.M(atom=atoms, basis="sto-3g", unit="angstrom", symmetry=False, verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.conv_tol_grad = 1e-9
    e_hf = mf.kernel()
    if not mf.converged:
        raise RuntimeError(f"RHF did not converge for {name}")
    cis = fci.FCI(mf)
    cis.conv_tol = 1e-12
    e_fci, _ = cis.kernel()

    path = os.path.join(out, name + ".fcidump")
    fcidump.from_scf(mf, path, tol=1e-15)
    sidecar = dict(meta)
    sidecar.update(
        name=name,
        basis="sto-3g",
        n_spatial=int(mol.nao),
        n_electrons=int(mol.nelectron),
        hf_energy=float(e_hf),
        fci_energy=float(e_fci),
        mo_energy=[float(x) for x in np.asarray(mf.mo_energy)],
    )
    with open(os.path.join(out, name + ".json"), "w") as f:
        json.dump(sidecar, f, indent=2)
        f.write("\n")
    print(f"{name:12s} E_HF={e_hf:.10f} E_FCI={e_fci:.10f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "..", "data", "fixtures"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for name, atoms, meta in fixtures():
        build(name, atoms, meta, args.out)


if __name__ == "__main__":
    main()
