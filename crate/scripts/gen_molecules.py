#!/usr/bin/env python3
"""Generate qubit Hamiltonians (Pauli-sum files) for H2 and linear H4.

STO-3G basis, neutral singlet, RHF orbitals from PySCF, Jordan-Wigner
mapping via OpenFermion with interleaved spin orbitals (0a, 0b, 1a, 1b, ...).
Qubit j of the Pauli word is spin orbital j. The identity term carries the
nuclear repulsion and core constant, so eigenvalues are total energies in
Hartree.

Usage: python3 scripts/gen_molecules.py crates/core/data
"""

import os
import sys

import numpy as np
from openfermion import InteractionOperator, jordan_wigner
from openfermion.chem.molecular_data import spinorb_from_spatial
from pyscf import fci, gto, scf

H2_BONDS = [0.5, 0.6, 0.7, 0.74, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.8, 2.0, 2.2]
H4_BONDS = [1.0]


def qubit_hamiltonian(geometry):
    mol = gto.M(atom=geometry, basis="sto-3g", charge=0, spin=0, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    eri = mol.ao2mo(c, aosym=1).reshape([c.shape[1]] * 4)
    # chemist (pq|rs) -> physicist <pr|sq> ordering expected by OpenFermion
    two = np.asarray(eri.transpose(0, 2, 3, 1), order="C")
    one_so, two_so = spinorb_from_spatial(h1, two)
    op = InteractionOperator(mol.energy_nuc(), one_so, 0.5 * two_so)
    qop = jordan_wigner(op)
    e_fci = fci.FCI(mf).kernel()[0]
    return qop, 2 * c.shape[1], e_fci, mf.e_tot


def write(path, qop, n, note):
    terms = []
    for term, coef in qop.terms.items():
        if abs(coef) < 1e-12:
            continue
        assert abs(coef.imag) < 1e-12
        word = ["I"] * n
        for q, p in term:
            word[q] = p
        terms.append(("".join(word), coef.real))
    terms.sort()
    with open(path, "w") as f:
        for line in note:
            f.write(f"# {line}\n")
        f.write(f"QUBITS {n}\n")
        for word, coef in terms:
            f.write(f"{coef:.16e} {word}\n")


def main():
    out = sys.argv[1]
    os.makedirs(os.path.join(out, "h2"), exist_ok=True)
    os.makedirs(os.path.join(out, "h4"), exist_ok=True)
    for r in H2_BONDS:
        qop, n, e_fci, e_hf = qubit_hamiltonian(f"H 0 0 0; H 0 0 {r}")
        note = [
            f"H2 STO-3G bond length {r} Angstrom, Jordan-Wigner, interleaved spin orbitals",
            f"generated by scripts/gen_molecules.py (PySCF RHF + OpenFermion)",
            f"PySCF FCI energy {e_fci:.12f} Ha, RHF energy {e_hf:.12f} Ha",
        ]
        write(os.path.join(out, "h2", f"h2_{r:.2f}.pauli"), qop, n, note)
        print(f"h2 {r}: {len(qop.terms)} terms, fci {e_fci:.10f}")
    for r in H4_BONDS:
        geo = "; ".join(f"H 0 0 {i * r}" for i in range(4))
        qop, n, e_fci, e_hf = qubit_hamiltonian(geo)
        note = [
            f"linear H4 STO-3G equal spacing {r} Angstrom, Jordan-Wigner, interleaved spin orbitals",
            f"generated by scripts/gen_molecules.py (PySCF RHF + OpenFermion)",
            f"PySCF FCI energy {e_fci:.12f} Ha, RHF energy {e_hf:.12f} Ha",
        ]
        write(os.path.join(out, "h4", f"h4_{r:.2f}.pauli"), qop, n, note)
        print(f"h4 {r}: {len(qop.terms)} terms, fci {e_fci:.10f}")


if __name__ == "__main__":
    main()
