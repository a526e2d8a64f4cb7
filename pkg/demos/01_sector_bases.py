#!/usr/bin/env python3
"""Sector bases in the two symmetry schemes and the map between them.

The M_tot = 0 sector of an L-rung ladder can be labelled by site spins
(su2 scheme) or by per-rung total spins |S M> (so4 scheme).  Both label
the same space, and a product of Clebsch-Gordan factors rotates one into
the other.
"""
import numpy as np

from ladderflow import (SU2, SO4, CouplingSet, basis_transform_matrix,
                        build_hamiltonian, enumerate_basis)

print("Sector dimensions (M_tot = 0):")
for L in range(1, 8):
    b2 = enumerate_basis(SU2, L)
    b4 = enumerate_basis(SO4, L)
    print(f"  L={L}:  su2 {b2.dim:5d}   so4 {b4.dim:5d}")

print("\nThe L=2 so4 sector, state by state:")
b4 = enumerate_basis(SO4, 2)
for i in range(b4.dim):
    print(f"  {i}: {b4.label(i)}")

print("\nBasis rotation U (su2 -> so4) is orthogonal:")
for L in (2, 3, 4):
    u = basis_transform_matrix(L)
    defect = np.abs((u.csr.T @ u.csr).toarray() - np.eye(u.dim)).max()
    print(f"  L={L}: max|U^T U - I| = {defect:.2e}")

print("\n... and maps one Hamiltonian build onto the other:")
c = CouplingSet(J_t=3.0, J_l=1.7, J_c=0.6)
for L in (2, 3):
    h2 = build_hamiltonian(enumerate_basis(SU2, L), c).toarray()
    h4 = build_hamiltonian(enumerate_basis(SO4, L), c).toarray()
    u = basis_transform_matrix(L).toarray()
    print(f"  L={L}: max|U^T H_so4 U - H_su2| = "
          f"{np.abs(u.T @ h4 @ u - h2).max():.2e}")
