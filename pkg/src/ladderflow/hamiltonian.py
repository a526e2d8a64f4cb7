"""Sparse ladder Hamiltonians in both symmetry schemes.

The ladder has L rungs (2L spin-1/2 sites), open boundaries, rung coupling
J_t, leg coupling J_l and both diagonal couplings equal to J_c:

    H = J_t sum_i s_i1.s_i2
        + J_l sum_<ij> (s_i1.s_j1 + s_i2.s_j2)
        + J_c sum_<ij> (s_i1.s_j2 + s_i2.s_j1)

With gamma_tl = J_l/J_t and gamma_c = J_c/J_t fixed, H = J_t * H1 where H1
carries only the ratios; J_t is the running coupling of the reduction flow.

The same Hamiltonian in the rung-spin (so4) scheme, with S_i = s_i1 + s_i2
and R_i = s_i1 - s_i2, reads

    H = (J_t/4) sum_i (S_i^2 - R_i^2) + J1 sum_<ij> S_i.S_j
        + J2 sum_<ij> R_i.R_j,       J1 = (J_l+J_c)/2,  J2 = (J_l-J_c)/2.

The S and R matrix elements are taken from their ladder-operator action on
the rung states |S M> directly, so agreement of the two builds is a genuine
cross-check rather than a change of variables.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import SU2, SO4, SectorBasis
from .operators import SparseOperator, apply, diagonal  # noqa: F401  (re-export)

_SQRT2 = np.sqrt(2.0)


class SchemeMismatchError(ValueError):
    """Basis scheme does not match the requested builder."""


@dataclass(frozen=True)
class CouplingSet:
    """Ladder couplings {J_t, J_l, J_c}; ratios and chain couplings derived."""

    J_t: float
    J_l: float
    J_c: float

    def __post_init__(self):
        if not self.J_t > 0:
            raise ValueError(f"J_t must be positive, got {self.J_t}")

    @property
    def gamma_tl(self) -> float:
        return self.J_l / self.J_t

    @property
    def gamma_c(self) -> float:
        return self.J_c / self.J_t

    @property
    def J1(self) -> float:
        return 0.5 * (self.J_l + self.J_c)

    @property
    def J2(self) -> float:
        return 0.5 * (self.J_l - self.J_c)

    def scaled(self, c: float) -> "CouplingSet":
        return CouplingSet(c * self.J_t, c * self.J_l, c * self.J_c)


def _su2_bonds(L: int, gamma_tl: float, gamma_c: float):
    """(site_a, site_b, weight) list; open boundary, rung-major site order."""
    bonds = [(2 * i, 2 * i + 1, 1.0) for i in range(L)]
    for i in range(L - 1):
        bonds.append((2 * i, 2 * i + 2, gamma_tl))
        bonds.append((2 * i + 1, 2 * i + 3, gamma_tl))
        bonds.append((2 * i, 2 * i + 3, gamma_c))
        bonds.append((2 * i + 1, 2 * i + 2, gamma_c))
    return bonds


def build_h1_su2(basis: SectorBasis, gamma_tl: float,
                 gamma_c: float) -> SparseOperator:
    """H1 = H/J_t in the su2 product basis.

    Each bond contributes s_a.s_b = sz_a sz_b + (s+_a s-_b + s-_a s+_b)/2:
    +w/4 on the diagonal for aligned pairs, -w/4 plus a w/2 double-flip
    entry for anti-aligned pairs.  Total magnetization is conserved.
    """
    if basis.scheme != SU2:
        raise SchemeMismatchError(f"need an su2 basis, got {basis.scheme!r}")
    L = basis.L
    n = 2 * L
    bonds = _su2_bonds(L, gamma_tl, gamma_c)
    rows, cols, vals = [], [], []
    for idx in range(basis.dim):
        code = int(basis.codes[idx])
        diag = 0.0
        for a, b, w in bonds:
            if w == 0.0:
                continue
            ba = (code >> (n - 1 - a)) & 1
            bb = (code >> (n - 1 - b)) & 1
            if ba == bb:
                diag += 0.25 * w
            else:
                diag -= 0.25 * w
                flipped = code ^ ((1 << (n - 1 - a)) | (1 << (n - 1 - b)))
                rows.append(idx)
                cols.append(basis.index_of(flipped))
                vals.append(0.5 * w)
        rows.append(idx)
        cols.append(idx)
        vals.append(diag)
    return SparseOperator.from_coo(basis.dim, rows, cols, vals)


def rung_generators():
    """Single-rung S and R matrices on (|00>, |1 -1>, |1 0>, |1 1>).

    S acts within the triplet; R switches singlet and triplet:
    S+|1 0> = sqrt2|1 1>, S+|1 -1> = sqrt2|1 0>,
    R+|0 0> = sqrt2|1 1>, R+|1 -1> = -sqrt2|0 0>,
    Rz|0 0> = -|1 0>,     Rz|1 0> = -|0 0>.
    """
    Sp = np.zeros((4, 4))
    Sp[3, 2] = _SQRT2
    Sp[2, 1] = _SQRT2
    Sz = np.diag([0.0, -1.0, 0.0, 1.0])
    Rp = np.zeros((4, 4))
    Rp[3, 0] = _SQRT2
    Rp[0, 1] = -_SQRT2
    Rz = np.zeros((4, 4))
    Rz[2, 0] = -1.0
    Rz[0, 2] = -1.0
    return Sp, Sz, Rp, Rz


def _rung_bond_terms(J1: float, J2: float):
    """Nonzeros of J1 S_i.S_j + J2 R_i.R_j on a pair of rungs,
    keyed by source digit pair: {(a, b): [(a', b', value), ...]}."""
    Sp, Sz, Rp, Rz = rung_generators()
    Sm, Rm = Sp.T, Rp.T
    T = J1 * (np.kron(Sz, Sz) + 0.5 * (np.kron(Sp, Sm) + np.kron(Sm, Sp)))
    T += J2 * (np.kron(Rz, Rz) + 0.5 * (np.kron(Rp, Rm) + np.kron(Rm, Rp)))
    terms = {}
    for src in range(16):
        a, b = divmod(src, 4)
        ent = [(dst // 4, dst % 4, T[dst, src])
               for dst in range(16) if T[dst, src] != 0.0]
        if ent:
            terms[(a, b)] = ent
    return terms


def build_h_so4(basis: SectorBasis, couplings: CouplingSet) -> SparseOperator:
    """Full Hamiltonian in the so4 rung basis.

    The rung term is diagonal: -3 J_t/4 per singlet rung (S^2=0, R^2=3) and
    +J_t/4 per triplet rung (S^2=2, R^2=1).
    """
    if basis.scheme != SO4:
        raise SchemeMismatchError(f"need an so4 basis, got {basis.scheme!r}")
    L = basis.L
    Jt = couplings.J_t
    terms = _rung_bond_terms(couplings.J1, couplings.J2)
    rows, cols, vals = [], [], []
    for idx in range(basis.dim):
        code = int(basis.codes[idx])
        digs = [(code // 4 ** (L - 1 - i)) % 4 for i in range(L)]
        diag = sum(-0.75 * Jt if d == 0 else 0.25 * Jt for d in digs)
        rows.append(idx)
        cols.append(idx)
        vals.append(diag)
        for i in range(L - 1):
            ent = terms.get((digs[i], digs[i + 1]))
            if not ent:
                continue
            for ap, bp, val in ent:
                code2 = (code + (ap - digs[i]) * 4 ** (L - 1 - i)
                         + (bp - digs[i + 1]) * 4 ** (L - 2 - i))
                rows.append(idx)
                cols.append(basis.index_of(code2))
                vals.append(val)
    return SparseOperator.from_coo(basis.dim, rows, cols, vals)


def build_hamiltonian(basis: SectorBasis,
                      couplings: CouplingSet) -> SparseOperator:
    """Full H for either scheme (su2: J_t * H1; so4: direct build)."""
    if basis.scheme == SU2:
        h1 = build_h1_su2(basis, couplings.gamma_tl, couplings.gamma_c)
        return h1.scaled(couplings.J_t)
    return build_h_so4(basis, couplings)


def h1_operator(basis: SectorBasis, couplings: CouplingSet) -> SparseOperator:
    """H/J_t for either scheme; the operator multiplied by the running g.

    Both schemes are linear in (J_t, J_l, J_c) jointly, so H/J_t depends
    only on the fixed ratios gamma_tl and gamma_c.
    """
    if basis.scheme == SU2:
        return build_h1_su2(basis, couplings.gamma_tl, couplings.gamma_c)
    unit = CouplingSet(1.0, couplings.gamma_tl, couplings.gamma_c)
    return build_h_so4(basis, unit)
