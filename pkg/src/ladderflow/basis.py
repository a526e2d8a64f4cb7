"""Fixed-magnetization sector bases for the two-leg spin-1/2 ladder.

Two labelling schemes for the same sector:

* ``su2``: product states of 2L spins, one bit per site (1 = up), site order
  rung-major (sites 2i and 2i+1 are the two legs of rung i).  The sector is
  all states with ``sum(m_i) = M_tot``.
* ``so4``: per-rung total-spin states |S M> with S in {0, 1}, obtained by
  coupling the two spins on each rung.  One label in {(0,0), (1,-1), (1,0),
  (1,1)} per rung; the sector is all states with ``sum(M_i) = M_tot``.

Both schemes span the same sector, so their dimensions agree.  States are
kept in a canonical order (lexicographic on the encoded label sequence) so
that enumeration is bit-exactly reproducible.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .operators import SparseOperator

SU2 = "su2"
SO4 = "so4"

_SQRT_HALF = 1.0 / np.sqrt(2.0)

# so4 rung labels in digit order 0..3
_RUNG_LABELS = ((0, 0), (1, -1), (1, 0), (1, 1))
_RUNG_DIGIT = {lab: d for d, lab in enumerate(_RUNG_LABELS)}
_DIGIT_M = (0, -1, 0, 1)


class NotInSectorError(ValueError):
    """Configuration does not belong to the sector."""


@dataclass(frozen=True)
class SectorBasis:
    """Ordered enumeration of one fixed-M_tot sector with index lookup."""

    scheme: str
    L: int
    M_tot: int
    codes: np.ndarray
    _index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def encode(self, config) -> int:
        """Encode an occupancy tuple (su2) or rung-label tuple (so4)."""
        if isinstance(config, (int, np.integer)):
            return int(config)
        if self.scheme == SU2:
            if len(config) != 2 * self.L:
                raise NotInSectorError(
                    f"expected {2 * self.L} site values, got {len(config)}")
            code = 0
            for s, bit in enumerate(config):
                if bit not in (0, 1):
                    raise NotInSectorError(f"site value {bit!r} is not 0/1")
                code |= int(bit) << (2 * self.L - 1 - s)
            return code
        if len(config) != self.L:
            raise NotInSectorError(
                f"expected {self.L} rung labels, got {len(config)}")
        code = 0
        for i, lab in enumerate(config):
            d = _RUNG_DIGIT.get(tuple(lab))
            if d is None:
                raise NotInSectorError(f"unknown rung label {lab!r}")
            code += d * 4 ** (self.L - 1 - i)
        return code

    def index_of(self, config) -> int:
        code = self.encode(config)
        try:
            return self._index[code]
        except KeyError:
            raise NotInSectorError(
                f"configuration not in the (L={self.L}, M_tot={self.M_tot}) "
                f"{self.scheme} sector") from None

    def config(self, i: int):
        """Decode state i back to its occupancy / rung-label tuple."""
        code = int(self.codes[i])
        if self.scheme == SU2:
            n = 2 * self.L
            return tuple((code >> (n - 1 - s)) & 1 for s in range(n))
        return tuple(_RUNG_LABELS[(code // 4 ** (self.L - 1 - i)) % 4]
                     for i in range(self.L))

    def label(self, i: int) -> str:
        if self.scheme == SU2:
            return "".join(str(b) for b in self.config(i))
        return ".".join(f"{S}{M}" for S, M in self.config(i))


def enumerate_basis(scheme: str, L: int, M_tot: int = 0) -> SectorBasis:
    """Enumerate the fixed-M_tot sector in canonical (lexicographic) order."""
    if scheme not in (SU2, SO4):
        raise ValueError(f"unknown scheme {scheme!r}, expected 'su2' or 'so4'")
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if abs(M_tot) > L:
        raise NotInSectorError(f"sector (L={L}, M_tot={M_tot}) is empty")
    if scheme == SU2:
        n = 2 * L
        n_up = L + M_tot
        codes = [sum(1 << (n - 1 - s) for s in comb)
                 for comb in itertools.combinations(range(n), n_up)]
    else:
        codes = []
        for digs in itertools.product(range(4), repeat=L):
            if sum(_DIGIT_M[d] for d in digs) == M_tot:
                codes.append(sum(d * 4 ** (L - 1 - i)
                                 for i, d in enumerate(digs)))
    codes = np.array(sorted(codes), dtype=np.int64)
    index = {int(c): i for i, c in enumerate(codes)}
    return SectorBasis(scheme=scheme, L=L, M_tot=M_tot, codes=codes,
                       _index=index)


def index_of(basis: SectorBasis, config) -> int:
    """Position of a configuration in the canonical order of its sector."""
    return basis.index_of(config)


# Clebsch-Gordan factors for one rung: (bit1, bit2) -> [(digit, coefficient)].
# |1 1> = |uu>, |1 -1> = |dd>, |1 0> = (|ud> + |du>)/sqrt2,
# |0 0> = (|ud> - |du>)/sqrt2.
_CG = {
    (1, 1): ((3, 1.0),),
    (0, 0): ((1, 1.0),),
    (1, 0): ((2, _SQRT_HALF), (0, _SQRT_HALF)),
    (0, 1): ((2, _SQRT_HALF), (0, -_SQRT_HALF)),
}


def basis_transform_matrix(L: int, M_tot: int = 0) -> SparseOperator:
    """Orthogonal matrix U taking su2 sector coordinates to so4 coordinates.

    U[r, c] = <so4 state r | su2 state c>, a product of per-rung
    Clebsch-Gordan coefficients.  U^T U = I to machine precision.
    """
    su2 = enumerate_basis(SU2, L, M_tot)
    so4 = enumerate_basis(SO4, L, M_tot)
    n = 2 * L
    rows, cols, vals = [], [], []
    for c_idx in range(su2.dim):
        code = int(su2.codes[c_idx])
        options = []
        for i in range(L):
            b1 = (code >> (n - 1 - 2 * i)) & 1
            b2 = (code >> (n - 2 - 2 * i)) & 1
            options.append(_CG[(b1, b2)])
        for combo in itertools.product(*options):
            so4_code = sum(d * 4 ** (L - 1 - i)
                           for i, (d, _) in enumerate(combo))
            coef = 1.0
            for _, w in combo:
                coef *= w
            rows.append(so4.index_of(so4_code))
            cols.append(c_idx)
            vals.append(coef)
    return SparseOperator.from_coo(su2.dim, rows, cols, vals)
