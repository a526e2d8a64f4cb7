"""Real symmetric sparse operators over a sector basis."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp


class SparseOperator:
    """Square real sparse matrix in CSR form.

    Hamiltonian builders produce symmetric operators (full symmetric storage:
    both (i, j) and (j, i) are stored).  The basis-change matrix between the
    two symmetry schemes is stored in the same container but is orthogonal
    rather than symmetric.
    """

    def __init__(self, matrix: sp.spmatrix):
        m = sp.csr_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got {m.shape}")
        m.sum_duplicates()
        self._csr = m

    @classmethod
    def from_coo(cls, dim: int, rows, cols, vals) -> "SparseOperator":
        m = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim))
        return cls(m.tocsr())

    @classmethod
    def from_dense(cls, matrix: np.ndarray) -> "SparseOperator":
        return cls(sp.csr_matrix(np.asarray(matrix, dtype=float)))

    @classmethod
    def identity(cls, dim: int) -> "SparseOperator":
        return cls(sp.identity(dim, format="csr"))

    @property
    def dim(self) -> int:
        return self._csr.shape[0]

    @property
    def csr(self) -> sp.csr_matrix:
        return self._csr

    @property
    def nnz(self) -> int:
        return self._csr.nnz

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise ValueError(f"vector has shape {v.shape}, operator dim {self.dim}")
        return self._csr @ v

    def diagonal(self) -> np.ndarray:
        return self._csr.diagonal()

    def column(self, j: int) -> np.ndarray:
        return self._csr[:, j].toarray().ravel()

    def toarray(self) -> np.ndarray:
        return self._csr.toarray()

    def submatrix(self, indices: np.ndarray) -> "SparseOperator":
        """Principal submatrix on the given (sorted) index set."""
        idx = np.asarray(indices)
        return SparseOperator(self._csr[idx][:, idx].tocsr())

    def scaled(self, c: float) -> "SparseOperator":
        return SparseOperator(self._csr * float(c))

    def __rmul__(self, c: float) -> "SparseOperator":
        return self.scaled(c)

    def symmetry_defect(self) -> float:
        d = self._csr - self._csr.T
        return 0.0 if d.nnz == 0 else float(np.max(np.abs(d.data)))

    def dump(self, stream) -> None:
        """Write coordinate text format: one `i j value` line per entry, 0-based."""
        coo = self._csr.tocoo()
        for i, j, v in zip(coo.row, coo.col, coo.data):
            stream.write(f"{i} {j} {v:.17g}\n")

    def __repr__(self) -> str:
        return f"SparseOperator(dim={self.dim}, nnz={self.nnz})"


def apply(op: SparseOperator, v: np.ndarray) -> np.ndarray:
    """Matrix-vector product op @ v."""
    return op.apply(v)


def diagonal(op: SparseOperator) -> np.ndarray:
    """Main diagonal of the operator."""
    return op.diagonal()
