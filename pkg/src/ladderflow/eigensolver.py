"""Lowest eigenpairs of symmetric sparse operators.

``lanczos_lowest`` is the production path: Lanczos with full
reorthogonalization, restarted with deflation against converged pairs so
that degenerate clusters come out with their full multiplicity, plus a
confirmation sweep that guards against a skipped cluster copy.  A dense
LAPACK diagonalization (``dense_eig``) serves as the brute-force oracle for
small dimensions and is kept independent of the Lanczos path.

The start vector is deterministic for a given seed (normalized all-ones
plus a small seeded perturbation), so repeated runs are bit-comparable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal

from .operators import SparseOperator

_DEGENERACY_TOL = 1e-10  # cluster width for ordering tie-breaks


class LanczosConvergenceError(RuntimeError):
    """Raised when the iteration budget is exhausted; carries best residual."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


@dataclass
class EigenPair:
    """Eigenvalue and unit-norm eigenvector over the current basis."""

    value: float
    vector: np.ndarray


def _as_csr(op) -> sp.csr_matrix:
    if isinstance(op, SparseOperator):
        return op.csr
    if sp.issparse(op):
        return sp.csr_matrix(op)
    return sp.csr_matrix(np.asarray(op, dtype=float))


def _canonical_order(vals: np.ndarray, vecs: np.ndarray):
    """Ascending values; inside numerically degenerate clusters order by the
    index of the largest-magnitude component; fix overall sign the same way."""
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    i = 0
    while i < len(vals):
        j = i + 1
        while j < len(vals) and vals[j] - vals[i] < _DEGENERACY_TOL:
            j += 1
        if j - i > 1:
            keys = [int(np.argmax(np.abs(vecs[:, c]))) for c in range(i, j)]
            sub = np.argsort(keys, kind="stable")
            vals[i:j] = vals[i:j][sub]
            vecs[:, i:j] = vecs[:, i:j][:, sub]
        i = j
    for c in range(vecs.shape[1]):
        m = int(np.argmax(np.abs(vecs[:, c])))
        if vecs[m, c] < 0:
            vecs[:, c] = -vecs[:, c]
    return vals, vecs


def _lanczos_pass(A: sp.csr_matrix, F: np.ndarray, v0: np.ndarray,
                  bound_tol: float, max_steps: int):
    """One Lanczos pass on A deflated against the columns of F.

    Iterates until the lowest Ritz pair's residual bound drops below
    bound_tol, the Krylov space breaks down (invariant subspace), or the
    step budget runs out.  Returns (ritz values, ritz vectors, steps used).
    """
    n = A.shape[0]
    f = F.shape[1]
    m_cap = n - f
    v = v0 - F @ (F.T @ v0)
    nv = np.linalg.norm(v)
    if nv < 1e-12 or m_cap <= 0:
        return np.empty(0), np.empty((n, 0)), 0
    V = np.empty((n, m_cap))
    V[:, 0] = v / nv
    alphas: list[float] = []
    betas: list[float] = []
    scale = 0.0
    used = 0
    for j in range(m_cap):
        w = A @ V[:, j]
        used += 1
        alpha = float(V[:, j] @ w)
        alphas.append(alpha)
        w -= alpha * V[:, j]
        if j > 0:
            w -= betas[-1] * V[:, j - 1]
        # full reorthogonalization (two sweeps) against the pass basis and
        # the deflation set; this is what keeps degenerate clusters clean
        for _ in range(2):
            w -= V[:, :j + 1] @ (V[:, :j + 1].T @ w)
            if f:
                w -= F @ (F.T @ w)
        beta = float(np.linalg.norm(w))
        scale = max(scale, abs(alpha), beta)
        th, S = eigh_tridiagonal(alphas, betas, select="i",
                                 select_range=(0, 0))
        bound = abs(beta * S[-1, 0])
        if (bound < bound_tol or beta < 1e-13 * max(1.0, scale)
                or used >= max_steps or j == m_cap - 1):
            break
        betas.append(beta)
        V[:, j + 1] = w / beta
    m = len(alphas)
    th, S = eigh_tridiagonal(alphas, betas[:m - 1])
    return th, V[:, :m] @ S, used


def _residuals(A, X, vals):
    return [float(np.linalg.norm(A @ X[:, i] - vals[i] * X[:, i]))
            for i in range(len(vals))]


def lanczos_lowest(op, k: int, tol: float = 1e-10, max_iter: int = 20000,
                   seed: int = 0) -> list[EigenPair]:
    """k lowest eigenpairs of a symmetric operator, sorted ascending.

    Restart strategy: each pass converges at least the lowest not-yet-found
    eigenpair; converged pairs are deflated and the next pass restarts from
    a seeded random vector, which picks up the remaining copies of any
    degenerate cluster one at a time.  Once k pairs are known, one further
    pass locates the lowest *remaining* eigenvalue; if it undercuts the
    current k-th value (a cluster copy the earlier passes skipped), it is
    polished to full tolerance and the set is updated.  A final
    Rayleigh-Ritz step over everything found tightens the returned pairs.
    """
    A = _as_csr(op)
    n = A.shape[0]
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds operator dimension {n}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    rng = np.random.default_rng(seed)
    start = np.ones(n) / np.sqrt(n) + 1e-2 * rng.standard_normal(n)
    vals: list[float] = []
    vecs: list[np.ndarray] = []
    budget = max_iter
    best_res = np.inf
    stale = 0

    def run_pass(v0, bound_tol):
        nonlocal budget
        F = np.column_stack(vecs) if vecs else np.zeros((n, 0))
        th, X, used = _lanczos_pass(A, F, v0, bound_tol, budget)
        budget -= used
        return th, X

    def accept(th, X, gate, cap):
        nonlocal best_res, stale
        taken = 0
        for i in range(min(len(th), cap)):
            r = float(np.linalg.norm(A @ X[:, i] - th[i] * X[:, i]))
            best_res = min(best_res, r)
            if r < gate:
                vals.append(float(th[i]))
                vecs.append(np.ascontiguousarray(X[:, i]))
                taken += 1
            else:
                break
        stale = stale + 1 if taken == 0 else 0
        return taken

    # main passes: collect k pairs
    while len(vals) < k:
        if budget <= 0:
            raise LanczosConvergenceError(
                f"Lanczos did not converge {k} pairs within {max_iter} "
                "matrix applications", best_res)
        if stale >= 4:
            raise LanczosConvergenceError(
                "Lanczos stalled: four consecutive passes produced no pair "
                f"below tol={tol:g}", best_res)
        v0 = start if not vals and stale == 0 else rng.standard_normal(n)
        th, X = run_pass(v0, 0.1 * tol)
        if len(th):
            accept(th, X, tol, k - len(vals) + 2)

    # confirmation: make sure nothing below the current k-th was skipped
    while n - len(vals) > 0:
        if budget <= 0:
            raise LanczosConvergenceError(
                "confirmation sweep exhausted the iteration budget", best_res)
        kth = float(np.sort(vals)[k - 1])
        margin = max(10.0 * tol, 1e-12 * max(1.0, abs(kth)))
        th, X = run_pass(rng.standard_normal(n), 0.1 * tol)
        if not len(th):
            break  # complement exhausted by deflation dirt
        r0 = float(np.linalg.norm(A @ X[:, 0] - th[0] * X[:, 0]))
        best_res = min(best_res, r0)
        if th[0] - max(margin, 2.0 * r0) >= kth:
            break  # lowest remaining is clearly above the k-th value
        # candidate at or below the k-th value: polish from the warm start
        th2, X2 = run_pass(np.ascontiguousarray(X[:, 0]), 0.1 * tol)
        if len(th2):
            r2 = float(np.linalg.norm(A @ X2[:, 0] - th2[0] * X2[:, 0]))
            cand_val, cand_vec, cand_r = float(th2[0]), X2[:, 0], r2
        else:
            cand_val, cand_vec, cand_r = float(th[0]), X[:, 0], r0
        if cand_val < kth - 1e-12 * max(1.0, abs(kth)):
            vals.append(cand_val)
            vecs.append(np.ascontiguousarray(cand_vec))
            best_res = min(best_res, cand_r)
        else:
            break  # lowest remaining does not undercut the k-th: done

    # Rayleigh-Ritz refinement over everything found
    B = np.column_stack(vecs)
    Q, _ = np.linalg.qr(B)
    T = Q.T @ (A @ Q)
    T = 0.5 * (T + T.T)
    w, Y = np.linalg.eigh(T)
    X = Q @ Y
    w, X = _canonical_order(w, X)
    w, X = w[:k], X[:, :k]
    res = _residuals(A, X, w)
    if max(res) >= tol:
        raise LanczosConvergenceError(
            "refined pairs exceed the requested tolerance", max(res))
    return [EigenPair(float(w[i]), X[:, i].copy()) for i in range(k)]


def dense_eig(op) -> list[EigenPair]:
    """Full spectrum by dense diagonalization; oracle for small dimensions."""
    A = _as_csr(op)
    n = A.shape[0]
    if n > 5000:
        raise ValueError(f"dense_eig is guarded to dim <= 5000, got {n}")
    w, X = np.linalg.eigh(A.toarray())
    w, X = _canonical_order(w, X)
    return [EigenPair(float(w[i]), X[:, i].copy()) for i in range(n)]


def residual(op, pair: EigenPair) -> float:
    """Two-norm of H v - lambda v."""
    A = _as_csr(op)
    v = np.asarray(pair.vector, dtype=float)
    if v.shape != (A.shape[0],):
        raise ValueError(
            f"vector dim {v.shape} does not match operator dim {A.shape[0]}")
    return float(np.linalg.norm(A @ v - pair.value * v))
