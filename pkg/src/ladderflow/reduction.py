"""Step-by-step basis elimination with renormalization of the rung coupling.

One reduction step, starting from the k lowest eigenpairs of g*H1 on the
current active basis:

1. eliminate the active basis state q with the highest diagonal energy
   eps_q = g * (H1)_qq;
2. project the current ground vector onto the remaining states (bare,
   unnormalized projection b) and fold the eliminated state into an
   energy-dependent effective operator on them,

       H_eff(g') = g' P H1 P + g'^2 P H1|q><q|H1 P / (lam1 - g' (H1)_qq);

3. require <b|H_eff(g')|b> = lam1 <b|b>, which after clearing the
   denominator is a quadratic alpha g'^2 + beta g' + gamma = 0; take the
   real root nearest the current g.  When the coefficients all but vanish
   or the roots turn complex the step is flagged pathological and g is
   frozen rather than aborting the flow;
4. re-diagonalize g' * H1 on the reduced basis and record the new
   low-lying energies, ground-state entropy and the eliminated amplitude.

When the current eigenpair is exact, g itself solves the quadratic, so the
coupling moves only through solver noise and pathologies; the recorded
energies move through the re-diagonalization.  A state that is exactly
decoupled from the ground vector (zero amplitude and zero coupling) is
detected up to solver noise and preserves g and the ground energy exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import enumerate_basis
from .eigensolver import EigenPair, LanczosConvergenceError, lanczos_lowest
from .hamiltonian import CouplingSet, h1_operator
from .operators import SparseOperator

DEFAULT_K_TRACK = 4
DEFAULT_DECOUPLE_TOL = 1e-8


class FlowError(RuntimeError):
    """A reduction step failed; carries the trajectory up to that point."""

    def __init__(self, message: str, trajectory: "FlowTrajectory"):
        super().__init__(message)
        self.trajectory = trajectory


@dataclass
class ReductionState:
    """Mutable snapshot of the flow: active index set, coupling, eigenpairs."""

    active: np.ndarray
    g: float
    h1_full: SparseOperator
    h1_active: SparseOperator
    eigenpairs: list
    step: int = 0
    eliminated: Optional[int] = None
    eliminated_amplitude: float = 0.0
    pathology: bool = False

    @property
    def dim(self) -> int:
        return len(self.active)


@dataclass(frozen=True)
class FlowRecord:
    """One row of the flow: dimension, coupling, per-site energies, entropy."""

    N: int
    g: float
    energies: tuple
    entropy: float
    eliminated: int
    eliminated_amplitude: float
    pathology: bool


@dataclass
class FlowTrajectory:
    scheme: str
    L: int
    M_tot: int
    couplings: CouplingSet
    k_track: int
    seed: int
    records: list = field(default_factory=list)

    def dims(self) -> np.ndarray:
        return np.array([r.N for r in self.records])

    def g_values(self) -> np.ndarray:
        return np.array([r.g for r in self.records])

    def energy(self, i: int) -> np.ndarray:
        """Per-site energy curve e_i over the flow; i is 1-based (e1 = ground)."""
        if not 1 <= i <= self.k_track:
            raise ValueError(f"level index {i} outside 1..{self.k_track}")
        return np.array([r.energies[i - 1] for r in self.records])

    def record_at(self, N: int) -> FlowRecord:
        for r in self.records:
            if r.N == N:
                return r
        raise KeyError(f"no record at dimension N={N}")

    def pathology_fraction(self) -> float:
        if not self.records:
            return 0.0
        return sum(r.pathology for r in self.records) / len(self.records)


def order_states(h1_diag: np.ndarray, g: float) -> np.ndarray:
    """Indices sorted by eps_i = g * (H1)_ii ascending, ties by index.

    Elimination always removes the last entry (the current maximum).  Only
    the sign of g enters: a positive factor cannot change the order, and
    sorting the unscaled diagonal avoids rounding-induced reorderings of
    near-tied entries when g rescales.
    """
    if g == 0:
        raise ValueError("elimination order is undefined for g = 0")
    key = np.asarray(h1_diag, dtype=float)
    if g < 0:
        key = -key
    return np.argsort(key, kind="stable")


def feshbach_coefficients(b: np.ndarray, h1_active, q: int, lam1: float):
    """Coefficients (alpha, beta, gamma) of the renormalization quadratic.

    With A = <b|H1|b>, w = <b|H1|q>, n = <b|b> and d = (H1)_qq, all over the
    active set with the q component of b zeroed:

        alpha = w^2 - A d,  beta = lam1 (A + n d),  gamma = -lam1^2 n.
    """
    h1 = h1_active.csr if isinstance(h1_active, SparseOperator) else h1_active
    b = np.asarray(b, dtype=float).copy()
    b[q] = 0.0
    col = h1[:, q].toarray().ravel() if hasattr(h1, "toarray") else h1[:, q]
    d = float(col[q])
    w = float(b @ col)
    n = float(b @ b)
    A = float(b @ (h1 @ b))
    alpha = w * w - A * d
    beta = lam1 * (A + n * d)
    gamma = -lam1 * lam1 * n
    return alpha, beta, gamma


def feshbach_condition_residual(b: np.ndarray, h1_active, q: int,
                                lam1: float, g: float) -> float:
    """Residual of <b|H_eff(lam1; g)|b> - lam1 <b|b> at the given g."""
    h1 = h1_active.csr if isinstance(h1_active, SparseOperator) else h1_active
    b = np.asarray(b, dtype=float).copy()
    b[q] = 0.0
    col = h1[:, q].toarray().ravel() if hasattr(h1, "toarray") else h1[:, q]
    d = float(col[q])
    w = float(b @ col)
    n = float(b @ b)
    A = float(b @ (h1 @ b))
    den = lam1 - g * d
    return float(g * A + g * g * w * w / den - lam1 * n)


def solve_renormalized_g(alpha: float, beta: float, gamma: float,
                         g_prev: float, eps_coef: Optional[float] = None):
    """Real root of the quadratic nearest g_prev.

    Falls back to the linear solve when the quadratic coefficient is
    negligible; freezes g (pathology flag set) when the coefficients are all
    negligible or the discriminant is negative.  Pathologies are data, not
    failures.
    """
    if eps_coef is None:
        eps_coef = 1e-12 * max(abs(alpha), abs(beta), abs(gamma), 1.0)
    if abs(alpha) >= eps_coef:
        disc = beta * beta - 4.0 * alpha * gamma
        if disc < 0:
            return g_prev, True
        sq = np.sqrt(disc)
        # numerically stable form: q = -(beta + sign(beta) sqrt(disc))/2
        qq = -0.5 * (beta + np.copysign(sq, beta if beta != 0 else 1.0))
        roots = []
        if qq != 0.0:
            roots = [qq / alpha, gamma / qq]
        else:  # beta = gamma = 0
            roots = [0.0, 0.0]
        g_new = min(roots, key=lambda r: abs(r - g_prev))
        return float(g_new), False
    if abs(beta) >= eps_coef:
        return float(-gamma / beta), False
    return g_prev, True


def reduce_step(state: ReductionState, k_track: int = DEFAULT_K_TRACK, *,
                tol: float = 1e-10, max_iter: int = 20000, seed: int = 0,
                decouple_tol: float = DEFAULT_DECOUPLE_TOL) -> ReductionState:
    """One elimination + renormalization + re-diagonalization step."""
    if state.dim <= k_track + 1:
        raise ValueError(
            f"cannot reduce below k_track + 2 = {k_track + 2} states")
    g = state.g
    lam1 = state.eigenpairs[0].value
    psi = state.eigenpairs[0].vector
    h1a = state.h1_active
    order = order_states(h1a.diagonal(), g)
    q = int(order[-1])

    a_q = float(psi[q])
    col = h1a.column(q)
    b = psi.copy()
    b[q] = 0.0
    w = float(b @ col)
    # exactly decoupled eliminations preserve g and the ground energy; below
    # solver noise the quadratic root is g up to that noise, so keep g exact
    col_scale = max(1.0, float(np.linalg.norm(col)))
    if abs(a_q) < decouple_tol and abs(w) < decouple_tol * col_scale:
        g_new, pathological = g, False
    else:
        alpha, beta, gamma = feshbach_coefficients(b, h1a, q, lam1)
        g_new, pathological = solve_renormalized_g(alpha, beta, gamma, g)

    keep = np.ones(state.dim, dtype=bool)
    keep[q] = False
    active = state.active[keep]
    h1_next = SparseOperator(h1a.csr[keep][:, keep].tocsr())
    pairs = lanczos_lowest(h1_next.scaled(g_new), k_track, tol=tol,
                           max_iter=max_iter, seed=seed)
    return ReductionState(
        active=active, g=float(g_new), h1_full=state.h1_full,
        h1_active=h1_next, eigenpairs=pairs, step=state.step + 1,
        eliminated=int(state.active[q]), eliminated_amplitude=abs(a_q),
        pathology=pathological)


def start_reduction(h1: SparseOperator, g0: float,
                    k_track: int = DEFAULT_K_TRACK, *, tol: float = 1e-10,
                    max_iter: int = 20000, seed: int = 0) -> ReductionState:
    pairs = lanczos_lowest(h1.scaled(g0), k_track, tol=tol,
                           max_iter=max_iter, seed=seed)
    return ReductionState(active=np.arange(h1.dim), g=float(g0), h1_full=h1,
                          h1_active=h1, eigenpairs=pairs)


def run_flow(scheme: str, L: int, couplings: CouplingSet, N_min: int,
             k_track: int = DEFAULT_K_TRACK, M_tot: int = 0, *,
             tol: float = 1e-10, max_iter: int = 20000, seed: int = 0,
             decouple_tol: float = DEFAULT_DECOUPLE_TOL) -> FlowTrajectory:
    """Full reduction flow from the sector dimension down to N_min.

    The first record is the untouched sector (eliminated index -1); each
    following record reflects one elimination.  On a solver failure the
    partial trajectory is attached to the raised FlowError.
    """
    if N_min < k_track + 2:
        raise ValueError(f"N_min must be >= k_track + 2 = {k_track + 2}")
    basis = enumerate_basis(scheme, L, M_tot)
    if basis.dim < N_min:
        raise ValueError(
            f"sector dimension {basis.dim} is already below N_min={N_min}")
    h1 = h1_operator(basis, couplings)
    traj = FlowTrajectory(scheme=scheme, L=L, M_tot=M_tot,
                          couplings=couplings, k_track=k_track, seed=seed)
    sites = 2 * L

    def record(state: ReductionState):
        ground = state.eigenpairs[0]
        p = ground.vector ** 2
        p = p[p > 0.0]
        entropy = float(-np.sum(p * np.log(p)) / sites)
        traj.records.append(FlowRecord(
            N=state.dim, g=state.g,
            energies=tuple(pair.value / sites for pair in state.eigenpairs),
            entropy=entropy,
            eliminated=-1 if state.eliminated is None else state.eliminated,
            eliminated_amplitude=state.eliminated_amplitude,
            pathology=state.pathology))

    try:
        state = start_reduction(h1, couplings.J_t, k_track, tol=tol,
                                max_iter=max_iter, seed=seed)
        record(state)
        while state.dim > N_min:
            state = reduce_step(state, k_track, tol=tol, max_iter=max_iter,
                                seed=seed, decouple_tol=decouple_tol)
            record(state)
    except LanczosConvergenceError as exc:
        raise FlowError(f"flow aborted at dimension "
                        f"{traj.records[-1].N if traj.records else basis.dim}"
                        f": {exc}", traj) from exc
    return traj


@dataclass(frozen=True)
class FixedPointVerdict:
    fixed_point: bool
    stable_range: tuple  # (N_hi, N_lo)


def fixed_point_detector(traj: FlowTrajectory, window: int = 50,
                         rel_tol: float = 1e-3) -> FixedPointVerdict:
    """Largest contiguous stretch of the flow over which g stays flat.

    A stretch is stable when max|g - median(g)| / |median(g)| < rel_tol over
    its records.  The verdict is a fixed point when the stable stretch that
    starts at the full dimension spans at least `window` records.
    """
    if len(traj.records) < window:
        raise ValueError(
            f"trajectory has {len(traj.records)} records, need >= {window}")
    g = traj.g_values()
    dims = traj.dims()
    n = len(g)

    def stable(lo, hi):  # inclusive range
        seg = g[lo:hi + 1]
        med = np.median(seg)
        return np.max(np.abs(seg - med)) < rel_tol * max(abs(med), 1e-300)

    # greedy maximal stretch from each start; longest (earliest) wins
    best_lo, best_hi = 0, 0
    lo = 0
    while lo < n:
        hi = lo
        while hi + 1 < n and stable(lo, hi + 1):
            hi += 1
        if hi - lo > best_hi - best_lo:
            best_lo, best_hi = lo, hi
        if hi == n - 1:
            break  # no later start can produce a longer stretch
        lo += 1

    from_start = 0
    while from_start + 1 < n and stable(0, from_start + 1):
        from_start += 1
    fixed = (from_start + 1) >= window
    return FixedPointVerdict(
        fixed_point=fixed,
        stable_range=(int(dims[best_lo]), int(dims[best_hi])))
