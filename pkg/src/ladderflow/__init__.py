"""Frustrated two-leg spin-ladder spectra and Hilbert-space reduction flows.

Sector bases in the site-product (su2) and rung-spin (so4) schemes, sparse
ladder Hamiltonians, a deterministic Lanczos solver, the basis-elimination
flow that renormalizes the rung coupling, and transition-point analytics
(crossing scans, degeneracy checks, ground-state entropy, fluctuation
profiles).
"""

__version__ = "0.1.0"

from .basis import (SO4, SU2, NotInSectorError, SectorBasis,
                    basis_transform_matrix, enumerate_basis, index_of)
from .operators import SparseOperator, apply, diagonal
from .hamiltonian import (CouplingSet, SchemeMismatchError, build_h1_su2,
                          build_h_so4, build_hamiltonian, h1_operator)
from .eigensolver import (EigenPair, LanczosConvergenceError, dense_eig,
                          lanczos_lowest, residual)
from .reduction import (FixedPointVerdict, FlowError, FlowRecord,
                        FlowTrajectory, ReductionState,
                        feshbach_coefficients, feshbach_condition_residual,
                        fixed_point_detector, order_states, reduce_step,
                        run_flow, solve_renormalized_g, start_reduction)
from .analysis import (CrossingReport, NoCrossingError, SweepPoint,
                       crossing_scan, degeneracy_check, entropy_per_site,
                       fluctuation_p, scan_operator_crossing, spectrum_sweep)

__all__ = [
    "SU2", "SO4", "SectorBasis", "NotInSectorError", "enumerate_basis",
    "index_of", "basis_transform_matrix",
    "SparseOperator", "apply", "diagonal",
    "CouplingSet", "SchemeMismatchError", "build_h1_su2", "build_h_so4",
    "build_hamiltonian", "h1_operator",
    "EigenPair", "LanczosConvergenceError", "lanczos_lowest", "dense_eig",
    "residual",
    "ReductionState", "FlowRecord", "FlowTrajectory", "FlowError",
    "FixedPointVerdict", "order_states", "feshbach_coefficients",
    "feshbach_condition_residual", "solve_renormalized_g", "reduce_step",
    "start_reduction", "run_flow", "fixed_point_detector",
    "CrossingReport", "NoCrossingError", "SweepPoint", "crossing_scan",
    "scan_operator_crossing", "degeneracy_check", "entropy_per_site",
    "fluctuation_p", "spectrum_sweep",
]
