import numpy as np
import pytest

from ladderflow import (SU2, SO4, CouplingSet, EigenPair, NoCrossingError,
                        SparseOperator, crossing_scan, degeneracy_check,
                        dense_eig, entropy_per_site, enumerate_basis,
                        fluctuation_p, run_flow, scan_operator_crossing,
                        spectrum_sweep)


def test_entropy_pure_state():
    v = np.zeros(10)
    v[3] = 1.0
    assert entropy_per_site(v, 2) == 0.0


def test_entropy_uniform_maximum():
    n, L = 924, 6
    v = np.full(n, 1.0 / np.sqrt(n))
    s = entropy_per_site(v, L)
    assert s == pytest.approx(np.log(n) / 12.0, abs=1e-12)
    assert s == pytest.approx(0.5691, abs=5e-4)


def test_entropy_two_components_L1():
    v = np.array([1.0, 1.0]) / np.sqrt(2.0)
    assert entropy_per_site(v, 1) == pytest.approx(np.log(2) / 2, abs=1e-14)
    assert entropy_per_site(EigenPair(0.0, v), 1) == pytest.approx(
        np.log(2) / 2, abs=1e-14)


def test_entropy_requires_normalized_vector():
    with pytest.raises(ValueError):
        entropy_per_site(np.ones(4), 1)


def test_sweep_decoupled_line():
    pts = spectrum_sweep(SU2, 3, 0.0, 0.0, [0.5, 1.0, 2.0, 4.0], k=2,
                         with_entropy=True)
    for pt in pts:
        assert pt.energies[0] == pytest.approx(-0.375 * pt.J_t, abs=1e-12)
        # rung-singlet product spreads over 2^L basis states
        assert pt.entropy == pytest.approx(3 * np.log(2) / 6, abs=1e-10)


def test_sweep_requires_sorted_grid():
    with pytest.raises(ValueError):
        spectrum_sweep(SU2, 2, 1.0, 1.0, [2.0, 1.0])
    with pytest.raises(ValueError):
        spectrum_sweep(SU2, 2, 1.0, 1.0, [])


def test_sweep_identifies_failing_grid_point():
    with pytest.raises(ValueError, match="J_t=-1"):
        spectrum_sweep(SU2, 2, 1.0, 1.0, [-1.0, 1.0])


def test_sweep_schemes_agree():
    grid = [3.0, 4.0, 5.0]
    a = spectrum_sweep(SU2, 3, 2.0, 1.0, grid, k=3)
    b = spectrum_sweep(SO4, 3, 2.0, 1.0, grid, k=3)
    for pa, pb in zip(a, b):
        assert np.allclose(pa.energies, pb.energies, atol=1e-8)


def test_scan_synthetic_exact_crossing():
    # two decoupled levels -J and J - 2c cross exactly at J = c; the scan
    # must return the bracket midpoint when the bracket is centered on c
    c = 3.0

    def factory(j):
        return SparseOperator.from_coo(2, [0, 1], [0, 1], [-j, j - 2 * c])

    rep = scan_operator_crossing(factory, sites=1, pair=(1, 2),
                                 bracket=(2.0, 4.0), tol=1e-10)
    assert rep.kind == "crossing"
    assert rep.J_t_star == pytest.approx(c, abs=1e-9)
    assert rep.gap_at_star < 1e-8


def test_scan_synthetic_avoided_crossing():
    c, eps = 3.0, 0.05

    def factory(j):
        return SparseOperator.from_coo(2, [0, 1, 0, 1], [0, 1, 1, 0],
                                       [-j, j - 2 * c, eps, eps])

    rep = scan_operator_crossing(factory, sites=1, pair=(1, 2),
                                 bracket=(2.0, 4.0), tol=1e-8)
    assert rep.kind == "avoided"
    assert rep.J_t_star == pytest.approx(c, abs=1e-4)
    assert rep.gap_at_star == pytest.approx(2 * eps, abs=1e-6)


def test_scan_monotone_gap_raises():
    def factory(j):
        return SparseOperator.from_coo(2, [0, 1], [0, 1], [0.0, 1.0 + j])

    with pytest.raises(NoCrossingError):
        scan_operator_crossing(factory, sites=1, pair=(1, 2),
                               bracket=(1.0, 2.0), tol=1e-6)


def test_scan_L2_ladder_crossing_at_J1():
    # with J_l = J_c the rung-singlet product (-1.5 J_t) crosses the
    # two-triplet state (0.5 J_t - 2 J1) exactly at J_t = J1
    j1 = 4.07
    rep = crossing_scan(SU2, 2, j1, j1, pair=(1, 2), bracket=(3.0, 5.0),
                        tol=1e-9)
    assert rep.kind == "crossing"
    assert rep.J_t_star == pytest.approx(j1, abs=1e-7)
    rep4 = crossing_scan(SO4, 2, j1, j1, pair=(1, 2), bracket=(3.0, 5.0),
                         tol=1e-9)
    assert rep4.J_t_star == pytest.approx(rep.J_t_star, abs=1e-8)


def test_degeneracy_check():
    e = [-3.75, -2.91666, -2.91666, -2.91666]
    assert degeneracy_check(e, (2, 3, 4), 1e-8)
    assert not degeneracy_check(e, (1, 2), 1e-8)
    assert degeneracy_check([1.0, 1.0, 1.0], (1, 2, 3), 1e-300)


def test_fluctuation_arithmetic():
    traj = run_flow(SU2, 3, CouplingSet(2.0, 1.0, 1.0), N_min=10, seed=0)
    # equal energies give zero
    r = traj.record_at(20)
    assert fluctuation_p(traj, 1, 20, 0) == 0.0
    p = fluctuation_p(traj, 1, 20, 5)
    e_n = traj.record_at(20).energies[0]
    e_nk = traj.record_at(15).energies[0]
    assert p == pytest.approx(abs((e_n - e_nk) / e_n) * 100.0, abs=1e-12)
    with pytest.raises(KeyError):
        fluctuation_p(traj, 1, 21, 5)


def test_fluctuation_explicit_numbers():
    from ladderflow.reduction import FlowTrajectory, FlowRecord
    traj = FlowTrajectory(scheme=SU2, L=1, M_tot=0,
                          couplings=CouplingSet(1.0, 1.0, 1.0), k_track=1,
                          seed=0)
    traj.records.append(FlowRecord(N=30, g=1.0, energies=(-2.0,),
                                   entropy=0.0, eliminated=-1,
                                   eliminated_amplitude=0.0, pathology=False))
    traj.records.append(FlowRecord(N=20, g=1.0, energies=(-1.9,),
                                   entropy=0.0, eliminated=5,
                                   eliminated_amplitude=0.0, pathology=False))
    assert fluctuation_p(traj, 1, 30, 10) == pytest.approx(5.0, abs=1e-12)
    traj.records[0] = FlowRecord(N=30, g=1.0, energies=(0.0,), entropy=0.0,
                                 eliminated=-1, eliminated_amplitude=0.0,
                                 pathology=False)
    with pytest.raises(ZeroDivisionError):
        fluctuation_p(traj, 1, 30, 10)


def test_fluctuation_scale_invariance():
    a = run_flow(SU2, 3, CouplingSet(2.0, 1.0, 0.5), N_min=10, seed=0)
    b = run_flow(SU2, 3, CouplingSet(2.0, 1.0, 0.5).scaled(4.0), N_min=10,
                 seed=0)
    for i in (1, 2):
        assert fluctuation_p(a, i, 18, 6) == pytest.approx(
            fluctuation_p(b, i, 18, 6), rel=1e-6, abs=1e-9)
