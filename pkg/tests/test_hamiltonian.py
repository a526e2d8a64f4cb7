import numpy as np
import pytest

from ladderflow import (SU2, SO4, CouplingSet, SchemeMismatchError, apply,
                        basis_transform_matrix, build_h1_su2, build_h_so4,
                        build_hamiltonian, dense_eig, diagonal,
                        enumerate_basis, h1_operator)
from ladderflow.hamiltonian import rung_generators

from conftest import kron_sector_hamiltonian


def test_coupling_set_derived_values():
    c = CouplingSet(J_t=5.0, J_l=4.0, J_c=3.0)
    assert c.gamma_tl == pytest.approx(0.8)
    assert c.gamma_c == pytest.approx(0.6)
    assert c.J1 == pytest.approx(3.5)
    assert c.J2 == pytest.approx(0.5)
    with pytest.raises(ValueError):
        CouplingSet(J_t=0.0, J_l=1.0, J_c=1.0)


def test_h1_su2_L1_matrix():
    b = enumerate_basis(SU2, 1, 0)
    h = build_h1_su2(b, 0.7, 0.3)  # gammas are irrelevant at L=1
    assert np.allclose(h.toarray(), [[-0.25, 0.5], [0.5, -0.25]])


def test_h1_su2_decoupled_ground_energy():
    b = enumerate_basis(SU2, 6, 0)
    h = build_h1_su2(b, 0.0, 0.0)
    for jt in (1.0, 7.0):
        lo = dense_eig(h.scaled(jt))[0].value
        assert lo == pytest.approx(-0.75 * 6 * jt, abs=1e-10)


@pytest.mark.parametrize("L", [2, 3])
def test_su2_build_matches_kron_oracle(L):
    # sector restriction of the full-space kron build equals the sector build
    b = enumerate_basis(SU2, L, 0)
    jt, jl, jc = 2.5, 1.7, 0.9
    oracle = kron_sector_hamiltonian(L, jt, jl, jc, b)
    ours = build_h1_su2(b, jl / jt, jc / jt).scaled(jt).toarray()
    assert np.abs(oracle - ours).max() < 1e-12


def test_su2_L2_lowest_against_dense_oracle():
    b = enumerate_basis(SU2, 2, 0)
    oracle = kron_sector_hamiltonian(2, 1.0, 1.0, 1.0, b)
    expected = np.sort(np.linalg.eigvalsh(oracle))[:4]
    got = [p.value for p in dense_eig(build_h1_su2(b, 1.0, 1.0))[:4]]
    assert np.allclose(got, expected, atol=1e-12)


def test_scheme_mismatch_errors():
    with pytest.raises(SchemeMismatchError):
        build_h1_su2(enumerate_basis(SO4, 2, 0), 0.5, 0.5)
    with pytest.raises(SchemeMismatchError):
        build_h_so4(enumerate_basis(SU2, 2, 0), CouplingSet(1.0, 1.0, 1.0))


def test_h_so4_L1_diagonal():
    b = enumerate_basis(SO4, 1, 0)
    h = build_h_so4(b, CouplingSet(J_t=5.0, J_l=2.0, J_c=1.0))
    # states in canonical order: (00) then (10)
    assert np.allclose(h.toarray(), np.diag([-3.75, 1.25]))


def test_so4_rung_term_values():
    # J1 = J2 = 0 leaves only the rung term: each diagonal entry is a sum of
    # -3 J_t/4 (singlet rung) and +J_t/4 (triplet rung) contributions
    b = enumerate_basis(SO4, 3, 0)
    h = build_h_so4(b, CouplingSet(J_t=2.0, J_l=0.0, J_c=0.0))
    m = h.toarray()
    assert np.abs(m - np.diag(np.diag(m))).max() == 0.0
    for i in range(b.dim):
        singlets = sum(1 for (S, _) in b.config(i) if S == 0)
        expected = 2.0 * (-0.75 * singlets + 0.25 * (3 - singlets))
        assert m[i, i] == pytest.approx(expected, abs=1e-14)


def test_rung_generator_identity():
    # S^2 + R^2 = 3 I on a single rung
    Sp, Sz, Rp, Rz = rung_generators()
    Sm, Rm = Sp.T, Rp.T
    s2 = Sz @ Sz + 0.5 * (Sp @ Sm + Sm @ Sp)
    r2 = Rz @ Rz + 0.5 * (Rp @ Rm + Rm @ Rp)
    assert np.allclose(s2 + r2, 3.0 * np.eye(4), atol=1e-14)


def test_so4_spectrum_matches_su2_L2():
    c = CouplingSet(J_t=1.0, J_l=1.0, J_c=1.0)  # J2 = 0
    e2 = np.linalg.eigvalsh(
        build_h1_su2(enumerate_basis(SU2, 2, 0), 1.0, 1.0).toarray())
    e4 = np.linalg.eigvalsh(
        build_h_so4(enumerate_basis(SO4, 2, 0), c).toarray())
    assert np.abs(e2 - e4).max() < 1e-10


@pytest.mark.parametrize("L", [2, 3, 4])
def test_scheme_equivalence_via_transform(L):
    rng = np.random.default_rng(L)
    for _ in range(3):
        jt, jl, jc = rng.uniform(0.5, 8.0, size=3)
        c = CouplingSet(jt, jl, jc)
        h2 = build_hamiltonian(enumerate_basis(SU2, L, 0), c).toarray()
        h4 = build_hamiltonian(enumerate_basis(SO4, L, 0), c).toarray()
        u = basis_transform_matrix(L, 0).toarray()
        assert np.abs(u.T @ h4 @ u - h2).max() < 1e-10
        e2 = np.sort(np.linalg.eigvalsh(h2))
        e4 = np.sort(np.linalg.eigvalsh(h4))
        assert np.abs(e2 - e4).max() < 1e-10


def test_h1_operator_is_h_over_jt():
    c = CouplingSet(J_t=3.0, J_l=2.0, J_c=1.0)
    for scheme in (SU2, SO4):
        b = enumerate_basis(scheme, 3, 0)
        full = build_hamiltonian(b, c).toarray()
        h1 = h1_operator(b, c).toarray()
        assert np.abs(full - 3.0 * h1).max() < 1e-12


def test_apply_identity_and_columns():
    b = enumerate_basis(SU2, 3, 0)
    h = build_h1_su2(b, 0.4, 0.2)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(b.dim)
    from ladderflow import SparseOperator
    ident = SparseOperator.identity(b.dim)
    assert np.array_equal(apply(ident, v), v)
    dense = h.toarray()
    for k in (0, 5, b.dim - 1):
        e = np.zeros(b.dim)
        e[k] = 1.0
        assert np.allclose(apply(h, e), dense[:, k], atol=1e-15)


def test_apply_symmetry_residual():
    b = enumerate_basis(SU2, 4, 0)
    h = build_h1_su2(b, 0.9, 0.5)
    rng = np.random.default_rng(1)
    for _ in range(5):
        u = rng.standard_normal(b.dim)
        v = rng.standard_normal(b.dim)
        assert abs(u @ apply(h, v) - apply(h, u) @ v) < 1e-12


def test_apply_dimension_mismatch():
    b = enumerate_basis(SU2, 2, 0)
    h = build_h1_su2(b, 0.1, 0.1)
    with pytest.raises(ValueError):
        apply(h, np.zeros(b.dim + 1))


def test_diagonal():
    b1 = enumerate_basis(SU2, 1, 0)
    assert np.allclose(diagonal(build_h1_su2(b1, 0.0, 0.0)), [-0.25, -0.25])
    b4 = enumerate_basis(SO4, 1, 0)
    h = build_h_so4(b4, CouplingSet(J_t=5.0, J_l=1.0, J_c=1.0))
    assert np.allclose(diagonal(h), [-3.75, 1.25])
    b3 = enumerate_basis(SU2, 3, 0)
    h3 = build_h1_su2(b3, 0.7, 0.2)
    assert np.allclose(diagonal(h3), np.diag(h3.toarray()), atol=1e-15)


def test_symmetry_of_builds():
    for scheme, build in ((SU2, lambda b: build_h1_su2(b, 0.6, 0.3)),
                          (SO4, lambda b: build_h_so4(
                              b, CouplingSet(2.0, 1.2, 0.6)))):
        b = enumerate_basis(scheme, 4, 0)
        assert build(b).symmetry_defect() < 1e-14
