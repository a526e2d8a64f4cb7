import math

import numpy as np
import pytest

from ladderflow import (SU2, SO4, NotInSectorError, basis_transform_matrix,
                        build_h1_su2, dense_eig, enumerate_basis, index_of)


def test_su2_dimensions():
    assert enumerate_basis(SU2, 6, 0).dim == 924
    assert enumerate_basis(SU2, 1, 0).dim == 2
    for L in range(1, 6):
        for M in range(-L, L + 1):
            assert enumerate_basis(SU2, L, M).dim == math.comb(2 * L, L + M)


def test_su2_L1_states():
    b = enumerate_basis(SU2, 1, 0)
    assert {b.config(0), b.config(1)} == {(0, 1), (1, 0)}


def test_so4_L2_states():
    b = enumerate_basis(SO4, 2, 0)
    labels = {b.config(i) for i in range(b.dim)}
    expected = {
        ((0, 0), (0, 0)), ((0, 0), (1, 0)), ((1, 0), (0, 0)),
        ((1, 0), (1, 0)), ((1, 1), (1, -1)), ((1, -1), (1, 1)),
    }
    assert labels == expected


def test_sector_dims_match_between_schemes():
    for L in range(1, 8):
        for M in range(-L, L + 1):
            assert (enumerate_basis(SU2, L, M).dim
                    == enumerate_basis(SO4, L, M).dim)


def test_enumeration_is_reproducible():
    a = enumerate_basis(SU2, 5, 1)
    b = enumerate_basis(SU2, 5, 1)
    assert np.array_equal(a.codes, b.codes)
    c = enumerate_basis(SO4, 5, -2)
    d = enumerate_basis(SO4, 5, -2)
    assert np.array_equal(c.codes, d.codes)


def test_empty_sector_error():
    with pytest.raises(NotInSectorError):
        enumerate_basis(SU2, 3, 4)
    with pytest.raises(ValueError):
        enumerate_basis(SU2, 0, 0)
    with pytest.raises(ValueError):
        enumerate_basis("bogus", 3, 0)


def test_index_of_roundtrip():
    for scheme in (SU2, SO4):
        b = enumerate_basis(scheme, 4, 0)
        assert index_of(b, b.config(0)) == 0
        assert index_of(b, b.config(b.dim - 1)) == b.dim - 1
        assert index_of(b, b.config(17)) == 17
    b6 = enumerate_basis(SU2, 6, 0)
    assert index_of(b6, b6.config(923)) == 923


def test_index_of_rejects_foreign_config():
    b = enumerate_basis(SU2, 2, 0)
    with pytest.raises(NotInSectorError):
        index_of(b, (1, 1, 1, 0))  # M_tot = 1 state
    with pytest.raises(NotInSectorError):
        index_of(b, (1, 0))  # wrong length
    b4 = enumerate_basis(SO4, 2, 0)
    with pytest.raises(NotInSectorError):
        index_of(b4, ((1, 1), (1, 1)))


def test_transform_L1_matrix():
    u = basis_transform_matrix(1, 0).toarray()
    s = 1.0 / np.sqrt(2.0)
    # rows are so4 states (00), (10); columns su2 states (0,1)=du, (1,0)=ud
    expected = np.array([[-s, s], [s, s]])
    assert np.allclose(u, expected, atol=1e-15)


@pytest.mark.parametrize("L", [1, 2, 3])
def test_transform_orthogonality(L):
    u = basis_transform_matrix(L, 0)
    defect = np.abs((u.csr.T @ u.csr).toarray() - np.eye(u.dim)).max()
    assert defect < 1e-12


def test_transform_maps_decoupled_ground_to_pure_singlet():
    # gamma = 0: the su2 ground state is the rung-singlet product, which is
    # a single so4 basis state (00, 00)
    b2 = enumerate_basis(SU2, 2, 0)
    h1 = build_h1_su2(b2, 0.0, 0.0)
    ground = dense_eig(h1)[0]
    u = basis_transform_matrix(2, 0)
    v4 = u.csr @ ground.vector
    b4 = enumerate_basis(SO4, 2, 0)
    target = index_of(b4, ((0, 0), (0, 0)))
    weights = np.abs(v4)
    assert weights[target] > 1.0 - 1e-12
    weights[target] = 0.0
    assert weights.max() < 1e-10
