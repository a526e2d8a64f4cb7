import numpy as np
import pytest

from ladderflow import SU2, SO4, enumerate_basis, build_h1_su2

# independent dense oracle: full 2^(2L)-space Hamiltonian from explicit
# kron products of single-site spin matrices, then restricted to the sector

_SZ = np.diag([0.5, -0.5])
_SP = np.array([[0.0, 1.0], [0.0, 0.0]])
_SM = _SP.T


def kron_site_op(op, site, n_sites):
    m = np.eye(1)
    for s in range(n_sites):
        m = np.kron(m, op if s == site else np.eye(2))
    return m


def kron_ss(a, b, n_sites):
    return (kron_site_op(_SZ, a, n_sites) @ kron_site_op(_SZ, b, n_sites)
            + 0.5 * (kron_site_op(_SP, a, n_sites) @ kron_site_op(_SM, b, n_sites)
                     + kron_site_op(_SM, a, n_sites) @ kron_site_op(_SP, b, n_sites)))


def kron_ladder(L, J_t, J_l, J_c):
    """Dense ladder Hamiltonian over all 2^(2L) states (oracle)."""
    n = 2 * L
    H = np.zeros((2 ** n, 2 ** n))
    for i in range(L):
        H += J_t * kron_ss(2 * i, 2 * i + 1, n)
    for i in range(L - 1):
        H += J_l * (kron_ss(2 * i, 2 * i + 2, n)
                    + kron_ss(2 * i + 1, 2 * i + 3, n))
        H += J_c * (kron_ss(2 * i, 2 * i + 3, n)
                    + kron_ss(2 * i + 1, 2 * i + 2, n))
    return H


def kron_sector_indices(basis):
    """Map sector states to their positions in the kron product ordering
    (site 0 leftmost, spin-up first)."""
    n = 2 * basis.L
    idx = []
    for i in range(basis.dim):
        occ = basis.config(i)
        idx.append(sum((1 - bit) << (n - 1 - s) for s, bit in enumerate(occ)))
    return np.array(idx)


def kron_sector_hamiltonian(L, J_t, J_l, J_c, basis):
    H = kron_ladder(L, J_t, J_l, J_c)
    idx = kron_sector_indices(basis)
    return H[np.ix_(idx, idx)]


@pytest.fixture(scope="session")
def su2_L6():
    return enumerate_basis(SU2, 6)


@pytest.fixture(scope="session")
def so4_L6():
    return enumerate_basis(SO4, 6)


@pytest.fixture(scope="session")
def h1_L6_407(su2_L6):
    """H1 at the reference ratios gamma = 4.07/10 used by the J_t=10 runs."""
    return build_h1_su2(su2_L6, 0.407, 0.407)
