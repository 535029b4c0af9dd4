"""Independent brute-force references: full 2^N Hamiltonians built from
Kronecker products, materialized density matrices, and textbook Wootters.

Nothing here imports the sector machinery of the package.
"""
from functools import reduce

import numpy as np
from scipy import sparse

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
# local basis {0: down, 1: up}
SZ = np.diag([-1.0, 1.0]).astype(complex)
ID = np.eye(2, dtype=complex)


def site_operator(op, site, n, sparse_=False):
    # the integer basis state puts site k at bit k, so site N-1 is the leftmost factor
    factors = [op if k == site else ID for k in reversed(range(n))]
    if sparse_:
        return reduce(lambda a, b: sparse.kron(a, b, format="csr"), factors)
    return reduce(np.kron, factors)


def full_hamiltonian(n, j1, j2, nn_delta, nnn_delta):
    """Dense 2^N x 2^N Hamiltonian in the Pauli convention."""
    dim = 2 ** n
    h = sparse.csr_matrix((dim, dim), dtype=complex)
    ops = [[site_operator(s, k, n, sparse_=True) for k in range(n)] for s in (SX, SY, SZ)]
    for shift, j, deltas in ((1, j1, nn_delta), (2, j2, nnn_delta)):
        for i in range(n):
            k = (i + shift) % n
            h = h + j * (ops[0][i] @ ops[0][k] + ops[1][i] @ ops[1][k]
                         + deltas[i] * ops[2][i] @ ops[2][k])
    h = h.toarray()
    assert np.allclose(h.imag, 0)
    return h.real


def model_hamiltonian(model):
    return full_hamiltonian(model.n_sites, model.j1, model.j2, model.nn_delta, model.nnn_delta)


def spin_operator_hamiltonian(n, j1, j2):
    """Isotropic chain with S = sigma/2 operators, for the convention check."""
    return full_hamiltonian(n, j1, j2, [1.0] * n, [1.0] * n) / 4


def total_s2(n):
    s = [sum(site_operator(p, k, n) for k in range(n)) / 2 for p in (SX, SY, SZ)]
    return (s[0] @ s[0] + s[1] @ s[1] + s[2] @ s[2]).real


def manifolds(h, tol=1e-8):
    """Ground and first-excited projectors (averaged) from a dense eigensolve."""
    w, v = np.linalg.eigh(h)
    e0 = w[0]
    ground = np.abs(w - e0) <= tol
    e1 = w[~ground][0]
    excited = np.abs(w - e1) <= tol
    g = v[:, ground]
    e = v[:, excited]
    return w, g @ g.T / g.shape[1], e @ e.T / e.shape[1]


def subjacent_rho(h, p, tol=1e-8):
    _, rg, re = manifolds(h, tol)
    return (1 - p) * rg + p * re


def partial_trace_pair(rho, n, i, j):
    """Reduced state of sites (i, j) in the basis index 2*b_i + b_j."""
    t = rho.reshape((2,) * (2 * n))
    ax_i, ax_j = n - 1 - i, n - 1 - j
    keep = [ax_i, ax_j]
    rest = [a for a in range(n) if a not in keep]
    # bring (i, j) to the front on both the row and column side
    perm = keep + rest + [n + a for a in keep] + [n + a for a in rest]
    t = t.transpose(perm).reshape(4, 2 ** (n - 2), 4, 2 ** (n - 2))
    return np.einsum("arbr->ab", t)


def wootters(rho):
    """Concurrence from the non-Hermitian product rho * rho_tilde."""
    yy = np.kron(SY, SY)
    tilde = yy @ rho.conj() @ yy
    lam = np.sort(np.abs(np.linalg.eigvals(rho @ tilde).real))[::-1]
    s = np.sqrt(lam)
    return max(0.0, s[0] - s[1] - s[2] - s[3])


def x_state_concurrence(rho):
    """Closed form for states with only diagonal and anti-diagonal entries."""
    a, b, c, d = np.real(np.diag(rho))
    z = abs(rho[1, 2])
    w = abs(rho[0, 3])
    return 2 * max(0.0, z - np.sqrt(a * d), w - np.sqrt(b * c))


def singlet():
    psi = np.array([0, 1, -1, 0]) / np.sqrt(2)
    return np.outer(psi, psi)


def werner(q):
    return q * singlet() + (1 - q) * np.eye(4) / 4
