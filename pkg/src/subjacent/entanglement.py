"""Subjacent state, two-site reduced density matrices and concurrence.

The subjacent state mixes the ground manifold (weight 1 - p) with the
d-fold first-excited manifold (weight p/d). It is never formed as a
2^N x 2^N matrix: the partial trace is linear, so each two-site density
matrix is accumulated eigenvector by eigenvector straight from the sector
basis.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import expit

from .eigensolver import solve_low_spectrum
from .lattice import enumerate_sector

# sigma_y (x) sigma_y; real, so the spin flip of a real rho needs no conjugation
_YY = np.array([[0.0, 0.0, 0.0, -1.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0, 0.0]])


@dataclass(frozen=True)
class MixingSpec:
    """How much of the first-excited manifold enters the mixture.

    Exactly one of ``p`` (fixed mixing) or ``kT`` (fixed temperature, in
    units of J1 with k_B = 1) is set. ``degeneracy_weighted`` switches the
    Boltzmann weight of the excited manifold from e^{-gap/kT} to
    d e^{-gap/kT}.
    """

    p: float = None
    kT: float = None
    degeneracy_weighted: bool = False

    def __post_init__(self):
        if (self.p is None) == (self.kT is None):
            raise ValueError("set exactly one of p and kT")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.kT is not None and not self.kT > 0:
            raise ValueError(f"kT must be positive, got {self.kT}")

    @property
    def mode(self):
        return "fixed-p" if self.p is not None else "fixed-temperature"

    @classmethod
    def fixed_p(cls, p):
        return cls(p=float(p))

    @classmethod
    def fixed_temperature(cls, kT, degeneracy_weighted=False):
        return cls(kT=float(kT), degeneracy_weighted=degeneracy_weighted)

    def label(self):
        return f"p={self.p!r}" if self.p is not None else f"kT={self.kT!r}"


def resolve_p(spec, gap, d=1):
    """Mixing probability for a state whose first excitation costs ``gap``."""
    if gap < 0:
        raise ValueError(f"gap must be non-negative, got {gap}")
    if spec.p is not None:
        return spec.p
    x = -gap / spec.kT
    if spec.degeneracy_weighted:
        x += np.log(d)
    return float(expit(x))


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """4x4 density matrix in the basis |b_i b_j>, index 2*b_i + b_j."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.shape != (4, 4):
            raise ValueError(f"two-qubit state must be 4x4, got {m.shape}")
        if not np.iscomplexobj(m):
            m = m.astype(float)
        object.__setattr__(self, "matrix", m)
        if abs(np.trace(m) - 1) > 1e-10:
            raise ValueError(f"trace {np.trace(m).real:.3g} differs from 1")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(m)[0] < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")


def _concurrence_stack(rho):
    rho = np.asarray(rho)
    if np.iscomplexobj(rho):
        tilde = _YY @ rho.conj() @ _YY
    else:
        tilde = _YY @ rho @ _YY
    w, u = np.linalg.eigh(rho)
    root = (u * np.sqrt(np.clip(w, 0.0, None))[..., None, :]) @ np.swapaxes(u.conj(), -1, -2)
    # same spectrum as rho @ tilde, but Hermitian
    lam = np.linalg.eigvalsh(root @ tilde @ root)
    s = np.sqrt(np.clip(lam, 0.0, None))[..., ::-1]
    return np.maximum(0.0, s[..., 0] - s[..., 1] - s[..., 2] - s[..., 3])


def concurrence(rho):
    """Wootters concurrence of a two-qubit state (TwoQubitState or 4x4 array)."""
    if not isinstance(rho, TwoQubitState):
        rho = TwoQubitState(rho)
    return float(_concurrence_stack(rho.matrix))


@lru_cache(maxsize=512)
def _rdm_tables(n_sites, n_up, i, j):
    sector = enumerate_sector(n_sites, n_up)
    basis = sector.basis
    code = 2 * ((basis >> i) & 1) + ((basis >> j) & 1)
    src = np.nonzero(code == 1)[0]
    dst = sector.index(basis[src] ^ ((1 << i) | (1 << j)))
    return code, src, dst


def pure_pair_rdm(pair, i, j):
    """Two-site reduced density matrix of one real sector eigenvector."""
    n = pair.sector.n_sites
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"invalid site pair ({i}, {j}) for N={n}")
    code, src, dst = _rdm_tables(n, pair.sector.n_up, i, j)
    v = pair.vector
    rho = np.zeros((4, 4))
    rho[np.arange(4), np.arange(4)] = np.bincount(code, weights=v * v, minlength=4)
    rho[1, 2] = rho[2, 1] = v[src] @ v[dst]
    return rho


def _manifold_rdm(pairs, i, j):
    return sum(pure_pair_rdm(p, i, j) for p in pairs) / len(pairs)


def rdm_components(spectrum, i, j):
    """Ground-manifold and excited-manifold RDMs; the mixture is affine in p."""
    return _manifold_rdm(spectrum.ground_manifold, i, j), _manifold_rdm(spectrum.excited, i, j)


@dataclass(frozen=True, eq=False)
class SubjacentState:
    spectrum: object
    p: float

    def pair_rdm(self, i, j):
        return pair_rdm(self, i, j)


def subjacent_state(model, spec, **solve_kwargs):
    solve_kwargs.setdefault("gaps", False)
    spectrum = solve_low_spectrum(model, **solve_kwargs)
    return SubjacentState(spectrum, resolve_p(spec, spectrum.gap, spectrum.d))


def pair_rdm(state, site_i, site_j):
    r0, r1 = rdm_components(state.spectrum, site_i, site_j)
    return TwoQubitState((1 - state.p) * r0 + state.p * r1)


def nn_pairs(n_sites):
    return [(i, (i + 1) % n_sites) for i in range(n_sites)]


def _resolve_policy(model, pair_policy):
    if pair_policy == "auto":
        return "first" if model.uniform_delta is not None else "all"
    if pair_policy not in ("first", "all"):
        raise ValueError(f"pair_policy must be 'first', 'all' or 'auto', got {pair_policy!r}")
    return pair_policy


def state_nn_concurrence(state, pair_policy="first"):
    n = state.spectrum.ground.sector.n_sites
    pairs = nn_pairs(n)[:1] if pair_policy == "first" else nn_pairs(n)
    stack = np.array([pair_rdm(state, i, j).matrix for i, j in pairs])
    return float(np.mean(_concurrence_stack(stack)))


def nn_concurrence(model, spec, pair_policy="auto", **solve_kwargs):
    """Nearest-neighbour concurrence of the subjacent state of ``model``.

    ``pair_policy='all'`` averages the concurrence over the N bonds, needed
    once disorder breaks translation symmetry; ``'auto'`` picks ``'first'``
    for uniform chains and ``'all'`` otherwise.
    """
    policy = _resolve_policy(model, pair_policy)
    return state_nn_concurrence(subjacent_state(model, spec, **solve_kwargs), policy)
