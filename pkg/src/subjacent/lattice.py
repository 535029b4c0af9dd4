"""Periodic spin-1/2 J1-J2 XXZ chain with per-bond z-anisotropy.

Energies use the Pauli-matrix convention: every bond contributes
``J (sx sx + sy sy + delta sz sz)`` with Pauli matrices, which is four times
the spin-operator (S = sigma/2) convention.

Basis states are integers whose bit ``i`` is the z-state of site ``i``
(1 = up). All operators act on one fixed-magnetization sector at a time.
"""
from dataclasses import dataclass, field, replace
from functools import lru_cache
from hashlib import sha256
from itertools import combinations
from math import comb

import numpy as np

MAX_SITES = 20


@dataclass(frozen=True)
class ChainModel:
    """Couplings of a periodic J1-J2 chain.

    ``nn_delta[i]`` is the z-anisotropy of bond (i, i+1 mod N) and
    ``nnn_delta[i]`` that of bond (i, i+2 mod N). Both default to 1
    (isotropic Heisenberg).
    """

    n_sites: int
    j1: float = 1.0
    j2: float = 0.0
    nn_delta: tuple = None
    nnn_delta: tuple = None

    def __post_init__(self):
        n = self.n_sites
        if not isinstance(n, (int, np.integer)) or n % 2 or n < 4:
            raise ValueError(f"n_sites must be an even integer >= 4, got {n!r}")
        if n > MAX_SITES:
            raise ValueError(f"n_sites={n} exceeds the supported maximum {MAX_SITES}")
        if self.j1 < 0 or self.j2 < 0:
            raise ValueError("couplings must be non-negative (antiferromagnetic)")
        for name in ("nn_delta", "nnn_delta"):
            value = getattr(self, name)
            if value is None:
                value = (1.0,) * n
            value = tuple(float(x) for x in np.ravel(value))
            if len(value) == 1:
                value = value * n
            if len(value) != n:
                raise ValueError(f"{name} needs {n} entries, got {len(value)}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "n_sites", int(n))
        object.__setattr__(self, "j1", float(self.j1))
        object.__setattr__(self, "j2", float(self.j2))

    @classmethod
    def uniform(cls, n_sites, alpha, delta=1.0, j1=1.0):
        return cls(n_sites, j1, alpha * j1, (delta,) * n_sites, (delta,) * n_sites)

    @classmethod
    def disordered(cls, n_sites, alpha, nn_dev, nnn_dev, j1=1.0):
        """Isotropic chain plus independent z-z perturbations on every bond."""
        nn = 1.0 + np.asarray(nn_dev, dtype=float)
        nnn = 1.0 + np.asarray(nnn_dev, dtype=float)
        return cls(n_sites, j1, alpha * j1, tuple(nn), tuple(nnn))

    @property
    def alpha(self):
        if self.j1 <= 0:
            raise ValueError("alpha = j2/j1 is undefined for j1 = 0")
        return self.j2 / self.j1

    def with_alpha(self, alpha):
        return replace(self, j2=float(alpha) * self.j1)

    @property
    def uniform_delta(self):
        """The common anisotropy if all bonds share one, else None."""
        values = set(self.nn_delta) | set(self.nnn_delta)
        return values.pop() if len(values) == 1 else None

    @property
    def is_isotropic(self):
        return self.uniform_delta == 1.0

    def bonds(self):
        """The 2N bonds: nearest neighbours first, then next-nearest."""
        n = self.n_sites
        return [(i, (i + 1) % n) for i in range(n)] + [(i, (i + 2) % n) for i in range(n)]

    def couplings(self):
        """Per-bond exchange J and anisotropy delta, aligned with :meth:`bonds`."""
        n = self.n_sites
        j = np.concatenate([np.full(n, self.j1), np.full(n, self.j2)])
        delta = np.array(self.nn_delta + self.nnn_delta)
        return j, delta

    def key(self):
        """Stable content hash, used for cache keys."""
        payload = repr((self.n_sites, self.j1, self.j2, self.nn_delta, self.nnn_delta))
        return sha256(payload.encode()).hexdigest()


@dataclass(frozen=True, eq=False)
class SzSector:
    """All basis states with exactly ``n_up`` up spins, in ascending order."""

    n_sites: int
    n_up: int
    basis: np.ndarray = field(repr=False)

    @property
    def dimension(self):
        return len(self.basis)

    @property
    def sz(self):
        return self.n_up - self.n_sites / 2

    def index(self, states):
        """Positions of ``states`` in the basis (inverse of ``basis[...]``)."""
        states = np.asarray(states)
        pos = np.searchsorted(self.basis, states)
        pos = np.minimum(pos, self.dimension - 1)
        if np.any(self.basis[pos] != states):
            raise KeyError("state outside this sector")
        return pos

    def __eq__(self, other):
        return (isinstance(other, SzSector) and self.n_sites == other.n_sites
                and self.n_up == other.n_up)

    def __hash__(self):
        return hash((self.n_sites, self.n_up))


@lru_cache(maxsize=None)
def enumerate_sector(n_sites, n_up):
    if not 0 <= n_up <= n_sites:
        raise ValueError(f"n_up must lie in [0, {n_sites}], got {n_up}")
    if n_sites > MAX_SITES:
        raise ValueError(f"n_sites={n_sites} exceeds the supported maximum {MAX_SITES}")
    states = [sum(1 << i for i in c) for c in combinations(range(n_sites), n_up)]
    basis = np.sort(np.array(states, dtype=np.int64))
    basis.setflags(write=False)
    assert len(basis) == comb(n_sites, n_up)
    return SzSector(n_sites, n_up, basis)


class _PairTables:
    """Diagonal signs and exchange partners for a list of site pairs."""

    def __init__(self, sector, pairs):
        basis = sector.basis
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        bi = (basis[None, :] >> pairs[:, :1]) & 1
        bj = (basis[None, :] >> pairs[:, 1:]) & 1
        self.zz = np.where(bi == bj, 1.0, -1.0)
        bond, rows = np.nonzero(bi != bj)
        masks = (np.int64(1) << pairs[:, 0]) | (np.int64(1) << pairs[:, 1])
        self.rows = rows
        self.cols = sector.index(basis[rows] ^ masks[bond])
        self.bond = bond
        self.dimension = sector.dimension


@lru_cache(maxsize=64)
def _bond_tables(n_sites, n_up):
    pairs = ChainModel(n_sites).bonds()
    return _PairTables(enumerate_sector(n_sites, n_up), pairs)


@lru_cache(maxsize=64)
def _all_pair_tables(n_sites, n_up):
    pairs = list(combinations(range(n_sites), 2))
    return _PairTables(enumerate_sector(n_sites, n_up), pairs or np.empty((0, 2)))


def _check_vector(sector, v):
    v = np.asarray(v, dtype=float)
    if v.shape != (sector.dimension,):
        raise ValueError(f"vector shape {v.shape} does not match sector dimension "
                         f"{sector.dimension}")
    return v


class SectorHamiltonian:
    """H restricted to one Sz sector, applied without forming the matrix."""

    def __init__(self, model, sector):
        if sector.n_sites != model.n_sites:
            raise ValueError("sector and model disagree on the number of sites")
        self.model = model
        self.sector = sector
        t = _bond_tables(model.n_sites, sector.n_up)
        j, delta = model.couplings()
        self.diagonal = (j * delta) @ t.zz
        self._rows = t.rows
        self._cols = t.cols
        self._coef = 2.0 * j[t.bond]

    @property
    def dimension(self):
        return self.sector.dimension

    def matvec(self, v):
        out = self.diagonal * v
        out += np.bincount(self._rows, weights=self._coef * v[self._cols],
                           minlength=self.dimension)
        return out

    def to_dense(self):
        h = np.diag(self.diagonal)
        np.add.at(h, (self._rows, self._cols), self._coef)
        return h


def apply_hamiltonian(model, sector, v):
    v = _check_vector(sector, v)
    return SectorHamiltonian(model, sector).matvec(v)


def total_spin_squared_diagonal(n_sites, sector):
    t = _all_pair_tables(n_sites, sector.n_up)
    return 0.75 * n_sites + 0.5 * t.zz.sum(axis=0)


def apply_total_spin_squared(n_sites, sector, v):
    """S^2 in the spin-1/2 convention; eigenvalues are S(S+1)."""
    if sector.n_sites != n_sites:
        raise ValueError("sector does not belong to a chain of this length")
    v = _check_vector(sector, v)
    t = _all_pair_tables(n_sites, sector.n_up)
    # S_i.S_j = zz/4 + (exchange)/2, and S^2 = 3N/4 + 2 sum_{i<j} S_i.S_j
    out = total_spin_squared_diagonal(n_sites, sector) * v
    out += np.bincount(t.rows, weights=v[t.cols], minlength=sector.dimension)
    return out


@lru_cache(maxsize=64)
def _flip_map(n_sites, n_up):
    sector = enumerate_sector(n_sites, n_up)
    target = enumerate_sector(n_sites, n_sites - n_up)
    full = (1 << n_sites) - 1
    perm = target.index(full ^ sector.basis)
    perm.setflags(write=False)
    return perm


def spin_flip_map(sector):
    """Index map of the global spin flip into the sector with N - n_up up spins.

    ``flipped[perm] = v`` carries a vector of ``sector`` into the mirror sector.
    """
    return _flip_map(sector.n_sites, sector.n_up)


def flip_vector(sector, v):
    """Image of ``v`` under the global spin flip, with its target sector."""
    perm = spin_flip_map(sector)
    target = enumerate_sector(sector.n_sites, sector.n_sites - sector.n_up)
    out = np.empty_like(v)
    out[perm] = v
    return target, out


def flip_parity(sector, v):
    """<v|F|v> for the global spin flip F; +-1 on flip eigenstates of Sz = 0."""
    if 2 * sector.n_up != sector.n_sites:
        raise ValueError("flip parity is only defined in the Sz = 0 sector")
    perm = spin_flip_map(sector)
    return float(v @ v[perm])
