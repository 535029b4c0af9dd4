"""Low-lying spectrum of a chain by sector-blocked Lanczos iteration.

Only sectors with n_up >= N/2 are diagonalized; their mirror images under
the global spin flip supply n_up < N/2 with identical energies.
"""
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .lattice import (SectorHamiltonian, SzSector, apply_total_spin_squared,
                      enumerate_sector, flip_parity, flip_vector)

log = logging.getLogger(__name__)

DEFAULT_LEVELS = 6
DEFAULT_TOL = 1e-10
DENSE_THRESHOLD = 300
MAX_DENSE_SITES = 10


class SpectrumError(RuntimeError):
    pass


class ConvergenceError(SpectrumError):
    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class GroundStateDegeneracyWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class EigenPair:
    energy: float
    vector: np.ndarray = field(repr=False)
    sector: SzSector
    s2: float = float("nan")
    parity: float = float("nan")


@dataclass(frozen=True, eq=False)
class SpectrumSlice:
    """Ground manifold, first-excited manifold and the gap diagnostics.

    ``levels`` holds every computed eigenpair (all sectors, sorted), which is
    a superset of the two manifolds. ``gst`` and ``gss`` are None when the
    solve was asked to skip level classification.
    """

    ground_manifold: tuple
    excited: tuple
    levels: tuple = field(repr=False)
    gst: float = None
    gss: float = None

    @property
    def ground(self):
        return self.ground_manifold[0]

    @property
    def d(self):
        return len(self.excited)

    @property
    def gap(self):
        return self.excited[0].energy - self.ground.energy

    @property
    def energies(self):
        return np.array([pair.energy for pair in self.levels])


def degeneracy_tolerance(e0):
    return 1e-9 * max(1.0, abs(e0))


# ---------------------------------------------------------------------------
# Lanczos


def _orthogonalize(w, basis):
    # two passes of classical Gram-Schmidt keep orthogonality at machine precision
    for _ in range(2):
        if basis is not None and len(basis):
            w -= basis.T @ (basis @ w)
    return w


def lanczos(matvec, dim, k, tol=DEFAULT_TOL, max_iter=5000, deflate=None, seed=0,
            check_every=5):
    """Lowest ``k`` eigenpairs of a symmetric operator.

    Full reorthogonalization against the Krylov basis and against the rows of
    ``deflate`` (an orthonormal block to be projected out). Stops when every
    wanted Ritz pair has residual ``<= tol * max(1, |theta|)`` or the Krylov
    space becomes invariant. Returns ``(values, vectors)`` with vectors as
    columns; fewer than ``k`` pairs come back when the space is exhausted.
    """
    rng = np.random.default_rng(seed)
    if deflate is not None and len(deflate) == 0:
        deflate = None
    free = dim - (0 if deflate is None else len(deflate))
    if free <= 0:
        return np.empty(0), np.empty((dim, 0))
    max_iter = min(max_iter, free)

    q = rng.standard_normal(dim)
    q = _orthogonalize(q, deflate)
    q /= np.linalg.norm(q)
    krylov = np.empty((max_iter, dim))
    alphas, betas = [], []
    converged = False
    residuals = None
    for j in range(max_iter):
        krylov[j] = q
        w = matvec(q)
        a = q @ w
        alphas.append(a)
        w = _orthogonalize(w, krylov[: j + 1])
        w = _orthogonalize(w, deflate)
        b = np.linalg.norm(w)
        m = j + 1
        exhausted = b <= 1e-12 * max(1.0, abs(a)) or m == free
        if exhausted or (m >= k and m % check_every == 0) or m == max_iter:
            theta, s = eigh_tridiagonal(np.array(alphas), np.array(betas))
            want = min(k, m)
            residuals = np.abs(b * s[-1, :want])
            if exhausted or np.all(residuals <= tol * np.maximum(1.0, np.abs(theta[:want]))):
                converged = True
                break
        betas.append(b)
        q = w / b
    if not converged:
        raise ConvergenceError(f"Lanczos did not converge in {max_iter} iterations "
                               f"(residuals {residuals})", residuals)
    want = min(k, m)
    vectors = krylov[:m].T @ s[:, :want]
    vectors /= np.linalg.norm(vectors, axis=0)
    return theta[:want], vectors


def _lanczos_complete(op, k, tol, max_iter, seed):
    """Lanczos plus deflated restarts that recover degenerate partners.

    A single Krylov run sees one vector per eigenspace, so after the first
    run we keep restarting orthogonally to everything found until a restart
    lands above the highest level already collected.
    """
    dim = op.dimension
    values, vectors = lanczos(op.matvec, dim, k, tol, max_iter, seed=seed)
    values, vectors = list(values), [vectors[:, i] for i in range(vectors.shape[1])]
    restart = 1
    while len(values) < dim:
        block = np.array(vectors)
        extra_vals, extra_vecs = lanczos(op.matvec, dim, 1, tol, max_iter,
                                         deflate=block, seed=seed + restart)
        restart += 1
        if not len(extra_vals):
            break
        top = max(values)
        if extra_vals[0] > top + degeneracy_tolerance(top):
            break
        values.append(extra_vals[0])
        vectors.append(extra_vecs[:, 0])
    order = np.argsort(values)
    return np.array(values)[order], np.array(vectors)[order].T


def _dense_lowest(op, k):
    w, v = np.linalg.eigh(op.to_dense())
    keep = min(k, len(w))
    # never cut through a multiplet
    while keep < len(w) and w[keep] - w[keep - 1] <= degeneracy_tolerance(w[keep - 1]):
        keep += 1
    return w[:keep], v[:, :keep]


def sector_lowest(model, sector, k=DEFAULT_LEVELS, tol=DEFAULT_TOL, method="auto",
                  max_iter=5000, complete=True, seed=0):
    """Lowest eigenpairs in one sector as ``(values, vectors-as-columns)``."""
    op = SectorHamiltonian(model, sector)
    if method == "dense" or (method == "auto" and op.dimension <= DENSE_THRESHOLD):
        return _dense_lowest(op, k)
    if method not in ("auto", "lanczos"):
        raise ValueError(f"unknown method {method!r}")
    if complete:
        return _lanczos_complete(op, k, tol, max_iter, seed)
    return lanczos(op.matvec, op.dimension, k, tol, max_iter, seed=seed)


# ---------------------------------------------------------------------------
# spectrum assembly


def _classify(model, pairs, e0_pair):
    """Split the levels into singlet-like and triplet-like classes.

    With isotropic couplings the classes are S = 0 and S = 1 read off from
    <S^2>. Otherwise S^2 is not conserved and the classes are defined by the
    spin-flip parity in Sz = 0 relative to the ground state (a singlet and a
    triplet's Sz = 0 member have opposite flip parity), with |Sz| = 1 levels
    counted as triplet-like.
    """
    n = model.n_sites
    half = n // 2
    singlet, triplet = [], []
    use_s2 = model.is_isotropic and all(np.isfinite(p.s2) for p in pairs)
    for p in pairs:
        if use_s2:
            if abs(p.s2) < 1e-6:
                singlet.append(p)
            elif abs(p.s2 - 2.0) < 1e-6:
                triplet.append(p)
        elif p.sector.n_up == half:
            if abs(abs(p.parity) - 1) > 1e-6 or abs(abs(e0_pair.parity) - 1) > 1e-6:
                continue
            (singlet if np.sign(p.parity) == np.sign(e0_pair.parity) else triplet).append(p)
        elif abs(p.sector.n_up - half) == 1:
            triplet.append(p)
    return singlet, triplet


def solve_low_spectrum(model, k=DEFAULT_LEVELS, tol=DEFAULT_TOL, *, sectors=None,
                       method="auto", max_iter=5000, gaps=True, complete=True, seed=0,
                       cache=None):
    """Ground state, first-excited manifold and gaps of ``model``.

    ``sectors`` restricts the n_up >= N/2 sectors that are solved (default:
    all of them). ``gaps=False`` skips the singlet/triplet classification,
    which is the expensive part for large chains. ``complete=False`` skips the
    deflated restarts that recover in-sector degeneracies (safe when only
    energies are needed). ``cache`` is an optional :class:`EigenCache`.
    """
    if k < 4:
        raise ValueError("k must be at least 4")
    n = model.n_sites
    half = n // 2
    if sectors is None:
        sectors = range(half, n + 1)
    pairs = []
    for n_up in sorted(set(sectors)):
        if n_up < half or n_up > n:
            raise ValueError(f"sector n_up={n_up} is not in [{half}, {n}]")
        sector = enumerate_sector(n, n_up)
        settings = (k, tol, method, max_iter, complete, seed)
        hit = cache.get(model, sector, settings) if cache is not None else None
        if hit is None:
            values, vectors = sector_lowest(model, sector, k, tol, method, max_iter,
                                            complete, seed)
            if cache is not None:
                cache.put(model, sector, settings, values, vectors)
        else:
            values, vectors = hit
        for e, v in zip(values, vectors.T):
            s2 = parity = float("nan")
            if gaps and abs(n_up - half) <= 1:
                if model.is_isotropic:
                    s2 = float(v @ apply_total_spin_squared(n, sector, v))
                if n_up == half:
                    parity = flip_parity(sector, v)
            pairs.append(EigenPair(float(e), v, sector, s2, parity))
            if n_up > half:
                mirror, w = flip_vector(sector, v)
                pairs.append(EigenPair(float(e), w, mirror, s2, parity))
    if not pairs:
        raise SpectrumError("no sectors solved")
    pairs.sort(key=lambda p: (p.energy, p.sector.n_up))

    e0 = pairs[0].energy
    tol_deg = degeneracy_tolerance(e0)
    ground = tuple(p for p in pairs if p.energy - e0 <= tol_deg)
    rest = [p for p in pairs if p.energy - e0 > tol_deg]
    if not rest:
        raise SpectrumError("spectrum is fully degenerate: no first excited level")
    e1 = rest[0].energy
    excited = tuple(p for p in rest if p.energy - e1 <= tol_deg)
    if len(ground) > 1:
        warnings.warn(f"ground state is {len(ground)}-fold degenerate (E0={e0:.12g}); "
                      "its members are mixed uniformly", GroundStateDegeneracyWarning,
                      stacklevel=2)

    gst = gss = None
    if gaps:
        singlet, triplet = _classify(model, pairs, pairs[0])
        excited_singlets = [p for p in singlet if p.energy - e0 > tol_deg]
        gst = triplet[0].energy - e0 if triplet else float("nan")
        gss = excited_singlets[0].energy - e0 if excited_singlets else float("nan")
    return SpectrumSlice(ground, excited, tuple(pairs), gst, gss)


def gap_difference(model, k=DEFAULT_LEVELS, tol=DEFAULT_TOL, **kwargs):
    """G_st - G_ss using only the Sz = 0 and |Sz| = 1 sectors."""
    half = model.n_sites // 2
    spec = solve_low_spectrum(model, k, tol, sectors=(half, half + 1), gaps=True,
                              complete=False, **kwargs)
    return spec.gst - spec.gss


# ---------------------------------------------------------------------------
# dense oracle


@dataclass(frozen=True, eq=False)
class DenseSpectrum:
    energies: np.ndarray
    pairs: tuple = field(repr=False)

    def sector_energies(self, n_up):
        return np.array([p.energy for p in self.pairs if p.sector.n_up == n_up])


def dense_spectrum(model):
    """Every eigenpair of ``model`` by dense diagonalization of each sector."""
    n = model.n_sites
    if n > MAX_DENSE_SITES:
        raise ValueError(f"dense spectrum limited to N <= {MAX_DENSE_SITES}, got {n}")
    pairs = []
    for n_up in range(n + 1):
        sector = enumerate_sector(n, n_up)
        w, v = np.linalg.eigh(SectorHamiltonian(model, sector).to_dense())
        pairs.extend(EigenPair(float(e), v[:, i], sector) for i, e in enumerate(w))
    pairs.sort(key=lambda p: p.energy)
    return DenseSpectrum(np.array([p.energy for p in pairs]), tuple(pairs))
