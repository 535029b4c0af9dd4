"""Gaussian bond disorder and Monte Carlo averaged concurrence.

Every realization perturbs the z-z part of each of the 2N bonds by an
independent draw Delta ~ Normal(0, sigma). Draws come from a counter-based
stream split, ``SeedSequence(master_seed, spawn_key=(index,))``, so a
realization depends only on the master seed and its own index, never on
thread count or evaluation order.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .criticality import ConcurrenceCurve, CurvePoint
from .entanglement import nn_concurrence

log = logging.getLogger(__name__)

DEFAULT_REALIZATIONS = 50_000
MIN_REALIZATIONS = 100
MAX_SKIP_FRACTION = 0.01


class DisorderError(RuntimeError):
    pass


@dataclass(frozen=True)
class DisorderSpec:
    sigma: float
    realizations: int = DEFAULT_REALIZATIONS
    master_seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma}")
        if int(self.realizations) < 1:
            raise ValueError("realizations must be positive")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    @property
    def mean(self):
        return 0.0


@dataclass(frozen=True)
class DisorderAverage:
    alpha: float
    sigma: float
    mean_c: float
    sem: float
    realizations_used: int
    skipped: int = 0


def sample_realization(spec, n_sites, index):
    """Per-bond deviations ``(nn_dev, nnn_dev)`` of realization ``index``."""
    if not 0 <= index < spec.realizations:
        raise IndexError(f"realization {index} outside [0, {spec.realizations})")
    if spec.sigma == 0:
        return np.zeros(n_sites), np.zeros(n_sites)
    seq = np.random.SeedSequence(int(spec.master_seed), spawn_key=(int(index),))
    draws = np.random.default_rng(seq).normal(0.0, spec.sigma, 2 * n_sites)
    return draws[:n_sites], draws[n_sites:]


def _evaluate(template, spec, mixing, alphas, index, solve_kwargs):
    """Concurrences of one realization along ``alphas``; NaN marks a failed solve."""
    nn, nnn = sample_realization(spec, template.n_sites, index)
    out = np.empty(len(alphas))
    for k, a in enumerate(alphas):
        model = template.disordered(template.n_sites, a, nn, nnn, template.j1)
        try:
            out[k] = nn_concurrence(model, mixing, "all", **solve_kwargs)
        except Exception as exc:  # noqa: BLE001 - a failed realization is skipped, not fatal
            log.warning("realization %d failed at alpha=%g: %s", index, a, exc)
            out[k] = np.nan
    return out


def _collect(template, spec, mixing, alphas, workers, target_sem, chunk, solve_kwargs):
    total = int(spec.realizations)
    if total < MIN_REALIZATIONS:
        raise ValueError(f"need at least {MIN_REALIZATIONS} realizations, got {total}")
    rows = []
    done = 0
    pool = ThreadPoolExecutor(max_workers=workers) if workers and workers > 1 else None
    try:
        while done < total:
            indices = range(done, min(done + chunk, total))
            task = lambda i: _evaluate(template, spec, mixing, alphas, i, solve_kwargs)  # noqa: E731
            rows.extend(pool.map(task, indices) if pool else map(task, indices))
            done = indices.stop
            if target_sem is not None and done >= MIN_REALIZATIONS:
                values = np.array(rows)
                good = values[~np.isnan(values).any(axis=1)]
                if len(good) > 1 and np.all(good.std(axis=0, ddof=1) / np.sqrt(len(good))
                                            < target_sem):
                    break
    finally:
        if pool is not None:
            pool.shutdown()
    values = np.array(rows)
    failed = np.isnan(values).any(axis=1)
    if failed.sum() > MAX_SKIP_FRACTION * len(values):
        raise DisorderError(f"{failed.sum()} of {len(values)} realizations failed")
    return values[~failed], int(failed.sum())


def _summaries(values, alphas, sigma, skipped):
    # rows are ordered by realization index; numpy's pairwise sum over that
    # fixed order makes the reduction independent of the thread schedule
    n = len(values)
    mean = values.mean(axis=0)
    sem = values.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.full(len(alphas), np.nan)
    return [DisorderAverage(float(a), float(sigma), float(m), float(s), n, skipped)
            for a, m, s in zip(alphas, mean, sem)]


def averaged_concurrence(template, spec, mixing, alpha, workers=1, target_sem=None,
                         chunk=1000, **solve_kwargs):
    """Disorder-averaged nearest-neighbour concurrence at one ``alpha``.

    The concurrence of each realization is averaged over all N bonds.
    With ``target_sem`` set, sampling stops at the first multiple of
    ``chunk`` realizations whose standard error falls below it.
    """
    alphas = np.array([float(alpha)])
    values, skipped = _collect(template, spec, mixing, alphas, workers, target_sem, chunk,
                               solve_kwargs)
    return _summaries(values, alphas, spec.sigma, skipped)[0]


def disorder_curve(template, spec, mixing, alphas, workers=1, chunk=1000, **solve_kwargs):
    """Averaged concurrence on an alpha grid.

    The same realizations are used at every alpha (common random numbers),
    which removes most of the sampling noise from differences along the
    curve. Returns ``(averages, curve)``.
    """
    alphas = np.asarray(alphas, dtype=float)
    values, skipped = _collect(template, spec, mixing, alphas, workers, None, chunk,
                               solve_kwargs)
    averages = _summaries(values, alphas, spec.sigma, skipped)
    points = tuple(CurvePoint(av.alpha, av.mean_c, float("nan"), float("nan"), 0)
                   for av in averages)
    return averages, ConcurrenceCurve(points, template.n_sites, None, spec.sigma, mixing)
