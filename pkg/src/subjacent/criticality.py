"""Locating the fluid-dimer transition from concurrence scans.

Three estimators:

* jump midpoint: the largest step of a concurrence curve on a grid;
* level crossing: bisection on the sign of G_st - G_ss, the crossing of the
  lowest singlet-like and triplet-like excitations that makes the
  first-excited manifold (and hence the concurrence) jump;
* cubic inflection: for disorder-averaged curves, where the jump is smeared
  out, the zero of the second derivative of a local cubic fit.
"""
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .eigensolver import gap_difference, solve_low_spectrum
from .entanglement import (_concurrence_stack, _resolve_policy, nn_pairs, rdm_components,
                           resolve_p, state_nn_concurrence, SubjacentState)
from .scaling import CUBIC, fit

log = logging.getLogger(__name__)


class TransitionError(RuntimeError):
    pass


@dataclass(frozen=True)
class CurvePoint:
    alpha: float
    c: float
    p: float
    gap: float
    d: int


@dataclass(frozen=True, eq=False)
class ConcurrenceCurve:
    points: tuple
    n_sites: int = None
    delta: float = None
    sigma: float = None
    mixing: object = None

    def __post_init__(self):
        alphas = self.alphas
        if len(alphas) > 1 and np.any(np.diff(alphas) <= 0):
            raise ValueError("curve alphas must be strictly increasing")

    @property
    def alphas(self):
        return np.array([pt.alpha for pt in self.points])

    @property
    def values(self):
        return np.array([pt.c for pt in self.points])

    def __len__(self):
        return len(self.points)

    @classmethod
    def from_arrays(cls, alphas, values, **meta):
        pts = tuple(CurvePoint(float(a), float(c), float("nan"), float("nan"), 0)
                    for a, c in zip(alphas, values))
        return cls(pts, **meta)


@dataclass(frozen=True)
class TransitionEstimate:
    alpha_c: float
    c_minus: float
    c_plus: float
    method: str
    uncertainty: float

    @property
    def delta_c(self):
        return abs(self.c_plus - self.c_minus)


def alpha_grid(lo, hi, step):
    """Inclusive grid lo, lo+step, ..., hi without floating-point drift."""
    if not lo < hi or not step > 0:
        raise ValueError(f"need lo < hi and step > 0, got ({lo}, {hi}, {step})")
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(n), 12)


def _parallel_map(func, items, workers):
    if workers is None or workers <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def curve_point(model, spec, pair_policy="auto", **solve_kwargs):
    policy = _resolve_policy(model, pair_policy)
    solve_kwargs.setdefault("gaps", False)
    spectrum = solve_low_spectrum(model, **solve_kwargs)
    p = resolve_p(spec, spectrum.gap, spectrum.d)
    c = state_nn_concurrence(SubjacentState(spectrum, p), policy)
    return CurvePoint(model.alpha, c, p, spectrum.gap, spectrum.d)


def scan_curve(template, spec, alphas, pair_policy="auto", workers=1, **solve_kwargs):
    """Concurrence of the subjacent state along ``alphas`` (J1 and deltas from ``template``)."""
    alphas = np.asarray(alphas, dtype=float)

    def one(a):
        try:
            return curve_point(template.with_alpha(a), spec, pair_policy, **solve_kwargs)
        except Exception as exc:
            raise TransitionError(f"solve failed at alpha={float(a)!r}: {exc}") from exc

    points = _parallel_map(one, alphas, workers)
    return ConcurrenceCurve(tuple(points), template.n_sites, template.uniform_delta,
                            None, spec)


def detect_jump(curve, threshold_ratio=5.0):
    """Largest consecutive step, if it stands out from the typical step.

    Returns None when the largest absolute difference is below
    ``threshold_ratio`` times the median absolute difference.
    """
    if len(curve) < 8:
        raise ValueError("jump detection needs at least 8 points")
    a, c = curve.alphas, curve.values
    diffs = np.abs(np.diff(c))
    k = int(np.argmax(diffs))
    if diffs[k] <= 0 or diffs[k] < threshold_ratio * np.median(diffs):
        return None
    return TransitionEstimate(float(0.5 * (a[k] + a[k + 1])), float(c[k]), float(c[k + 1]),
                              "jump-midpoint", float(0.5 * (a[k + 1] - a[k])))


def bisect_gap_crossing(template, bracket, tol=1e-5, **solve_kwargs):
    """Final ``(lo, hi)`` bracket, of width <= tol, around the G_st = G_ss crossing."""
    lo, hi = map(float, bracket)
    f_lo = gap_difference(template.with_alpha(lo), **solve_kwargs)
    f_hi = gap_difference(template.with_alpha(hi), **solve_kwargs)
    if not (np.isfinite(f_lo) and np.isfinite(f_hi)) or np.sign(f_lo) == np.sign(f_hi):
        raise TransitionError(f"G_st - G_ss does not change sign on [{lo}, {hi}] "
                              f"({f_lo:.3g}, {f_hi:.3g})")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = gap_difference(template.with_alpha(mid), **solve_kwargs)
        if f_mid == 0:
            return mid, mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return lo, hi


def refine_by_gap_crossing(template, bracket, tol=1e-5, **solve_kwargs):
    lo, hi = bisect_gap_crossing(template, bracket, tol, **solve_kwargs)
    return 0.5 * (lo + hi)


def bisect_concurrence_jump(template, spec, bracket, tol=1e-5, pair_policy="auto",
                            **solve_kwargs):
    """Shrink a bracket around a concurrence discontinuity.

    Keeps whichever half shows the larger change in concurrence; valid once
    the jump dominates the smooth variation across the bracket.
    """
    lo, hi = map(float, bracket)

    def c(a):
        return curve_point(template.with_alpha(a), spec, pair_policy, **solve_kwargs).c

    c_lo, c_hi = c(lo), c(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        c_mid = c(mid)
        if abs(c_mid - c_lo) >= abs(c_hi - c_mid):
            hi, c_hi = mid, c_mid
        else:
            lo, c_lo = mid, c_mid
    return lo, hi, c_lo, c_hi


def transition_from_bracket(template, spec, bracket, method="gap-crossing", tol=1e-5,
                            pair_policy="auto", **solve_kwargs):
    """TransitionEstimate refined inside ``bracket``.

    ``method`` is ``'gap-crossing'`` (bisection on G_st - G_ss) or
    ``'bisect'`` (bisection on the concurrence jump itself). C- and C+ are
    the concurrences at the ends of the final bracket.
    """
    if method == "gap-crossing":
        cache = solve_kwargs.get("cache")
        lo, hi = bisect_gap_crossing(template, bracket, tol, cache=cache)
        pts = [curve_point(template.with_alpha(a), spec, pair_policy, **solve_kwargs)
               for a in (lo, hi)]
        c_lo, c_hi = pts[0].c, pts[1].c
    elif method == "bisect":
        lo, hi, c_lo, c_hi = bisect_concurrence_jump(template, spec, bracket, tol,
                                                     pair_policy, **solve_kwargs)
    else:
        raise ValueError(f"unknown refinement {method!r}")
    return TransitionEstimate(0.5 * (lo + hi), c_lo, c_hi, method, 0.5 * (hi - lo))


def locate_transition(template, spec, alphas, refine="gap-crossing", tol=1e-5,
                      threshold_ratio=5.0, pair_policy="auto", workers=1, **solve_kwargs):
    """Coarse scan, jump detection, then optional refinement.

    ``refine`` is ``'none'``, ``'gap-crossing'`` or ``'bisect'``. Returns
    ``(estimate_or_None, curve)``.
    """
    curve = scan_curve(template, spec, alphas, pair_policy, workers, **solve_kwargs)
    coarse = detect_jump(curve, threshold_ratio)
    if coarse is None or refine in (None, "none"):
        return coarse, curve
    bracket = (coarse.alpha_c - coarse.uncertainty, coarse.alpha_c + coarse.uncertainty)
    return transition_from_bracket(template, spec, bracket, refine, tol, pair_policy,
                                   **solve_kwargs), curve


def steepest_point(curve):
    """Midpoint of the largest consecutive change of a curve."""
    a, c = curve.alphas, curve.values
    k = int(np.argmax(np.abs(np.diff(c))))
    return 0.5 * (a[k] + a[k + 1])


def inflection_transition(curve, center=None, window_halfwidth=0.05, min_points=8):
    """Inflection point of a least-squares cubic fitted near ``center``.

    ``center`` defaults to the steepest point of the curve. The uncertainty
    is the delta-method standard error of -b1 / (3 a1).
    """
    if center is None:
        center = steepest_point(curve)
    a, c = curve.alphas, curve.values
    inside = np.abs(a - center) <= window_halfwidth * (1 + 1e-9)
    if inside.sum() < min_points:
        raise TransitionError(f"only {inside.sum()} points within {window_halfwidth} of "
                              f"{center}; need {min_points}")
    x, y = a[inside], c[inside]
    result = fit(CUBIC, x, y)
    a1, b1 = result["a1"], result["b1"]
    # a cubic term inside its own standard error is indistinguishable from zero
    if (abs(a1) <= 1e-12 * max(np.max(np.abs(result.values)), 1e-300)
            or abs(a1) < result.std_error("a1")):
        raise TransitionError("cubic coefficient vanishes; no inflection point")
    alpha_c = -b1 / (3 * a1)
    if not x.min() <= alpha_c <= x.max():
        raise TransitionError(f"inflection {alpha_c:.6g} lies outside the fit window "
                              f"[{x.min():.6g}, {x.max():.6g}]")
    grad = np.array([b1 / (3 * a1**2), -1 / (3 * a1), 0.0, 0.0])
    se = float(np.sqrt(grad @ result.covariance @ grad))
    k = np.searchsorted(a, alpha_c)
    c_minus = float(c[max(k - 1, 0)])
    c_plus = float(c[min(k, len(c) - 1)])
    return TransitionEstimate(float(alpha_c), c_minus, c_plus, "cubic-inflection", se)


def phase_diagram_grid(n_sites, spec, alphas, deltas, workers=1, j1=1.0, **solve_kwargs):
    """Concurrence on the (delta, alpha) plane; rows follow ``deltas``."""
    from .lattice import ChainModel

    alphas = np.asarray(alphas, dtype=float)
    tasks = [(dl, a) for dl in deltas for a in alphas]

    def one(task):
        dl, a = task
        return curve_point(ChainModel.uniform(n_sites, a, dl, j1), spec, "first",
                           **solve_kwargs).c

    values = _parallel_map(one, tasks, workers)
    return np.array(values).reshape(len(deltas), len(alphas))


def boundary_values_vs_p(template, p_grid, alphas, threshold_ratio=5.0, **solve_kwargs):
    """(p, C-, C+, alpha_c) at each mixing probability where a jump is found.

    The spectra do not depend on p, so each alpha is solved once and the
    two-site states are re-mixed for every p.
    """
    components = []
    solve_kwargs.setdefault("gaps", False)
    for a in np.asarray(alphas, dtype=float):
        spectrum = solve_low_spectrum(template.with_alpha(a), **solve_kwargs)
        components.append(rdm_components(spectrum, *nn_pairs(template.n_sites)[0]))
    r0 = np.array([c[0] for c in components])
    r1 = np.array([c[1] for c in components])
    out = []
    for p in p_grid:
        values = _concurrence_stack((1 - p) * r0 + p * r1)
        est = detect_jump(ConcurrenceCurve.from_arrays(alphas, values), threshold_ratio)
        if est is None:
            warnings.warn(f"no concurrence jump detected at p={p}; point skipped",
                          RuntimeWarning, stacklevel=2)
            continue
        out.append((float(p), est.c_minus, est.c_plus, est.alpha_c))
    return out
