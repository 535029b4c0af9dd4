"""Levenberg-Marquardt least squares and the finite-size scaling forms."""
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import stats


class FitError(RuntimeError):
    pass


def _power_offset(x, t):
    return t[0] + t[1] * x ** (-t[2])


def _power_free(x, t):
    return t[0] + t[1] * x ** t[2]


def _delta_scaling(x, t):
    return t[0] - t[1] * x ** (-t[2])


def _rational(x, t):
    return (t[0] * x**2 + t[1] * x + t[2]) / (x**2 + t[3] * x + t[4])


def _cubic(x, t):
    return ((t[0] * x + t[1]) * x + t[2]) * x + t[3]


def _linear(x, t):
    return t[0] * x + t[1]


def _power_init(x, y, exponent, sign):
    """Offset just beyond the extreme of the data, amplitude through the first point.

    ``sign`` is the sign of x**exponent's coefficient in the model as written.
    """
    order = np.argsort(x)
    x, y = x[order], y[order]
    span = np.ptp(y) or max(abs(y[0]), 1.0)
    offset = y.min() - 0.1 * span if y[0] > y[-1] else y.max() + 0.1 * span
    amp = (y[0] - offset) / (sign * x[0] ** exponent)
    return offset, amp


def _init_power_offset(x, y):
    offset, amp = _power_init(x, y, -2.0, 1.0)
    return np.array([offset, amp, 2.0])


def _init_power_free(x, y):
    offset, amp = _power_init(x, y, -2.0, 1.0)
    return np.array([offset, amp, -2.0])


def _init_delta_scaling(x, y):
    offset, amp = _power_init(x, y, -1.0, -1.0)
    return np.array([offset, amp, 1.0])


def _init_rational(x, y):
    # y (x^2 + q1 x + q2) = p1 x^2 + p2 x + p3 is linear in all five parameters
    a = np.column_stack([x**2, x, np.ones_like(x), -y * x, -y])
    sol, *_ = np.linalg.lstsq(a, y * x**2, rcond=None)
    return sol


def _init_polynomial(degree):
    def init(x, y):
        return np.zeros(degree + 1)
    return init


@dataclass(frozen=True)
class FitModel:
    name: str
    param_names: tuple
    func: object = field(repr=False)
    initial_guess: object = field(repr=False)

    @property
    def n_params(self):
        return len(self.param_names)

    def __call__(self, x, params):
        return self.func(np.asarray(x, dtype=float), np.asarray(params, dtype=float))


POWER_LAW_OFFSET = FitModel("power-law-offset", ("alpha_inf", "a", "b"),
                            _power_offset, _init_power_offset)
JUMP_SCALING = FitModel("jump-scaling", ("dc_inf", "gamma", "delta_exp"),
                        _power_offset, _init_power_offset)
RATIONAL_QUADRATIC = FitModel("rational-quadratic", ("p1", "p2", "p3", "q1", "q2"),
                              _rational, _init_rational)
DELTA_SCALING = FitModel("delta-scaling", ("alpha_sup", "amplitude", "d"),
                         _delta_scaling, _init_delta_scaling)
POWER_LAW_FREE = FitModel("power-law-free", ("y_inf", "amplitude", "beta"),
                          _power_free, _init_power_free)
CUBIC = FitModel("cubic", ("a1", "b1", "c1", "d1"), _cubic, _init_polynomial(3))
LINEAR = FitModel("linear", ("slope", "intercept"), _linear, _init_polynomial(1))

MODELS = {m.name: m for m in (POWER_LAW_OFFSET, JUMP_SCALING, RATIONAL_QUADRATIC,
                              DELTA_SCALING, POWER_LAW_FREE, CUBIC, LINEAR)}
ALIASES = {"powerlaw": "power-law-offset", "jump": "jump-scaling",
           "rational": "rational-quadratic", "deltascaling": "delta-scaling",
           "beta": "power-law-free"}


def get_model(name):
    name = ALIASES.get(name, name)
    try:
        return MODELS[name]
    except KeyError:
        raise ValueError(f"unknown fit model {name!r}; choose from "
                         f"{sorted(MODELS) + sorted(ALIASES)}") from None


@dataclass(frozen=True, eq=False)
class FitResult:
    model: str
    param_names: tuple
    values: np.ndarray
    std_errors: np.ndarray
    ci95: np.ndarray          # (k, 2) lower/upper bounds
    covariance: np.ndarray
    rss: float
    dof: int
    converged: bool
    iterations: int = 0
    fixed: tuple = ()

    @property
    def params(self):
        return dict(zip(self.param_names, self.values))

    def __getitem__(self, name):
        return self.values[self.param_names.index(name)]

    def std_error(self, name):
        return self.std_errors[self.param_names.index(name)]

    def interval(self, name):
        return tuple(self.ci95[self.param_names.index(name)])

    def rows(self):
        """Report rows: model, param, value, std_error, ci_lo, ci_hi, rss, dof, converged."""
        return [(self.model, name, float(v), float(se), float(lo), float(hi),
                 float(self.rss), int(self.dof), bool(self.converged))
                for name, v, se, (lo, hi) in zip(self.param_names, self.values,
                                                 self.std_errors, self.ci95)]

    def report(self):
        lines = [f"{self.model} fit: rss={self.rss:.3e} dof={self.dof}"
                 + ("" if self.converged else " (not converged)")]
        for name, v, se, (lo, hi) in zip(self.param_names, self.values, self.std_errors,
                                          self.ci95):
            note = " (fixed)" if name in self.fixed else ""
            lines.append(f"  {name:>10s} = {v:.6g} +- {se:.2g}  95% [{lo:.6g}, {hi:.6g}]{note}")
        return "\n".join(lines)


REPORT_HEADER = ("model", "param", "value", "std_error", "ci_lo", "ci_hi", "rss", "dof",
                 "converged")


def numerical_jacobian(func, x, params, rel_step=1e-6):
    """Central-difference Jacobian d func(x, params) / d params, shape (n, k)."""
    params = np.asarray(params, dtype=float)
    jac = np.empty((len(x), len(params)))
    for i, t in enumerate(params):
        h = rel_step * max(abs(t), 1e-3)
        up, down = params.copy(), params.copy()
        up[i] += h
        down[i] -= h
        jac[:, i] = (func(x, up) - func(x, down)) / (2 * h)
    return jac


def levenberg_marquardt(residual_func, theta0, jac_func, max_iter=1000, rtol=1e-12,
                        gtol=1e-10, lam0=1e-3):
    """Minimize ||r(theta)||^2. Returns (theta, rss, converged, iterations)."""
    theta = np.asarray(theta0, dtype=float).copy()
    r = residual_func(theta)
    rss = float(r @ r)
    if not np.isfinite(rss):
        raise FitError("residuals are not finite at the initial guess")
    lam = lam0
    for it in range(1, max_iter + 1):
        jac = jac_func(theta)
        grad = jac.T @ r
        # scale-free gradient test: largest cosine between r and a column of J
        norms = np.linalg.norm(jac, axis=0) * np.sqrt(rss)
        cosine = np.max(np.abs(grad) / np.where(norms > 0, norms, np.inf)) if grad.size else 0.0
        if cosine < gtol or rss == 0.0:
            return theta, rss, True, it
        a = jac.T @ jac
        scale = np.maximum(np.diag(a), 1e-300)
        while True:
            try:
                step = np.linalg.solve(a + lam * np.diag(scale), -grad)
            except np.linalg.LinAlgError:
                step = None
            if step is not None:
                trial = theta + step
                r_new = residual_func(trial)
                rss_new = float(r_new @ r_new)
                if np.isfinite(rss_new) and rss_new < rss:
                    rel = (rss - rss_new) / rss
                    theta, r, rss = trial, r_new, rss_new
                    lam = max(lam / 10, 1e-15)
                    if rel < rtol:
                        return theta, rss, True, it
                    break
            lam *= 10
            if lam > 1e16:
                # no step lowers the residual: a minimum to machine precision
                return theta, rss, True, it
    return theta, rss, False, max_iter


def fit(model, x, y, init=None, fixed=None, max_iter=1000, singular="raise"):
    """Unweighted least-squares fit of ``model`` to (x, y).

    ``fixed`` maps parameter names to values held constant; they are reported
    with zero standard error. A singular J^T J at the optimum raises FitError
    unless ``singular='pinv'``, which falls back to the pseudo-inverse (the
    standard errors then describe only the identifiable directions).
    """
    if isinstance(model, str):
        model = get_model(model)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")
    if len(np.unique(x)) != len(x):
        raise ValueError("x values must be distinct")
    fixed = dict(fixed or {})
    unknown = set(fixed) - set(model.param_names)
    if unknown:
        raise ValueError(f"cannot fix unknown parameters {sorted(unknown)}")
    k = model.n_params
    free = [i for i, name in enumerate(model.param_names) if name not in fixed]
    dof = len(x) - len(free)
    if dof < 1:
        raise FitError(f"{len(x)} points cannot constrain {len(free)} free parameters")

    full0 = np.asarray(model.initial_guess(x, y) if init is None else init, dtype=float)
    if full0.shape != (k,):
        raise ValueError(f"init must have {k} entries")
    for name, value in fixed.items():
        full0[model.param_names.index(name)] = value

    def expand(theta):
        full = full0.copy()
        full[free] = theta
        return full

    def residual(theta):
        return y - model(x, expand(theta))

    def jac(theta):
        return -numerical_jacobian(lambda xx, t: model(xx, expand(t)), x, theta)

    theta, rss, converged, its = levenberg_marquardt(residual, full0[free], jac,
                                                     max_iter=max_iter)
    if not converged:
        warnings.warn(f"{model.name} fit did not converge in {max_iter} iterations",
                      RuntimeWarning, stacklevel=2)
    values = expand(theta)

    jmat = numerical_jacobian(lambda xx, t: model(xx, expand(t)), x, theta)
    jtj = jmat.T @ jmat
    s2 = rss / dof
    cond = np.linalg.cond(jtj)
    if not np.isfinite(cond) or cond > 1 / np.finfo(float).eps:
        if rss > 0 and singular != "pinv":
            raise FitError(f"singular normal matrix in {model.name} fit "
                           f"(condition number {cond:.3g})")
        cov_free = s2 * np.linalg.pinv(jtj, rcond=1e-15, hermitian=True)
    else:
        cov_free = s2 * np.linalg.inv(jtj)
    cov = np.zeros((k, k))
    cov[np.ix_(free, free)] = cov_free
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    half = stats.t.ppf(0.975, dof) * se
    ci = np.column_stack([values - half, values + half])
    return FitResult(model.name, model.param_names, values, se, ci, cov, rss, dof,
                     converged, its, tuple(sorted(fixed)))


def _pole_in_range(result, lo, hi):
    roots = np.roots([1.0, result["q1"], result["q2"]])
    real = roots[np.abs(roots.imag) < 1e-12].real
    return real[(real >= lo) & (real <= hi)]


def _is_singular(result):
    free = [i for i, name in enumerate(result.param_names) if name not in result.fixed]
    cov = result.covariance[np.ix_(free, free)]
    return bool(np.linalg.cond(cov) > 1 / np.finfo(float).eps)


def _rational_starts(x, y):
    yield _init_rational(x, y)
    # p1 + p3/N^2 reproduces an inverse-square power law exactly
    try:
        pl = fit(POWER_LAW_OFFSET, x, y)
    except FitError:
        return
    yield np.array([pl["alpha_inf"], 0.0, pl["a"] * np.mean(x) ** (2 - pl["b"]), 0.0, 0.0])


def extrapolate_rational(n_values, alpha_c):
    """N -> infinity limit of alpha_c(N) from the rational-quadratic form.

    Returns ``(p1, FitResult)``. Fits are started from the cross-multiplied
    linear solution and from a power-law seed. Candidates whose denominator
    has a root inside the data range are rejected; among the rest, fits with
    a regular normal matrix are preferred, then the lowest residual. Five
    parameters on a handful of points are often only partly identifiable, so
    a surviving singular fit carries a pseudo-inverse covariance.
    """
    n_values = np.asarray(n_values, dtype=float)
    alpha_c = np.asarray(alpha_c, dtype=float)
    if len(n_values) < 6:
        raise ValueError("rational extrapolation needs at least 6 points")
    lo, hi = n_values.min(), n_values.max()
    best, poles = None, []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for start in _rational_starts(n_values, alpha_c):
            try:
                result = fit(RATIONAL_QUADRATIC, n_values, alpha_c, init=start,
                             singular="pinv")
            except FitError:
                continue
            inside = _pole_in_range(result, lo, hi)
            if len(inside):
                poles.append(inside)
                continue
            rank = (_is_singular(result), result.rss)
            if best is None or rank < best_rank:
                best, best_rank = result, rank
    if best is None:
        if poles:
            raise FitError(f"rational fit has a pole inside the data range: {poles[0]}")
        raise FitError("rational fit failed from every starting point")
    return best["p1"], best


def fit_exponent_beta(n_values, alpha_c, alpha_inf=None):
    """Finite-size exponent beta of alpha_c(N) = alpha_inf + a' N^beta.

    With ``alpha_inf`` given it is held fixed, otherwise it is co-fitted.
    """
    fixed = None if alpha_inf is None else {"y_inf": float(alpha_inf)}
    return fit(POWER_LAW_FREE, n_values, alpha_c, fixed=fixed)


def fit_delta_scaling(deltas, alpha_c, alpha_sup=0.5, log_space=False, delta_min=1.0):
    """Exponent d of alpha_c(delta) = alpha_sup - a'' delta^(-d).

    ``alpha_sup=None`` co-fits the large-delta limit. With ``log_space`` the
    fit is the straight line log(alpha_sup - alpha_c) = log a'' - d log delta
    (requires a fixed ``alpha_sup``), reported in the same parameter names.
    Only points with delta >= delta_min enter.
    """
    deltas = np.asarray(deltas, dtype=float)
    alpha_c = np.asarray(alpha_c, dtype=float)
    if np.any(deltas < 1):
        raise ValueError("delta scaling applies to delta >= 1")
    keep = deltas >= delta_min
    deltas, alpha_c = deltas[keep], alpha_c[keep]
    if not log_space:
        fixed = None if alpha_sup is None else {"alpha_sup": float(alpha_sup)}
        return fit(DELTA_SCALING, deltas, alpha_c, fixed=fixed)
    if alpha_sup is None:
        raise ValueError("log-space delta scaling needs a fixed alpha_sup")
    gap = alpha_sup - alpha_c
    if np.any(gap <= 0):
        raise FitError("alpha_c must stay below alpha_sup for a log-space fit")
    line = fit(LINEAR, np.log(deltas), np.log(gap))
    slope, intercept = line.values
    amp = np.exp(intercept)
    values = np.array([alpha_sup, amp, -slope])
    # delta method: amplitude = exp(intercept), d = -slope
    jac = np.array([[0.0, 0.0], [0.0, amp], [-1.0, 0.0]])
    cov = jac @ line.covariance @ jac.T
    se = np.sqrt(np.diag(cov))
    half = stats.t.ppf(0.975, line.dof) * se
    return FitResult(DELTA_SCALING.name, DELTA_SCALING.param_names, values, se,
                     np.column_stack([values - half, values + half]), cov, line.rss,
                     line.dof, line.converged, line.iterations, ("alpha_sup",))
