"""
Bound-constrained welfare maximization by projected limited-memory BFGS.

States are eliminated by forward simulation, so the only constraints left
are per-coordinate bounds on the control vector ``[mu, s]``. Each
iteration builds a quasi-Newton direction on the free coordinates and
backtracks along the projected path ``P(x + alpha*d)`` until a
sufficient-increase test passes.
"""

import logging
import sys
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .dynamics import InfeasibleEvaluation
from .params import bound_schedule
from .sensitivity import welfare_gradient
from .trajectory import ControlPath, default_controls, simulate

log = logging.getLogger(__name__)

CONVERGED = "converged"
ITERATION_LIMIT = "iteration-limit"
LINE_SEARCH_FAILURE = "line-search-failure"


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 500
    tolerance: float = 1e-6  # on the inf-norm of the projected gradient
    memory: int = 10
    armijo: float = 1e-4
    backtrack: float = 0.5
    max_backtracks: int = 40
    s_scale: float = 1.0  # extra diagonal rescaling of the savings block in H0
    curvature_scaling: bool = True  # H0 from a finite-difference Hessian diagonal
    rescale_every: int = 50
    initial_point: str = "given"  # "given" or "default"
    restarts: int = 0
    restart_perturbation: float = 0.02
    seed: int = 0
    verbose: bool = False

    def __post_init__(self):
        for name in ("max_iterations", "memory", "max_backtracks", "s_scale", "armijo", "backtrack"):
            if not getattr(self, name) > 0:
                raise ValueError(f"optimizer {name} must be positive")
        if not self.tolerance > np.finfo(float).eps:
            raise ValueError("optimizer tolerance must exceed machine epsilon")
        if not (self.armijo < 1 and self.backtrack < 1):
            raise ValueError("armijo and backtrack must lie in (0, 1)")
        if self.initial_point not in ("given", "default"):
            raise ValueError(f"unknown initial_point policy {self.initial_point!r}")
        if self.restarts < 0 or self.restart_perturbation < 0:
            raise ValueError("restarts and restart_perturbation must be nonnegative")


@dataclass
class BoundedResult:
    x: np.ndarray
    value: float
    grad: np.ndarray
    status: str
    iterations: int
    projected_gradient_norm: float
    history: list = field(default_factory=list)
    iterates: list = field(default_factory=list)
    evaluations: int = 0


def projected_gradient(x, grad, lower, upper):
    """``P(x + grad) - x`` for ascent; zero exactly at a bounded optimum."""
    return np.clip(x + grad, lower, upper) - x


def _two_loop(g, pairs, h0):
    """Inverse-Hessian times ``g`` from stored (s, y, rho) pairs."""
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * (s @ q)
        q -= a * y
        alphas.append(a)
    r = h0 * q
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * (y @ r)
        r += (a - b) * s
    return r


def curvature_diagonal(fun, x, g, lower, upper, step=1e-6):
    """
    Magnitude of the Hessian diagonal by forward differences of the
    gradient, probing towards the interior of the box. Coordinates whose
    probe is infeasible or flat get NaN.
    """
    d = np.full(x.size, np.nan)
    for i in range(x.size):
        if lower[i] == upper[i]:
            continue
        h = step if x[i] + step <= upper[i] else -step
        xp = x.copy()
        xp[i] += h
        try:
            gp = fun(xp)[1]
        except InfeasibleEvaluation:
            continue
        c = abs((gp[i] - g[i]) / h)
        if c > 0 and np.isfinite(c):
            d[i] = c
    return d


def maximize(fun, x0, lower, upper, config=OptimizerConfig(), keep_iterates=False):
    """
    Maximize ``fun`` over the box ``[lower, upper]``.

    Parameters
    ----------
    fun : callable
        ``fun(x) -> (value, grad)``; may raise InfeasibleEvaluation, which
        rejects the trial point.
    x0 : array_like
        Start point; projected onto the box first. Coordinates with
        ``lower == upper`` are fixed.

    Returns
    -------
    BoundedResult
        ``status`` is one of ``converged``, ``iteration-limit``,
        ``line-search-failure``. Never raises for non-convergence.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    x = np.clip(np.asarray(x0, dtype=float), lower, upper)
    fixed = lower == upper
    h0_scale = np.ones_like(x)
    n_half = x.size // 2
    if config.s_scale != 1.0 and x.size % 2 == 0:
        h0_scale[n_half:] = config.s_scale**2

    f, g = fun(x)
    evals = 1
    g = np.where(fixed, 0.0, g)

    def rescale():
        nonlocal evals
        if not config.curvature_scaling:
            return None
        evals += int(np.sum(lower != upper))
        diag = curvature_diagonal(fun, x, g, lower, upper)
        ok = np.isfinite(diag)
        if not ok.any():
            return None
        diag[~ok] = np.median(diag[ok])
        return 1.0 / diag

    h_diag = rescale()
    history = [f]
    iterates = [x.copy()] if keep_iterates else []
    pairs = deque(maxlen=config.memory)
    gamma = None
    fresh_scaling = True
    status = ITERATION_LIMIT
    it = 0

    while True:
        pg = projected_gradient(x, g, lower, upper)
        pg_norm = float(np.max(np.abs(pg))) if pg.size else 0.0
        if config.verbose:
            print(f"iter {it:4d}  value {f:.12f}  |pg| {pg_norm:.3e}", file=sys.stderr)
        if pg_norm <= config.tolerance:
            status = CONVERGED
            break
        if it >= config.max_iterations:
            status = ITERATION_LIMIT
            break

        # coordinates held at a bound: fixed, or at a bound with the
        # gradient pushing outward; inward-pointing ones are freed
        eps = min(pg_norm, 1e-8)
        at_low = (x - lower <= eps) & (g < 0)
        at_up = (upper - x <= eps) & (g > 0)
        held = fixed | at_low | at_up
        free = ~held

        gf = np.where(free, g, 0.0)
        if h_diag is not None:
            h0 = h_diag * h0_scale
        elif gamma is None:
            h0 = h0_scale / max(np.max(np.abs(gf)), 1.0)
        else:
            h0 = gamma * h0_scale
        masked = [(np.where(free, s, 0.0), np.where(free, y, 0.0)) for s, y in pairs]
        usable = []
        for s, y in masked:
            sy = s @ y
            if sy > 1e-12 * np.sqrt((s @ s) * (y @ y)):
                usable.append((s, y, 1.0 / sy))
        # ascent on f is descent on -f: d = H g with H approximating (-hess)^-1
        d = np.where(free, _two_loop(gf, usable, h0), 0.0)
        if not gf @ d > 0:
            pairs.clear()
            d = h0 * gf

        alpha = 1.0
        accepted = False
        for _ in range(config.max_backtracks):
            xt = np.clip(x + alpha * d, lower, upper)
            xt[fixed] = x[fixed]
            step = xt - x
            if not np.any(step):
                break
            try:
                ft, gt = fun(xt)
                evals += 1
            except InfeasibleEvaluation:
                evals += 1
                alpha *= config.backtrack
                continue
            gt = np.where(fixed, 0.0, gt)
            predicted = g @ step
            if ft >= f + config.armijo * predicted and ft >= f:
                accepted = True
                break
            # below roundoff the function values stop resolving the
            # increase; fall back on the gradient-based estimate
            noise = 64 * np.finfo(float).eps * max(abs(f), 1.0)
            if abs(ft - f) <= noise and ft >= f and 0.5 * (g + gt) @ step >= config.armijo * predicted > 0:
                accepted = True
                break
            alpha *= config.backtrack

        if not accepted:
            if pairs or (config.curvature_scaling and not fresh_scaling):
                # retry once from a clean quasi-Newton model
                pairs.clear()
                gamma = None
                h_diag = rescale()
                fresh_scaling = True
                continue
            status = LINE_SEARCH_FAILURE
            break
        fresh_scaling = False

        s_vec = xt - x
        y_vec = -(gt - g)  # curvature of -f
        sy = s_vec @ y_vec
        if sy > 1e-12 * np.linalg.norm(s_vec) * np.linalg.norm(y_vec):
            pairs.append((s_vec, y_vec))
            gamma = sy / (y_vec @ y_vec)
        x, f, g = xt, ft, gt
        it += 1
        if config.curvature_scaling and it % config.rescale_every == 0:
            h_diag = rescale()
        history.append(f)
        if keep_iterates:
            iterates.append(x.copy())

    log.debug("maximize finished: %s after %d iterations", status, it)
    return BoundedResult(x, f, g, status, it, pg_norm, history, iterates, evals)


@dataclass
class OptimResult:
    controls: ControlPath
    trajectory: object
    welfare: float
    status: str
    iterations: int
    projected_gradient_norm: float
    welfare_history: list
    evaluations: int = 0
    iterates: list = field(default_factory=list, repr=False)

    @property
    def converged(self):
        return self.status == CONVERGED


def project(controls, schedule):
    """Clamp to the schedule bounds; fixed entries take their fixed values."""
    x = np.clip(controls.to_vector(), schedule.lower, schedule.upper)
    return ControlPath.from_vector(x)


def _welfare_fun(initial, exo, params):
    def fun(x):
        w, gm, gs = welfare_gradient(initial, ControlPath.from_vector(x), exo, params)
        return w, np.concatenate([gm, gs])

    return fun


def optimize(initial, start, schedule, exo, params, config=OptimizerConfig(), keep_iterates=False):
    """
    Maximize social welfare over the free control entries.

    ``start`` may be None; it is also replaced by the default start
    (mu = mu_first, s = s_tail everywhere, then projected) when the policy
    asks for it or when its projection is infeasible to simulate.
    """
    schedule = schedule if schedule is not None else bound_schedule(params)
    default = project(default_controls(params), schedule)
    if start is None or config.initial_point == "default":
        start = default
    else:
        start = project(start, schedule)
        try:
            simulate(initial, start, exo, params)
        except InfeasibleEvaluation:
            log.warning("start point infeasible; using the default start")
            start = default

    fun = _welfare_fun(initial, exo, params)
    res = maximize(fun, start.to_vector(), schedule.lower, schedule.upper, config, keep_iterates)

    if config.restarts:
        rng = np.random.default_rng(config.seed)
        free = schedule.lower != schedule.upper
        for _ in range(config.restarts):
            x0 = res.x + config.restart_perturbation * rng.standard_normal(res.x.size) * free
            try:
                cand = maximize(fun, x0, schedule.lower, schedule.upper, config, keep_iterates)
            except InfeasibleEvaluation:
                continue
            log.info("restart reached %.10f (%s)", cand.value, cand.status)
            if cand.value > res.value:
                res = cand

    controls = ControlPath.from_vector(res.x)
    traj = simulate(initial, controls, exo, params)
    return OptimResult(
        controls, traj, traj.welfare, res.status, res.iterations,
        res.projected_gradient_norm, res.history, res.evaluations, res.iterates,
    )
