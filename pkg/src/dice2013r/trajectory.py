"""Forward rollout over the horizon, social welfare, and diagnostics."""

from dataclasses import dataclass

import numpy as np

from .dynamics import State, step_output, transition

STATE_FIELDS = ("tat", "tlo", "mat", "mup", "mlo", "k")


@dataclass(frozen=True)
class ControlPath:
    """Mitigation and savings rates, one entry per period (0-based arrays)."""

    mu: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float)
        s = np.array(self.s, dtype=float)
        if mu.ndim != 1 or mu.shape != s.shape:
            raise ValueError(f"mu and s must be 1-D arrays of equal length, got {mu.shape} and {s.shape}")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(s))):
            raise ValueError("control paths must be finite")
        mu.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "s", s)

    def __len__(self):
        return len(self.mu)

    @classmethod
    def from_vector(cls, x):
        n = len(x) // 2
        return cls(x[:n], x[n:])

    def to_vector(self):
        return np.concatenate([self.mu, self.s])

    def is_feasible(self, schedule):
        x = self.to_vector()
        return bool(np.all(x >= schedule.lower) and np.all(x <= schedule.upper))


def default_controls(params):
    """Constant paths at the fixed values: mu = mu_first, s = s_tail."""
    n = params.n_periods
    return ControlPath(np.full(n, params.mu_first), np.full(n, params.s_tail))


@dataclass(frozen=True)
class Trajectory:
    """
    Simulated path. ``states`` is an (N, 6) array with columns in
    ``STATE_FIELDS`` order; row 0 is the initial condition. The state that
    the last period's update would produce is never computed.
    """

    states: np.ndarray
    emissions: np.ndarray
    forcing: np.ndarray
    ygross: np.ndarray
    neo: np.ndarray
    consumption: np.ndarray
    utility: np.ndarray
    discount_factors: np.ndarray
    welfare: float

    def __len__(self):
        return len(self.states)

    def state(self, period):
        return State(*self.states[period - 1])

    def __getattr__(self, name):
        # tat, tlo, ... as column views
        if name in STATE_FIELDS:
            return self.states[:, STATE_FIELDS.index(name)]
        raise AttributeError(name)


def welfare_weights(params):
    """Per-period weights on utility: ``step * scale1 * discount``."""
    return params.step_years * params.scale1 * params.discount_factors


def simulate(initial, controls, exo, params, e_inject=None, c_inject=None):
    """
    Roll the model forward from ``initial`` under ``controls``.

    Parameters
    ----------
    initial : State
    controls : ControlPath
        Length must equal ``params.n_periods``.
    exo : ExogenousPath
    params : ModelParams
    e_inject, c_inject : array_like, optional
        Additive perturbations on per-period emissions and consumption,
        used by the marginal-welfare oracles.

    Returns
    -------
    Trajectory

    Raises
    ------
    InfeasibleEvaluation
        A period produced nonpositive consumption (or another domain
        violation); ``err.period`` names it.
    """
    n = params.n_periods
    if len(controls) != n:
        raise ValueError(f"controls have length {len(controls)}, expected {n}")
    e_inj = np.zeros(n) if e_inject is None else np.asarray(e_inject, dtype=float)
    c_inj = np.zeros(n) if c_inject is None else np.asarray(c_inject, dtype=float)

    states = np.empty((n, 6))
    outs = np.empty((n, 6))
    state = initial
    for j in range(n):
        period = j + 1
        states[j] = state.as_tuple()
        out = step_output(period, state, controls.mu[j], controls.s[j], exo, params, e_inj[j], c_inj[j])
        outs[j] = (out.emissions, out.forcing, out.ygross, out.neo, out.consumption, out.utility)
        if period < n:
            state = transition(period, state, out, controls.s[j], params)

    weights = welfare_weights(params)
    total = 0.0
    for j in range(n):
        total += outs[j, 5] * weights[j]
    welfare = total - params.scale2

    for a in (states, outs):
        a.setflags(write=False)
    return Trajectory(
        states, *outs.T, discount_factors=params.discount_factors, welfare=float(welfare)
    )


def welfare(initial, controls, exo, params):
    return simulate(initial, controls, exo, params).welfare


@dataclass(frozen=True)
class AuxiliaryQuantities:
    ie: np.ndarray  # industrial emissions, GtCO2
    neo: np.ndarray  # net output, trillions USD
    pcc: np.ndarray  # per-capita consumption, thousands USD
    df: np.ndarray  # damages fraction
    acppm: np.ndarray  # atmospheric carbon, ppm
    mca: np.ndarray  # marginal cost of abatement


def auxiliary(traj, controls, exo, params):
    """Diagnostic series reported alongside the GAMS outputs."""
    i = params.periods
    mu = controls.mu
    tat = traj.tat
    return AuxiliaryQuantities(
        ie=exo.sigma * (1.0 - mu) * traj.ygross,
        neo=(1.0 - params.a * tat**2 - exo.theta1 * mu**params.theta2) * traj.ygross,
        pcc=1000.0 * traj.consumption / exo.labor,
        df=params.a * tat**2,
        acppm=traj.mat / 2.13,
        mca=344.0 * 0.975 ** (i - 1) * mu**1.8,
    )
