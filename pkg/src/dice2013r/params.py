"""
Model constants for DICE2013R, derived transfer matrices, and the
bound schedule on the two control paths.

Periods are 1-based throughout the public API: period 1 is the year
``base_year`` (2010) and period ``i`` is ``base_year + step_years*(i-1)``.
Matrices are stored row-column (``zeta[r, c]`` is the flow from reservoir
``c`` into reservoir ``r``), so each column of ``zeta`` sums to one.
"""

from dataclasses import dataclass, field, fields

import numpy as np


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def derive_carbon_matrix(b12=0.088, b23=0.0025, mateq=588.0, mueq=1350.0, mleq=10000.0):
    """
    Three-reservoir carbon transfer matrix (atmosphere, upper ocean,
    lower ocean), row-column indexed.

    Diagonal entries are built as complements of the outflows, so the
    column sums are exactly one in floating point.
    """
    for name, v in (("b12", b12), ("b23", b23), ("mateq", mateq), ("mueq", mueq), ("mleq", mleq)):
        if not np.isfinite(v) or v <= 0:
            raise ValueError(f"{name} must be strictly positive, got {v!r}")
    if not (b12 < 1 and b23 < 1):
        raise ValueError("b12 and b23 must lie in (0, 1)")

    z = np.zeros((3, 3))
    z[1, 0] = b12
    z[0, 0] = 1.0 - b12
    z[0, 1] = b12 * mateq / mueq
    z[2, 1] = b23
    z[1, 1] = 1.0 - z[0, 1] - b23
    z[1, 2] = b23 * mueq / mleq
    z[2, 2] = 1.0 - z[1, 2]
    if np.any(np.diag(z) <= 0):
        raise ValueError("carbon transfer rates leave a nonpositive diagonal entry")
    return z


# Fields that may be changed through ``build_params(overrides=...)``.
# The climate matrix is not overridable; the carbon matrix changes only
# through its derivation inputs.
_INT_FIELDS = {"base_year", "step_years", "mu_cap_switch_period", "s_tail_len", "fex_switch_period"}
_POSITIVE = (
    "eta", "xi1", "xi2", "mat_1750", "gamma", "theta2", "a", "delta", "alpha", "rho", "scale1",
    "step_years", "mu_cap_early", "mu_cap_late", "mu_cap_switch_period",
    "sigma0", "pop0", "popasym", "tfp0", "pback", "mueq", "mleq",
)


@dataclass(frozen=True)
class ModelParams:
    """Every scalar constant of the model plus the two transfer matrices."""

    n_periods: int = 60
    base_year: int = 2010
    step_years: int = 5

    # climate and carbon cycle
    eta: float = 3.8
    xi1: float = 0.098
    xi2: float = 5 / 3.666
    mat_1750: float = 588.0
    b12: float = 0.088
    b23: float = 0.0025
    mueq: float = 1350.0
    mleq: float = 10000.0

    # economy and preferences
    gamma: float = 0.3
    theta2: float = 2.8
    a: float = 0.00267
    delta: float = 0.1
    alpha: float = 1.45
    rho: float = 0.015
    scale1: float = 0.016408662
    scale2: float = 3855.106895

    # control schedule
    mu_first: float = 0.039
    s_tail: float = 0.258278
    mu_cap_early: float = 1.0
    mu_cap_late: float = 1.2
    mu_cap_switch_period: int = 30
    s_tail_len: int = 10

    # coefficients of the exogenous recurrences
    sigma0: float = 0.5491
    sigma_decline: float = 0.01
    sigma_decline_decay: float = 0.999
    pop0: float = 6838.0
    popasym: float = 10500.0
    popadj: float = 0.134
    tfp0: float = 3.8
    tfp_growth: float = 0.079
    tfp_decline: float = 0.006
    eland0: float = 3.3
    eland_decay: float = 0.8
    fex0: float = 0.25
    fex_slope: float = 0.025
    fex_plateau: float = 0.45
    fex_switch_period: int = 19
    pback: float = 344.0
    pback_decay: float = 0.975

    phi: np.ndarray = field(default=None, repr=False, compare=False)
    zeta: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.phi is None:
            object.__setattr__(self, "phi", _frozen([[0.8630, 0.0086], [0.025, 0.975]]))
        if self.zeta is None:
            zeta = derive_carbon_matrix(self.b12, self.b23, self.mat_1750, self.mueq, self.mleq)
            object.__setattr__(self, "zeta", _frozen(zeta))
        self.validate()

    def validate(self):
        for name in _POSITIVE:
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0:
                raise ValueError(f"parameter {name} must be strictly positive, got {v!r}")
        if self.s_tail_len < 0:
            raise ValueError("s_tail_len must be nonnegative")
        if self.n_periods < self.s_tail_len + 1:
            raise ValueError(
                f"n_periods={self.n_periods} is too short for a {self.s_tail_len}-period "
                "fixed savings tail plus one free period"
            )
        if self.alpha == 1.0:
            raise ValueError("alpha = 1 (log utility) is not supported")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")

    @property
    def periods(self):
        """1-based period indices ``1..N``."""
        return np.arange(1, self.n_periods + 1)

    @property
    def years(self):
        return self.base_year + self.step_years * (self.periods - 1)

    def year(self, period):
        return self.base_year + self.step_years * (period - 1)

    @property
    def discount_factors(self):
        """``1/(1+rho)^(step*(i-1))`` for each period."""
        return 1.0 / (1.0 + self.rho) ** (self.step_years * (self.periods - 1))

    @property
    def capital_retention(self):
        return (1.0 - self.delta) ** self.step_years


def overridable_fields():
    return tuple(f.name for f in fields(ModelParams) if f.name not in ("n_periods", "phi", "zeta"))


def build_params(n_periods=60, overrides=None):
    """
    Build validated model parameters for a horizon of ``n_periods``.

    Parameters
    ----------
    n_periods : int
        Horizon length; must leave at least one free savings period
        before the fixed tail (``n_periods >= 11`` with defaults).
    overrides : dict, optional
        Scalar parameter replacements keyed by field name.

    Raises
    ------
    ValueError
        Invalid horizon, unknown key, or a value breaking positivity.
    """
    if isinstance(n_periods, bool) or int(n_periods) != n_periods or n_periods < 1:
        raise ValueError(f"n_periods must be a positive integer, got {n_periods!r}")
    kwargs = {}
    allowed = set(overridable_fields())
    for key, value in (overrides or {}).items():
        if key not in allowed:
            raise ValueError(f"unknown parameter override {key!r}")
        if key in _INT_FIELDS:
            if int(value) != value:
                raise ValueError(f"parameter {key} must be an integer, got {value!r}")
            value = int(value)
        else:
            value = float(value)
        kwargs[key] = value
    return ModelParams(n_periods=int(n_periods), **kwargs)


def with_overrides(params, **overrides):
    """Copy of ``params`` with scalar fields replaced; matrices re-derived."""
    merged = {f: getattr(params, f) for f in overridable_fields()}
    merged.update(overrides)
    return build_params(params.n_periods, merged)


@dataclass(frozen=True)
class BoundSchedule:
    """
    Per-period bounds on the mitigation and savings paths. Arrays are
    0-based (entry ``i-1`` belongs to period ``i``); fixed entries have
    ``lower == upper`` and are flagged in the ``*_fixed`` masks.
    """

    mu_lower: np.ndarray
    mu_upper: np.ndarray
    s_lower: np.ndarray
    s_upper: np.ndarray
    mu_fixed: np.ndarray
    s_fixed: np.ndarray

    @property
    def lower(self):
        return np.concatenate([self.mu_lower, self.s_lower])

    @property
    def upper(self):
        return np.concatenate([self.mu_upper, self.s_upper])

    @property
    def fixed(self):
        return np.concatenate([self.mu_fixed, self.s_fixed])

    @property
    def n_fixed(self):
        return int(self.mu_fixed.sum() + self.s_fixed.sum())


def bound_schedule(params):
    """
    Control bounds: mu(1) fixed, mu capped at ``mu_cap_early`` before the
    absolute switch period and ``mu_cap_late`` from it on, s in [0, 1]
    except the final ``s_tail_len`` periods where it is fixed.
    """
    n = params.n_periods
    i = params.periods

    mu_lower = np.zeros(n)
    mu_upper = np.where(i < params.mu_cap_switch_period, params.mu_cap_early, params.mu_cap_late)
    mu_fixed = i == 1
    mu_lower[mu_fixed] = mu_upper[mu_fixed] = params.mu_first

    s_fixed = i > n - params.s_tail_len
    s_lower = np.where(s_fixed, params.s_tail, 0.0)
    s_upper = np.where(s_fixed, params.s_tail, 1.0)

    arrays = [mu_lower, mu_upper.astype(float), s_lower, s_upper, mu_fixed, s_fixed]
    for arr in arrays:
        arr.setflags(write=False)
    return BoundSchedule(*arrays)
