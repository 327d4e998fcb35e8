"""
One-period transition of the coupled climate, carbon and capital states.

The forcing uses ``zeta11*M_AT(i) + zeta12*M_UP(i) + xi2*E(i)``, which is
the next-period atmospheric carbon rather than the current one. That
mixed forward/backward discretization is intentional and must not be
"fixed": it is what the reference GAMS model computes.
"""

import math
from dataclasses import astuple, dataclass


class InfeasibleEvaluation(ValueError):
    """
    Raised when an evaluation leaves the model's domain (nonpositive
    consumption, capital, or forcing argument). The optimizer treats it as
    a rejected trial point.
    """

    def __init__(self, message, period=None):
        super().__init__(message if period is None else f"period {period}: {message}")
        self.period = period


@dataclass(frozen=True)
class State:
    tat: float  # atmospheric temperature anomaly, degC
    tlo: float  # lower-ocean temperature anomaly, degC
    mat: float  # atmospheric carbon, GtC
    mup: float  # upper-ocean carbon, GtC
    mlo: float  # lower-ocean carbon, GtC
    k: float  # capital, trillions 2005 USD

    def __post_init__(self):
        for name in ("mat", "mup", "mlo", "k"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"state field {name} must be strictly positive, got {v!r}")
        for name in ("tat", "tlo"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"state field {name} must be finite")

    def as_tuple(self):
        return astuple(self)


# Initial conditions for 2010 as set in the public DICE2013R GAMS source
# (tatm0, tocean0, mat0, mu0, ml0, k0). Not part of the model equations;
# scenarios may supply their own.
DICE2013R_INITIAL_STATE = State(tat=0.8, tlo=0.0068, mat=830.4, mup=1527.0, mlo=10010.0, k=135.0)


@dataclass(frozen=True)
class StepOutput:
    emissions: float  # GtCO2
    forcing: float  # W/m^2
    ygross: float  # trillions USD
    neo: float  # trillions USD
    consumption: float  # trillions USD
    utility: float


def gross_output(tfp, capital, labor, params):
    """Cobb-Douglas output ``A K^gamma (L/1000)^(1-gamma)``."""
    if not capital > 0:
        raise InfeasibleEvaluation(f"capital must be positive, got {capital!r}")
    if not labor > 0:
        raise InfeasibleEvaluation(f"labor must be positive, got {labor!r}")
    return tfp * capital**params.gamma * (labor / 1000.0) ** (1.0 - params.gamma)


def emissions(period, state, mu, exo, params, ygross=None):
    """Industrial plus land-use emissions in period ``period`` (GtCO2)."""
    j = period - 1
    if ygross is None:
        ygross = gross_output(exo.tfp[j], state.k, exo.labor[j], params)
    return exo.sigma[j] * (1.0 - mu) * ygross + exo.eland[j]


def radiative_forcing(period, state, emissions, exo, params):
    z = params.zeta
    num = z[0, 0] * state.mat + z[0, 1] * state.mup + params.xi2 * emissions
    if not num > 0:
        raise InfeasibleEvaluation(f"forcing log argument is nonpositive ({num!r})", period)
    return params.eta * math.log2(num / params.mat_1750) + exo.fex[period - 1]


def output_fractions(period, tat, mu, exo, params):
    """Return ``(damage_frac, abate_frac)``; net output is ``(1 - sum)*ygross``."""
    if mu < 0:
        raise ValueError(f"mitigation rate must be nonnegative, got {mu!r}")
    return params.a * tat**2, exo.theta1[period - 1] * mu**params.theta2


def utility(consumption, labor, params):
    if not consumption > 0:
        raise InfeasibleEvaluation(f"consumption must be positive, got {consumption!r}")
    pc = 1000.0 * consumption / labor
    return labor * ((pc ** (1.0 - params.alpha) - 1.0) / (1.0 - params.alpha) - 1.0)


def consumption_and_utility(neo, s, labor, params):
    """
    Consumption ``neo*(1-s)`` and population-weighted CRRA utility.

    Raises InfeasibleEvaluation when consumption is not positive.
    """
    c = neo * (1.0 - s)
    return c, utility(c, labor, params)


def step_output(period, state, mu, s, exo, params, e_inject=0.0, c_inject=0.0):
    """
    Per-period quantities without the state update.

    ``e_inject`` and ``c_inject`` are additive perturbations on E(i) and
    C(i) after their defining equations; they exist so welfare marginals
    can be checked by re-simulation and are zero in normal use.
    """
    j = period - 1
    try:
        ygross = gross_output(exo.tfp[j], state.k, exo.labor[j], params)
    except InfeasibleEvaluation as err:
        raise InfeasibleEvaluation(str(err), period) from None
    e = emissions(period, state, mu, exo, params, ygross=ygross) + e_inject
    rf = radiative_forcing(period, state, e, exo, params)
    damage, abate = output_fractions(period, state.tat, mu, exo, params)
    neo = (1.0 - damage - abate) * ygross
    c = neo * (1.0 - s) + c_inject
    try:
        u = utility(c, exo.labor[j], params)
    except InfeasibleEvaluation as err:
        raise InfeasibleEvaluation(str(err), period) from None
    return StepOutput(e, rf, ygross, neo, c, u)


def transition(period, state, out, s, params):
    """Next state from the current state and this period's outputs."""
    phi, z = params.phi, params.zeta
    tat = phi[0, 0] * state.tat + phi[0, 1] * state.tlo + params.xi1 * out.forcing
    tlo = phi[1, 0] * state.tat + phi[1, 1] * state.tlo
    mat = z[0, 0] * state.mat + z[0, 1] * state.mup + z[0, 2] * state.mlo + params.xi2 * out.emissions
    mup = z[1, 0] * state.mat + z[1, 1] * state.mup + z[1, 2] * state.mlo
    mlo = z[2, 0] * state.mat + z[2, 1] * state.mup + z[2, 2] * state.mlo
    k = params.capital_retention * state.k + params.step_years * out.neo * s
    try:
        return State(tat, tlo, mat, mup, mlo, k)
    except ValueError as err:
        raise InfeasibleEvaluation(str(err), period) from None


def step(period, state, mu, s, exo, params, e_inject=0.0, c_inject=0.0):
    """
    Advance one period: gross output, emissions, forcing, then the
    temperature, carbon and capital updates, then consumption and utility.

    Returns
    -------
    next_state : State
    out : StepOutput
    """
    out = step_output(period, state, mu, s, exo, params, e_inject, c_inject)
    return transition(period, state, out, s, params), out
