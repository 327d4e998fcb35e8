"""Exogenous, control-independent signals driving the model."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ExogenousPath:
    """
    Precomputed exogenous signals, one entry per period (0-based arrays).

    sigma  : emissions intensity of gross output (GtCO2 per trillion USD)
    labor  : population (millions)
    tfp    : total factor productivity
    eland  : land-use emissions (GtCO2 per year)
    fex    : non-CO2 forcing (W/m^2)
    theta1 : abatement cost coefficient
    """

    sigma: np.ndarray
    labor: np.ndarray
    tfp: np.ndarray
    eland: np.ndarray
    fex: np.ndarray
    theta1: np.ndarray

    def __len__(self):
        return len(self.sigma)


def build_exogenous(params):
    n = params.n_periods
    step = params.step_years
    i = params.periods

    sigma = np.empty(n)
    labor = np.empty(n)
    tfp = np.empty(n)
    sigma[0] = params.sigma0
    labor[0] = params.pop0
    tfp[0] = params.tfp0
    for k in range(1, n):
        # k is the 1-based index of the period being stepped from
        sigma[k] = sigma[k - 1] * np.exp(
            -params.sigma_decline * params.sigma_decline_decay ** (step * k) * step
        )
        labor[k] = labor[k - 1] * (params.popasym / labor[k - 1]) ** params.popadj
        tfp[k] = tfp[k - 1] / (
            1.0 - params.tfp_growth * np.exp(-params.tfp_decline * step * (k - 1))
        )

    eland = params.eland0 * params.eland_decay ** (i - 1)
    fex = params.fex0 + np.where(
        i < params.fex_switch_period, params.fex_slope * (i - 1), params.fex_plateau
    )
    theta1 = params.pback / (1000.0 * params.theta2) * params.pback_decay ** (i - 1) * sigma

    arrays = [sigma, labor, tfp, eland, fex, theta1]
    for arr in arrays:
        arr.setflags(write=False)
    return ExogenousPath(*arrays)
