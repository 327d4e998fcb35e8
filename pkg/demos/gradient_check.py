"""
Checking the adjoint gradient
=============================

The welfare gradient comes from a hand-written backward sweep. Compare it
against central differences at a random feasible control path.
"""

import numpy as np

from dice2013r import (
    DICE2013R_INITIAL_STATE,
    ControlPath,
    bound_schedule,
    build_exogenous,
    build_params,
    welfare_gradient,
)
from dice2013r.sensitivity import fd_control_gradient

params = build_params(60)
exo = build_exogenous(params)
schedule = bound_schedule(params)

rng = np.random.default_rng(0)
x = np.concatenate([rng.uniform(0, schedule.mu_upper), rng.uniform(0.15, 0.35, params.n_periods)])
controls = ControlPath.from_vector(np.clip(x, schedule.lower, schedule.upper))

_, gm, gs = welfare_gradient(DICE2013R_INITIAL_STATE, controls, exo, params)
fm, fs = fd_control_gradient(DICE2013R_INITIAL_STATE, controls, exo, params, step=1e-5)

g, fd = np.r_[gm, gs], np.r_[fm, fs]
big = np.abs(g) > 1e-2
print(f"max relative error where |g| > 1e-2: {np.max(np.abs(g - fd)[big] / np.abs(g[big])):.2e}")

# in double precision the differences carry ~eps*J/h of rounding noise,
# so tiny gradient entries cannot be checked this way
print(f"max absolute error everywhere:      {np.max(np.abs(g - fd)):.2e}")
