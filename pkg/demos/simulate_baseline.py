"""
Simulating the baseline path
============================

Run the model forward under the default controls (mu = 0.039 and
s = 0.258278 in every period) and look at where temperature and
atmospheric carbon end up.
"""

import numpy as np

from dice2013r import DICE2013R_INITIAL_STATE, auxiliary, build_exogenous, build_params, default_controls, simulate

# 60 five-year periods, 2010 to 2305
params = build_params(60)
exo = build_exogenous(params)
controls = default_controls(params)

traj = simulate(DICE2013R_INITIAL_STATE, controls, exo, params)
print(f"welfare J = {traj.welfare:.10f}")

# a few headline years
for year in (2010, 2050, 2100, 2200, 2300):
    i = (year - params.base_year) // params.step_years
    print(f"{year}: TATM {traj.tat[i]:6.3f} C   MAT {traj.mat[i]:8.1f} GtC   C {traj.consumption[i]:8.1f}")

# total carbon only grows by the emitted carbon
total = traj.states[:, 2:5].sum(axis=1)
print("max conservation residual:", np.max(np.abs(np.diff(total) - params.xi2 * traj.emissions[:-1])))

# concentration in ppm and the damage fraction
aux = auxiliary(traj, controls, exo, params)
print(f"peak concentration {aux.acppm.max():.0f} ppm, peak damages {100 * aux.df.max():.2f}% of output")
