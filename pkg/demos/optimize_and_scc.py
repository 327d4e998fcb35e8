"""
Optimal policy and the social cost of carbon
============================================

Maximize welfare over the mitigation and savings paths, then price a
marginal ton of emissions along the optimal trajectory.
"""

from dice2013r import (
    DICE2013R_INITIAL_STATE,
    bound_schedule,
    build_exogenous,
    build_params,
    marginals,
    optimize,
)

params = build_params(60)
exo = build_exogenous(params)
schedule = bound_schedule(params)

# start from the default path; mu(1) and the savings tail stay fixed
res = optimize(DICE2013R_INITIAL_STATE, None, schedule, exo, params)
print(f"{res.status} after {res.iterations} iterations, J = {res.welfare:.10f}")
print(f"projected gradient norm {res.projected_gradient_norm:.2e}")

# the optimum reaches full abatement well before the cap is lifted
full = res.controls.mu >= 1.0 - 1e-9
print("first year at mu = 1:", params.year(int(full.argmax()) + 1))

# SCC = -1000 dW/dE / dW/dC, both marginals from one backward sweep
m = marginals(DICE2013R_INITIAL_STATE, res.controls, exo, params, traj=res.trajectory)
for year in (2010, 2020, 2030, 2050):
    i = (year - params.base_year) // params.step_years
    print(f"SCC {year}: {m.scc[i]:7.2f} $/tC")
