"""
Comparing against a reference table
===================================

Write a trajectory CSV, then compare it column by column against a
reference. Here the reference is a copy with one temperature cell nudged,
standing in for an exported GAMS run.
"""

import tempfile
from pathlib import Path

from dice2013r import DICE2013R_INITIAL_STATE, build_exogenous, build_params, default_controls, simulate
from dice2013r.csvio import read_csv, trajectory_columns, write_csv
from dice2013r.verify import compare_tables

params = build_params(60)
exo = build_exogenous(params)
controls = default_controls(params)
traj = simulate(DICE2013R_INITIAL_STATE, controls, exo, params)

work = Path(tempfile.mkdtemp())
produced = write_csv(work / "produced.csv", trajectory_columns(traj, controls, params))

ref = read_csv(produced)
ref["TATM"][4] += 1e-2
write_csv(work / "reference.csv", ref)

# a GAMS export would name columns differently; map them here
reports = compare_tables(read_csv(produced), read_csv(work / "reference.csv"), column_map={}, rtol=1e-4)
for r in reports:
    print(r.describe())
