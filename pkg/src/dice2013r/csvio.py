"""
Trajectory CSV files: header row, comma-separated, one row per period in
ascending year order. Floats are written with 17 significant digits so a
write/read cycle reproduces every value exactly.
"""

import csv
from pathlib import Path

import numpy as np

from .sensitivity import MarginalSet
from .trajectory import AuxiliaryQuantities, ControlPath, Trajectory

TRAJECTORY_COLUMNS = ("year", "K", "TATM", "TLO", "MAT", "MUP", "MLO", "mu", "s", "E", "RF", "C", "U")
SCC_COLUMNS = ("lamE", "lamC", "SCC")
AUX_COLUMNS = ("IE", "NEO", "PCC", "DF", "ACppm", "MCA")
EXOGENOUS_COLUMNS = ("sigma", "L", "A", "ELand", "FEX", "theta1")


def format_value(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path, columns):
    """Write an ordered ``{name: 1-D array}`` mapping; returns the path."""
    path = Path(path)
    names = list(columns)
    n = len(columns[names[0]])
    for name in names:
        if len(columns[name]) != n:
            raise ValueError(f"column {name} has length {len(columns[name])}, expected {n}")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for i in range(n):
            w.writerow([format_value(columns[name][i]) for name in names])
    return path


def read_csv(path):
    """
    Read a CSV written by ``write_csv`` (or any numeric CSV with a header).
    Returns an ordered ``{name: float array}``; a ``year`` column is
    returned as integers. Empty cells read as NaN.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise ValueError(f"{path}: duplicate column names")
    body = [r for r in rows[1:] if any(c.strip() for c in r)]
    out = {}
    for j, name in enumerate(header):
        vals = []
        for lineno, r in enumerate(body, start=2):
            if j >= len(r):
                raise ValueError(f"{path}: line {lineno} has {len(r)} fields, expected {len(header)}")
            cell = r[j].strip()
            try:
                vals.append(float(cell) if cell else np.nan)
            except ValueError:
                raise ValueError(f"{path}: line {lineno}, column {name}: not a number: {cell!r}") from None
        arr = np.array(vals, dtype=float)
        if name == "year" and np.all(np.isfinite(arr)) and np.all(arr == np.round(arr)):
            arr = arr.astype(int)
        out[name] = arr
    return out


def trajectory_columns(traj: Trajectory, controls: ControlPath, params):
    return {
        "year": params.years,
        "K": traj.k,
        "TATM": traj.tat,
        "TLO": traj.tlo,
        "MAT": traj.mat,
        "MUP": traj.mup,
        "MLO": traj.mlo,
        "mu": controls.mu,
        "s": controls.s,
        "E": traj.emissions,
        "RF": traj.forcing,
        "C": traj.consumption,
        "U": traj.utility,
    }


def scc_columns(m: MarginalSet):
    return {"lamE": m.lam_e, "lamC": m.lam_c, "SCC": m.scc}


def aux_columns(aux: AuxiliaryQuantities, exo):
    return {
        "IE": aux.ie,
        "NEO": aux.neo,
        "PCC": aux.pcc,
        "DF": aux.df,
        "ACppm": aux.acppm,
        "MCA": aux.mca,
        "sigma": exo.sigma,
        "L": exo.labor,
        "A": exo.tfp,
        "ELand": exo.eland,
        "FEX": exo.fex,
        "theta1": exo.theta1,
    }


def read_controls(path, n_periods=None):
    """Control path from the ``mu`` and ``s`` columns of a CSV."""
    cols = read_csv(path)
    missing = [c for c in ("mu", "s") if c not in cols]
    if missing:
        raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")
    if n_periods is not None and len(cols["mu"]) != n_periods:
        raise ValueError(f"{path}: {len(cols['mu'])} rows, expected {n_periods}")
    return ControlPath(cols["mu"], cols["s"])


def write_series(directory, years, columns):
    """One ``<name>.dat`` file per series with space-separated ``year value`` lines."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, values in columns.items():
        if name == "year":
            continue
        p = directory / f"{name}.dat"
        with open(p, "w") as fh:
            for y, v in zip(years, values):
                fh.write(f"{int(y)} {format_value(v)}\n")
        written.append(p)
    return written
