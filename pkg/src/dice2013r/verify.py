"""Column-by-column comparison of a produced table against a reference."""

from dataclasses import dataclass

import numpy as np


@dataclass
class ColumnReport:
    column: str
    reference_column: str
    passed: bool
    n_violations: int
    max_abs_error: float
    worst_index: int  # row of the largest tolerance excess (or abs error)
    worst_key: object  # year of that row when available
    produced: float
    reference: float

    def describe(self):
        tag = "ok  " if self.passed else "FAIL"
        where = f"year {self.worst_key}" if self.worst_key is not None else f"row {self.worst_index + 1}"
        return (
            f"{tag} {self.column} vs {self.reference_column}: max |diff| {self.max_abs_error:.6g}, "
            f"{self.n_violations} violation(s); worst at {where} "
            f"(produced {self.produced!r}, reference {self.reference!r})"
        )


def _align(produced, reference, column_map):
    """Row index arrays pairing the two tables (by year if both have one)."""
    ref_year = column_map.get("year", "year")
    if "year" in produced and ref_year in reference:
        py, ry = produced["year"], reference[ref_year]
        common = np.intersect1d(py, ry)
        if common.size == 0:
            raise ValueError("produced and reference tables share no years")
        pi = np.array([np.flatnonzero(py == y)[0] for y in common])
        ri = np.array([np.flatnonzero(ry == y)[0] for y in common])
        return pi, ri, common
    n_p = len(next(iter(produced.values())))
    n_r = len(next(iter(reference.values())))
    if n_p != n_r:
        raise ValueError(f"row counts differ ({n_p} vs {n_r}) and there is no year column to align on")
    idx = np.arange(n_p)
    return idx, idx, None


def compare_tables(produced, reference, column_map=None, rtol=1e-4, atol=0.0,
                   column_rtol=None, column_atol=None):
    """
    Compare every produced column that has a reference counterpart.

    A cell passes when ``|p - r| <= atol + rtol * max(|p|, |r|)``; the
    test is symmetric in the two operands. Two NaNs compare equal.
    ``column_map`` maps produced column names to reference names;
    per-column tolerances are keyed by produced name.
    """
    column_map = column_map or {}
    column_rtol = column_rtol or {}
    column_atol = column_atol or {}
    pi, ri, years = _align(produced, reference, column_map)

    reports = []
    for name, pvals in produced.items():
        if name == "year":
            continue
        rname = column_map.get(name, name)
        if rname not in reference:
            continue
        p = np.asarray(pvals, dtype=float)[pi]
        r = np.asarray(reference[rname], dtype=float)[ri]
        rt = column_rtol.get(name, rtol)
        at = column_atol.get(name, atol)
        both_nan = np.isnan(p) & np.isnan(r)
        diff = np.where(both_nan, 0.0, np.abs(p - r))
        diff = np.where(np.isnan(diff), np.inf, diff)
        allowed = at + rt * np.maximum(np.abs(p), np.abs(r))
        allowed = np.where(np.isnan(allowed), 0.0, allowed)
        excess = diff - allowed
        bad = excess > 0
        worst = int(np.argmax(excess)) if bad.any() else int(np.argmax(diff))
        reports.append(ColumnReport(
            column=name,
            reference_column=rname,
            passed=not bad.any(),
            n_violations=int(bad.sum()),
            max_abs_error=float(np.max(diff)) if diff.size else 0.0,
            worst_index=worst,
            worst_key=None if years is None else int(years[worst]),
            produced=float(p[worst]),
            reference=float(r[worst]),
        ))
    if not reports:
        raise ValueError("no common columns to compare (check the verify.columns mapping)")
    return reports
