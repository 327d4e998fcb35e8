import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from dice2013r.params import bound_schedule, build_params, derive_carbon_matrix, with_overrides


def test_table_values(params):
    assert params.phi[0, 0] == 0.8630
    assert params.phi[0, 1] == 0.0086
    assert params.phi[1, 0] == 0.025
    assert params.phi[1, 1] == 0.975
    assert params.eta == 3.8
    assert params.scale2 == 3855.106895


def test_zeta_columns_sum_to_one(params):
    assert np.all(params.zeta.sum(axis=0) == 1.0)


def test_short_horizon_rejected():
    with pytest.raises(ValueError, match="too short"):
        build_params(10)
    build_params(11)


@pytest.mark.parametrize("bad", [0, -3, 2.5, True])
def test_invalid_horizon(bad):
    with pytest.raises(ValueError):
        build_params(bad)


def test_unknown_override():
    with pytest.raises(ValueError, match="unknown"):
        build_params(60, {"zeta": 1.0})
    with pytest.raises(ValueError, match="unknown"):
        build_params(60, {"phi": 1.0})


@pytest.mark.parametrize("key", ["eta", "xi1", "gamma", "a", "delta", "alpha", "rho", "scale1"])
def test_override_positivity(key):
    with pytest.raises(ValueError, match=key):
        build_params(60, {key: 0.0})


def test_override_passthrough():
    p = build_params(60, {"a": 0.005})
    assert p.a == 0.005
    assert with_overrides(p, rho=0.02).rho == 0.02


def test_carbon_override_rederives_matrix():
    p = build_params(60, {"b12": 0.1})
    assert p.zeta[1, 0] == 0.1
    assert p.zeta[0, 1] == pytest.approx(0.1 * 588 / 1350, rel=1e-15)


def test_carbon_matrix_entries():
    z = derive_carbon_matrix()
    assert z[0, 1] == pytest.approx(0.088 * 588 / 1350, rel=1e-15)
    assert round(z[0, 1], 5) == 0.03833
    assert z[1, 2] == pytest.approx(0.0003375, rel=1e-12)
    assert z[2, 0] == 0 and z[0, 2] == 0


@pytest.mark.parametrize("args", [(0, 0.0025), (0.088, 0), (0, 0), (1.0, 0.0025)])
def test_carbon_matrix_preconditions(args):
    with pytest.raises(ValueError):
        derive_carbon_matrix(*args)


@given(
    b12=st.floats(1e-4, 0.5),
    b23=st.floats(1e-5, 0.05),
    mateq=st.floats(100, 2000),
    mueq=st.floats(500, 5000),
    mleq=st.floats(5000, 50000),
)
def test_carbon_matrix_column_stochastic(b12, b23, mateq, mueq, mleq):
    assume(b12 * mateq / mueq + b23 < 1)
    z = derive_carbon_matrix(b12, b23, mateq, mueq, mleq)
    assert np.allclose(z.sum(axis=0), 1.0, rtol=0, atol=4 * np.finfo(float).eps)


def test_build_params_pure():
    a, b = build_params(60), build_params(60)
    assert a == b
    assert a.phi.tobytes() == b.phi.tobytes()
    assert a.zeta.tobytes() == b.zeta.tobytes()


def test_matrices_immutable(params):
    with pytest.raises(ValueError):
        params.zeta[0, 0] = 1.0


def test_years(params):
    assert params.years[0] == 2010
    assert params.years[-1] == 2010 + 5 * 59
    assert params.year(3) == 2020


def test_schedule_default(schedule):
    assert schedule.mu_lower[0] == schedule.mu_upper[0] == 0.039
    assert schedule.mu_upper[28] == 1.0  # period 29
    assert schedule.mu_upper[29] == 1.2  # period 30
    assert np.all(schedule.mu_lower[1:] == 0)
    assert np.all(schedule.s_lower[50:] == 0.258278)
    assert np.all(schedule.s_upper[50:] == 0.258278)
    assert np.all(schedule.s_lower[:50] == 0) and np.all(schedule.s_upper[:50] == 1)
    assert schedule.s_fixed[:50].sum() == 0 and schedule.s_fixed[50:].all()


def test_schedule_short_horizon():
    sch = bound_schedule(build_params(20))
    assert np.all(sch.mu_upper[1:] == 1.0)
    assert sch.s_fixed[10:].all() and not sch.s_fixed[:10].any()


@pytest.mark.parametrize("n", [11, 20, 29, 30, 31, 60, 100])
def test_schedule_invariants(n):
    sch = bound_schedule(build_params(n))
    assert np.all(sch.lower <= sch.upper)
    assert sch.n_fixed == 1 + 10
    assert np.all((sch.lower == sch.upper) == sch.fixed)
