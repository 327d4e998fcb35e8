import numpy as np
import pytest
from mpmath import mpf

from dice2013r import build_exogenous, build_params
from oracles import exogenous_mp


def test_first_period_values(exo):
    assert exo.sigma[0] == 0.5491
    assert exo.labor[0] == 6838
    assert exo.tfp[0] == 3.8


def test_matches_high_precision_recurrences(exo):
    ref = exogenous_mp(60)
    for name in ("sigma", "labor", "tfp", "eland", "fex", "theta1"):
        np.testing.assert_allclose(getattr(exo, name), [float(v) for v in ref[name]], rtol=1e-13, err_msg=name)


def test_hand_values(exo):
    # mpmath evaluations of each recurrence at i = 1
    assert exo.sigma[1] == pytest.approx(0.522450412372276, rel=1e-12)
    assert exo.labor[1] == pytest.approx(7242.49099028168, rel=1e-12)
    assert exo.tfp[1] == pytest.approx(3.8 / 0.921, rel=1e-14)
    assert exo.theta1[0] == pytest.approx(float(mpf(344) / 2800 * mpf("0.5491")), rel=1e-14)
    assert exo.eland[1] == pytest.approx(2.64, rel=1e-15)
    assert exo.fex[9] == pytest.approx(0.475, rel=1e-15)
    assert exo.fex[18] == pytest.approx(0.70, rel=1e-15)


def test_forcing_continuous_at_switch(exo):
    # linear branch extended to i = 19 gives 0.25 + 0.025*18 = 0.70
    assert exo.fex[18] == pytest.approx(0.25 + 0.025 * 18, rel=1e-15)
    assert np.all(exo.fex[18:] == exo.fex[18])


@pytest.mark.parametrize("n", [60, 300, 1000])
def test_monotonicity(n):
    exo = build_exogenous(build_params(n))
    assert np.all(np.diff(exo.sigma) < 0) and np.all(exo.sigma > 0)
    # population converges to 10500; after ~200 periods the growth factor
    # rounds to 1.0 and the path stalls. Strict until then, constant after.
    dl = np.diff(exo.labor)
    stall = np.flatnonzero(dl == 0)
    first = stall[0] if stall.size else dl.size
    assert first >= 59
    assert np.all(dl[:first] > 0) and np.all(dl[first:] == 0)
    assert np.all(exo.labor[1:] > 6838) and np.all(exo.labor < 10500)
    assert np.all(np.diff(exo.tfp) > 0)
    assert np.all(np.diff(exo.theta1) < 0) and np.all(exo.theta1 > 0)
    assert np.all(np.diff(exo.fex) >= 0)
    ratio = exo.theta1[1:] / exo.theta1[:-1]
    np.testing.assert_allclose(ratio, 0.975 * exo.sigma[1:] / exo.sigma[:-1], rtol=1e-13)
    assert np.all(ratio < 0.975)


def test_eland_closed_form(exo, params):
    assert np.array_equal(exo.eland, 3.3 * 0.8 ** (params.periods - 1))


def test_reproducible(params):
    a, b = build_exogenous(params), build_exogenous(params)
    for name in ("sigma", "labor", "tfp", "eland", "fex", "theta1"):
        assert getattr(a, name).tobytes() == getattr(b, name).tobytes()
