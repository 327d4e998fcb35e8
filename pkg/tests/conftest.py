import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dice2013r import (  # noqa: E402
    DICE2013R_INITIAL_STATE,
    OptimizerConfig,
    bound_schedule,
    build_exogenous,
    build_params,
    default_controls,
    optimize,
)


@pytest.fixture(scope="session")
def params():
    return build_params(60)


@pytest.fixture(scope="session")
def exo(params):
    return build_exogenous(params)


@pytest.fixture(scope="session")
def schedule(params):
    return bound_schedule(params)


@pytest.fixture(scope="session")
def initial():
    return DICE2013R_INITIAL_STATE


@pytest.fixture(scope="session")
def start(params):
    return default_controls(params)


@pytest.fixture(scope="session")
def optimum(initial, schedule, exo, params):
    return optimize(initial, None, schedule, exo, params, OptimizerConfig(), keep_iterates=True)
