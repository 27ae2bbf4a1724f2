import math

import numpy as np
import pytest

from sgdecohere import fields
from sgdecohere.density import DecoherenceModel
from sgdecohere.dressed import QubitState
from sgdecohere.params import reference_params

MEAN_N = 82.76
GAMMA_PHASE = 0.5019115 * math.pi


@pytest.fixture(scope="session")
def params():
    return reference_params()


@pytest.fixture(scope="session")
def half_qubit():
    return QubitState(math.pi / 2, 0.0)


@pytest.fixture(scope="session")
def thermal_model(params, half_qubit):
    return DecoherenceModel(params, fields.thermal_from_temperature(200.0, params.omega),
                            half_qubit)


@pytest.fixture(scope="session")
def coherent_trap_model(params, half_qubit):
    return DecoherenceModel(params, fields.coherent(math.sqrt(MEAN_N), 0.0), half_qubit)


@pytest.fixture(scope="session")
def fock_model(params, half_qubit):
    return DecoherenceModel(params, fields.fock(83), half_qubit)


@pytest.fixture(scope="session")
def phase_trap_model(params):
    return DecoherenceModel(params, fields.sg_phase_from_trapping(GAMMA_PHASE, 0.0),
                            QubitState(GAMMA_PHASE, 0.0))


def all_kinds(mean_n=MEAN_N, theta=0.0):
    """One representative of each closed-form field kind at matched <n>."""
    return {
        "thermal": fields.thermal_from_mean(mean_n),
        "coherent": fields.coherent(math.sqrt(mean_n), theta),
        "random_phase_coherent": fields.random_phase_coherent(math.sqrt(mean_n)),
        "fock": fields.fock(int(round(mean_n))),
        "sg_phase": fields.sg_phase(math.sqrt(mean_n / (1 + mean_n)), theta),
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose the call-phase outcome to fixtures (used by the acceptance report)
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
