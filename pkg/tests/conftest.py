import math
from pathlib import Path

import numpy as np
import pytest

from app.config import Settings
from app.models.game import AngularParams, PayCoefficients, StrategyAngles
from app.services.analysis_service import AnalysisService
from app.services.equilibrium_service import EquilibriumService
from app.services.oracle_service import OracleService
from app.services.quantum_service import QuantumService
from app.services.reduction_service import ReductionService

FIXTURES = Path(__file__).parent / "fixtures"
QUARTER = math.pi / 4


@pytest.fixture(scope="session")
def settings():
    return Settings(_env_file=None)


@pytest.fixture(scope="session")
def quantum_service(settings):
    return QuantumService(settings)


@pytest.fixture(scope="session")
def reduction_service(settings):
    return ReductionService(settings)


@pytest.fixture(scope="session")
def equilibrium_service(settings):
    return EquilibriumService(settings)


@pytest.fixture(scope="session")
def oracle_service(settings):
    return OracleService(settings)


@pytest.fixture(scope="session")
def analysis_service(settings):
    return AnalysisService(settings)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fixture_path():
    def _path(name: str) -> str:
        return str(FIXTURES / name)
    return _path


def random_game(rng) -> PayCoefficients:
    return PayCoefficients.from_list(rng.uniform(0.0, 5.0, size=4))


def random_angles(rng) -> AngularParams:
    low, high = 0.05, math.pi / 2 - 0.05
    return AngularParams(theta=rng.uniform(low, high), tau=rng.uniform(low, high))


def random_strategy(rng) -> StrategyAngles:
    return StrategyAngles(alpha=rng.uniform(0.0, 2 * math.pi), beta=rng.uniform(0.0, 2 * math.pi))
