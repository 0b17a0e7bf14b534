from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from orthoreal.algebra.linalg import read_matrix
from orthoreal.forms import read_space
from orthoreal.ogroup import Isometry

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(stem: str) -> Isometry:
    S = read_space((FIXTURES / f"{stem}.space").read_text())
    _, M = read_matrix((FIXTURES / f"{stem}.matrix").read_text(), S.field)
    return Isometry(S, M)


@pytest.fixture
def fixture_element():
    return load_fixture
