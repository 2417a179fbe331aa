import pytest

from invbell.protocol import Scenario, build_final_density, outcome_distribution


@pytest.fixture(scope="session")
def default_density():
    return build_final_density(Scenario())


@pytest.fixture(scope="session")
def default_distribution(default_density):
    return outcome_distribution(default_density)
