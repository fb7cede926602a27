import pytest

from orgsim.types import MortalityProfile, SocietyConfig


@pytest.fixture
def tiny_config():
    """Small, fast society for engine-level tests: 20 agents, 5 years."""

    def make(**overrides) -> SocietyConfig:
        base = dict(
            label="E0F0",
            environment_benign=False,
            institutions_fair=False,
            fairness_constant=-0.4,
            mortality=MortalityProfile.harsh(),
            population=20,
            board_size=2,
            director_fraction=0.1,
            manager_fraction=0.2,
            network_degree=4,
            total_years=5,
            reform_year=3,
            max_punish=2,
        )
        base.update(overrides)
        return SocietyConfig(**base)

    return make
