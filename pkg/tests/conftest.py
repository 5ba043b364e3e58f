import pytest
from hypothesis import settings

from unisynth.environment import getEnvironment

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def env():
    return getEnvironment("unify")


@pytest.fixture(scope="session")
def replayed(env):
    return env.replay()


@pytest.fixture(scope="session")
def unify_program(replayed):
    return replayed[1]
