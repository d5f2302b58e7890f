import pytest

from gwsym.nullcone import standard_config


@pytest.fixture(scope="session")
def config():
    return standard_config()


@pytest.fixture(scope="session")
def evaluator(config):
    from gwsym.interaction import shared_evaluator
    return shared_evaluator(config)
