import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run exhaustive slow checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def golay():
    from modmoon.leech import build_golay

    return build_golay()


@pytest.fixture(scope="session")
def leech(golay):
    from modmoon.leech import build_leech

    return build_leech(golay)


@pytest.fixture(scope="session")
def mt_table():
    from modmoon.qseries import load_mt_table

    return load_mt_table()
