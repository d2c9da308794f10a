import pytest

from snhorseshoe.config import build_models, default_config
from snhorseshoe.normal_form import SaddleNodeNormalForm

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def models():
    return build_models(default_config())


@pytest.fixture(scope="session")
def gm(models):
    return models[0]


@pytest.fixture(scope="session")
def consts(models):
    return models[1]


@pytest.fixture(scope="session")
def hs(models):
    return models[2]


@pytest.fixture
def nf():
    return SaddleNodeNormalForm()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[key]
        terminalreporter.write_line("criterion %d: %s  %s" % (key, "PASS" if ok else "FAIL", line))


@pytest.fixture(scope="session")
def acceptance():
    return ACCEPTANCE
