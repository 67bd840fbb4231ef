import pytest

from superdd.catalog import builtin

_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def cat():
    return builtin()


@pytest.fixture(scope="session")
def dd11(cat):
    return cat.design("DD(11)")


@pytest.fixture(scope="session")
def dd21(cat):
    return cat.design("DD(21)")


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
