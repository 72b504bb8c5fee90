import random

import pytest

from sharbly.linalg import identity, matmul


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_sl(n, rng, steps=None):
    """A random element of SL_n(Z): product of elementary matrices and a paired sign flip."""
    g = identity(n)
    for _ in range(steps or 3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        e = identity(n)
        e[i][j] = rng.choice([-2, -1, 1, 2])
        g = matmul(e, g)
    if n > 1 and rng.random() < 0.5:
        g[0] = [-x for x in g[0]]
        g[1] = [-x for x in g[1]]
    return g


def random_columns(n, count, rng, lo=-2, hi=2):
    cols = []
    while len(cols) < count:
        v = tuple(rng.randint(lo, hi) for _ in range(n))
        if any(v):
            cols.append(v)
    return cols


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.failed):
        _criteria[number] = (title, report.passed, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, passed, seconds = _criteria[number]
        terminalreporter.write_line("criterion %2d: %s  %s (%.1f s)"
                                    % (number, "PASS" if passed else "FAIL", title, seconds))
