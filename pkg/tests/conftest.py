from collections import defaultdict
from functools import lru_cache

import pytest

from g2moduli.catalog import get_entry, load_catalog
from g2moduli.liealg import derivation_space

CATALOG = load_catalog()

# criterion number -> [passed, failed, tolerance text]
_CRITERIA = defaultdict(lambda: [0, 0, []])


def entry(name):
    return get_entry(CATALOG, name)


@lru_cache(maxsize=None)
def der_of(name):
    return derivation_space(entry(name).algebra)


def available():
    return [e for e in CATALOG if e.salamon is not None]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, tolerance): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    k = getattr(report, "_criterion", None)
    if k is None:
        return
    num, tol = k
    slot = _CRITERIA[num]
    if tol not in slot[2]:
        slot[2].append(tol)
    slot[0 if report.passed else 1] += 1


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep._criterion = (m.args[0], m.kwargs.get("tolerance", ""))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        ok, bad, tol = _CRITERIA[num]
        verdict = "PASS" if bad == 0 else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict}  ({ok} passed, {bad} failed; tolerance: {'; '.join(tol)})")
