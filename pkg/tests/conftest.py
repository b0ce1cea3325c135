import pytest

from iwtheta.eigenform import CurveModel, resolve

CURVE_11A = CurveModel((0, -1, 1, -10, -20), 11, "11a1")
CURVE_37A = CurveModel((0, 0, 1, -1, 0), 37, "37a1")

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion n")
    config.addinivalue_line("markers", "slow: takes more than a few seconds")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = getattr(report, "criterion", None)
    if marker is not None:
        n, text = marker
        _criteria[n] = (text, "PASS" if report.passed else "FAIL")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        text, verdict = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {verdict}  {text}")


@pytest.fixture(scope="session")
def e11():
    return resolve(CURVE_11A)


@pytest.fixture(scope="session")
def e37():
    return resolve(CURVE_37A)


@pytest.fixture(scope="session")
def delta():
    from iwtheta.eigenform import SymbolEigenform

    return resolve(SymbolEigenform(1, 12, label="Delta"))
