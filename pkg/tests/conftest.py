from collections import defaultdict

import pytest

ACCEPTANCE_LABELS = {
    1: "latent-image reduction rate",
    2: "per-proton heating",
    3: "IGM cooling, multiplier and dt/dz",
    4: "germanium nuclear excitation bound",
    5: "x-ray radiation bound and neutralization",
    6: "dust grain emission and heating",
    7: "supercurrent decay",
    8: "excitation family",
    9: "phonon slow-down, ion emission, thermal noise",
    10: "disk rotational spread over SQL",
    11: "mirror coupling multipliers",
    12: "correlation oracles",
    13: "photographic and vision side estimates",
    14: "property suite",
}

_outcomes: dict[int, list[str]] = defaultdict(list)
_criterion_of: dict[str, int] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number the test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criterion_of[item.nodeid] = int(m.args[0])


def pytest_runtest_logreport(report):
    n = _criterion_of.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or report.failed:
        _outcomes[n].append("failed" if report.failed else report.outcome)


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LABELS):
        results = _outcomes.get(n)
        if not results:
            status = "NOT RUN"
        elif "failed" in results:
            status = "FAIL"
        else:
            status = "PASS"
        tr.write_line(f"criterion {n:2d}  {status:7s}  {ACCEPTANCE_LABELS[n]} ({len(results or [])} checks)")
