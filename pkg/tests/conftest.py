from collections import defaultdict

import pytest

_ACCEPTANCE = defaultdict(list)

TITLES = {
    1: "oracle equivalence",
    2: "pole-sum equivalence",
    3: "KMS thermality",
    4: "long-time Boltzmann and rate limits",
    5: "detailed-balance polynomial identity",
    6: "cycle closure, first law, p0 range and saturation",
    7: "positive-work boundary and asymmetry",
    8: "perturbativity guard",
    9: "special functions",
    10: "reproducible presets",
}


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        xfail = hasattr(report, "wasxfail")
        _ACCEPTANCE[marker].append((report.nodeid, report.outcome, xfail))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # Attach the criterion number so the log hook can see it.
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        report.acceptance = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        results = _ACCEPTANCE[n]
        failed = [r for r in results if r[1] == "failed" and not r[2]]
        known = [r for r in results if r[2]]
        status = "FAIL" if failed else "PASS"
        note = ""
        if known:
            note = f" ({len(known)} documented deviation{'s' if len(known) > 1 else ''}: xfail)"
        terminalreporter.write_line(f"criterion {n:2d} {status}  {TITLES.get(n, '')}{note}")
