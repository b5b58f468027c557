from collections import defaultdict

import pytest

_outcomes = defaultdict(list)
_notes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.fixture
def note(request):
    """Attach a short measured value to the criterion line of the summary."""
    marker = request.node.get_closest_marker("criterion")

    def add(text):
        if marker:
            _notes[marker.args[0]].append(text)

    return add


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key in report.keywords:
        if key.startswith("criterion_"):
            _outcomes[int(key.split("_")[1])].append((report.nodeid.split("::")[-1], report.outcome))


def pytest_collection_modifyitems(items):
    # expose the criterion number as a keyword so the report hook can see it
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            item.keywords[f"criterion_{m.args[0]}"] = True


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_outcomes):
        results = _outcomes[n]
        ok = all(o == "passed" for _, o in results)
        failed = [name for name, o in results if o != "passed"]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}"
        if _notes[n]:
            line += "  [" + "; ".join(_notes[n]) + "]"
        if failed:
            line += "  failing: " + ", ".join(failed)
        tr.write_line(line)
