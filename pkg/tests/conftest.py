import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

RUN_LONG = os.environ.get("PERMCOMM_LONG", "0") not in ("", "0")


def pytest_collection_modifyitems(config, items):
    if RUN_LONG:
        return
    skip = pytest.mark.skip(reason="long-running; set PERMCOMM_LONG=1")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    if not RUN_LONG:
        terminalreporter.write_line("SKIP AC5 T2 census A7: opt-in, set PERMCOMM_LONG=1")
