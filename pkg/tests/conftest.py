from __future__ import annotations

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

# criterion label -> "PASS"/"FAIL", filled by the acceptance tests
ACCEPTANCE: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    label = getattr(item.function, "criterion", None)
    if label and rep.when == "call":
        ACCEPTANCE[label] = "PASS" if rep.passed else "FAIL"
    elif label and rep.when == "setup" and rep.failed:
        ACCEPTANCE[label] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{ACCEPTANCE[label]}  criterion {label}")
