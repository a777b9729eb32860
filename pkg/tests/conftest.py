import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "fixed",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fixed")

ACCEPTANCE = {}


@pytest.fixture
def record_criterion():
    def record(number: int, title: str, passed: bool, seconds: float, budget: float, detail: str = ""):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number}: {title} ({seconds:.2f}s of {budget:.0f}s)"
        if detail:
            line += f" - {detail}"
        ACCEPTANCE[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
