from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from gridtasks.tasks import reference_pairs

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def pairs():
    return reference_pairs()


@pytest.fixture
def fixtures_dir():
    return FIXTURES


# criterion number -> (title, passed, seconds, budget); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool, float, float | None]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, secs, budget = ACCEPTANCE[k]
        limit = f" (budget {budget:g}s)" if budget is not None else ""
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {title}  [{secs:.2f}s{limit}]")
