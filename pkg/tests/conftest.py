import os
import re
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

import builders  # noqa: E402

INPUTS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "inputs")


@pytest.fixture
def inputs_dir():
    return INPUTS


@pytest.fixture(scope="session")
def rotation():
    return builders.rotation_example()


@pytest.fixture(scope="session")
def swap():
    return builders.swap_example()


@pytest.fixture(scope="session")
def a2_trivial():
    return builders.a2_trivial_example(2)


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion and fail the test on FAIL."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(label: str, checks: dict):
        failed = [k for k, ok in checks.items() if not ok]
        line = f"{'FAIL' if failed else 'PASS'} {label}" + (f" (failed: {', '.join(failed)})" if failed else "")
        print(line)
        lines.append(line)
        assert not failed, line

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = re.match(r"test_c(\d+)_", item.name)
    if m and rep.when == "call" and rep.failed and "criterion" in item.fixturenames:
        lines = item.config.stash.setdefault(ACCEPTANCE, [])
        tag = f"C{m.group(1)}:"
        if not any(line.split()[1] == tag for line in lines):
            lines.append(f"FAIL {tag} {item.name} raised {call.excinfo.typename}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].lstrip("C").rstrip(":"))):
            terminalreporter.write_line(line)
