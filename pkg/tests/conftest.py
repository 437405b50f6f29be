import os
import shutil

import pytest
from hypothesis import settings

settings.register_profile("acceptance", max_examples=1000, deadline=None)
settings.load_profile("acceptance")

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


@pytest.fixture(scope="session")
def fixtures_root() -> str:
    return os.path.abspath(FIXTURES)


@pytest.fixture()
def carl_robot(fixtures_root):
    from emissor.storage import load_scenario

    return load_scenario(os.path.join(fixtures_root, "carl-robot"))


@pytest.fixture()
def carl_robot_annotated(fixtures_root):
    from emissor.storage import load_scenario

    return load_scenario(os.path.join(fixtures_root, "carl-robot-annotated"))


@pytest.fixture()
def scenario_root_copy(fixtures_root, tmp_path):
    """A throwaway copy of the whole fixture root for mutating tests."""
    dest = tmp_path / "root"
    shutil.copytree(fixtures_root, dest,
                    ignore=shutil.ignore_patterns("build_fixtures.py", "README.md"))
    return str(dest)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for status, label in (("passed", "PASS"), ("failed", "FAIL")):
        for report in terminalreporter.stats.get(status, []):
            if "test_acceptance" in report.nodeid and report.when == "call":
                lines.append((report.nodeid.split("::")[-1], label))
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name, label in sorted(lines):
            terminalreporter.write_line(f"  [{label}] {name}")
