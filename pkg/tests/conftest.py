import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kneeroc.gaussian import ScoreSet  # noqa: E402


@pytest.fixture
def separated() -> ScoreSet:
    return ScoreSet((0.7, 0.8, 0.9), (0.1, 0.2, 0.3))


@pytest.fixture
def write(tmp_path):
    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8", newline="\n")
        return path

    return _write


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
