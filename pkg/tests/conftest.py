from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings

HERE = Path(__file__).resolve().parent
DATA = HERE.parent / "data"
sys.path.insert(0, str(HERE))

settings.register_profile("default", max_examples=500, deadline=None)
settings.load_profile("default")

# acceptance criteria report their verdicts here; printed after the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def load():
    from semprov import load_document_file

    def _load(name: str, semiring=None):
        return load_document_file(DATA / name, semiring)

    return _load


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
