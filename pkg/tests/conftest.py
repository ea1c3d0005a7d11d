from pathlib import Path

import pytest

from tests.cases import tangency_text


@pytest.fixture
def tangency_case_file(tmp_path: Path) -> Path:
    path = tmp_path / "example14.folres"
    path.write_text(tangency_text(3), encoding="utf-8")
    return path


@pytest.fixture
def write_problem(tmp_path: Path):
    """Write problem text to a file under tmp_path and return its path."""

    def _write(text: str, name: str = "problem.folres") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
