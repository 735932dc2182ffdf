import os
from pathlib import Path

# Must happen before pathhom is imported: settings are read at import time.
os.environ["PATHHOM_LOG_TO_FILE"] = "false"
os.environ["PATHHOM_THREADS"] = "1"

import pytest  # noqa: E402

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path."""
    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write
