import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

KLEIN = [
    [0, 1, 2, 3],
    [1, 0, 3, 2],
    [2, 3, 0, 1],
    [3, 2, 1, 0],
]


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("POWMON_CACHE_DIR", str(tmp_path / "cache"))


@pytest.fixture
def klein():
    from powmon.ground import table_ground

    return table_ground(KLEIN, name="V4")


@pytest.fixture
def s3():
    from powmon.ground import permutation_group

    return permutation_group([[1, 0, 2], [1, 2, 0]], name="S3")
