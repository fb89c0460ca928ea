import os

import pytest


@pytest.fixture(scope="session")
def ls():
    return pytest.importorskip("liesynth")


@pytest.fixture(scope="session")
def jobs_dir():
    path = os.environ.get("LIESYNTH_JOBS")
    if path is None:
        path = os.path.join(os.path.dirname(__file__), "..", "..", "jobs")
    return os.path.abspath(path)
