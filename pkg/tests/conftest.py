import io

import pytest

import pstkit
from core.Workbench import Workbench


@pytest.fixture(autouse=True)
def numerics():
    pstkit.configure(pstkit.NUMERICS_DEFAULTS)
    yield
    pstkit.configure(pstkit.NUMERICS_DEFAULTS)


@pytest.fixture
def bench(tmp_path, monkeypatch):
    """
    Workbench on built-in defaults with stdout captured; cwd is a fresh tmp dir
    """
    monkeypatch.chdir(tmp_path)
    Workbench.load_config(None)

    stdout = io.StringIO()
    return Workbench(stdout=stdout), stdout
