import importlib
from pathlib import Path

import pytest

from polartab import load_problem

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def _backends():
    mods = [importlib.import_module("polartab._kernels")]
    try:
        mods.append(importlib.import_module("polartab._speedups"))
    except ImportError:
        pass
    return mods


BACKENDS = _backends()


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def kernel(request):
    """Each available kernel implementation in turn."""
    return request.param


@pytest.fixture
def problem():
    def load(name):
        return load_problem(PROBLEMS / f"{name}.p")
    return load


@pytest.fixture
def refl(problem):
    return problem("subset_refl")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
