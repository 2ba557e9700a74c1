import numpy as np
import pytest

from odsup import ObservationSet

_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(criterion, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  {criterion}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    """Run a test once per kernel backend."""
    if request.param == "numpy":
        monkeypatch.setenv("ODSUP_DISABLE_NUMBA", "1")
    else:
        pytest.importorskip("numba")
        monkeypatch.delenv("ODSUP_DISABLE_NUMBA", raising=False)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


def scalar_product_obs(values):
    """Kernel x*y on scalar data, supplied as a precomputed matrix."""
    x = np.asarray(values, dtype=float)
    return ObservationSet.from_kernel_matrix(np.outer(x, x))
