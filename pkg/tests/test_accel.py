"""The numba kernels and their numpy twins must agree."""

import numpy as np
import pytest

from odsup import _accel

pytestmark = pytest.mark.skipif(not _accel.NUMBA_AVAILABLE, reason="numba not installed")


def test_env_flag(monkeypatch):
    monkeypatch.setenv(_accel.ENV_FLAG, "1")
    assert _accel.backend_name() == "numpy"
    monkeypatch.setenv(_accel.ENV_FLAG, "0")
    assert _accel.backend_name() == "numba"
    monkeypatch.delenv(_accel.ENV_FLAG)
    assert _accel.numba_enabled()


@pytest.mark.parametrize("code", [_accel.KERNEL_EXPNEG, _accel.KERNEL_INVQUARTIC, _accel.KERNEL_CONST])
def test_lag_sums_twins(rng, code):
    X = rng.normal(size=(73, 4))
    nb = _accel.lag_sums_vectors_nb(X, code)
    npy = _accel.lag_sums_vectors_np(X, code)
    for a, b in zip(nb, npy):
        np.testing.assert_allclose(a, b, rtol=1e-13)


def test_kahan_twins(rng):
    v = rng.normal(size=1000) * 10.0 ** rng.integers(-8, 8, size=1000)
    np.testing.assert_array_equal(_accel.kahan_cumsum_nb(v), _accel.kahan_cumsum_np(v))


def test_kahan_beats_naive():
    v = np.array([1.0] + [1e-16] * 10_000)
    assert _accel.kahan_cumsum(v)[-1] == pytest.approx(1.0 + 1e-12, rel=1e-15)


def test_replicate_twins(rng):
    n = 120
    eps = rng.normal(size=(17, n))
    a = rng.normal(size=n)
    k = np.arange(n + 1.0)
    w = k * (2 * n - k - 1) / (n * n - n)
    np.testing.assert_allclose(_accel.replicate_stats_fast_nb(eps, a, w),
                               _accel.replicate_stats_fast_np(eps, a, w), rtol=1e-12)


def test_thread_count_never_changes_results(rng):
    n = 90
    eps = rng.normal(size=(40, n))
    a = rng.normal(size=n)
    k = np.arange(n + 1.0)
    w = k * (2 * n - k - 1) / (n * n - n)
    outs = []
    for threads in (1, 4):
        _accel.set_threads(threads)
        outs.append(_accel.replicate_stats_fast_nb(eps, a, w).tobytes())
    _accel.set_threads(1)
    assert outs[0] == outs[1]


def test_set_threads_clamps():
    import numba

    assert _accel.set_threads(10_000) == numba.config.NUMBA_NUM_THREADS
    assert _accel.set_threads(0) == 1
    assert _accel.set_threads(None) == 1
