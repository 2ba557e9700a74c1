"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Every kernel here exists twice: ``*_nb`` is compiled with ``numba.njit`` and
``*_np`` is vectorised numpy. The dispatchers at the bottom pick one per call:

* numba is used when it imports and ``ODSUP_DISABLE_NUMBA`` is unset or ``0``;
* otherwise the numpy twin runs.

The flag is read on every call so tests and benchmarks can flip it with
``monkeypatch.setenv`` without re-importing the package.
"""

import os

import numpy as np

try:
    import numba
    from numba import njit, prange

    NUMBA_AVAILABLE = True
    if "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
        # the bundled TBB is too old; probing it first only produces a warning
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        if len(args) == 1 and callable(args[0]):
            return args[0]
        return decorator

    def prange(*args):
        return range(*args)


ENV_FLAG = "ODSUP_DISABLE_NUMBA"

# Integer codes for the built-in vector kernels, shared by both backends.
KERNEL_EXPNEG = 0
KERNEL_INVQUARTIC = 1
KERNEL_CONST = 2


def numba_enabled():
    """True when the numba kernels will be used for the next call."""
    if not NUMBA_AVAILABLE:
        return False
    return os.environ.get(ENV_FLAG, "0").strip().lower() in ("", "0", "false", "no")


def backend_name():
    return "numba" if numba_enabled() else "numpy"


def set_threads(threads):
    """Set the numba worker count, clamped to what numba was started with.

    Returns the count actually in effect. Results never depend on it.
    """
    if not NUMBA_AVAILABLE or threads is None:
        return 1
    limit = numba.config.NUMBA_NUM_THREADS
    use = max(1, min(int(threads), limit))
    numba.set_num_threads(use)
    return use


# ---------------------------------------------------------------------------
# Lag sums over vector observations
# ---------------------------------------------------------------------------

@njit(cache=True)
def _kernel_of_distance_nb(dist, code):
    if code == KERNEL_EXPNEG:
        return np.exp(-dist)
    if code == KERNEL_INVQUARTIC:
        d2 = dist * dist
        return 1.0 / (d2 * d2 + 1.0)
    return 1.0


@njit(cache=True)
def lag_sums_vectors_nb(X, code):
    n, p = X.shape
    by_lag = np.zeros(n)
    rows = np.zeros(n)
    for d in range(1, n):
        acc = 0.0
        for i in range(n - d):
            j = i + d
            sq = 0.0
            for c in range(p):
                diff = X[i, c] - X[j, c]
                sq += diff * diff
            h = _kernel_of_distance_nb(np.sqrt(sq), code)
            acc += h
            rows[i] += h
            rows[j] += h
        by_lag[d] = acc
    return by_lag, rows


def kernel_of_distance_np(dist, code):
    if code == KERNEL_EXPNEG:
        return np.exp(-dist)
    if code == KERNEL_INVQUARTIC:
        d2 = dist * dist
        return 1.0 / (d2 * d2 + 1.0)
    return np.ones_like(dist)


def lag_sums_vectors_np(X, code):
    n = X.shape[0]
    by_lag = np.zeros(n)
    rows = np.zeros(n)
    for d in range(1, n):
        diff = X[d:] - X[:-d]
        h = kernel_of_distance_np(np.sqrt(np.einsum("ij,ij->i", diff, diff)), code)
        by_lag[d] = h.sum()
        rows[:-d] += h
        rows[d:] += h
    return by_lag, rows


# ---------------------------------------------------------------------------
# Compensated cumulative sum (small, O(n); one source serves both backends)
# ---------------------------------------------------------------------------

def _kahan_cumsum(values):
    out = np.empty(values.shape[0])
    total = 0.0
    comp = 0.0
    for idx in range(values.shape[0]):
        y = values[idx] - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[idx] = total
    return out


kahan_cumsum_nb = njit(cache=True)(_kahan_cumsum)
kahan_cumsum_np = _kahan_cumsum


# ---------------------------------------------------------------------------
# Bootstrap replicate statistics, O(n) per replicate via prefix sums
# ---------------------------------------------------------------------------
#
# With c_j = eps_j * a_j (0-based j = i - 1) and 1 <= k <= n - 1:
#   sum_j c_j min(k, j)         = sum_{j<=k} j c_j + k * sum_{j>k} c_j
#   sum_j c_j min(k, n - 1 - j) = the same identity on c reversed
# so the centred bootstrap process at k is
#   2/(n^2-n) * (left[k] + right[k]) - (2/n) * u_n(k) * sum_j c_j.

@njit(cache=True, parallel=True)
def replicate_stats_fast_nb(eps, a, weights):
    n_rep, n = eps.shape
    out = np.zeros(n_rep)
    scale = 2.0 / (n * n - n)
    for b in prange(n_rep):
        c = eps[b] * a
        total = 0.0
        for j in range(n):
            total += c[j]
        # forward prefix sums of c_j and j*c_j
        fwd0 = np.empty(n)
        fwd1 = np.empty(n)
        bwd0 = np.empty(n)
        bwd1 = np.empty(n)
        s0 = 0.0
        s1 = 0.0
        r0 = 0.0
        r1 = 0.0
        for j in range(n):
            s0 += c[j]
            s1 += j * c[j]
            fwd0[j] = s0
            fwd1[j] = s1
            cr = c[n - 1 - j]
            r0 += cr
            r1 += j * cr
            bwd0[j] = r0
            bwd1[j] = r1
        best = 0.0
        for k in range(1, n):
            left = fwd1[k] + k * (total - fwd0[k])
            right = bwd1[k] + k * (total - bwd0[k])
            val = abs(scale * (left + right) - (2.0 / n) * weights[k] * total)
            if val > best:
                best = val
        out[b] = np.sqrt(n) * best
    return out


def replicate_stats_fast_np(eps, a, weights):
    eps = np.atleast_2d(eps)
    n = eps.shape[1]
    c = eps * a[None, :]
    j = np.arange(n, dtype=np.float64)
    total = c.sum(axis=1, keepdims=True)
    k = np.arange(1, n)
    kf = k.astype(np.float64)[None, :]
    fwd0 = np.cumsum(c, axis=1)[:, k]
    fwd1 = np.cumsum(c * j, axis=1)[:, k]
    cr = c[:, ::-1]
    bwd0 = np.cumsum(cr, axis=1)[:, k]
    bwd1 = np.cumsum(cr * j, axis=1)[:, k]
    left = fwd1 + kf * (total - fwd0)
    right = bwd1 + kf * (total - bwd0)
    proc = (2.0 / (n * n - n)) * (left + right) - (2.0 / n) * weights[None, k] * total
    return np.sqrt(n) * np.abs(proc).max(axis=1)


# ---------------------------------------------------------------------------
# Dispatchers
# ---------------------------------------------------------------------------

def lag_sums_vectors(X, code):
    X = np.ascontiguousarray(X, dtype=np.float64)
    if numba_enabled():
        return lag_sums_vectors_nb(X, code)
    return lag_sums_vectors_np(X, code)


def kahan_cumsum(values):
    values = np.ascontiguousarray(values, dtype=np.float64)
    if numba_enabled():
        return kahan_cumsum_nb(values)
    return kahan_cumsum_np(values)


def replicate_stats_fast(eps, a, weights):
    eps = np.ascontiguousarray(np.atleast_2d(eps), dtype=np.float64)
    a = np.ascontiguousarray(a, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if numba_enabled():
        return replicate_stats_fast_nb(eps, a, weights)
    return replicate_stats_fast_np(eps, a, weights)
