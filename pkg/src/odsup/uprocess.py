"""The off-diagonal sequential U-process and the test statistic.

``U_n(t)`` sums ``h(X_i, X_j)`` over pairs with ``0 < |i - j| <= floor(n t)``
and ``u_n(t)`` is the same process for ``h = 1``. Both are right-continuous
step functions that only jump at ``t = k/n``, so on ``(k/n, (k+1)/n)`` they
equal their value at ``k/n``. The supremum of ``|U_n - u_n U_n(1)|`` over
``[0, 1]`` is therefore the maximum over the ``n + 1`` grid points, with no
approximation. All indexing below uses the integer ``k``; ``floor(n t)`` is
only formed in :func:`brute_force_uprocess`, which takes ``t`` by design and
rounds ``n t`` to 9 decimals before flooring.
"""

from dataclasses import dataclass

import math

import numpy as np

from . import _accel
from .kernel import Kernel, LagSums, ObservationSet, eval_pair


def weight_fn(n: int, k: int) -> float:
    """``u_n(k/n) = k (2n - k - 1) / (n^2 - n)``."""
    if not 0 <= k <= n:
        raise ValueError(f"grid index k={k} outside 0..{n}")
    return k * (2 * n - k - 1) / (n * n - n)


def weight_grid(n: int) -> np.ndarray:
    k = np.arange(n + 1, dtype=np.float64)
    return k * (2 * n - k - 1) / (n * n - n)


@dataclass(frozen=True)
class UProcessGrid:
    """Values of the process on ``t = k/n``, ``k = 0 .. n``.

    Attributes
    ----------
    U : ndarray
        ``U_n(k/n)``.
    u : ndarray
        ``u_n(k/n)``.
    Ucentered : ndarray
        ``U_n(k/n) - u_n(k/n) U_n(1)``.
    T : float
        ``sqrt(n) * max_k |Ucentered[k]|``.
    argmax_k : int
        Smallest interior ``k`` attaining the maximum.
    """

    n: int
    U: np.ndarray
    u: np.ndarray
    Ucentered: np.ndarray
    T: float
    argmax_k: int

    @property
    def argmax_t(self) -> float:
        return self.argmax_k / self.n


def build_uprocess(lags: LagSums) -> UProcessGrid:
    n = lags.n
    if n < 3:
        raise ValueError("need n >= 3")
    denom = n * n - n
    cum = np.empty(n + 1)
    cum[0] = 0.0
    cum[1:n] = _accel.kahan_cumsum(lags.by_lag[1:])
    cum[n] = cum[n - 1]
    # 2*cum / denom (not cum * (2/denom)) keeps h = 1 bit-identical to u_n
    U = 2.0 * cum / denom
    u = weight_grid(n)
    centered = U - u * U[n]
    # endpoints vanish identically; restricting to the interior keeps k* in (0, n)
    interior = np.abs(centered[1:n])
    k_star = int(np.argmax(interior)) + 1
    T = math.sqrt(n) * float(interior[k_star - 1])
    return UProcessGrid(n=n, U=U, u=u, Ucentered=centered, T=T, argmax_k=k_star)


def brute_force_uprocess(kernel: Kernel, obs: ObservationSet, t: float) -> float:
    """Literal double sum over ordered pairs with ``0 < |i - j| <= n t``.

    Quadratic in ``n`` with a Python-level loop; meant as a test oracle.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t={t} outside [0, 1]")
    n = obs.n
    # n * (k / n) can land just below k in floating point; snapping to 9
    # decimals first keeps every jump point t = k/n on its own step
    window = math.floor(round(n * t, 9))
    total = 0.0
    for i in range(n):
        for j in range(n):
            if 0 < abs(i - j) <= window:
                total += eval_pair(kernel, obs, i, j)
    return total / (n * n - n)
