"""Projection weights of the U-process and the jackknife plug-in terms.

Observation positions are 0-based: observation ``i`` (``0 <= i < n``) has
``i`` predecessors and ``n - 1 - i`` successors, so the number of partners
within lag ``k`` is ``min(k, i) + min(k, n - 1 - i)``.
"""

from dataclasses import dataclass

import numpy as np

from .kernel import LagSums
from .uprocess import UProcessGrid, weight_fn, weight_grid


def _check(n, i, k):
    if not 0 <= i < n:
        raise IndexError(f"observation index {i} outside 0..{n - 1}")
    if not 0 <= k <= n:
        raise ValueError(f"grid index k={k} outside 0..{n}")


def nu(n: int, i: int, k: int) -> float:
    """Influence weight of observation ``i`` on ``U_n(k/n)``."""
    _check(n, i, k)
    return 2.0 * (min(k, i) + min(k, n - 1 - i)) / (n * n - n)


def nu_centered(n: int, i: int, k: int) -> float:
    """``nu(n, i, k) - (2/n) u_n(k/n)``; sums to zero over ``i``."""
    return nu(n, i, k) - 2.0 / n * weight_fn(n, k)


def nu_column(n: int, k: int) -> np.ndarray:
    """``nu(n, i, k)`` for all ``i`` at once."""
    if not 0 <= k <= n:
        raise ValueError(f"grid index k={k} outside 0..{n}")
    i = np.arange(n)
    return 2.0 * (np.minimum(k, i) + np.minimum(k, n - 1 - i)) / (n * n - n)


def nu_centered_column(n: int, k: int) -> np.ndarray:
    return nu_column(n, k) - 2.0 / n * weight_fn(n, k)


def nu_centered_table(n: int) -> np.ndarray:
    """Dense ``(n + 1, n)`` table of centred weights, row ``k``, column ``i``.

    O(n^2) memory; only the naive bootstrap path and the tests use it.
    """
    k = np.arange(n + 1)[:, None]
    i = np.arange(n)[None, :]
    raw = 2.0 * (np.minimum(k, i) + np.minimum(k, n - 1 - i)) / (n * n - n)
    return raw - (2.0 / n) * weight_grid(n)[:, None]


@dataclass(frozen=True)
class ProjectionWeights:
    """On-demand accessor for the weights of a sample of size ``n``."""

    n: int

    def nu(self, i, k):
        return nu(self.n, i, k)

    def nu_centered(self, i, k):
        return nu_centered(self.n, i, k)

    def column(self, k, centered=False):
        return nu_centered_column(self.n, k) if centered else nu_column(self.n, k)


@dataclass(frozen=True)
class JackknifeTerms:
    """Per-observation estimates ``row mean of h - U_n(1)``."""

    a: np.ndarray

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def degenerate(self) -> bool:
        """All terms exactly zero: the multiplier bootstrap is a point mass at 0."""
        return not np.any(self.a)


def jackknife_terms(lags: LagSums, grid: UProcessGrid) -> JackknifeTerms:
    if lags.n != grid.n:
        raise ValueError("lag sums and grid come from different samples")
    a = lags.rows / (lags.n - 1) - grid.U[grid.n]
    a.setflags(write=False)
    return JackknifeTerms(a=a)
