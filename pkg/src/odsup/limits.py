"""Limit covariance of the projected U-process under the null.

``n * sum_i nu(s) nu(t)`` converges to a closed-form ``Gamma(s, t)`` at rate
O(1/n); the centred weights converge to ``Gamma(s, t) - 4 u(s) u(t)`` with
``u(t) = t (2 - t)``. Used for diagnostics only; the test itself needs none
of these quantities.
"""

import numpy as np

from .hajek import nu_centered_column, nu_column


def _check_unit(*vals):
    for v in vals:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"argument {v} outside [0, 1]")


def u_limit(t):
    return t * (2.0 - t)


def gamma(s: float, t: float) -> float:
    _check_unit(s, t)
    s, t = min(s, t), max(s, t)
    if s + t <= 1.0:
        return 4.0 * s * (4.0 * t - 2.0 * t * t - s * t - s * s / 3.0)
    return 4.0 * (s * (1.0 - s + 2.0 * t - t * t) - (1.0 - t) ** 3 / 3.0)


def gamma_centered(s: float, t: float) -> float:
    return gamma(s, t) - 4.0 * u_limit(s) * u_limit(t)


def gamma_finite_n(n: int, j: int, k: int, centered: bool = False) -> float:
    """``n * sum_i w_i(j) w_i(k)`` with ``w`` the raw or centred weights."""
    col = nu_centered_column if centered else nu_column
    return float(n * np.dot(col(n, j), col(n, k)))


def gamma_matrix(points, centered: bool = False) -> np.ndarray:
    f = gamma_centered if centered else gamma
    return np.array([[f(s, t) for t in points] for s in points])


def grid_error(n: int, m: int = 20, centered: bool = False) -> float:
    """Max over ``s, t in {1/m, ..., 1}`` of ``|finite-n value - limit|``.

    ``n`` must be a multiple of ``m`` so the grid points are exact jump points.
    """
    if n % m:
        raise ValueError(f"n={n} must be a multiple of m={m}")
    f = gamma_centered if centered else gamma
    col = nu_centered_column if centered else nu_column
    step = n // m
    cols = np.stack([col(n, a * step) for a in range(1, m + 1)])
    finite = n * cols @ cols.T
    pts = np.arange(1, m + 1) / m
    limit = np.array([[f(s, t) for t in pts] for s in pts])
    return float(np.abs(finite - limit).max())


def gamma_table(m: int, n: int, centered: bool = False):
    """Rows ``(s, t, limit, finite_n, error)`` over ``s, t in {0, 1/m, ..., 1}``.

    The finite-``n`` value uses ``j = floor(n s)``.
    """
    f = gamma_centered if centered else gamma
    rows = []
    for a in range(m + 1):
        for b in range(m + 1):
            s, t = a / m, b / m
            lim = f(s, t)
            fin = gamma_finite_n(n, (n * a) // m, (n * b) // m, centered)
            rows.append((s, t, lim, fin, abs(fin - lim)))
    return rows
