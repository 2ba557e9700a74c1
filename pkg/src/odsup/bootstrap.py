"""Gaussian multiplier bootstrap of the centred U-process.

Replicate ``b`` draws ``eps ~ N(0, I_n)`` from its own counter-based substream
and evaluates ``sqrt(n) * max_k |sum_i eps_i a_i nu_centered(n, i, k)|``.
Two evaluation paths exist:

* ``"naive"`` materialises the ``(n + 1, n)`` weight table, O(n^2) per replicate;
* ``"fast"`` uses prefix sums, O(n) per replicate (see ``_accel``).

``"both"`` runs the two and checks they agree before returning the fast values.
"""

from dataclasses import dataclass, field

import math

import numpy as np

from . import _accel, rng
from .hajek import JackknifeTerms, nu_centered_table
from .uprocess import weight_grid

PATHS = ("naive", "fast", "both")
PATH_AGREEMENT_RTOL = 1e-10


@dataclass(frozen=True)
class BootstrapConfig:
    B: int = 300
    alpha: float = 0.05
    seed: int = 0
    path: str = "fast"
    plus_one: bool = False

    def __post_init__(self):
        if int(self.B) != self.B or self.B < 1:
            raise ValueError(f"B must be a positive integer, got {self.B}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.path not in PATHS:
            raise ValueError(f"path must be one of {PATHS}, got {self.path!r}")
        rng.check_seed(self.seed)


@dataclass(frozen=True)
class BootstrapResult:
    That: np.ndarray = field(repr=False)
    c_alpha: float
    p_value: float
    seed_used: int
    degenerate: bool = False


def multipliers(seed: int, B: int, n: int) -> np.ndarray:
    """``(B, n)`` standard normals; row ``b`` comes from substream ``b``."""
    return rng.normal_matrix(seed, rng.DOMAIN_BOOTSTRAP, B, n)


def replicate_statistics_naive(eps, a):
    eps = np.atleast_2d(np.asarray(eps, dtype=np.float64))
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    table = nu_centered_table(n)[1:n]
    proc = (eps * a[None, :]) @ table.T
    return math.sqrt(n) * np.abs(proc).max(axis=1)


def replicate_statistics_fast(eps, a):
    a = np.asarray(a, dtype=np.float64)
    return _accel.replicate_stats_fast(eps, a, weight_grid(a.shape[0]))


def replicate_statistics(eps, terms: JackknifeTerms, path="fast"):
    """Bootstrap statistics for each row of ``eps``."""
    eps = np.atleast_2d(np.asarray(eps, dtype=np.float64))
    if eps.shape[1] != terms.n:
        raise ValueError(f"multiplier length {eps.shape[1]} != n = {terms.n}")
    if path == "naive":
        return replicate_statistics_naive(eps, terms.a)
    fast = replicate_statistics_fast(eps, terms.a)
    if path == "both":
        naive = replicate_statistics_naive(eps, terms.a)
        scale = max(float(np.abs(naive).max()), np.finfo(float).tiny)
        if np.abs(fast - naive).max() > PATH_AGREEMENT_RTOL * scale:
            raise ArithmeticError("fast and naive bootstrap paths disagree")
    elif path != "fast":
        raise ValueError(f"unknown path {path!r}")
    return fast


def replicate_statistic(eps, terms: JackknifeTerms, n=None, path="fast") -> float:
    """One bootstrap statistic for a single multiplier vector."""
    eps = np.asarray(eps, dtype=np.float64)
    if eps.ndim != 1 or (n is not None and eps.shape[0] != n):
        raise ValueError("eps must be a vector of length n")
    return float(replicate_statistics(eps[None, :], terms, path)[0])


def order_statistic_rank(B: int, alpha: float) -> int:
    """1-based rank ``ceil((1 - alpha) B)`` of the critical value.

    ``(1 - alpha) B`` is rounded to 9 decimals first so that, e.g.,
    ``alpha = 0.05, B = 300`` gives 285 and not 286 through representation error.
    """
    return min(B, max(1, math.ceil(round((1.0 - alpha) * B, 9))))


def critical_value(That, alpha: float) -> float:
    """Smallest ``t`` whose empirical CDF over ``That`` reaches ``1 - alpha``."""
    That = np.asarray(That, dtype=np.float64)
    if That.size == 0:
        raise ValueError("no bootstrap statistics")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    m = order_statistic_rank(That.size, alpha)
    return float(np.partition(That, m - 1)[m - 1])


def p_value(T_n: float, That, plus_one: bool = False) -> float:
    """``1 - mean(T_n >= That)``; with ``plus_one`` the (B + 1) corrected form."""
    That = np.asarray(That, dtype=np.float64)
    B = That.size
    below = int(np.count_nonzero(T_n >= That))
    if plus_one:
        return (1 + B - below) / (B + 1)
    return (B - below) / B


def run_bootstrap(terms: JackknifeTerms, T_n: float, cfg: BootstrapConfig) -> BootstrapResult:
    eps = multipliers(cfg.seed, cfg.B, terms.n)
    That = replicate_statistics(eps, terms, cfg.path)
    That.setflags(write=False)
    if terms.degenerate:
        # point-mass bootstrap law: nothing to calibrate against, never reject
        return BootstrapResult(That=That, c_alpha=0.0, p_value=1.0, seed_used=cfg.seed, degenerate=True)
    return BootstrapResult(
        That=That,
        c_alpha=critical_value(That, cfg.alpha),
        p_value=p_value(T_n, That, cfg.plus_one),
        seed_used=cfg.seed,
    )
