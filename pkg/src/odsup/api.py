"""End-to-end IID test: kernel sums, statistic, jackknife terms, bootstrap."""

from dataclasses import dataclass

import numpy as np

from .bootstrap import BootstrapConfig, BootstrapResult, run_bootstrap
from .hajek import JackknifeTerms, jackknife_terms
from .kernel import EXPNEG, Kernel, ObservationSet, lag_sums
from .uprocess import UProcessGrid, build_uprocess


@dataclass(frozen=True)
class IIDTestResult:
    grid: UProcessGrid
    terms: JackknifeTerms
    bootstrap: BootstrapResult
    alpha: float

    @property
    def statistic(self) -> float:
        return self.grid.T

    @property
    def p_value(self) -> float:
        return self.bootstrap.p_value

    @property
    def critical_value(self) -> float:
        return self.bootstrap.c_alpha

    @property
    def reject(self) -> bool:
        return self.bootstrap.p_value < self.alpha


def iid_test(obs, kernel: Kernel = EXPNEG, config: BootstrapConfig = None) -> IIDTestResult:
    """Test whether ``obs`` is an IID sequence.

    ``obs`` is an :class:`ObservationSet` or anything ``np.asarray`` turns into
    an ``(n, p)`` (or length-``n``) array of vector observations.
    """
    if not isinstance(obs, ObservationSet):
        obs = ObservationSet.from_vectors(np.asarray(obs, dtype=np.float64))
    config = config or BootstrapConfig()
    lags = lag_sums(kernel, obs)
    grid = build_uprocess(lags)
    terms = jackknife_terms(lags, grid)
    boot = run_bootstrap(terms, grid.T, config)
    return IIDTestResult(grid=grid, terms=terms, bootstrap=boot, alpha=config.alpha)
