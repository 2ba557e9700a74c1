"""Nonparametric test of the IID hypothesis via an off-diagonal sequential U-process."""

from .api import IIDTestResult, iid_test
from .bootstrap import BootstrapConfig, BootstrapResult, critical_value, p_value, run_bootstrap
from .dgp import DgpSpec, generate
from .hajek import JackknifeTerms, jackknife_terms, nu, nu_centered
from .kernel import (
    CONSTANT,
    EXPNEG,
    INVQUARTIC,
    PRECOMPUTED,
    InputError,
    Kernel,
    KernelEvaluationError,
    LagSums,
    ObservationSet,
    eval_pair,
    lag_sums,
)
from .uprocess import UProcessGrid, build_uprocess, weight_fn

__version__ = "0.1.0"

__all__ = [
    "BootstrapConfig", "BootstrapResult", "CONSTANT", "DgpSpec", "EXPNEG", "INVQUARTIC",
    "IIDTestResult", "InputError", "JackknifeTerms", "Kernel", "KernelEvaluationError",
    "LagSums", "ObservationSet", "PRECOMPUTED", "UProcessGrid", "build_uprocess",
    "critical_value", "eval_pair", "generate", "iid_test", "jackknife_terms", "lag_sums",
    "nu", "nu_centered", "p_value", "run_bootstrap", "weight_fn",
]
