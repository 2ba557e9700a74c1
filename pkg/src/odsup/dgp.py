"""Simulation models: the IID null and the non-IID alternatives.

All models are driven by iid standard-normal innovation vectors ``eps_i``
of dimension ``p``; ``e`` is the all-ones vector. Rows are 0-based in code
but formulas below use 1-based ``i`` as in the usual time-series notation.

=========== =================================================================
model       definition
=========== =================================================================
M0          ``X_i = eps_i``
MD          ``X_i = i mu e + eps_i``
VCP         ``X_i = s_i eps_i``, ``s_i = 1`` for ``i <= floor(n/2)``, else ``sigma``
AR          ``X_1, X_2 = eps_1, eps_2``; ``X_i = a (X_{i-1} - X_{i-2}) + eps_i``
MA          ``X_1 = eps_1``; ``X_i = eps_i + b eps_{i-1}``
MDMA        ``X_1 = mu e + eps_1``; ``X_i = i mu e + eps_i + b eps_{i-1}``
VCPMA       ``X_1 = eps_1``; ``X_i = s_i (eps_i + b eps_{i-1})``
Cluster     ``X_i = Y_{floor((i-1)/m) + 1}`` with ``Y_k`` iid N(0, I)
ChangePoint independent; N(0, I) for ``i <= floor(n tau)``, N(delta e, I) after
=========== =================================================================

``ChangePoint`` uses a mean-shift preset for the two segment laws; ``delta``
defaults to 1.
"""

from dataclasses import dataclass, field
from typing import Mapping

import math

import numpy as np

from . import rng
from .kernel import ObservationSet

PARAMS = {
    "M0": (),
    "MD": ("mu",),
    "VCP": ("sigma",),
    "AR": ("a",),
    "MA": ("b",),
    "MDMA": ("mu", "b"),
    "VCPMA": ("sigma", "b"),
    "Cluster": ("m",),
    "ChangePoint": ("tau", "delta"),
}
OPTIONAL = {"ChangePoint": {"delta": 1.0}}
ALL_PARAMS = ("mu", "sigma", "a", "b", "m", "tau", "delta")
MODELS = tuple(PARAMS)


@dataclass(frozen=True)
class DgpSpec:
    model: str
    n: int
    p: int = 5
    params: Mapping[str, float] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.model not in PARAMS:
            raise ValueError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        rng.check_seed(self.seed)
        allowed = PARAMS[self.model]
        extra = set(self.params) - set(allowed)
        if extra:
            raise ValueError(f"model {self.model} does not take {sorted(extra)}")
        full = dict(OPTIONAL.get(self.model, {}))
        full.update(self.params)
        missing = [k for k in allowed if k not in full]
        if missing:
            raise ValueError(f"model {self.model} requires {missing}")
        if self.model == "Cluster":
            if int(full["m"]) != full["m"] or full["m"] < 1:
                raise ValueError("Cluster requires an integer m >= 1")
            full["m"] = int(full["m"])
        if self.model == "ChangePoint" and not 0.0 < full["tau"] < 1.0:
            raise ValueError("ChangePoint requires 0 < tau < 1")
        if self.model in ("VCP", "VCPMA") and full["sigma"] < 0:
            raise ValueError("sigma must be nonnegative")
        object.__setattr__(self, "params", full)

    def param(self, name):
        return self.params[name]

    def key(self):
        return (self.model, tuple(sorted(self.params.items())), self.n)


def innovations(seed: int, count: int, p: int) -> np.ndarray:
    """``(count, p)`` iid standard normals from the data domain of ``seed``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return rng.normals(seed, rng.DOMAIN_DATA, 0, count * p).reshape(count, p)


def _scales(n, sigma):
    s = np.ones(n)
    s[n // 2:] = sigma
    return s[:, None]


def generate_array(spec: DgpSpec) -> np.ndarray:
    n, p, model = spec.n, spec.p, spec.model
    eps = innovations(spec.seed, n, p)
    idx = np.arange(1, n + 1, dtype=np.float64)[:, None]
    if model == "M0":
        return eps
    if model == "MD":
        return idx * spec.param("mu") + eps
    if model == "VCP":
        return _scales(n, spec.param("sigma")) * eps
    if model == "AR":
        a = spec.param("a")
        X = eps.copy()
        for i in range(2, n):
            X[i] = a * (X[i - 1] - X[i - 2]) + eps[i]
        return X
    if model in ("MA", "MDMA", "VCPMA"):
        ma = eps.copy()
        ma[1:] += spec.param("b") * eps[:-1]
        if model == "MA":
            return ma
        if model == "MDMA":
            return idx * spec.param("mu") + ma
        return _scales(n, spec.param("sigma")) * ma
    if model == "Cluster":
        m = spec.param("m")
        clusters = -(-n // m)
        Y = innovations(spec.seed, clusters, p)
        return Y[np.arange(n) // m]
    # ChangePoint
    X = eps.copy()
    # rounding first keeps e.g. floor(100 * 0.29) at 29
    X[math.floor(round(n * spec.param("tau"), 9)):] += spec.param("delta")
    return X


def generate(spec: DgpSpec) -> ObservationSet:
    return ObservationSet.from_vectors(generate_array(spec))
