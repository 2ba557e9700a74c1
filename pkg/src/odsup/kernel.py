"""Symmetric pairwise kernels and their lag-grouped sums.

Observations come in three forms:

* ``"vectors"``: an ``(n, p)`` array of real observations;
* ``"kernel"``: a precomputed symmetric ``(n, n)`` kernel matrix;
* ``"distance"``: a precomputed symmetric ``(n, n)`` distance matrix, turned
  into kernel values by a scalar transform.

Diagonal entries of precomputed matrices are never read, so callers need not
zero them. Indices are 0-based throughout.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import math

import numpy as np

from . import _accel

SYMMETRY_RTOL = 1e-9

VECTOR_KERNELS = {
    "expneg": _accel.KERNEL_EXPNEG,
    "invquartic": _accel.KERNEL_INVQUARTIC,
    "const": _accel.KERNEL_CONST,
}

DISTANCE_TRANSFORMS = ("expneg", "invquartic")


class InputError(ValueError):
    """Observations or kernel specification are malformed."""


class KernelEvaluationError(ArithmeticError):
    """A kernel value came out NaN or infinite."""


@dataclass(frozen=True)
class ObservationSet:
    """A sample of ``n`` observations, as vectors or as a pairwise matrix."""

    kind: str
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.kind not in ("vectors", "kernel", "distance"):
            raise InputError(f"unknown observation kind {self.kind!r}")
        arr = np.asarray(self.data, dtype=np.float64)
        if self.kind == "vectors":
            if arr.ndim == 1:
                arr = arr[:, None]
            if arr.ndim != 2:
                raise InputError("vector observations must form a 2-D array (n, p)")
        else:
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise InputError(f"{self.kind} matrix must be square, got shape {arr.shape}")
            arr = _symmetrized(arr, self.kind)
        if arr.shape[0] < 3:
            raise InputError(f"need at least 3 observations, got {arr.shape[0]}")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_vectors(cls, X):
        return cls("vectors", X)

    @classmethod
    def from_kernel_matrix(cls, K):
        return cls("kernel", K)

    @classmethod
    def from_distance_matrix(cls, D):
        return cls("distance", D)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> Optional[int]:
        """Dimension of vector observations; ``None`` for matrix input."""
        return self.data.shape[1] if self.kind == "vectors" else None


def _symmetrized(M, kind):
    off = M.copy()
    np.fill_diagonal(off, 0.0)
    if not np.all(np.isfinite(off)):
        raise KernelEvaluationError(f"{kind} matrix has non-finite off-diagonal entries")
    scale = np.abs(off).max()
    asym = np.abs(off - off.T).max()
    if asym > SYMMETRY_RTOL * scale:
        raise InputError(
            f"{kind} matrix is not symmetric (max |M - M^T| = {asym:.3g}, scale {scale:.3g})"
        )
    return 0.5 * (off + off.T)


@dataclass(frozen=True)
class Kernel:
    """A symmetric kernel ``h``.

    ``kind`` is one of ``"expneg"`` (exp(-||x - y||)), ``"invquartic"``
    (1 / (||x - y||**4 + 1)), ``"const"`` (h = 1, a diagnostic),
    ``"precomputed"`` (read a kernel matrix) or ``"of_distance"`` (apply
    ``transform`` to a distance matrix). ``transform`` is a built-in name from
    :data:`DISTANCE_TRANSFORMS` or a vectorised callable.
    """

    kind: str
    transform: Optional[Union[str, Callable[[np.ndarray], np.ndarray]]] = None

    def __post_init__(self):
        if self.kind in VECTOR_KERNELS or self.kind == "precomputed":
            if self.transform is not None:
                raise InputError(f"kernel {self.kind!r} takes no transform")
        elif self.kind == "of_distance":
            if isinstance(self.transform, str):
                if self.transform not in DISTANCE_TRANSFORMS:
                    raise InputError(f"unknown distance transform {self.transform!r}")
            elif not callable(self.transform):
                raise InputError("of_distance kernel needs a transform")
        else:
            raise InputError(f"unknown kernel kind {self.kind!r}")

    @property
    def descriptor(self) -> str:
        if self.kind == "of_distance":
            name = self.transform if isinstance(self.transform, str) else "custom"
            return f"of_distance:{name}"
        return self.kind

    def check_compatible(self, obs: ObservationSet):
        if self.kind == "const":
            return
        wanted = {"precomputed": "kernel", "of_distance": "distance"}.get(self.kind, "vectors")
        if obs.kind != wanted:
            raise InputError(f"kernel {self.descriptor!r} needs {wanted} input, got {obs.kind}")


EXPNEG = Kernel("expneg")
INVQUARTIC = Kernel("invquartic")
CONSTANT = Kernel("const")
PRECOMPUTED = Kernel("precomputed")


def _scalar_of_distance(name, dist):
    if name == "expneg":
        return math.exp(-dist)
    return 1.0 / (dist**4 + 1.0)


def _apply_transform(transform, D):
    if isinstance(transform, str):
        return _accel.kernel_of_distance_np(D, DISTANCE_TRANSFORMS.index(transform))
    return np.broadcast_to(np.asarray(transform(D), dtype=np.float64), D.shape)


def eval_pair(kernel: Kernel, obs: ObservationSet, i: int, j: int) -> float:
    """Return ``h(X_i, X_j)`` for distinct 0-based indices ``i`` and ``j``."""
    kernel.check_compatible(obs)
    n = obs.n
    for idx in (i, j):
        if not 0 <= idx < n:
            raise IndexError(f"index {idx} out of range for n={n}")
    if i == j:
        raise ValueError("diagonal pairs are excluded; i must differ from j")
    if kernel.kind == "const":
        value = 1.0
    elif kernel.kind == "precomputed":
        value = float(obs.data[i, j])
    elif kernel.kind == "of_distance":
        dist = float(obs.data[i, j])
        if isinstance(kernel.transform, str):
            value = _scalar_of_distance(kernel.transform, dist)
        else:
            value = float(np.ravel(kernel.transform(np.array([dist])))[0])
    else:
        diff = obs.data[i] - obs.data[j]
        value = _scalar_of_distance(kernel.kind, math.sqrt(float(np.dot(diff, diff))))
    if not math.isfinite(value):
        raise KernelEvaluationError(f"h(X_{i}, X_{j}) = {value}")
    return value


@dataclass(frozen=True)
class LagSums:
    """Kernel sums grouped by index gap.

    ``by_lag[d]`` is the sum of ``h(X_i, X_{i+d})`` over ``i`` for
    ``d = 1 .. n-1``; ``by_lag[0]`` is 0. ``rows[i]`` is the sum of
    ``h(X_i, X_j)`` over ``j != i``.
    """

    n: int
    by_lag: np.ndarray
    rows: np.ndarray


def lag_sums(kernel: Kernel, obs: ObservationSet) -> LagSums:
    """Group the off-diagonal kernel sum by lag, keeping O(n) memory for vectors."""
    kernel.check_compatible(obs)
    n = obs.n
    if kernel.kind == "const":
        by_lag = np.arange(n, 0, -1, dtype=np.float64)
        by_lag[0] = 0.0
        rows = np.full(n, n - 1.0)
    elif obs.kind == "vectors":
        by_lag, rows = _accel.lag_sums_vectors(obs.data, VECTOR_KERNELS[kernel.kind])
    else:
        H = obs.data if kernel.kind == "precomputed" else _apply_transform(kernel.transform, obs.data)
        H = np.array(H, dtype=np.float64)
        np.fill_diagonal(H, 0.0)
        by_lag = np.zeros(n)
        for d in range(1, n):
            by_lag[d] = np.diagonal(H, d).sum()
        rows = H.sum(axis=1)
    if not (np.all(np.isfinite(by_lag)) and np.all(np.isfinite(rows))):
        raise KernelEvaluationError("kernel produced non-finite values")
    return LagSums(n=n, by_lag=by_lag, rows=rows)


def kernel_matrix(kernel: Kernel, obs: ObservationSet) -> np.ndarray:
    """Dense ``(n, n)`` kernel matrix with zero diagonal (for tests and small n)."""
    kernel.check_compatible(obs)
    n = obs.n
    if kernel.kind == "const":
        H = np.ones((n, n))
    elif kernel.kind == "precomputed":
        H = np.array(obs.data)
    elif kernel.kind == "of_distance":
        H = _apply_transform(kernel.transform, obs.data)
    else:
        X = obs.data
        D = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2))
        H = _accel.kernel_of_distance_np(D, VECTOR_KERNELS[kernel.kind])
    H = np.array(H, dtype=np.float64)
    np.fill_diagonal(H, 0.0)
    return H
