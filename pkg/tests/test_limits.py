import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from odsup.limits import (
    gamma,
    gamma_centered,
    gamma_finite_n,
    gamma_matrix,
    gamma_table,
    grid_error,
    u_limit,
)

unit = st.floats(0.0, 1.0)


def test_corner_values():
    assert gamma(1.0, 1.0) == pytest.approx(4.0, abs=1e-12)
    assert gamma_centered(1.0, 1.0) == pytest.approx(0.0, abs=1e-12)
    assert u_limit(1.0) == 1.0 and u_limit(0.0) == 0.0


def test_hand_value_first_branch():
    # 4 * 0.25 * (2 - 0.5 - 0.125 - 0.0625 / 3) = 1.3541666...
    assert gamma(0.25, 0.5) == pytest.approx(1.3541666666666667, abs=1e-15)
    assert gamma_finite_n(10_000, 2500, 5000) == pytest.approx(gamma(0.25, 0.5), abs=5e-3)


def test_finite_n_exact_values():
    n = 40
    assert gamma_finite_n(n, 0, 17) == 0.0
    assert gamma_finite_n(n, n, n) == pytest.approx(4.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(unit, unit)
def test_symmetry_and_edges(s, t):
    assert gamma(s, t) == gamma(t, s)
    assert gamma(0.0, t) == 0.0
    assert gamma_centered(s, 1.0) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("s", [0.1, 0.3, 0.5])
@pytest.mark.parametrize("delta", [1e-3, 1e-4])
def test_branch_continuity(s, delta):
    t_hi, t_lo = 1 - s + delta, 1 - s - delta
    assert abs(gamma(s, t_hi) - gamma(s, t_lo)) <= 10 * delta


@pytest.mark.parametrize("s", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_no_jump_at_branch_boundary(s):
    # the gap shrinks linearly with delta (slope up to ~24 s^2 near s = 1), so no jump
    gaps = [abs(gamma(s, 1 - s + d) - gamma(s, 1 - s - d)) for d in (1e-3, 1e-4, 1e-5)]
    assert gaps[1] <= 0.11 * gaps[0] + 1e-12
    assert gaps[2] <= 0.11 * gaps[1] + 1e-12


def test_out_of_range():
    with pytest.raises(ValueError):
        gamma(-0.1, 0.5)
    with pytest.raises(ValueError):
        gamma(0.5, 1.2)


@pytest.mark.parametrize("centered", [False, True])
def test_rate_of_convergence(centered):
    errs = [grid_error(n, 20, centered) for n in (500, 1000, 2000, 4000)]
    ratios = [b / a for a, b in zip(errs, errs[1:])]
    assert all(0.3 <= r <= 0.7 for r in ratios), ratios


def test_grid_error_requires_exact_points():
    with pytest.raises(ValueError):
        grid_error(510, 20)


@pytest.mark.parametrize("centered", [False, True])
def test_positive_semidefinite(centered):
    pts = np.arange(1, 26) / 25
    eig = np.linalg.eigvalsh(gamma_matrix(pts, centered))
    assert eig.min() >= -1e-8


def test_table_rows():
    rows = gamma_table(4, 400)
    assert len(rows) == 25
    for s, t, lim, fin, err in rows:
        assert lim == gamma(s, t)
        assert err == abs(fin - lim) and err < 0.05
