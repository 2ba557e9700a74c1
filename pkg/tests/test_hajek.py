import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from odsup import EXPNEG, PRECOMPUTED, ObservationSet, build_uprocess, jackknife_terms, lag_sums, nu, nu_centered
from odsup.hajek import ProjectionWeights, nu_centered_column, nu_centered_table, nu_column
from odsup.uprocess import weight_fn

from .conftest import scalar_product_obs


def terms_for(kernel, obs):
    lags = lag_sums(kernel, obs)
    return jackknife_terms(lags, build_uprocess(lags))


class TestNu:
    @pytest.mark.parametrize("n", [3, 5, 12])
    def test_full_window(self, n):
        for i in range(n):
            assert nu(n, i, n) == pytest.approx(2 / n, abs=1e-15)
            assert nu_centered(n, i, n) == pytest.approx(0.0, abs=1e-15)
            assert nu(n, i, 0) == 0.0
            assert nu_centered(n, i, 0) == 0.0

    def test_hand_values(self):
        # first observation, n = 5, k = 2: 2/20 * (min(2, 0) + min(2, 4))
        assert nu(5, 0, 2) == pytest.approx(0.2, abs=1e-15)
        # 0.2 - (2/5) * (2 * 7 / 20)
        assert nu_centered(5, 0, 2) == pytest.approx(-0.08, abs=1e-15)

    def test_index_errors(self):
        with pytest.raises(IndexError):
            nu(5, 5, 1)
        with pytest.raises(ValueError):
            nu(5, 0, 6)

    def test_columns_and_table_agree_with_scalar(self):
        n = 9
        table = nu_centered_table(n)
        pw = ProjectionWeights(n)
        for k in range(n + 1):
            np.testing.assert_allclose(nu_column(n, k), [nu(n, i, k) for i in range(n)], atol=1e-16)
            np.testing.assert_allclose(nu_centered_column(n, k), table[k], atol=1e-16)
            np.testing.assert_allclose(pw.column(k, centered=True), table[k], atol=1e-16)
            assert pw.nu_centered(3, k) == nu_centered(n, 3, k)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 2000), st.data())
    def test_sum_identities(self, n, data):
        k = data.draw(st.integers(0, n))
        col = nu_column(n, k)
        assert abs(col.sum() - 2 * weight_fn(n, k)) <= 1e-12
        assert abs(nu_centered_column(n, k).sum()) <= 1e-12
        assert np.all(col >= 0.0)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 500), st.data())
    def test_mirror_symmetry(self, n, data):
        i = data.draw(st.integers(0, n - 1))
        k = data.draw(st.integers(0, n))
        assert nu(n, i, k) == nu(n, n - 1 - i, k)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 500), st.data())
    def test_lipschitz_bound(self, n, data):
        i = data.draw(st.integers(0, n - 1))
        j = data.draw(st.integers(0, n))
        k = data.draw(st.integers(0, n))
        bound = 4.0 / n * (abs(k - j) / n + 1.0 / n)
        assert abs(nu(n, i, k) - nu(n, i, j)) <= bound + 1e-15


class TestJackknife:
    def test_constant_kernel(self):
        terms = terms_for(PRECOMPUTED, ObservationSet.from_kernel_matrix(np.ones((12, 12))))
        np.testing.assert_array_equal(terms.a, 0.0)
        assert terms.degenerate

    def test_three_point_hand_enumeration(self):
        # r = (0, 2, 2), U(1) = 2/3, so a = r/2 - 2/3
        terms = terms_for(PRECOMPUTED, scalar_product_obs([0.0, 1.0, 2.0]))
        np.testing.assert_allclose(terms.a, [-2 / 3, 1 / 3, 1 / 3], atol=1e-15)
        assert not terms.degenerate

    def test_matches_row_sum_oracle(self, rng):
        obs = ObservationSet.from_vectors(rng.normal(size=(15, 2)))
        n = 15
        H = np.array([[0.0 if i == j else np.exp(-np.linalg.norm(obs.data[i] - obs.data[j]))
                       for j in range(n)] for i in range(n)])
        U1 = H.sum() / (n * n - n)
        np.testing.assert_allclose(terms_for(EXPNEG, obs).a, H.sum(axis=1) / (n - 1) - U1, atol=1e-14)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(3, 80))
    def test_centering(self, seed, n):
        obs = ObservationSet.from_vectors(np.random.default_rng(seed).normal(size=(n, 3)))
        a = terms_for(EXPNEG, obs).a
        assert abs(a.sum()) <= 1e-10 * np.abs(a).sum()

    def test_immutable(self, rng):
        terms = terms_for(EXPNEG, ObservationSet.from_vectors(rng.normal(size=(6, 2))))
        with pytest.raises(ValueError):
            terms.a[0] = 1.0

    def test_mismatched_inputs(self, rng):
        a = lag_sums(EXPNEG, ObservationSet.from_vectors(rng.normal(size=(6, 2))))
        b = lag_sums(EXPNEG, ObservationSet.from_vectors(rng.normal(size=(7, 2))))
        with pytest.raises(ValueError):
            jackknife_terms(a, build_uprocess(b))
