import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from rmtcorr.errors import DomainError
from rmtcorr.rmt import (classify_spectrum, density_curve, histogram_vs_density,
                         mp_bounds, mp_density, splitmix64, standard_normals,
                         surrogate_ensemble, surrogate_spectrum)

from .oracles import normals_reference, splitmix64_reference


class TestGenerator:
    @pytest.mark.parametrize("seed", [0, 1, 12345, -1, 2 ** 63, 2 ** 64 - 1])
    def test_matches_integer_reference(self, seed):
        ours = splitmix64(seed, 16)
        assert [int(x) for x in ours] == splitmix64_reference(seed, 16)

    def test_normals_match_scalar_reference(self):
        ours = standard_normals(987654321, 101)
        ref = normals_reference(987654321, 101)
        np.testing.assert_allclose(ours, ref, rtol=0, atol=5e-14)

    def test_deterministic(self):
        np.testing.assert_array_equal(standard_normals(42, 1000),
                                      standard_normals(42, 1000))

    def test_moments(self):
        draws = standard_normals(5, 200000)
        assert abs(draws.mean()) < 0.01
        assert abs(draws.std() - 1.0) < 0.01

    def test_odd_count(self):
        assert standard_normals(6, 7).shape == (7,)
        np.testing.assert_array_equal(standard_normals(6, 7),
                                      standard_normals(6, 8)[:7])


class TestBounds:
    def test_reference_ratio_19_4(self):
        model = mp_bounds(19.4)
        assert model.lam_minus == pytest.approx(0.597, abs=5e-4)
        assert model.lam_plus == pytest.approx(1.506, abs=5e-4)

    def test_reference_ratio_1_95(self):
        model = mp_bounds(1.95)
        assert model.lam_plus == pytest.approx(2.945, abs=5e-4)
        assert round(model.lam_minus, 2) == 0.08

    def test_q_one(self):
        model = mp_bounds(1.0)
        assert model.lam_minus == 0.0
        assert model.lam_plus == 4.0

    def test_q_below_one_rejected(self):
        with pytest.raises(DomainError, match="out of scope"):
            mp_bounds(0.5)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(1.0, 100.0))
    def test_algebraic_identities(self, q):
        model = mp_bounds(q)
        assert 0.0 <= model.lam_minus < model.lam_plus
        assert model.lam_plus * model.lam_minus == pytest.approx(
            (1.0 - 1.0 / q) ** 2, abs=1e-12)
        assert model.lam_plus + model.lam_minus == pytest.approx(
            2.0 * (1.0 + 1.0 / q), abs=1e-12)


class TestDensity:
    def test_vanishes_at_bounds(self):
        model = mp_bounds(3.0)
        assert mp_density(model, model.lam_minus) == 0.0
        assert mp_density(model, model.lam_plus) == 0.0
        assert mp_density(model, model.lam_minus - 0.5) == 0.0
        assert mp_density(model, model.lam_plus + 0.5) == 0.0

    def test_hand_evaluated_point(self):
        # Q=1: density at lam=2 is sqrt((4-2)*2)/(2*pi*2) = 1/(2*pi)
        model = mp_bounds(1.0)
        assert mp_density(model, 2.0) == pytest.approx(1.0 / (2.0 * math.pi), abs=1e-15)

    def test_zero_at_origin_for_q_one(self):
        assert mp_density(mp_bounds(1.0), 0.0) == 0.0

    def test_positive_inside_support(self):
        model = mp_bounds(2.5)
        grid = np.linspace(model.lam_minus + 1e-9, model.lam_plus - 1e-9, 401)
        assert (mp_density(model, grid) > 0.0).all()

    @pytest.mark.parametrize("q", [1.0, 1.95, 5.0, 19.4])
    def test_unit_mass(self, q):
        model = mp_bounds(q)
        mass, _ = integrate.quad(lambda x: mp_density(model, x),
                                 model.lam_minus, model.lam_plus, limit=200)
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_curve_grid(self):
        model = mp_bounds(4.0)
        grid, dens = density_curve(model, points=512)
        assert grid.shape == dens.shape == (512,)
        assert grid[0] == pytest.approx(model.lam_minus - 0.1)
        assert grid[-1] == pytest.approx(model.lam_plus + 0.1)
        assert (dens >= 0.0).all()


class TestClassification:
    def test_reference_extremes(self):
        model = mp_bounds(19.4)
        cls = classify_spectrum(np.array([9.0143, 0.0521]), model)
        np.testing.assert_array_equal(cls.above, [9.0143])
        np.testing.assert_array_equal(cls.below, [0.0521])
        assert cls.bulk.size == 0

    def test_degenerate_spectrum_all_bulk(self):
        cls = classify_spectrum(np.ones(6), mp_bounds(4.0))
        assert cls.counts == (0, 6, 0)

    def test_bounds_count_as_bulk(self):
        model = mp_bounds(2.0)
        cls = classify_spectrum(np.array([model.lam_minus, model.lam_plus]), model)
        assert cls.counts == (0, 2, 0)

    def test_partition(self):
        model = mp_bounds(3.0)
        values = np.linspace(0.0, 4.0, 23)
        cls = classify_spectrum(values, model)
        assert cls.below.size + cls.bulk.size + cls.above.size == values.size
        combined = np.sort(np.concatenate([cls.below, cls.bulk, cls.above]))
        np.testing.assert_array_equal(combined, np.sort(values))

    def test_accepts_decomposition(self):
        sd = surrogate_spectrum(5, 60, 0)
        cls = classify_spectrum(sd, mp_bounds(12.0))
        assert sum(cls.counts) == 5


class TestSurrogates:
    def test_same_seed_bitwise_identical(self):
        first = surrogate_spectrum(8, 50, 2024)
        second = surrogate_spectrum(8, 50, 2024)
        np.testing.assert_array_equal(first.eigenvalues, second.eigenvalues)
        np.testing.assert_array_equal(first.eigenvectors, second.eigenvectors)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_long_series_pair_near_identity(self, seed):
        sd = surrogate_spectrum(2, 100000, seed)
        assert np.abs(sd.eigenvalues - 1.0).max() < 0.05

    def test_trace_equals_n(self):
        sd = surrogate_spectrum(13, 40, 3)
        assert sd.eigenvalues.sum() == pytest.approx(13.0, abs=1e-9)

    def test_mostly_bulk_at_high_q(self):
        model = mp_bounds(388 / 20)
        for seed in (0, 7, 123):
            cls = classify_spectrum(surrogate_spectrum(20, 388, seed), model)
            assert cls.counts[1] >= 18

    def test_preconditions(self):
        with pytest.raises(DomainError):
            surrogate_spectrum(1, 50, 0)
        with pytest.raises(DomainError):
            surrogate_spectrum(10, 9, 0)
        with pytest.raises(DomainError):
            surrogate_ensemble(4, 20, 0)


class TestHistogramComparison:
    def test_masses_sum_to_one(self):
        spectra = surrogate_ensemble(20, 100, 10, base_seed=50)
        pooled = np.concatenate([sd.eigenvalues for sd in spectra])
        comp = histogram_vs_density(pooled, mp_bounds(5.0), bin_width=0.1)
        assert comp.empirical_mass.sum() == pytest.approx(1.0, abs=1e-12)
        assert comp.analytic_mass.sum() == pytest.approx(1.0, abs=1e-6)
        assert 0.0 <= comp.l1_distance <= 2.0

    def test_distance_shrinks_with_more_data(self):
        model = mp_bounds(5.0)
        small = np.concatenate(
            [sd.eigenvalues for sd in surrogate_ensemble(10, 50, 4, base_seed=0)])
        large = np.concatenate(
            [sd.eigenvalues for sd in surrogate_ensemble(60, 300, 20, base_seed=0)])
        d_small = histogram_vs_density(small, model, bin_width=0.1).l1_distance
        d_large = histogram_vs_density(large, model, bin_width=0.1).l1_distance
        assert d_large < d_small

    def test_grid_covers_support_and_values(self):
        model = mp_bounds(2.0)
        values = np.array([0.001, 1.0, 4.5])
        comp = histogram_vs_density(values, model, bin_width=0.05)
        assert comp.bin_edges[0] <= min(values.min(), model.lam_minus)
        assert comp.bin_edges[-1] > max(values.max(), model.lam_plus)

    def test_bad_inputs(self):
        model = mp_bounds(2.0)
        with pytest.raises(DomainError):
            histogram_vs_density(np.array([1.0]), model, bin_width=0.0)
        with pytest.raises(DomainError):
            histogram_vs_density(np.array([]), model)
