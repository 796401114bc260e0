import math

import numpy as np
import pytest

from sparselog import graphcore, models, opalg, specgap


def phase_multiset_distance(a, b):
    """Max circular distance after sorting; adequate for well-separated multisets."""
    a = np.sort(opalg.wrap_phase(np.asarray(a)))
    b = np.sort(opalg.wrap_phase(np.asarray(b)))
    return float(np.max(specgap.circular_distance(a, b)))


class TestCoinedWalk:
    def test_construction(self, walk20):
        u = walk20.U
        assert u.shape == (40, 40)
        assert opalg.unitary_defect(u) < 1e-12
        np.testing.assert_allclose(np.linalg.norm(u, axis=0), 1.0, atol=1e-14)
        assert np.all(np.count_nonzero(np.abs(u) > 1e-15, axis=1) == 2)

    def test_coin_major_layout(self, walk20):
        u = walk20.U
        h = 1 / math.sqrt(2)
        # coin 0 at position 0 moves right, mixing both coin states of site 0
        assert u[1, 0] == pytest.approx(h) and u[1, 20] == pytest.approx(h)
        assert u[39, 0] == pytest.approx(h) and u[39, 20] == pytest.approx(-h)
        assert walk20.vertex_of(27) == 7

    def test_rejects_small_ring(self):
        with pytest.raises(ValueError):
            models.build_coined_walk(2)

    def test_walk_graph(self, walk20):
        assert walk20.graph.n == 40
        assert graphcore.max_degree(walk20.graph) == 4
        assert graphcore.check_z_local(walk20.U, walk20.graph, 0.0)[0]

    def test_formula_at_zero_momentum(self):
        assert models.walk_spectrum_formula(20, 0, +1) == pytest.approx((1 + 1j) / math.sqrt(2))
        assert models.walk_spectrum_formula(20, 0, -1) == pytest.approx((1 - 1j) / math.sqrt(2))
        with pytest.raises(ValueError):
            models.walk_spectrum_formula(20, 20, 1)

    def test_formula_on_unit_circle(self):
        for n in (3, 7, 20):
            for k in range(n):
                for s in (1, -1):
                    assert abs(models.walk_spectrum_formula(n, k, s)) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("n", [3, 4, 5, 8, 20, 21])
    def test_formula_is_symmetric_coin_spectrum(self, n):
        walk = models.build_coined_walk(n, coin=models.SYMMETRIC_COIN)
        phases = opalg.unitary_eigensystem(walk.U).phases
        assert phase_multiset_distance(phases, models.walk_formula_phases(n)) < 1e-8

    @pytest.mark.parametrize("n", [4, 8, 20])
    def test_hadamard_spectrum_is_quarter_turn_of_formula(self, n):
        # the Hadamard coin has determinant -1, the formula's blocks +1;
        # when 4 | n the two spectra differ by a factor of i
        phases = opalg.unitary_eigensystem(models.build_coined_walk(n).U).phases
        assert phase_multiset_distance(phases, models.walk_formula_phases(n) + math.pi / 2) < 1e-8

    def test_hadamard_determinant(self, walk20):
        assert np.linalg.det(walk20.U) == pytest.approx(1.0)  # (-1)^20
        blocks = np.linalg.det(models.HADAMARD)
        assert blocks == pytest.approx(-1.0)

    def test_gap_sweep(self):
        widths = [models.walk_gap_check(n).width for n in range(4, 41)]
        assert min(widths) >= math.pi / 2 - 1e-9

    def test_measured_gap_of_hadamard_walk(self, walk20):
        gap = specgap.find_gap(opalg.unitary_eigensystem(walk20.U).phases)
        assert gap.width == pytest.approx(math.pi / 2, abs=1e-9)


class TestFourier:
    @pytest.mark.parametrize("n", [2, 4, 8, 16])
    def test_fourth_power(self, n):
        q = models.build_fourier_op(n).Q
        assert opalg.unitary_defect(q) < 1e-12
        assert opalg.operator_norm(np.linalg.matrix_power(q, 4) - np.eye(n)) < 1e-10

    def test_n2_is_hadamard(self):
        np.testing.assert_allclose(models.build_fourier_op(2).Q, models.HADAMARD, atol=1e-15)

    @pytest.mark.parametrize("n", [2, 4, 5, 8, 16])
    def test_spectrum(self, n):
        phases = opalg.unitary_eigensystem(models.build_fourier_op(n).Q).phases
        roots = np.arange(4) * math.pi / 2
        assert np.all(specgap.circular_distance(phases[:, None], roots[None, :]).min(axis=1) < 1e-9)
        # small n miss a root (n = 2: {1, -1}; n = 4: no -i), leaving a half-circle gap
        expected = math.pi if n < 5 else math.pi / 2
        assert specgap.find_gap(phases).width == pytest.approx(expected, abs=1e-9)

    def test_fractional_powers(self):
        op = models.build_fourier_op(8)
        eps = 1e-6
        np.testing.assert_allclose(models.fractional_fourier(op, 0.0, eps), np.eye(8), atol=1e-14)
        assert opalg.operator_norm(models.fractional_fourier(op, 1.0, eps) - op.Q) <= eps
        half = models.fractional_fourier(op, 0.5, eps)
        assert opalg.operator_norm(half @ half - op.Q) <= 4 * eps
        assert opalg.unitary_defect(half) < 1e-12

    @pytest.mark.parametrize("a,b", [(0.3, 0.5), (0.25, 1.5), (-0.4, 1.1)])
    def test_composition(self, a, b):
        op = models.build_fourier_op(8)
        lhs = models.fractional_fourier(op, a, 1e-6) @ models.fractional_fourier(op, b, 1e-6)
        # both sides use the same F, so composition is exact up to roundoff
        assert opalg.operator_norm(lhs - models.fractional_fourier(op, a + b, 1e-6)) < 1e-12

    def test_log_is_cached(self):
        op = models.build_fourier_op(4)
        assert op.log_series(1e-4) is op.log_series(1e-4)

    def test_rejects_trivial_dimension(self):
        with pytest.raises(ValueError):
            models.build_fourier_op(1)


class TestRandomGapped:
    def test_reproducible(self):
        a = models.random_gapped_unitary(16, 1.0, 42)
        b = models.random_gapped_unitary(16, 1.0, 42)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, models.random_gapped_unitary(16, 1.0, 43))

    def test_unitary_with_forced_gap(self):
        for seed in range(10):
            u = models.random_gapped_unitary(32, 1.0, seed)
            assert opalg.unitary_defect(u) < 1e-10
            assert specgap.find_gap(opalg.unitary_eigensystem(u).phases).width >= 1.0

    def test_single_phase_near_pi(self):
        u = models.random_gapped_unitary(1, 2 * math.pi - 1e-3, 0)
        assert abs(np.angle(u[0, 0]) - math.pi) < 1e-3 / 2 + 1e-12 or abs(np.angle(u[0, 0]) + math.pi) < 1e-3

    def test_rejects_bad_gap(self):
        with pytest.raises(ValueError):
            models.random_gapped_unitary(4, 0.0, 1)
