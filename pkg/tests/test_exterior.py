import numpy as np
import pytest

from buresforms.errors import DegreeOverflowError, InvalidIndexError, InvalidMetricError
from buresforms.exterior import (PForm, basis, basis_position, hodge_star, levi_civita_sign,
                                 star_matrix, top_coefficient, wedge, wedge_matrix)
from buresforms.metric import MetricTensor
from buresforms.oracles import hodge_star_permutation_sum, random_spd, wedge_shuffle


def random_form(rng, p, n=8):
    return PForm(p, rng.normal(size=len(basis(p, n))), n)


class TestBasis:
    def test_sizes(self):
        assert [len(basis(p)) for p in range(9)] == [1, 8, 28, 56, 70, 56, 28, 8, 1]

    def test_lexicographic(self):
        b = basis(2)
        assert b[0] == (1, 2) and b[1] == (1, 3) and b[-1] == (7, 8)
        assert basis_position(4)[(5, 6, 7, 8)] == 69


class TestLeviCivita:
    def test_identity_and_transposition(self):
        assert levi_civita_sign(range(1, 9)) == 1
        assert levi_civita_sign([2, 1, 3, 4, 5, 6, 7, 8]) == -1

    def test_cycle(self):
        assert levi_civita_sign([2, 3, 1]) == 1
        assert levi_civita_sign([8, 1, 2, 3, 4, 5, 6, 7]) == -1

    def test_repeated_label_is_zero(self):
        assert levi_civita_sign([1, 1, 3]) == 0

    def test_out_of_range(self):
        with pytest.raises(InvalidIndexError):
            levi_civita_sign([0, 1, 2])
        with pytest.raises(InvalidIndexError):
            levi_civita_sign([1, 2], n=3)


class TestPForm:
    def test_from_dict_sorts_with_sign(self):
        f = PForm.from_dict({(2, 1): 3.0})
        assert f[(1, 2)] == -3.0

    def test_rejects_repeat_and_bad_degree(self):
        with pytest.raises(InvalidIndexError):
            PForm.from_dict({(1, 1): 1.0})
        with pytest.raises(DegreeOverflowError):
            PForm.zero(9)
        with pytest.raises(InvalidIndexError):
            PForm.basis_form((1, 9))

    def test_arithmetic(self):
        a = PForm.basis_form((1, 2))
        b = PForm.basis_form((3, 4), 2.0)
        np.testing.assert_allclose((a + b - a).coefficients, b.coefficients)
        np.testing.assert_allclose((-a * 2).coefficients, -2 * a.coefficients)

    def test_coefficients_immutable(self):
        f = PForm.zero(2)
        with pytest.raises(ValueError):
            f.coefficients[0] = 1.0


class TestWedge:
    def test_basis_examples(self):
        e1, e2 = PForm.basis_form((1,)), PForm.basis_form((2,))
        assert wedge(e1, e2)[(1, 2)] == 1.0
        assert wedge(e2, e1)[(1, 2)] == -1.0
        assert not np.any(wedge(e1, e1).coefficients)

    def test_graded_commutativity(self, rng):
        for p, q in [(1, 2), (2, 2), (3, 2), (1, 3)]:
            a, b = random_form(rng, p), random_form(rng, q)
            np.testing.assert_allclose(wedge(a, b).coefficients,
                                       (-1) ** (p * q) * wedge(b, a).coefficients, atol=1e-12)

    def test_associative(self, rng):
        a, b, c = random_form(rng, 1), random_form(rng, 2), random_form(rng, 2)
        np.testing.assert_allclose(wedge(wedge(a, b), c).coefficients,
                                   wedge(a, wedge(b, c)).coefficients, atol=1e-12)

    def test_matches_shuffle_oracle(self, rng):
        for p, q in [(1, 1), (2, 2), (1, 3), (2, 3)]:
            a, b = random_form(rng, p), random_form(rng, q)
            np.testing.assert_allclose(wedge(a, b).coefficients,
                                       wedge_shuffle(a, b).coefficients, atol=1e-12)

    def test_matrix_agrees(self, rng):
        a, b = random_form(rng, 4), random_form(rng, 2)
        np.testing.assert_allclose(wedge_matrix(a, 2) @ b.coefficients,
                                   wedge(a, b).coefficients, atol=1e-12)

    def test_overflow(self):
        with pytest.raises(DegreeOverflowError):
            wedge(PForm.zero(5), PForm.zero(4))


class TestHodgeStar:
    def test_euclidean_basis_form(self):
        e = MetricTensor.euclidean()
        star = hodge_star(PForm.basis_form((1, 2, 3, 4)), e)
        assert star[(5, 6, 7, 8)] == pytest.approx(1.0)
        assert np.count_nonzero(star.coefficients) == 1

    def test_volume_form(self):
        e = MetricTensor.euclidean()
        one = PForm(0, [1.0])
        assert top_coefficient(hodge_star(one, e)) == pytest.approx(1.0)

    def test_orientation_flips_sign(self):
        e = MetricTensor.euclidean()
        np.testing.assert_allclose(star_matrix(e.with_orientation(-1), 3), -star_matrix(e, 3))

    def test_double_star_sign(self, rng):
        m = MetricTensor.from_matrix(random_spd(rng))
        for p in range(9):
            S = star_matrix(m, p) @ star_matrix(m, 8 - p)
            np.testing.assert_allclose(S, (-1) ** (p * (8 - p)) * np.eye(len(basis(8 - p))),
                                       atol=1e-10)

    def test_matches_permutation_oracle(self, rng):
        g = random_spd(rng)
        m = MetricTensor.from_matrix(g)
        for p in (1, 2, 3, 4):
            f = random_form(rng, p)
            fast = hodge_star(f, m).coefficients
            slow = hodge_star_permutation_sum(f, g).coefficients
            np.testing.assert_allclose(fast, slow, atol=1e-10 * np.abs(slow).max())

    def test_inner_product_identity(self, rng):
        # a ^ *b = <a, b> vol, with <,> the induced inner product
        g = random_spd(rng)
        m = MetricTensor.from_matrix(g)
        a, b = random_form(rng, 2), random_form(rng, 2)
        h = m.g_inv
        idx = np.array(basis(2)) - 1
        G2 = h[idx[:, 0][:, None], idx[:, 0]] * h[idx[:, 1][:, None], idx[:, 1]] \
            - h[idx[:, 0][:, None], idx[:, 1]] * h[idx[:, 1][:, None], idx[:, 0]]
        lhs = top_coefficient(wedge(a, hodge_star(b, m)))
        np.testing.assert_allclose(lhs, m.sqrt_det * a.coefficients @ G2 @ b.coefficients,
                                   rtol=1e-10)

    def test_four_form_eigenvalues_at_reference(self, metric_q1):
        ev = np.linalg.eigvals(star_matrix(metric_q1, 4))
        assert np.sum(np.abs(ev - 1) < 1e-6) == 35
        assert np.sum(np.abs(ev + 1) < 1e-6) == 35

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            hodge_star(PForm.zero(2, dim=4), MetricTensor.euclidean())

    def test_bad_metric(self):
        class Fake:
            g_inv = np.eye(8)
            sqrt_det = -1.0
        with pytest.raises(InvalidMetricError):
            star_matrix(Fake(), 2)
