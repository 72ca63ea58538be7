import numpy as np
import pytest

from buresforms import fixtures as fx
from buresforms.errors import DegenerateStateError, InvalidMetricError
from buresforms.metric import (ConditioningWarning, MetricTensor, bures_metric, fisher_block,
                               fit_aij, gram_on_two_forms, hermitian_basis, metric_from_aij)
from buresforms.oracles import random_density, random_spd, sylvester_kronecker
from buresforms.state import PointCoords, density_from_angles


def bures_distance(r1, r2):
    from scipy.linalg import sqrtm
    s = sqrtm(r1)
    fid = np.trace(sqrtm(s @ r2 @ s)).real
    return np.sqrt(max(2 - 2 * fid, 0.0))


class TestMetricTensor:
    def test_from_matrix(self, rng):
        g = random_spd(rng)
        m = MetricTensor.from_matrix(g)
        np.testing.assert_allclose(m.g_inv @ g, np.eye(8), atol=1e-12)
        np.testing.assert_allclose(m.det, np.linalg.det(g), rtol=1e-12)
        assert m.dim == 8

    def test_rejects_asymmetric_and_indefinite(self):
        g = np.eye(8)
        g[0, 1] = 0.5
        with pytest.raises(InvalidMetricError):
            MetricTensor.from_matrix(g)
        with pytest.raises(InvalidMetricError):
            MetricTensor.from_matrix(np.diag([1.0] * 7 + [-1.0]))
        with pytest.raises(InvalidMetricError):
            MetricTensor.from_matrix(np.ones(8))

    def test_orientation(self):
        m = MetricTensor.euclidean().with_orientation(-1)
        assert m.orientation == -1
        with pytest.raises(ValueError):
            MetricTensor.from_matrix(np.eye(8), orientation=2)


class TestBuresMetric:
    @pytest.mark.parametrize("q", [fx.Q1, fx.Q2], ids=["q1", "q2"])
    def test_symmetric_positive(self, q):
        g = bures_metric(q).g
        np.testing.assert_allclose(g, g.T, atol=1e-14)
        assert np.linalg.eigvalsh(g).min() > 0

    @pytest.mark.parametrize("coordinate", ["alpha", "a"])
    def test_cyclic_coordinates(self, coordinate):
        g = bures_metric(fx.Q2).g
        np.testing.assert_allclose(bures_metric(fx.Q2.shifted(coordinate, 0.7)).g, g, atol=1e-12)

    def test_depends_on_other_coordinates(self):
        g = bures_metric(fx.Q2).g
        assert np.abs(bures_metric(fx.Q2.shifted("tau", 0.7)).g - g).max() > 1e-3

    def test_fisher_block(self):
        for q in (fx.Q1, fx.Q2):
            g = bures_metric(q).g
            np.testing.assert_allclose(g[6:, 6:], fisher_block(q.theta1, q.theta2), atol=1e-12)

    def test_theta1_decouples_from_euler_angles(self):
        g = bures_metric(fx.Q2).g
        np.testing.assert_allclose(g[6:, :6], 0, atol=1e-13)

    def test_matches_fidelity_distance(self):
        # d_B(rho, rho + d rho)^2 ~ dx^T g dx with the convention g = 1/2 Tr(d rho L)
        p = PointCoords(0.3, 0.5, 0.2, 0.4, 0.6, 0.35, 0.5, 0.3)
        g = bures_metric(p).g
        rng = np.random.default_rng(7)
        v = rng.normal(size=8)
        v /= np.linalg.norm(v)
        eps = 1e-4
        r0, _ = density_from_angles(p)
        r1, _ = density_from_angles(PointCoords.from_array(p.as_array() + eps * v))
        d2 = bures_distance(r0.entries, r1.entries) ** 2
        np.testing.assert_allclose(d2 / eps ** 2, v @ g @ v, rtol=1e-3)

    def test_degenerate(self):
        with pytest.raises(DegenerateStateError):
            bures_metric(fx.Q2.with_coordinate("theta1", 0.0))


class TestTwoFormGram:
    def test_euclidean_identity(self):
        np.testing.assert_allclose(gram_on_two_forms(MetricTensor.euclidean()).G2, np.eye(28))

    def test_positive_definite(self, metric_q2):
        G2 = gram_on_two_forms(metric_q2).G2
        assert np.linalg.eigvalsh(G2).min() > 0


class TestAijFit:
    def test_hermitian_basis(self):
        B = hermitian_basis(3)
        assert B.shape == (9, 3, 3)
        for E in B:
            np.testing.assert_allclose(E, E.conj().T)

    def test_reproduces_sylvester_inverse(self, rng):
        rho = random_density(rng)
        fit = fit_aij(rho)
        S = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        S = S + S.conj().T
        np.testing.assert_allclose(fit.apply(rho, S), sylvester_kronecker(rho, S), atol=1e-10)
        np.testing.assert_allclose(fit.a, fit.a.T)

    def test_isotropic_state(self):
        rho = np.eye(3) / 3
        S = np.diag([1.0, -1.0, 0.0]) + 0j
        np.testing.assert_allclose(sylvester_kronecker(rho, S), 1.5 * S, atol=1e-14)
        with pytest.warns(ConditioningWarning):
            fit = fit_aij(rho)
        np.testing.assert_allclose(fit.apply(rho, S), 1.5 * S, atol=1e-8)

    def test_metric_agrees_with_spectral_form(self):
        p = fx.Q2
        np.testing.assert_allclose(metric_from_aij(p), bures_metric(p).g, atol=1e-10)
