import numpy as np
import pytest

from buresforms import fixtures as fx
from buresforms.connection import (curvature, curvature_convergence, hermitian_sqrt_section,
                                   sylvester_solve, uhlmann_connection)
from buresforms.errors import DegenerateStateError, StencilError
from buresforms.oracles import random_density, sylvester_kronecker
from buresforms.state import COORDINATES, density_from_angles


class TestSylvester:
    def test_matches_kronecker_oracle(self, rng):
        for _ in range(5):
            rho = random_density(rng)
            S = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
            np.testing.assert_allclose(sylvester_solve(rho, S), sylvester_kronecker(rho, S),
                                       atol=1e-10)

    def test_isotropic(self):
        S = np.array([[0, 1], [1, 0]], dtype=complex)
        np.testing.assert_allclose(sylvester_solve(np.eye(2) / 2, S), S)

    def test_singular(self):
        with pytest.raises(DegenerateStateError):
            sylvester_solve(np.zeros((3, 3)), np.eye(3))


class TestSqrtSection:
    def test_squares_to_rho(self):
        W, dW = hermitian_sqrt_section(fx.Q2)
        rho, _ = density_from_angles(fx.Q2)
        np.testing.assert_allclose(W @ W, rho.entries, atol=1e-14)
        np.testing.assert_allclose(W, W.conj().T, atol=1e-15)
        assert dW.shape == (8, 3, 3)

    def test_partials_match_finite_differences(self):
        _, dW = hermitian_sqrt_section(fx.Q2)
        h = 1e-6
        for k, c in enumerate(COORDINATES):
            Wp, _ = hermitian_sqrt_section(fx.Q2.shifted(c, h))
            Wm, _ = hermitian_sqrt_section(fx.Q2.shifted(c, -h))
            np.testing.assert_allclose(dW[k], (Wp - Wm) / (2 * h), atol=1e-8, err_msg=c)


class TestConnection:
    @pytest.mark.parametrize("direction", COORDINATES)
    def test_anti_hermitian(self, direction):
        comp = uhlmann_connection(fx.Q2, direction)
        np.testing.assert_allclose(comp.A, -comp.A.conj().T, atol=1e-13)
        assert comp.sylvester_residual < 1e-12

    def test_eigenvalue_directions_vanish(self):
        # moving only the spectrum keeps W Hermitian with commuting derivative
        for d in ("theta1", "theta2"):
            np.testing.assert_allclose(uhlmann_connection(fx.Q2, d).A, 0, atol=1e-13)

    def test_direction_by_index(self):
        np.testing.assert_allclose(uhlmann_connection(fx.Q2, 1).A,
                                   uhlmann_connection(fx.Q2, "tau").A)
        with pytest.raises(ValueError):
            uhlmann_connection(fx.Q2, 8)


class TestCurvature:
    def test_antisymmetric(self):
        F12 = curvature(fx.Q2, "tau", "beta")
        F21 = curvature(fx.Q2, "beta", "tau")
        np.testing.assert_allclose(F12, -F21, atol=1e-9)
        np.testing.assert_allclose(F12, -F12.conj().T, atol=1e-8)

    def test_second_order_convergence(self):
        rep = curvature_convergence(fx.Q2, "tau", "b")
        assert 3.5 <= rep.ratio <= 4.5

    def test_stencil_hits_degeneracy(self):
        p = fx.Q2.with_coordinate("theta1", 1e-5)
        with pytest.raises(StencilError):
            curvature(p, "theta1", "tau", step=1e-4)
