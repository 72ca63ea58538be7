from fractions import Fraction

import numpy as np
import pytest

from buresforms import fixtures as fx
from buresforms.duality import solve_dual_form
from buresforms.errors import InvalidGramError, PatternError
from buresforms.exterior import PForm, hodge_star
from buresforms.metric import MetricTensor, TwoFormGram
from buresforms.spectral import (COMPONENT_SPECTRAL_SCALE, QUARTIC, SEXTIC, Endo2Forms,
                                 SpectrumReport, build_endomorphism, cayley_calibration,
                                 cluster_multiplicities, eigen_spectrum, poly_eval_exact,
                                 radical_check, radical_closed_form, scaled_residual,
                                 singlet_octet_polynomials, singlet_octet_split,
                                 spectra_coincide, verify_radical_identity)


def spectrum(metric, sign):
    omega = solve_dual_form(metric, sign).omega
    return eigen_spectrum(build_endomorphism(omega, metric, sign, COMPONENT_SPECTRAL_SCALE))


class TestClusters:
    def test_grouping(self):
        c = cluster_multiplicities([3.0, 1.0, 1.0 + 1e-9, -2.0, -2.0])
        assert c == [(3.0, 1), (pytest.approx(1.0), 2), (-2.0, 2)]

    def test_empty(self):
        assert cluster_multiplicities([]) == []


class TestEndomorphism:
    def test_self_adjoint(self, metric_q2):
        omega = solve_dual_form(metric_q2, 1).omega
        endo = build_endomorphism(omega, metric_q2)
        assert endo.adjointness_defect() < 1e-9 * np.abs(endo.M).max()

    def test_traceless(self, metric_q1):
        for sign in (1, -1):
            omega = solve_dual_form(metric_q1, sign).omega
            endo = build_endomorphism(omega, metric_q1, sign)
            assert abs(endo.trace) < 1e-8 * np.abs(endo.M).max()

    def test_matches_definition(self, metric_q2, rng):
        omega = solve_dual_form(metric_q2, 1).omega
        F = PForm(2, rng.normal(size=28))
        from buresforms.exterior import wedge
        direct = hodge_star(wedge(omega, F), metric_q2).coefficients
        np.testing.assert_allclose(build_endomorphism(omega, metric_q2).M @ F.coefficients,
                                   direct, rtol=1e-12, atol=1e-12 * np.abs(direct).max())

    def test_rejects(self, metric_q2):
        with pytest.raises(ValueError):
            build_endomorphism(PForm.zero(3), metric_q2)
        with pytest.raises(ValueError):
            build_endomorphism(PForm.zero(4), metric_q2, sign=2)

    def test_bad_gram(self):
        endo = Endo2Forms(np.eye(28), 1, TwoFormGram(-np.eye(28)))
        with pytest.raises(InvalidGramError):
            eigen_spectrum(endo)


class TestReferenceSpectra:
    @pytest.mark.parametrize("which", ["q1", "q2"])
    def test_reference_values(self, which, metric_q1, metric_q2):
        metric = metric_q1 if which == "q1" else metric_q2
        expected = np.sort(fx.SPECTRUM_Q1 if which == "q1" else fx.SPECTRUM_Q2)
        for sign in (1, -1):
            ev = np.sort(spectrum(metric, sign).eigenvalues)
            np.testing.assert_allclose(ev, expected, rtol=1e-4)

    def test_pattern_and_branch_agreement(self, metric_q1):
        plus, minus = spectrum(metric_q1, 1), spectrum(metric_q1, -1)
        assert plus.pattern == (1, 1, 1, 1, 4, 4, 4, 4, 4, 4)
        assert spectra_coincide(plus, minus, tol=1e-8)
        assert plus.general_solver_deviation < 1e-8

    def test_singlet_octet_split(self, metric_q1):
        split = singlet_octet_split(spectrum(metric_q1, 1))
        np.testing.assert_allclose(split.octets, [5.11128, 0.994689, 0.0455182], rtol=1e-5)
        assert len(split.singlets) == 4

    def test_split_rejects_other_patterns(self):
        rep = SpectrumReport(np.ones(28), [(1.0, 28)], (28,))
        with pytest.raises(PatternError):
            singlet_octet_split(rep)


class TestPolynomials:
    def test_exact_evaluation(self):
        assert poly_eval_exact((1, -3, 2), 2.0) == 0
        assert poly_eval_exact((1, 0, 0), 0.5) == Fraction(1, 4)

    def test_scaled_residual_small_argument(self):
        # |x| < 1 is not rescaled upward
        assert scaled_residual((2, 0, 1), 0.5) == pytest.approx(1.5 / 2)

    def test_integer_coefficients(self):
        assert all(isinstance(c, int) for c in QUARTIC + SEXTIC)
        assert len(QUARTIC) == 5 and len(SEXTIC) == 7

    def test_reference_roots(self, metric_q1):
        chk = singlet_octet_polynomials(spectrum(metric_q1, 1))
        assert chk.passed
        assert chk.quartic_residuals.max() < 1e-10
        assert chk.sextic_residuals.max() < 1e-10

    def test_sextic_is_even(self):
        assert all(c == 0 for c in SEXTIC[1::2])


class TestRadical:
    def test_closed_form(self):
        value, cosine = radical_closed_form()
        np.testing.assert_allclose(value, 5.11128 ** 2, rtol=1e-5)
        np.testing.assert_allclose(cosine, 0.999444, atol=1e-5)

    def test_identity(self, metric_q1):
        top = singlet_octet_split(spectrum(metric_q1, 1)).octets[0]
        assert radical_check(top).relative_deviation < 1e-10
        assert verify_radical_identity(top)
        assert not verify_radical_identity(5.2)


class TestCayley:
    def test_self_dual(self):
        phi = cayley_calibration()
        e = MetricTensor.euclidean()
        np.testing.assert_allclose(hodge_star(phi, e).coefficients, phi.coefficients)
        assert np.count_nonzero(phi.coefficients) == 14

    def test_spectrum(self):
        rep = eigen_spectrum(build_endomorphism(cayley_calibration(), MetricTensor.euclidean()))
        assert rep.clusters == [(pytest.approx(1.0), 21), (pytest.approx(-3.0), 7)]
