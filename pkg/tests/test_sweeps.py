import json

import numpy as np
import pytest

from buresforms import fixtures as fx
from buresforms.errors import PoleError
from buresforms.sweeps import (FIGURES, Q2_C1234, Q2_C1678, SweepSpec, closed_form,
                               coefficient_sweep, cross_point_spectrum, default_grid,
                               figure_summary, solved_coefficient, spectrum_at,
                               spectrum_under_sweep, spectrum_variation, write_figure)
from buresforms.state import COORDINATE_RANGES


class TestClosedForms:
    @pytest.mark.parametrize("coordinate", ["tau", "beta", "b", "theta", "theta1"])
    def test_base_point_values(self, coordinate):
        angle = getattr(fx.Q2, coordinate)
        np.testing.assert_allclose(closed_form(1234, coordinate, angle), Q2_C1234, atol=1e-12)
        np.testing.assert_allclose(closed_form(1678, coordinate, angle), Q2_C1678, atol=1e-12)

    def test_base_constants_match_reference(self):
        np.testing.assert_allclose(Q2_C1234, fx.OMEGA_Q2[1][(1, 2, 3, 4)])
        np.testing.assert_allclose(Q2_C1678, fx.OMEGA_Q2[1][(1, 6, 7, 8)])

    def test_uncorrected_variants_differ(self):
        x = 0.3
        assert closed_form(1234, "beta", x) != closed_form(1234, "beta", x, uncorrected=True)
        assert closed_form(1234, "b", x) != closed_form(1234, "b", x, uncorrected=True)
        assert closed_form(1234, "tau", x) == closed_form(1234, "tau", x, uncorrected=True)

    def test_poles(self):
        with pytest.raises(PoleError):
            closed_form(1678, "b", 0.0)
        with pytest.raises(PoleError):
            closed_form(1678, "theta1", 0.5 * np.arccos(-1 / 7))

    def test_unknown(self):
        with pytest.raises(ValueError):
            closed_form(1235, "tau", 0.1)
        with pytest.raises(ValueError):
            closed_form(1234, "alpha", 0.1)

    @pytest.mark.parametrize("coeff,coordinate", [(1234, "tau"), (1234, "b"), (1678, "theta"),
                                                  (1234, "theta1"), (1678, "beta")])
    def test_solver_agrees(self, coeff, coordinate):
        spec = SweepSpec(coordinate, [], coefficient=coeff)
        for x in np.linspace(0.15, 0.6, 4):
            np.testing.assert_allclose(solved_coefficient(spec, x),
                                       closed_form(coeff, coordinate, x), atol=1e-8)


class TestGrid:
    def test_half_step(self):
        g = default_grid("b", 4)
        np.testing.assert_allclose(g, (np.arange(4) + 0.5) * np.pi / 8)
        assert default_grid("theta1").max() < COORDINATE_RANGES["theta1"]


class TestSweepSpec:
    def test_experimental_flag(self):
        with pytest.raises(ValueError):
            SweepSpec("theta2", [0.1])
        spec = SweepSpec("theta2", [0.1], experimental=True)
        assert not spec.has_comparator

    def test_unknown_coordinate(self):
        with pytest.raises(ValueError):
            SweepSpec("gamma", [0.1])

    def test_for_figure(self):
        spec = SweepSpec.for_figure(8, 5)
        assert spec.coefficient == (1, 6, 7, 8) and spec.free_coordinate == "b"
        assert len(spec.grid) == 5 and spec.has_comparator


class TestCoefficientSweep:
    @pytest.mark.parametrize("number", sorted(FIGURES))
    def test_figure_agrees_with_closed_form(self, number):
        res = coefficient_sweep(SweepSpec.for_figure(number, 11), refine=False)
        assert res.success_fraction == 1.0
        assert res.max_deviation <= 1e-8

    @pytest.mark.parametrize("number", [1, 2, 3, 4, 5])
    def test_reference_maximum(self, number):
        res = coefficient_sweep(SweepSpec.for_figure(number, 41))
        np.testing.assert_allclose(res.argmax[1], FIGURES[number].reference_maximum, atol=1e-3)

    def test_workers_preserve_order(self):
        spec = SweepSpec.for_figure(2, 7)
        a = coefficient_sweep(spec, refine=False)
        b = coefficient_sweep(spec, workers=3, refine=False)
        assert [s.angle for s in a.samples] == [s.angle for s in b.samples]
        np.testing.assert_allclose([s.computed for s in a.samples],
                                   [s.computed for s in b.samples])

    def test_spectrum_flag(self):
        spec = SweepSpec("beta", np.linspace(0.2, 1.2, 3))
        assert coefficient_sweep(spec, refine=False, check_spectrum=True).spectrum_invariance_flag
        spec = SweepSpec("tau", np.linspace(0.2, 1.2, 3))
        assert not coefficient_sweep(spec, refine=False,
                                     check_spectrum=True).spectrum_invariance_flag

    def test_failed_samples_are_recorded(self):
        spec = SweepSpec("theta1", [0.0, 0.4])
        res = coefficient_sweep(spec, refine=False)
        assert res.samples[0].error is not None
        assert res.samples[1].error is None
        assert res.success_fraction == 0.5


class TestSpectrum:
    def test_beta_invariance(self):
        spec = SweepSpec("beta", np.linspace(0.1, 1.4, 4))
        assert spectrum_variation(spectrum_under_sweep(spec)) < 1e-10

    def test_reference_spectrum(self):
        ev = np.sort(spectrum_at(fx.Q2).eigenvalues)
        np.testing.assert_allclose(ev, np.sort(fx.SPECTRUM_Q2), rtol=1e-4)


class TestCrossPoint:
    def test_leading_pairs(self):
        res = cross_point_spectrum()
        for branch in (1, -1):
            np.testing.assert_allclose(res.leading_pair(branch), fx.CROSS_POINT_LEADING[branch],
                                       rtol=1e-4)


class TestOutput:
    def test_summary_and_files(self, tmp_path):
        res = coefficient_sweep(SweepSpec.for_figure(3, 9))
        summary = figure_summary(3, res)
        assert summary["samples"] == 9 and summary["failed_samples"] == 0
        assert summary["uncorrected_max_deviation"] > 1e-3
        csv_path, json_path = write_figure(3, res, tmp_path)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "angle,computed,closed_form,deviation"
        assert len(lines) == 10
        data = json.loads(json_path.read_text())
        assert data["figure"] == 3
