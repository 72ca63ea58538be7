"""End-to-end acceptance suite: eleven numbered criteria with sub-checks.

Each sub-check records the measured quantity, its tolerance and the
reference it is compared against, so a report line can be read without the
code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import fixtures as fx
from .connection import curvature, curvature_convergence, sylvester_solve, uhlmann_connection
from .duality import is_pm_equal, solve_dual_form
from .exterior import PForm, basis, hodge_star, star_matrix, wedge
from .metric import MetricTensor, bures_metric, fisher_block
from .oracles import (hodge_star_permutation_sum, random_density, random_spd,
                      sylvester_kronecker)
from .spectral import (COMPONENT_SPECTRAL_SCALE, build_endomorphism, cayley_calibration,
                       eigen_spectrum, radical_check, singlet_octet_polynomials,
                       singlet_octet_split)
from .state import (CALIBRATED_SEQUENCE, COORDINATES, GeneratorSequence,
                    density_from_angles)
from .sweeps import (FIGURES, Q2_C1234, Q2_C1678, SweepSpec, closed_form, coefficient_sweep,
                     cross_point_spectrum, default_grid, figure_summary, spectrum_under_sweep,
                     spectrum_variation)


@dataclass
class SubCheck:
    name: str
    value: float
    tolerance: float
    passed: bool
    reference: str = ""


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list[SubCheck] = field(default_factory=list)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.checks) and all(c.passed for c in self.checks)

    def failures(self) -> list[SubCheck]:
        return [c for c in self.checks if not c.passed]

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"[{status}] {self.number:2d}. {self.title} ({len(self.checks)} checks)"
        if self.error:
            line += f": error {self.error}"
        elif not self.passed:
            line += ": " + "; ".join(f"{c.name} = {c.value:.3g} (tol {c.tolerance:g})"
                                     for c in self.failures()[:3])
        return line


class _Recorder:
    def __init__(self, result: CriterionResult):
        self.result = result

    def at_most(self, name, value, tol, reference=""):
        value = float(value)
        self.result.checks.append(SubCheck(name, value, tol, bool(value <= tol), reference))

    def within(self, name, value, lo, hi, reference=""):
        value = float(value)
        self.result.checks.append(
            SubCheck(name, value, hi - lo, bool(lo <= value <= hi), reference or f"[{lo}, {hi}]"))

    def true(self, name, cond, reference=""):
        self.result.checks.append(SubCheck(name, float(bool(cond)), 1.0, bool(cond), reference))


def _rel(a, b):
    return abs(a - b) / abs(b)


def _metrics():
    return {"q1": bures_metric(fx.Q1, fx.Q1_ORIENTATION), "q2": bures_metric(fx.Q2)}


def criterion_fixtures(r: _Recorder, sequence: GeneratorSequence = CALIBRATED_SEQUENCE):
    for label, q, ref in (("rho1", fx.Q1, fx.RHO1), ("rho2", fx.Q2, fx.RHO2)):
        rho, _ = density_from_angles(q, sequence)
        for i, j in itertools.product(range(3), repeat=2):
            r.at_most(f"{label} entry ({i + 1},{j + 1})", abs(rho.entries[i, j] - ref[i, j]), 1e-10,
                      f"{ref[i, j]:.12g}")


def criterion_metric(r: _Recorder):
    for label, q in (("q1", fx.Q1), ("q2", fx.Q2)):
        g = bures_metric(q).g
        r.at_most(f"g({label}) symmetry", np.abs(g - g.T).max(), 1e-12)
        r.true(f"g({label}) positive-definite", np.linalg.eigvalsh(g).min() > 0,
               f"min eigenvalue {np.linalg.eigvalsh(g).min():.3g}")
        for c in ("alpha", "a"):
            shifted = bures_metric(q.shifted(c, 0.3)).g
            r.at_most(f"g({label}) invariant under {c} + 0.3", np.abs(shifted - g).max(), 1e-10)
        r.at_most(f"g({label}) (theta1, theta2) block vs Fisher form",
                  np.abs(g[6:, 6:] - fisher_block(q.theta1, q.theta2)).max(), 1e-10)


def criterion_hodge(r: _Recorder):
    for label, m in _metrics().items():
        S = star_matrix(m, 4)
        r.at_most(f"star^2 = I on 4-forms at {label}", np.abs(S @ S - np.eye(70)).max(), 1e-10)
        ev = np.linalg.eigvals(S)
        plus = int(np.sum(np.abs(ev - 1) < 1e-6))
        minus = int(np.sum(np.abs(ev + 1) < 1e-6))
        r.true(f"star eigenvalue multiplicities at {label}", plus == 35 and minus == 35,
               f"+1 x {plus}, -1 x {minus}")


def criterion_four_forms(r: _Recorder):
    metrics = _metrics()
    for label, ref in (("q1", fx.OMEGA_Q1), ("q2", fx.OMEGA_Q2)):
        sols = {s: solve_dual_form(metrics[label], s) for s in (1, -1)}
        for s, sol in sols.items():
            for idx, target in ref[s].items():
                name = f"Omega{'+' if s > 0 else '-'}({label}) coefficient {''.join(map(str, idx))}"
                r.at_most(name, abs(sol[idx] - target), 1e-9, f"{target:.12g}")
            r.at_most(f"Omega{'+' if s > 0 else '-'}({label}) duality residual", sol.residual, 1e-9)
        r.true(f"Omega+ != +/-Omega- at {label}", not is_pm_equal(sols[1], sols[-1]))


def _spectrum(metric, sign):
    omega = solve_dual_form(metric, sign).omega
    return eigen_spectrum(build_endomorphism(omega, metric, sign, COMPONENT_SPECTRAL_SCALE))


def criterion_spectra(r: _Recorder):
    metrics = _metrics()
    for label, ref in (("q1", fx.SPECTRUM_Q1), ("q2", fx.SPECTRUM_Q2)):
        plus, minus = _spectrum(metrics[label], 1), _spectrum(metrics[label], -1)
        ours = np.sort(plus.eigenvalues)
        expected = np.sort(np.array(ref))
        r.at_most(f"spectrum({label}) vs reference values, max relative",
                  np.max(np.abs(ours - expected) / np.abs(expected)), 1e-4)
        r.true(f"spectrum({label}) pattern 4 singlets + 3 octets",
               plus.pattern == (1, 1, 1, 1, 4, 4, 4, 4, 4, 4), str(plus.pattern))
        try:
            singlet_octet_split(plus)
            r.true(f"spectrum({label}) octets split into +/- quartets", True)
        except Exception as exc:  # noqa: BLE001 - recorded as a failed check
            r.true(f"spectrum({label}) octets split into +/- quartets", False, str(exc))
        r.at_most(f"spectrum({label}) eigenvalue sum", abs(plus.eigenvalue_sum), 1e-8)
        r.at_most(f"spectrum({label}) self-dual vs anti-self-dual",
                  np.abs(np.sort(plus.eigenvalues) - np.sort(minus.eigenvalues)).max(), 1e-8)


def criterion_polynomials(r: _Recorder):
    report = _spectrum(_metrics()["q1"], 1)
    pc = singlet_octet_polynomials(report)
    for k, v in enumerate(pc.quartic_residuals):
        r.at_most(f"quartic scaled residual at singlet {k + 1}", v, 1e-4)
    for k, v in enumerate(pc.sextic_residuals):
        r.at_most(f"sextic scaled residual at octet value {k + 1}", v, 1e-4)
    top = singlet_octet_split(report).octets[0]
    chk = radical_check(top)
    r.at_most("radical closed form vs computed octet squared", chk.relative_deviation, 1e-5,
              f"{chk.formula:.10g}")
    r.at_most("radical cosine factor", abs(chk.cosine - 0.999444), 1e-5, "0.999444")


def criterion_cross_point(r: _Recorder):
    res = cross_point_spectrum()
    for branch, (top, bottom) in fx.CROSS_POINT_LEADING.items():
        hi, lo = res.leading_pair(branch)
        tag = "self-dual" if branch > 0 else "anti-self-dual"
        r.at_most(f"{tag} branch largest eigenvalue", _rel(hi, top), 1e-4, f"{top}")
        r.at_most(f"{tag} branch most negative eigenvalue", _rel(lo, bottom), 1e-4, f"{bottom}")
        ev = res.reports[branch].eigenvalues
        gap = np.abs(np.diff(ev)).min() / np.abs(ev).max()
        r.true(f"{tag} branch has 28 distinct eigenvalues", gap > 1e-6, f"min relative gap {gap:.3g}")


def criterion_cayley(r: _Recorder):
    endo = build_endomorphism(cayley_calibration(), MetricTensor.euclidean(), 1)
    M = endo.M
    r.at_most("M^2 + 2M - 3I", np.abs(M @ M + 2 * M - 3 * np.eye(28)).max(), 1e-10)
    ev = eigen_spectrum(endo).eigenvalues
    r.at_most("21 eigenvalues equal to 1", np.abs(ev[:21] - 1).max(), 1e-10)
    r.at_most("7 eigenvalues equal to -3", np.abs(ev[21:] + 3).max(), 1e-10)


def criterion_sweeps(r: _Recorder):
    for number, fig in FIGURES.items():
        res = coefficient_sweep(SweepSpec.for_figure(number))
        s = figure_summary(number, res)
        r.true(f"fig{number:02d} all 41 samples solved", s["failed_samples"] == 0)
        r.at_most(f"fig{number:02d} solver vs closed form", s["max_deviation"], 1e-8)
        if "uncorrected_max_deviation" in s:
            # logged, not gated: the uncorrected form disagrees with the solver
            r.result.checks.append(SubCheck(
                f"fig{number:02d} uncorrected comparator deviation (logged)",
                s["uncorrected_max_deviation"], float("inf"), True, "corrected comparator used"))
        if fig.reference_maximum is not None:
            r.at_most(f"fig{number:02d} maximum value", abs(s["max_value"] - fig.reference_maximum),
                      1e-3, f"{fig.reference_maximum} (read as the maximum value)")
    base = fx.Q2
    for coord in ("tau", "beta", "b", "theta", "theta1"):
        a = getattr(base, coord)
        r.at_most(f"closed form c1234({coord}) at q2", abs(closed_form(1234, coord, a) - 0.821249), 1e-6)
        r.at_most(f"closed form c1678({coord}) at q2", abs(closed_form(1678, coord, a) - 90.9476), 1e-4)
    r.at_most("q2 constant c1234", abs(Q2_C1234 - 0.821249), 1e-6)
    r.at_most("q2 constant c1678", abs(Q2_C1678 - 90.9476), 1e-4)
    r.at_most("fig02 maximum equals q2 constant",
              abs(coefficient_sweep(SweepSpec.for_figure(2)).argmax[1] - 0.821249), 1e-6)
    for coord in ("beta", "tau", "b", "theta"):
        var = spectrum_variation(spectrum_under_sweep(SweepSpec(coord, default_grid(coord, 9))))
        if coord == "beta":
            r.at_most("spectrum variation over beta", var, 1e-8)
        else:
            r.true(f"spectrum varies over {coord}", var > 1e-3, f"variation {var:.3g}")


def criterion_connection(r: _Recorder):
    for label, q in (("q1", fx.Q1), ("q2", fx.Q2)):
        for d in COORDINATES:
            c = uhlmann_connection(q, d)
            r.at_most(f"A_{d}({label}) Sylvester residual", c.sylvester_residual, 1e-10)
            r.at_most(f"A_{d}({label}) anti-Hermitian", np.abs(c.A + c.A.conj().T).max(), 1e-10)
            if d in ("theta1", "theta2"):
                r.at_most(f"A_{d}({label}) vanishes", np.abs(c.A).max(), 1e-12)
    for mu, nu in (("tau", "beta"), ("b", "theta")):
        F = curvature(fx.Q2, mu, nu)
        G = curvature(fx.Q2, nu, mu)
        r.at_most(f"F_{mu},{nu} antisymmetry", np.abs(F + G).max(), 1e-8)
        r.at_most(f"F_{mu},{nu} anti-Hermitian", np.abs(F + F.conj().T).max(), 1e-8)
        conv = curvature_convergence(fx.Q2, mu, nu)
        r.within(f"F_{mu},{nu} step-halving ratio", conv.ratio, 3.5, 4.5)


def criterion_properties(r: _Recorder, n_random: int = 100, seed: int = 20240611):
    worst = 0.0
    for p in range(9):
        for q in range(9 - p):
            for I in basis(p):
                a = PForm.basis_form(I)
                for J in basis(q):
                    b = PForm.basis_form(J)
                    d = wedge(a, b).coefficients - (-1) ** (p * q) * wedge(b, a).coefficients
                    worst = max(worst, float(np.abs(d).max()))
    r.at_most("wedge graded anticommutativity on all basis pairs", worst, 1e-10)

    rng = np.random.default_rng(seed)
    metrics = [bures_metric(fx.Q1).g, bures_metric(fx.Q2).g]
    worst = 0.0
    for k in range(n_random):
        g = metrics[k % 2] if k % 4 < 2 else random_spd(rng)
        p = int(rng.integers(0, 9))
        form = PForm(p, rng.normal(size=len(basis(p))))
        fast = hodge_star(form, MetricTensor.from_matrix(g)).coefficients
        slow = hodge_star_permutation_sum(form, g).coefficients
        worst = max(worst, float(np.abs(fast - slow).max() / max(1.0, np.abs(slow).max())))
    r.at_most("hodge star vs permutation-sum oracle (relative to max component)", worst, 1e-10)

    worst = 0.0
    for _ in range(n_random):
        rho = random_density(rng)
        S = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        worst = max(worst, float(np.abs(sylvester_solve(rho, S) - sylvester_kronecker(rho, S)).max()))
    r.at_most("Sylvester solve vs Kronecker oracle", worst, 1e-10)


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "Fixture reproduction", criterion_fixtures),
    (2, "Metric properties", criterion_metric),
    (3, "Hodge structure on 4-forms", criterion_hodge),
    (4, "Four-form coefficients", criterion_four_forms),
    (5, "Spectra at the reference points", criterion_spectra),
    (6, "Characteristic factors and radical", criterion_polynomials),
    (7, "Cross-point experiment", criterion_cross_point),
    (8, "Cayley benchmark", criterion_cayley),
    (9, "Coefficient sweeps", criterion_sweeps),
    (10, "Uhlmann connection", criterion_connection),
    (11, "Property suites", criterion_properties),
]


def run_criterion(number: int, sequence: GeneratorSequence = CALIBRATED_SEQUENCE) -> CriterionResult:
    _, title, fn = next(c for c in CRITERIA if c[0] == number)
    result = CriterionResult(number, title)
    try:
        if number == 1:
            fn(_Recorder(result), sequence)
        else:
            fn(_Recorder(result))
    except Exception as exc:  # noqa: BLE001 - a crash is a failed criterion
        result.error = f"{type(exc).__name__}: {exc}"
    return result


def run_acceptance(numbers=None, sequence: GeneratorSequence = CALIBRATED_SEQUENCE) -> list[CriterionResult]:
    numbers = [c[0] for c in CRITERIA] if numbers is None else list(numbers)
    return [run_criterion(n, sequence) for n in numbers]


__all__ = ["CRITERIA", "CriterionResult", "SubCheck", "run_acceptance", "run_criterion"]
