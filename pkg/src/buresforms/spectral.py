"""Spectrum of the two-form endomorphism F -> sign * *(omega ^ F)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import linalg

from .errors import InvalidGramError, PatternError
from .exterior import PForm, star_matrix, wedge_matrix
from .metric import TwoFormGram, gram_on_two_forms

# Reference spectra are normalized with the 1/p! factors of the component
# convention; the wedge and star here act on the increasing-index basis
# without those factors, so the two differ by 1/6!.
COMPONENT_SPECTRAL_SCALE = 1.0 / math.factorial(6)


@dataclass(frozen=True)
class Endo2Forms:
    M: np.ndarray
    omega_sign: int
    gram: TwoFormGram
    scale: float = 1.0

    @property
    def trace(self) -> float:
        return float(np.trace(self.M))

    def adjointness_defect(self) -> float:
        GM = self.gram.G2 @ self.M
        return float(np.abs(GM - GM.T).max())


def build_endomorphism(omega: PForm, metric, sign: int = 1, scale: float = 1.0) -> Endo2Forms:
    """Matrix of F -> scale * sign * *(omega ^ F) on the lexicographic 2-form basis.

    Parameters
    ----------
    omega : PForm
        Degree-4 form.
    metric : MetricTensor
        Metric defining the Hodge star and the 2-form inner product.
    sign : {1, -1}
        Overall sign of the map.
    scale : float
        Extra normalization; :data:`COMPONENT_SPECTRAL_SCALE` gives the
        component-convention values.
    """
    if omega.degree != 4:
        raise ValueError("endomorphism needs a degree-4 form")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    M = sign * scale * star_matrix(metric, 6) @ wedge_matrix(omega, 2)
    return Endo2Forms(M, sign, gram_on_two_forms(metric), scale)


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    clusters: list[tuple[float, int]]
    pattern: tuple[int, ...]
    trace: float = 0.0
    general_solver_deviation: float = 0.0

    @property
    def eigenvalue_sum(self) -> float:
        return float(self.eigenvalues.sum())

    @property
    def spectral_radius(self) -> float:
        return float(np.abs(self.eigenvalues).max())


def cluster_multiplicities(eigenvalues, tol_rel: float = 1e-5) -> list[tuple[float, int]]:
    """Greedy gap clustering of sorted eigenvalues.

    A new cluster starts whenever consecutive values differ by more than
    ``tol_rel`` times the spectral radius.  Returns ``(mean, multiplicity)``
    in descending order of value.
    """
    v = np.sort(np.asarray(eigenvalues, dtype=float))[::-1]
    if v.size == 0:
        return []
    tol = tol_rel * max(float(np.abs(v).max()), np.finfo(float).tiny)
    groups = [[v[0]]]
    for x in v[1:]:
        if groups[-1][-1] - x > tol:
            groups.append([x])
        else:
            groups[-1].append(x)
    return [(float(np.mean(g)), len(g)) for g in groups]


def eigen_spectrum(endo: Endo2Forms, tol_rel: float = 1e-5) -> SpectrumReport:
    """Eigenvalues of a G2-self-adjoint endomorphism via Cholesky congruence.

    With G2 = L L^T, the matrix L^T M L^{-T} is symmetric and shares the
    spectrum of M.  A general eigensolve of M is kept as a cross-check.
    """
    try:
        L = linalg.cholesky(endo.gram.G2, lower=True)
    except linalg.LinAlgError:
        raise InvalidGramError("two-form Gram matrix is not positive-definite") from None
    B = linalg.solve_triangular(L, (endo.M.T @ L), lower=True, trans="N").T
    B = 0.5 * (B + B.T)
    ev = np.sort(linalg.eigvalsh(B))[::-1]
    general = np.sort(np.linalg.eigvals(endo.M).real)[::-1]
    clusters = cluster_multiplicities(ev, tol_rel)
    return SpectrumReport(
        eigenvalues=ev,
        clusters=clusters,
        pattern=tuple(sorted(m for _, m in clusters)),
        trace=endo.trace,
        general_solver_deviation=float(np.abs(ev - general).max()),
    )


def spectra_coincide(a: SpectrumReport, b: SpectrumReport, tol: float = 1e-8) -> bool:
    return bool(np.abs(np.sort(a.eigenvalues) - np.sort(b.eigenvalues)).max() <= tol)


@dataclass(frozen=True)
class SingletOctetSplit:
    singlets: np.ndarray
    octets: np.ndarray  # positive magnitudes of the three +/- quartet pairs


def singlet_octet_split(report: SpectrumReport, tol: float = 1e-6) -> SingletOctetSplit:
    """Separate four singlets from three octets split into +/- quartets."""
    singles = [v for v, m in report.clusters if m == 1]
    quartets = [v for v, m in report.clusters if m == 4]
    if len(singles) != 4 or len(quartets) != 6 or len(report.clusters) != 10:
        raise PatternError(f"expected 4 singlets and 6 quartets, got pattern {report.pattern}")
    pos = sorted(v for v in quartets if v > 0)
    neg = sorted(-v for v in quartets if v < 0)
    scale = max(report.spectral_radius, 1.0)
    if len(pos) != 3 or np.abs(np.array(pos) - np.array(neg)).max() > tol * scale:
        raise PatternError("quartets do not pair into octets of opposite sign")
    return SingletOctetSplit(np.array(sorted(singles, reverse=True)),
                             0.5 * (np.array(pos) + np.array(neg))[::-1])


def _expand(terms: dict[int, int]) -> tuple[int, ...]:
    deg = max(terms)
    return tuple(terms.get(k, 0) for k in range(deg, -1, -1))


# Integer characteristic factors at the first reference point, highest degree first.
QUARTIC = _expand({
    4: 718875 * 39304490625,
    2: -718875 * 2131611323040,
    1: -718875 * 72767012864,
    0: 17848517231861271296,
})
SEXTIC = _expand({
    6: -18225 * 291144375 * 291144375,
    4: 18225 * 291144375 * 7894856752,
    2: -18225 * 2195802859754043904,
    0: 82734971267961585664,
})


def poly_eval_exact(coeffs, x: float) -> Fraction:
    """Horner evaluation in exact rational arithmetic at the float ``x``."""
    xf = Fraction(float(x))
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * xf + c
    return acc


def scaled_residual(coeffs, x: float) -> float:
    """|p(x)| / (max|c_k| * max(1, |x|)^deg), evaluated exactly."""
    deg = len(coeffs) - 1
    scale = Fraction(max(abs(c) for c in coeffs)) * max(Fraction(1), abs(Fraction(float(x)))) ** deg
    return float(abs(poly_eval_exact(coeffs, x)) / scale)


def _elementary_symmetric(roots) -> np.ndarray:
    return np.poly(np.asarray(roots, dtype=float))[1:] * np.array(
        [(-1) ** k for k in range(1, len(roots) + 1)])


@dataclass(frozen=True)
class PolyCheck:
    quartic_residuals: np.ndarray
    sextic_residuals: np.ndarray
    coefficient_deviations: dict[str, np.ndarray] = field(default_factory=dict)
    tolerance: float = 1e-4

    @property
    def passed(self) -> bool:
        worst = max(self.quartic_residuals.max(), self.sextic_residuals.max(),
                    *(np.abs(v).max() for v in self.coefficient_deviations.values()))
        return bool(worst <= self.tolerance)


def singlet_octet_polynomials(report: SpectrumReport, quartic=QUARTIC, sextic=SEXTIC,
                              tol: float = 1e-4) -> PolyCheck:
    """Check singlets against the quartic and octet values against the sextic.

    The spectrum must be on the scale of the integer polynomials (see
    :data:`COMPONENT_SPECTRAL_SCALE`).  Also compares elementary symmetric
    functions of the computed roots with the coefficient ratios, relative to
    the largest ratio in each polynomial.
    """
    split = singlet_octet_split(report)
    octet_values = np.concatenate([split.octets, -split.octets])
    q_res = np.array([scaled_residual(quartic, x) for x in split.singlets])
    s_res = np.array([scaled_residual(sextic, x) for x in octet_values])
    devs = {}
    for name, coeffs, roots in (("quartic", quartic, split.singlets),
                                ("sextic", sextic, octet_values)):
        lead = Fraction(coeffs[0])
        ratios = np.array([float(Fraction(c) / lead) * (-1) ** k
                           for k, c in enumerate(coeffs[1:], start=1)])
        e = _elementary_symmetric(roots)
        devs[name] = (e - ratios) / np.abs(ratios).max()
    return PolyCheck(q_res, s_res, devs, tol)


@dataclass(frozen=True)
class RadicalCheck:
    formula: float
    cosine: float
    target: float
    relative_deviation: float


def radical_closed_form() -> tuple[float, float]:
    """Closed-form square of the largest positive octet value and its cosine factor."""
    inner = 19986057 * math.sqrt(257834787813597115559383045701069731) \
        / 101094855629270248323646732
    cosine = math.cos(math.atan(inner) / 3)
    value = 16 * (493428547 + 2 * math.sqrt(217739666231788507) * cosine) / 873433125
    return value, cosine


def verify_radical_identity(octet_value: float = 5.11128, rel_tol: float = 1e-5,
                            cosine_target: float = 0.999444, cosine_tol: float = 1e-5) -> bool:
    """True if the closed form matches ``octet_value**2`` and the cosine factor."""
    chk = radical_check(octet_value)
    return (chk.formula > 0 and chk.relative_deviation <= rel_tol
            and abs(chk.cosine - cosine_target) <= cosine_tol)


def radical_check(octet_value: float) -> RadicalCheck:
    value, cosine = radical_closed_form()
    target = float(octet_value) ** 2
    return RadicalCheck(value, cosine, target, abs(target - value) / value)


_CAYLEY_TERMS = {
    (1, 2, 3, 4): 1, (1, 2, 5, 8): 1, (1, 2, 6, 7): -1, (1, 3, 5, 7): 1,
    (1, 3, 6, 8): 1, (1, 4, 5, 6): -1, (1, 4, 7, 8): 1, (2, 3, 5, 6): 1,
    (2, 3, 7, 8): -1, (2, 4, 5, 7): 1, (2, 4, 6, 8): 1, (3, 4, 5, 8): -1,
    (3, 4, 6, 7): 1, (5, 6, 7, 8): 1,
}


def cayley_calibration() -> PForm:
    """The Spin(7)-invariant self-dual Cayley four-form in Euclidean 8-space."""
    return PForm.from_dict(_CAYLEY_TERMS, degree=4)
