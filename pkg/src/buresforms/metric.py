"""Bures metric tensor in the eight-coordinate chart and derived Gram matrices."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy import linalg

from .errors import DegenerateStateError, InvalidMetricError
from .state import (CALIBRATED_SEQUENCE, DEFAULT_GAP, DensityMatrix, GeneratorSequence,
                    PointCoords, density_from_angles, rho_partials)

SUM_THRESHOLD = 1e-12


class ConditioningWarning(UserWarning):
    pass


@dataclass(frozen=True)
class MetricTensor:
    """Symmetric positive-definite metric with cached inverse and volume factor.

    ``orientation`` multiplies the volume form used by the Hodge star; +1
    is the orientation with epsilon_{12...n} = +1.
    """

    g: np.ndarray
    g_inv: np.ndarray
    sqrt_det: float
    orientation: int = 1

    @classmethod
    def from_matrix(cls, g, orientation: int = 1, sym_tol: float = 1e-12) -> "MetricTensor":
        g = np.array(g, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise InvalidMetricError("metric must be a square matrix")
        scale = max(1.0, float(np.abs(g).max()))
        if np.abs(g - g.T).max() > sym_tol * scale:
            raise InvalidMetricError("metric is not symmetric")
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        g = 0.5 * (g + g.T)
        try:
            c = linalg.cho_factor(g, lower=True)
        except linalg.LinAlgError:
            raise InvalidMetricError("metric is not positive-definite") from None
        g_inv = linalg.cho_solve(c, np.eye(len(g)))
        g_inv = 0.5 * (g_inv + g_inv.T)
        sqrt_det = float(np.prod(np.diag(c[0])))
        for arr in (g, g_inv):
            arr.setflags(write=False)
        return cls(g, g_inv, sqrt_det, orientation)

    @classmethod
    def euclidean(cls, n: int = 8) -> "MetricTensor":
        return cls.from_matrix(np.eye(n))

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @property
    def det(self) -> float:
        return self.sqrt_det ** 2

    def with_orientation(self, orientation: int) -> "MetricTensor":
        return MetricTensor(self.g, self.g_inv, self.sqrt_det, orientation)


def bures_metric(point: PointCoords, orientation: int = 1,
                 sequence: GeneratorSequence = CALIBRATED_SEQUENCE,
                 gap: float = DEFAULT_GAP) -> MetricTensor:
    """Bures metric at ``point`` via the spectral form of (L + R)^{-1}.

    With d rho'_i = U^* (d rho / dx_i) U and eigenvalues lam,

        g_ij = 1/2 sum_ab Re[(d rho'_i)_ab (d rho'_j)_ba] / (lam_a + lam_b).
    """
    _, frame = density_from_angles(point, sequence, gap)
    lam, U = frame.eigenvalues, frame.unitary
    sums = lam[:, None] + lam[None, :]
    if sums.min() < SUM_THRESHOLD:
        raise DegenerateStateError("eigenvalue sum below threshold")
    d = np.einsum("ka,ikl,lb->iab", U.conj(), rho_partials(point, sequence, gap), U)
    g = 0.5 * np.einsum("iab,jba,ab->ij", d, d, 1.0 / sums).real
    return MetricTensor.from_matrix(0.5 * (g + g.T), orientation)


def fisher_block(theta1: float, theta2: float) -> np.ndarray:
    """Analytic (theta1, theta2) block: 1/4 sum_a d_i lam_a d_j lam_a / lam_a."""
    from .state import _raw_eigenvalue_partials, _raw_eigenvalues

    lam = _raw_eigenvalues(theta1, theta2)
    dl = _raw_eigenvalue_partials(theta1, theta2)
    return 0.25 * (dl / lam) @ dl.T


@dataclass(frozen=True)
class TwoFormGram:
    G2: np.ndarray


def gram_on_two_forms(metric: MetricTensor) -> TwoFormGram:
    """Induced inner product on 2-forms over the lexicographic pair basis.

    G2[(ij), (kl)] = g^{ik} g^{jl} - g^{il} g^{jk}.
    """
    h = np.asarray(metric.g_inv)
    pairs = np.array(list(combinations(range(h.shape[0]), 2)))
    i, j = pairs[:, 0], pairs[:, 1]
    G2 = h[i[:, None], i[None, :]] * h[j[:, None], j[None, :]] \
        - h[i[:, None], j[None, :]] * h[j[:, None], i[None, :]]
    return TwoFormGram(0.5 * (G2 + G2.T))


@dataclass(frozen=True)
class AijFit:
    """Coefficients with (L + R)^{-1} S = sum_ij a_ij rho^{i-1} S rho^{j-1}."""

    a: np.ndarray
    residual: float
    condition: float

    def apply(self, rho: np.ndarray, S: np.ndarray) -> np.ndarray:
        powers = [np.linalg.matrix_power(rho, k) for k in range(3)]
        return sum(self.a[i, j] * powers[i] @ S @ powers[j]
                   for i in range(3) for j in range(3))


def hermitian_basis(n: int = 3) -> np.ndarray:
    """Real basis of n x n Hermitian matrices (n**2 elements)."""
    out = []
    for a in range(n):
        for b in range(a, n):
            E = np.zeros((n, n), dtype=complex)
            if a == b:
                E[a, a] = 1
                out.append(E)
            else:
                E[a, b] = E[b, a] = 1
                out.append(E)
                F = np.zeros((n, n), dtype=complex)
                F[a, b], F[b, a] = -1j, 1j
                out.append(F)
    return np.array(out)


_SYM_PAIRS = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]


def fit_aij(rho, cond_limit: float = 1e12) -> AijFit:
    """Least-squares symmetric a_ij reproducing the Sylvester inverse of rho.

    Fitted on the nine-element Hermitian basis; for a nondegenerate rho the
    representation is exact and the residual sits at rounding level.  Warns
    with :class:`ConditioningWarning` when the design matrix is ill
    conditioned (as for rho proportional to the identity).
    """
    from .connection import sylvester_solve

    r = np.asarray(rho.entries if isinstance(rho, DensityMatrix) else rho, dtype=complex)
    powers = [np.linalg.matrix_power(r, k) for k in range(3)]
    cols, rhs = [], []
    basis = hermitian_basis(3)
    for i, j in _SYM_PAIRS:
        block = [powers[i] @ S @ powers[j] for S in basis]
        if i != j:
            block = [B + powers[j] @ S @ powers[i] for B, S in zip(block, basis)]
        cols.append(np.concatenate([np.r_[B.real.ravel(), B.imag.ravel()] for B in block]))
    for S in basis:
        X = sylvester_solve(r, S)
        rhs.append(np.r_[X.real.ravel(), X.imag.ravel()])
    A = np.array(cols).T
    y = np.concatenate(rhs)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.abs(A @ coef - y).max())
    cond = float(np.linalg.cond(A))
    a = np.zeros((3, 3))
    for c, (i, j) in zip(coef, _SYM_PAIRS):
        a[i, j] = a[j, i] = c
    if cond > cond_limit:
        warnings.warn(f"a_ij fit is ill conditioned (cond {cond:.3g}, residual {resid:.3g})",
                      ConditioningWarning, stacklevel=2)
    return AijFit(a, resid, cond)


def metric_from_aij(point: PointCoords, fit: AijFit | None = None,
                    sequence: GeneratorSequence = CALIBRATED_SEQUENCE) -> np.ndarray:
    """g_ij = 1/2 sum_kl a_kl Tr(d_i rho rho^{k-1} d_j rho rho^{l-1})."""
    rho, _ = density_from_angles(point, sequence)
    if fit is None:
        fit = fit_aij(rho)
    r = rho.entries
    powers = [np.linalg.matrix_power(r, k) for k in range(3)]
    d = rho_partials(point, sequence)
    g = np.zeros((8, 8))
    for k in range(3):
        for l in range(3):
            if fit.a[k, l] == 0:
                continue
            g += 0.5 * fit.a[k, l] * np.einsum(
                "iab,bc,jcd,da->ij", d, powers[k], d, powers[l]).real
    return 0.5 * (g + g.T)
