"""Pointwise self-dual and anti-self-dual four-forms under a fixed pin convention."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDualityError, PinConventionError, SolverError
from .exterior import DIM, MultiIndex, PForm, basis, star_matrix

RANK_RTOL = 1e-8
RESIDUAL_TOL = 1e-9


def split_basis(n: int = DIM) -> tuple[np.ndarray, np.ndarray]:
    """Positions of the degree-4 basis indices with / without coordinate 1."""
    B = basis(4, n)
    first = np.array([k for k, I in enumerate(B) if I[0] == 1])
    second = np.array([k for k, I in enumerate(B) if I[0] != 1])
    return first, second


@dataclass(frozen=True)
class FourFormSolution:
    omega: PForm
    sign: int
    pinned_set: tuple[MultiIndex, ...]
    residual: float
    relative_residual: float = 0.0

    def __getitem__(self, idx) -> float:
        return self.omega[idx]


def solve_dual_form(metric, sign: int, residual_tol: float = RESIDUAL_TOL) -> FourFormSolution:
    """Four-form with *omega = sign * omega, unit coefficients off coordinate 1.

    The 35 basis forms not containing dx1 are pinned to 1 and the other 35
    coefficients solve the corresponding block of (S - sign I) omega = 0,
    where S is the Hodge star on four-forms.  All 70 equations are checked
    afterwards.

    ``residual`` is the max-abs violation of the 70 equations.  The solve is
    accepted when ``relative_residual``, the same quantity divided by
    max(1, max|S| * max|omega|), is below ``residual_tol``; near degenerate
    states the star matrix grows large and an absolute bound is
    unattainable in double precision.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    S = star_matrix(metric, 4)
    n = S.shape[0]
    K = S - sign * np.eye(n)
    sv = np.linalg.svd(K, compute_uv=False)
    rank = int(np.sum(sv > RANK_RTOL * sv[0]))
    if rank != n // 2:
        raise DegenerateDualityError(
            f"solution space has dimension {n - rank}, expected {n - n // 2}")
    first, second = split_basis(DIM)
    A = K[:, first]
    rhs = -K[:, second].sum(axis=1)
    sv_a = np.linalg.svd(A, compute_uv=False)
    if sv_a[-1] <= RANK_RTOL * sv_a[0]:
        raise PinConventionError("unknown block is rank deficient; the pin convention fails here")
    x, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    coeffs = np.ones(n)
    coeffs[first] = x
    resid = float(np.abs(K @ coeffs).max())
    # iterative refinement; matters where the metric is badly conditioned
    for _ in range(3):
        if resid <= 1e-6 * residual_tol:
            break
        trial = coeffs.copy()
        trial[first] += np.linalg.lstsq(A, -(K @ coeffs), rcond=None)[0]
        trial_resid = float(np.abs(K @ trial).max())
        if trial_resid >= resid:
            break
        coeffs, resid = trial, trial_resid
    rel = resid / max(1.0, float(np.abs(S).max()) * float(np.abs(coeffs).max()))
    if rel > residual_tol:
        raise SolverError(f"duality residual {resid:.3g} (relative {rel:.3g}) exceeds {residual_tol:g}")
    pinned = tuple(basis(4, DIM)[k] for k in second)
    return FourFormSolution(PForm(4, coeffs), sign, pinned, resid, rel)


def is_pm_equal(a, b, tol: float = 1e-9) -> bool:
    """True if a == b or a == -b coefficientwise within ``tol``."""
    x = a.omega if isinstance(a, FourFormSolution) else a
    y = b.omega if isinstance(b, FourFormSolution) else b
    if (x.degree, x.dim) != (y.degree, y.dim):
        raise ValueError("forms live in different spaces")
    u, v = x.coefficients, y.coefficients
    return bool(np.abs(u - v).max() <= tol or np.abs(u + v).max() <= tol)
