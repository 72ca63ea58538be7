"""Uhlmann connection along coordinate directions and its curvature."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BuresFormsError, DegenerateStateError, StencilError
from .state import (CALIBRATED_SEQUENCE, COORDINATES, DEFAULT_GAP, DensityMatrix,
                    GeneratorSequence, PointCoords, _raw_eigenvalue_partials,
                    eigenvalues_from_angles)

SUM_THRESHOLD = 1e-12


def sylvester_solve(rho, S: np.ndarray) -> np.ndarray:
    """Solve rho X + X rho = S for Hermitian rho, in the eigenbasis of rho."""
    r = np.asarray(rho.entries if isinstance(rho, DensityMatrix) else rho, dtype=complex)
    lam, V = np.linalg.eigh(0.5 * (r + r.conj().T))
    sums = lam[:, None] + lam[None, :]
    if np.abs(sums).min() < SUM_THRESHOLD:
        raise DegenerateStateError("eigenvalue sum below threshold in Sylvester solve")
    Sp = V.conj().T @ np.asarray(S, dtype=complex) @ V
    return V @ (Sp / sums) @ V.conj().T


def _direction_index(direction) -> int:
    if isinstance(direction, str):
        return COORDINATES.index(direction)
    k = int(direction)
    if not 0 <= k < 8:
        raise ValueError(f"direction {direction} outside 0..7")
    return k


def hermitian_sqrt_section(point: PointCoords, sequence: GeneratorSequence = CALIBRATED_SEQUENCE,
                           gap: float = DEFAULT_GAP) -> tuple[np.ndarray, np.ndarray]:
    """W = U D^{1/2} U^* and its eight coordinate partials (shape (8, 3, 3))."""
    lam = eigenvalues_from_angles(point.theta1, point.theta2, gap, sequence)
    s = np.sqrt(lam)
    U = sequence.unitary(point)
    Ud = U.conj().T
    W = (U * s) @ Ud
    dW = np.empty((8, 3, 3), dtype=complex)
    for c, dU in enumerate(sequence.unitary_partials(point)):
        X = (dU * s) @ Ud
        dW[c] = X + X.conj().T
    dlam = _raw_eigenvalue_partials(point.theta1, point.theta2)[:, list(sequence.slots)]
    for c in range(2):
        dW[6 + c] = (U * (0.5 * dlam[c] / s)) @ Ud
    return W, dW


@dataclass(frozen=True)
class ConnectionComponent:
    direction: str
    A: np.ndarray
    sylvester_residual: float


def uhlmann_connection(point: PointCoords, direction,
                       sequence: GeneratorSequence = CALIBRATED_SEQUENCE,
                       gap: float = DEFAULT_GAP) -> ConnectionComponent:
    """A solving rho A + A rho = W^* T - T^* W with W Hermitian, T = dW/dx."""
    k = _direction_index(direction)
    W, dW = hermitian_sqrt_section(point, sequence, gap)
    T = dW[k]
    S = W @ T - T.conj().T @ W
    rho = W @ W
    A = sylvester_solve(rho, S)
    resid = float(np.abs(rho @ A + A @ rho - S).max())
    return ConnectionComponent(COORDINATES[k], A, resid)


def _connection_at(point, k, sequence, gap):
    try:
        return uhlmann_connection(point, k, sequence, gap).A
    except DegenerateStateError as exc:
        raise StencilError(f"degenerate state on the stencil at {point}") from exc


def curvature(point: PointCoords, mu, nu, step: float = 1e-4,
              sequence: GeneratorSequence = CALIBRATED_SEQUENCE,
              gap: float = DEFAULT_GAP) -> np.ndarray:
    """F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu] by central differences."""
    m, n = _direction_index(mu), _direction_index(nu)
    lm, ln = COORDINATES[m], COORDINATES[n]

    def A(p, k):
        return _connection_at(p, k, sequence, gap)

    d_mu_An = (A(point.shifted(lm, step), n) - A(point.shifted(lm, -step), n)) / (2 * step)
    d_nu_Am = (A(point.shifted(ln, step), m) - A(point.shifted(ln, -step), m)) / (2 * step)
    Am, An = A(point, m), A(point, n)
    return d_mu_An - d_nu_Am + Am @ An - An @ Am


@dataclass(frozen=True)
class ConvergenceReport:
    steps: tuple[float, float, float]
    diff_coarse: float
    diff_fine: float

    @property
    def ratio(self) -> float:
        return self.diff_coarse / self.diff_fine


def curvature_convergence(point: PointCoords, mu, nu, step: float = 1e-2,
                          sequence: GeneratorSequence = CALIBRATED_SEQUENCE) -> ConvergenceReport:
    """Compare curvature estimates at step h, h/2, h/4.

    For a second-order stencil the ratio of successive differences is near 4.
    The default step is large enough that truncation error dominates rounding.
    """
    h = (step, step / 2, step / 4)
    F = [curvature(point, mu, nu, s, sequence) for s in h]
    d1 = float(np.abs(F[0] - F[1]).max())
    d2 = float(np.abs(F[1] - F[2]).max())
    if d2 == 0.0:
        raise BuresFormsError("curvature estimates coincide; convergence ratio undefined")
    return ConvergenceReport(h, d1, d2)
