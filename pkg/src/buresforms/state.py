"""Eight-coordinate chart on nondegenerate 3x3 density matrices.

A state is rho = U D U^*, with U a product of six exponentials of Gell-Mann
generators (the Euler angles) and D = diag of eigenvalues parameterized by
two further angles.  The precise generator sequence is not hard-coded from
a reference but recovered by :func:`calibrate_parameterization` from two
density matrices whose chart coordinates are known; the result is frozen in
:data:`CALIBRATED_SEQUENCE`.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import astuple, dataclass, fields, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import CalibrationError, DegenerateStateError

COORDINATES = ("alpha", "tau", "a", "beta", "b", "theta", "theta1", "theta2")
EULER_COORDINATES = COORDINATES[:6]

# Side lengths of one fundamental hyperrectangle; documentation only.
COORDINATE_RANGES = {
    "alpha": np.pi, "tau": np.pi, "a": np.pi,
    "beta": np.pi / 2, "b": np.pi / 2, "theta": np.pi / 2,
    "theta1": float(np.arccos(1 / np.sqrt(3))), "theta2": np.pi / 4,
}

DEFAULT_GAP = 1e-8


@dataclass(frozen=True)
class PointCoords:
    alpha: float
    tau: float
    a: float
    beta: float
    b: float
    theta: float
    theta1: float
    theta2: float

    def __post_init__(self):
        for f in fields(self):
            v = float(getattr(self, f.name))
            if not np.isfinite(v):
                raise ValueError(f"coordinate {f.name} is not finite")
            object.__setattr__(self, f.name, v)

    @classmethod
    def from_array(cls, x: Iterable[float]) -> "PointCoords":
        return cls(*[float(v) for v in x])

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    def with_coordinate(self, label: str, value: float) -> "PointCoords":
        return replace(self, **{label: value})

    def shifted(self, label: str, delta: float) -> "PointCoords":
        return replace(self, **{label: getattr(self, label) + delta})


def check_ranges(point: PointCoords) -> list[str]:
    """Names of coordinates outside [0, side length]; warns if any."""
    out = [c for c in COORDINATES if not 0.0 <= getattr(point, c) <= COORDINATE_RANGES[c]]
    if out:
        warnings.warn(f"coordinates outside the canonical ranges: {', '.join(out)}",
                      stacklevel=2)
    return out


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError("density matrix must be 3x3")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def validate(self, tol: float = 1e-12) -> None:
        m = self.entries
        if np.abs(m - m.conj().T).max() > tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > tol:
            raise ValueError("density matrix does not have unit trace")
        if np.linalg.eigvalsh(m).min() < -tol:
            raise ValueError("density matrix is not positive semidefinite")


@dataclass(frozen=True)
class SpectralFrame:
    unitary: np.ndarray
    eigenvalues: np.ndarray


def gell_mann() -> np.ndarray:
    """The eight Gell-Mann matrices, stacked as an array of shape (8, 3, 3)."""
    lam = np.zeros((8, 3, 3), dtype=complex)
    lam[0][0, 1] = lam[0][1, 0] = 1
    lam[1][0, 1], lam[1][1, 0] = -1j, 1j
    lam[2][0, 0], lam[2][1, 1] = 1, -1
    lam[3][0, 2] = lam[3][2, 0] = 1
    lam[4][0, 2], lam[4][2, 0] = -1j, 1j
    lam[5][1, 2] = lam[5][2, 1] = 1
    lam[6][1, 2], lam[6][2, 1] = -1j, 1j
    lam[7] = np.diag([1, 1, -2]) / np.sqrt(3)
    return lam


_BLOCKS = {1: (0, 1), 2: (0, 1), 4: (0, 2), 5: (0, 2), 6: (1, 2), 7: (1, 2)}


def expi_generator(k: int, x) -> np.ndarray:
    """exp(i * lambda_k * x) in closed form; ``x`` may be an array of angles.

    Returns shape ``x.shape + (3, 3)``.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape + (3, 3), dtype=complex)
    if k == 3:
        out[..., 0, 0] = np.exp(1j * x)
        out[..., 1, 1] = np.exp(-1j * x)
        out[..., 2, 2] = 1
    elif k == 8:
        out[..., 0, 0] = out[..., 1, 1] = np.exp(1j * x / np.sqrt(3))
        out[..., 2, 2] = np.exp(-2j * x / np.sqrt(3))
    elif k in _BLOCKS:
        p, q = _BLOCKS[k]
        r = 3 - p - q
        c, s = np.cos(x), np.sin(x)
        out[..., p, p] = out[..., q, q] = c
        out[..., r, r] = 1
        if k in (1, 4, 6):  # symmetric generator: i*sin on the off-diagonal
            out[..., p, q] = out[..., q, p] = 1j * s
        else:  # antisymmetric generator: real rotation
            out[..., p, q] = s
            out[..., q, p] = -s
    else:
        raise ValueError(f"no Gell-Mann generator {k}")
    return out


@dataclass(frozen=True)
class GeneratorSequence:
    """Euler product U = prod_f exp(i lambda_{g_f} phi_f) and eigenvalue slots.

    Each factor is ``(generator, ((label, weight), ...))``; its angle phi_f is
    the weighted sum of the named Euler coordinates.  ``slots[k]`` says which
    entry of (cos^2 t1, sin^2 t1 cos^2 t2, sin^2 t1 sin^2 t2) sits at
    diagonal position k of D.
    """

    factors: tuple[tuple[int, tuple[tuple[str, int], ...]], ...]
    slots: tuple[int, int, int] = (0, 1, 2)

    def weight_matrix(self) -> np.ndarray:
        W = np.zeros((len(self.factors), 6))
        for f, (_, weights) in enumerate(self.factors):
            for label, w in weights:
                W[f, EULER_COORDINATES.index(label)] += w
        return W

    def angles(self, point: PointCoords) -> np.ndarray:
        return self.weight_matrix() @ point.as_array()[:6]

    def factor_matrices(self, point: PointCoords) -> list[np.ndarray]:
        return [expi_generator(g, phi) for (g, _), phi in zip(self.factors, self.angles(point))]

    def unitary(self, point: PointCoords) -> np.ndarray:
        U = np.eye(3, dtype=complex)
        for M in self.factor_matrices(point):
            U = U @ M
        return U

    def unitary_partials(self, point: PointCoords) -> np.ndarray:
        """dU/dx for the six Euler coordinates, shape (6, 3, 3)."""
        mats = self.factor_matrices(point)
        lam = gell_mann()
        W = self.weight_matrix()
        # prefix/suffix products so each factor derivative is one product
        left = [np.eye(3, dtype=complex)]
        for M in mats:
            left.append(left[-1] @ M)
        right = [np.eye(3, dtype=complex)]
        for M in reversed(mats):
            right.append(M @ right[-1])
        right = right[::-1]
        dfactor = [left[f] @ (1j * lam[g - 1] @ mats[f]) @ right[f + 1]
                   for f, (g, _) in enumerate(self.factors)]
        return np.einsum("fc,fij->cij", W, np.array(dfactor))

    def describe(self) -> str:
        parts = []
        for g, weights in self.factors:
            arg = " ".join(f"{'+' if w > 0 else '-'}{l}" for l, w in weights).lstrip("+")
            parts.append(f"exp(i l{g} ({arg}))")
        return " ".join(parts) + f" | slots {self.slots}"


CALIBRATED_SEQUENCE = GeneratorSequence(
    factors=(
        (3, (("alpha", 1),)),
        (2, (("beta", 1),)),
        (3, (("tau", 1), ("a", -1))),
        (5, (("theta", 1),)),
        (3, (("a", 1),)),
        (2, (("b", 1),)),
    ),
    slots=(0, 1, 2),
)


def _raw_eigenvalues(theta1, theta2) -> np.ndarray:
    c1, s1 = np.cos(theta1), np.sin(theta1)
    c2, s2 = np.cos(theta2), np.sin(theta2)
    return np.array([c1 * c1, s1 * s1 * c2 * c2, s1 * s1 * s2 * s2])


def _raw_eigenvalue_partials(theta1, theta2) -> np.ndarray:
    """d/d(theta1, theta2) of the unpermuted triple, shape (2, 3)."""
    s1 = np.sin(theta1)
    c2, s2 = np.cos(theta2), np.sin(theta2)
    s21, s22 = np.sin(2 * theta1), np.sin(2 * theta2)
    return np.array([
        [-s21, s21 * c2 * c2, s21 * s2 * s2],
        [0.0, -s1 * s1 * s22, s1 * s1 * s22],
    ])


def check_nondegenerate(values: Sequence[float], gap: float = DEFAULT_GAP) -> None:
    v = np.asarray(values, dtype=float)
    if v.min() <= gap:
        raise DegenerateStateError(f"eigenvalue {v.min():.3g} below {gap:g}")
    diffs = np.abs(v[:, None] - v[None, :])[np.triu_indices(len(v), 1)]
    if diffs.min() <= gap:
        raise DegenerateStateError(
            f"eigenvalues coincide within {diffs.min():.3g}")


def eigenvalues_from_angles(theta1: float, theta2: float, gap: float = DEFAULT_GAP,
                            sequence: GeneratorSequence = CALIBRATED_SEQUENCE) -> np.ndarray:
    """Diagonal of D, in the slot order of ``sequence``; sums to one."""
    vals = _raw_eigenvalues(theta1, theta2)[list(sequence.slots)]
    check_nondegenerate(vals, gap)
    return vals


def density_from_angles(point: PointCoords, sequence: GeneratorSequence = CALIBRATED_SEQUENCE,
                        gap: float = DEFAULT_GAP) -> tuple[DensityMatrix, SpectralFrame]:
    lam = eigenvalues_from_angles(point.theta1, point.theta2, gap, sequence)
    U = sequence.unitary(point)
    rho = (U * lam) @ U.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho), SpectralFrame(U, lam)


def rho_partials(point: PointCoords, sequence: GeneratorSequence = CALIBRATED_SEQUENCE,
                 gap: float = DEFAULT_GAP) -> np.ndarray:
    """d rho / d x_i for the eight coordinates, shape (8, 3, 3)."""
    lam = eigenvalues_from_angles(point.theta1, point.theta2, gap, sequence)
    U = sequence.unitary(point)
    Ud = U.conj().T
    out = np.empty((8, 3, 3), dtype=complex)
    for c, dU in enumerate(sequence.unitary_partials(point)):
        X = (dU * lam) @ Ud
        out[c] = X + X.conj().T
    dlam = _raw_eigenvalue_partials(point.theta1, point.theta2)[:, list(sequence.slots)]
    for c in range(2):
        out[6 + c] = (U * dlam[c]) @ Ud
    return out


# ---------------------------------------------------------------------------
# calibration

_EULER_SKELETON = (3, 2, 3, 5, 3, 2)


def _candidate_couplings():
    """None, or (target, source, sign): angle[target] -= sign * angle[source].

    Couplings only run between the lambda_3 factors of the skeleton.
    """
    l3 = [f for f, g in enumerate(_EULER_SKELETON) if g == 3]
    out = [None]
    for t in l3:
        for s in l3:
            if s != t:
                out.extend([(t, s, 1), (t, s, -1)])
    return out


def _sequence_from_candidate(assign, signs, coupling, slots) -> GeneratorSequence:
    weights = [{EULER_COORDINATES[assign[f]]: int(signs[f])} for f in range(6)]
    if coupling is not None:
        t, s, sg = coupling
        for label, w in weights[s].items():
            weights[t][label] = weights[t].get(label, 0) - sg * w
    factors = tuple(
        (g, tuple((l, w) for l, w in wd.items() if w != 0))
        for g, wd in zip(_EULER_SKELETON, weights)
    )
    return GeneratorSequence(factors, tuple(int(s) for s in slots))


def candidate_deviation(sequence: GeneratorSequence, fixtures) -> float:
    """Max entrywise deviation of the chart from the fixture matrices."""
    dev = 0.0
    for point, rho in fixtures:
        U = sequence.unitary(point)
        lam = _raw_eigenvalues(point.theta1, point.theta2)[list(sequence.slots)]
        target = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
        dev = max(dev, float(np.abs((U * lam) @ U.conj().T - target).max()))
    return dev


def search_candidates(fixtures, keep: int = 20) -> list[tuple[float, GeneratorSequence]]:
    """Rank every candidate of the finite family by fixture deviation.

    The family is the Euler skeleton (l3, l2, l3, l5, l3, l2) with the six
    Euler coordinates assigned to its factors in any order, each with either
    exponent sign, optionally with one lambda_3 angle offset by another
    (``_candidate_couplings``), crossed with the six eigenvalue slot orders.
    Returns the ``keep`` best candidates, best first.
    """
    perms = np.array(list(itertools.permutations(range(6))))
    signs = np.array(list(itertools.product((1, -1), repeat=6)))
    pi_idx, si_idx = np.meshgrid(np.arange(len(perms)), np.arange(len(signs)), indexing="ij")
    pi_idx, si_idx = pi_idx.ravel(), si_idx.ravel()
    P, S = perms[pi_idx], signs[si_idx]
    targets = [np.asarray(r.entries if isinstance(r, DensityMatrix) else r) for _, r in fixtures]
    best: list[tuple[float, tuple]] = []
    for coupling in _candidate_couplings():
        Us = []
        for point, _ in fixtures:
            vals = point.as_array()[:6]
            ang = S * vals[P]
            if coupling is not None:
                t, s, sg = coupling
                ang[:, t] = ang[:, t] - sg * ang[:, s]
            U = np.broadcast_to(np.eye(3, dtype=complex), (len(ang), 3, 3))
            for f, g in enumerate(_EULER_SKELETON):
                U = U @ expi_generator(g, ang[:, f])
            Us.append(U)
        for slots in itertools.permutations(range(3)):
            dev = np.zeros(len(P))
            for U, (point, _), target in zip(Us, fixtures, targets):
                lam = _raw_eigenvalues(point.theta1, point.theta2)[list(slots)]
                rho = np.einsum("nij,j,nkj->nik", U, lam, U.conj())
                dev = np.maximum(dev, np.abs(rho - target).max(axis=(1, 2)))
            top = np.argsort(dev)[:keep]
            best.extend((float(dev[n]), (P[n], S[n], coupling, slots)) for n in top)
    best.sort(key=lambda item: item[0])
    return [(d, _sequence_from_candidate(*c)) for d, c in best[:keep]]


def _metric_invariant_coordinates(sequence: GeneratorSequence, probe: PointCoords,
                                  shift: float = 0.3, tol: float = 1e-9) -> set[str]:
    from .metric import bures_metric

    g0 = bures_metric(probe, sequence=sequence).g
    out = set()
    for label in EULER_COORDINATES:
        g1 = bures_metric(probe.shifted(label, shift), sequence=sequence).g
        if np.abs(g1 - g0).max() < tol:
            out.add(label)
    return out


def calibrate_parameterization(fixtures=None, tol: float = 1e-10,
                               invariant_coordinates: Iterable[str] = ("alpha", "a"),
                               ) -> GeneratorSequence:
    """Recover the generator sequence that reproduces every fixture matrix.

    ``fixtures`` is a list of ``(PointCoords, density matrix)``; by default the
    two reference points of :mod:`buresforms.fixtures`.  Candidates matching
    all fixtures within ``tol`` are further required to give a metric that is
    invariant under shifts of exactly the coordinates ``invariant_coordinates``
    (the two fixtures alone cannot tell alpha from beta apart, since both share
    the value pi/4 at one point and differ by pi at the other).
    """
    if fixtures is None:
        from .fixtures import Q1, Q2, RHO1, RHO2
        fixtures = [(Q1, RHO1), (Q2, RHO2)]
    ranked = search_candidates(fixtures, keep=40)
    survivors = [seq for d, seq in ranked if d <= tol]
    deviations = {seq.describe(): d for d, seq in ranked[:10]}
    if not survivors:
        raise CalibrationError("no candidate reproduces the fixtures", deviations)
    wanted = set(invariant_coordinates)
    if len(survivors) > 1 and wanted:
        probe = PointCoords(0.31, 0.72, 0.53, 0.44, 0.27, 0.61, 0.37, 0.23)
        survivors = [s for s in survivors if _metric_invariant_coordinates(s, probe) == wanted]
    if len(survivors) != 1:
        raise CalibrationError(f"{len(survivors)} candidates survive calibration", deviations)
    return survivors[0]
