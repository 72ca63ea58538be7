"""Antisymmetric forms over an n-dimensional chart (n = 8 by default).

Multi-indices are strictly increasing tuples of 1-based coordinate labels,
so ``(1, 2, 3, 4)`` is dx1^dx2^dx3^dx4.  Coefficients of a degree-p form are
stored densely on the lexicographically ordered C(n, p) basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegreeOverflowError, InvalidIndexError, InvalidMetricError

DIM = 8

MultiIndex = tuple[int, ...]


@lru_cache(maxsize=None)
def basis(p: int, n: int = DIM) -> tuple[MultiIndex, ...]:
    """Lexicographically ordered increasing multi-indices of length ``p``."""
    if not 0 <= p <= n:
        raise DegreeOverflowError(f"degree {p} outside 0..{n}")
    return tuple(combinations(range(1, n + 1), p))


@lru_cache(maxsize=None)
def basis_position(p: int, n: int = DIM) -> dict[MultiIndex, int]:
    return {idx: k for k, idx in enumerate(basis(p, n))}


def _parity(seq: Sequence[int]) -> int:
    # inversion count; sequences here have at most 12 entries
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def levi_civita_sign(perm: Sequence[int], n: int | None = None) -> int:
    """Sign of ``perm`` as a permutation of 1..n, or 0 if a label repeats.

    The convention is epsilon_{12...n} = +1.
    """
    perm = tuple(int(x) for x in perm)
    n = len(perm) if n is None else n
    if len(perm) != n:
        raise InvalidIndexError(f"expected {n} labels, got {len(perm)}")
    for x in perm:
        if not 1 <= x <= n:
            raise InvalidIndexError(f"label {x} outside 1..{n}")
    if len(set(perm)) != n:
        return 0
    return _parity(perm)


def _check_multi_index(idx: Iterable[int], n: int) -> MultiIndex:
    idx = tuple(int(i) for i in idx)
    for i in idx:
        if not 1 <= i <= n:
            raise InvalidIndexError(f"label {i} outside 1..{n}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise InvalidIndexError(f"multi-index {idx} is not strictly increasing")
    return idx


@dataclass(frozen=True)
class PForm:
    """A degree-``degree`` form with dense coefficients over ``basis(degree)``."""

    degree: int
    coefficients: np.ndarray
    dim: int = DIM

    def __post_init__(self):
        if not 0 <= self.degree <= self.dim:
            raise DegreeOverflowError(f"degree {self.degree} outside 0..{self.dim}")
        c = np.array(self.coefficients, dtype=float).reshape(-1)
        if c.size != comb(self.dim, self.degree):
            raise ValueError(
                f"degree-{self.degree} form needs {comb(self.dim, self.degree)} "
                f"coefficients, got {c.size}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def zero(cls, degree: int, dim: int = DIM) -> "PForm":
        return cls(degree, np.zeros(comb(dim, degree)), dim)

    @classmethod
    def basis_form(cls, indices: Iterable[int], coefficient: float = 1.0, dim: int = DIM) -> "PForm":
        return cls.from_dict({tuple(indices): coefficient}, dim=dim)

    @classmethod
    def from_dict(cls, terms: Mapping[Iterable[int], float], degree: int | None = None,
                  dim: int = DIM) -> "PForm":
        """Build a form from ``{multi_index: coefficient}``.

        Indices need not be sorted; the sign of the sorting permutation is
        applied, and repeated labels are rejected.
        """
        items = [(tuple(int(i) for i in k), float(v)) for k, v in terms.items()]
        if degree is None:
            if not items:
                raise ValueError("degree required for an empty form")
            degree = len(items[0][0])
        c = np.zeros(comb(dim, degree))
        pos = basis_position(degree, dim)
        for idx, v in items:
            if len(idx) != degree:
                raise InvalidIndexError(f"{idx} does not have degree {degree}")
            if len(set(idx)) != len(idx):
                raise InvalidIndexError(f"repeated label in {idx}")
            srt = _check_multi_index(sorted(idx), dim)
            c[pos[srt]] += _parity(idx) * v
        return cls(degree, c, dim)

    def __getitem__(self, idx: Iterable[int]) -> float:
        idx = _check_multi_index(idx, self.dim)
        return float(self.coefficients[basis_position(self.degree, self.dim)[idx]])

    def terms(self, tol: float = 0.0) -> dict[MultiIndex, float]:
        return {
            idx: float(v)
            for idx, v in zip(basis(self.degree, self.dim), self.coefficients)
            if abs(v) > tol
        }

    def __add__(self, other: "PForm") -> "PForm":
        self._same_space(other)
        return PForm(self.degree, self.coefficients + other.coefficients, self.dim)

    def __sub__(self, other: "PForm") -> "PForm":
        self._same_space(other)
        return PForm(self.degree, self.coefficients - other.coefficients, self.dim)

    def __neg__(self) -> "PForm":
        return PForm(self.degree, -self.coefficients, self.dim)

    def __mul__(self, c: float) -> "PForm":
        return PForm(self.degree, float(c) * self.coefficients, self.dim)

    __rmul__ = __mul__

    def _same_space(self, other):
        if (self.degree, self.dim) != (other.degree, other.dim):
            raise ValueError("forms live in different spaces")


@lru_cache(maxsize=None)
def _wedge_table(p: int, q: int, n: int):
    """Index triples (i, j, k) and signs with e_I ^ e_J = sign * e_K."""
    if p + q > n:
        raise DegreeOverflowError(f"wedge of degrees {p} and {q} exceeds dimension {n}")
    pos = basis_position(p + q, n)
    rows = []
    for i, I in enumerate(basis(p, n)):
        sI = set(I)
        for j, J in enumerate(basis(q, n)):
            if sI.isdisjoint(J):
                rows.append((i, j, pos[tuple(sorted(I + J))], _parity(I + J)))
    if not rows:
        return (np.zeros(0, int),) * 3 + (np.zeros(0),)
    i, j, k, s = (np.array(col) for col in zip(*rows))
    return i, j, k, s.astype(float)


def wedge(a: PForm, b: PForm) -> PForm:
    """Exterior product a ^ b."""
    if a.dim != b.dim:
        raise ValueError("forms live in different dimensions")
    n = a.dim
    if a.degree + b.degree > n:
        raise DegreeOverflowError(
            f"wedge of degrees {a.degree} and {b.degree} exceeds dimension {n}"
        )
    i, j, k, s = _wedge_table(a.degree, b.degree, n)
    out = np.zeros(comb(n, a.degree + b.degree))
    np.add.at(out, k, s * a.coefficients[i] * b.coefficients[j])
    return PForm(a.degree + b.degree, out, n)


def wedge_matrix(a: PForm, q: int) -> np.ndarray:
    """Matrix of the linear map b -> a ^ b from degree ``q`` to ``a.degree + q``."""
    n = a.dim
    if a.degree + q > n:
        raise DegreeOverflowError(f"wedge of degrees {a.degree} and {q} exceeds dimension {n}")
    i, j, k, s = _wedge_table(a.degree, q, n)
    W = np.zeros((comb(n, a.degree + q), comb(n, q)))
    np.add.at(W, (k, j), s * a.coefficients[i])
    return W


@lru_cache(maxsize=None)
def _complement_data(p: int, n: int):
    """For each output index J of degree n-p: its complement Jc and sign eps(Jc, J)."""
    comps, signs = [], []
    full = set(range(1, n + 1))
    for J in basis(n - p, n):
        Jc = tuple(sorted(full - set(J)))
        comps.append([x - 1 for x in Jc])
        signs.append(_parity(Jc + J))
    return np.array(comps, dtype=int).reshape(len(comps), p), np.array(signs, dtype=float)


def _metric_parts(metric):
    g_inv = np.asarray(metric.g_inv, dtype=float)
    sqrt_det = float(metric.sqrt_det)
    orientation = getattr(metric, "orientation", 1)
    if not np.isfinite(sqrt_det) or sqrt_det <= 0:
        raise InvalidMetricError("metric determinant must be positive")
    return g_inv, orientation * sqrt_det


def star_matrix(metric, p: int) -> np.ndarray:
    """Matrix of the Hodge star from degree ``p`` to degree ``n - p``.

    Entry [J, I] is  orientation * sqrt(det g) * eps(Jc, J) * det(g^{-1}[Jc, I]),
    i.e. the raised components of e_I contracted against the complementary
    block of the Levi-Civita symbol.
    """
    g_inv, vol = _metric_parts(metric)
    n = g_inv.shape[0]
    if not 0 <= p <= n:
        raise DegreeOverflowError(f"degree {p} outside 0..{n}")
    comps, signs = _complement_data(p, n)
    cols = np.array(basis(p, n), dtype=int).reshape(len(basis(p, n)), p) - 1
    if p == 0:
        minors = np.ones((len(signs), 1))
    else:
        sub = g_inv[comps[:, None, :, None], cols[None, :, None, :]]
        minors = np.linalg.det(sub)
    return vol * signs[:, None] * minors


def hodge_star(form: PForm, metric) -> PForm:
    """Hodge dual of ``form`` with respect to ``metric`` (degree p -> n - p)."""
    n = np.asarray(metric.g_inv).shape[0]
    if form.dim != n:
        raise ValueError(f"form dimension {form.dim} does not match metric dimension {n}")
    S = star_matrix(metric, form.degree)
    return PForm(n - form.degree, S @ form.coefficients, n)


def top_coefficient(form: PForm) -> float:
    if form.degree != form.dim:
        raise ValueError("not a top-degree form")
    return float(form.coefficients[0])
