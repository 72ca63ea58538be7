"""Slow reference implementations used to cross-check the fast paths.

These deliberately avoid the code they check: the Hodge star is a direct
sum over all permutations of the coordinate labels, the wedge product a sum
over all shuffles of the full antisymmetric tensors, and the Sylvester
solve a dense Kronecker-product linear system.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from math import factorial

import numpy as np

from .exterior import PForm, basis


def _sign(perm) -> int:
    perm = list(perm)
    s = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            s = -s
    return s


@lru_cache(maxsize=None)
def _all_permutations(n: int):
    perms = np.array(list(permutations(range(n))), dtype=int)
    signs = np.array([_sign(p) for p in perms], dtype=float)
    return perms, signs


def full_tensor(form: PForm) -> np.ndarray:
    """Totally antisymmetric component array a[i1, ..., ip] of a p-form."""
    n, p = form.dim, form.degree
    T = np.zeros((n,) * p)
    if p == 0:
        return np.array(form.coefficients[0])
    perms, signs = _all_permutations(p)
    idx = np.array(basis(p, n), dtype=int) - 1
    for k in range(len(perms)):
        T[tuple(idx[:, perms[k]].T)] = signs[k] * form.coefficients
    return T


def hodge_star_permutation_sum(form: PForm, g: np.ndarray) -> PForm:
    """(*a)_{j_{p+1}..j_n} = sqrt(g)/p! g^{i1 j1}..g^{ip jp} eps_{j1..jn} a_{i1..ip}.

    Summed over all n! label permutations (j1, ..., jn).
    """
    g = np.asarray(g, dtype=float)
    n, p = form.dim, form.degree
    g_inv = np.linalg.inv(g)
    sqrt_g = np.sqrt(np.linalg.det(g))
    raised = full_tensor(form)
    for _ in range(p):
        # contracting the leading slot and appending the raised one cycles
        # through all p slots
        raised = np.tensordot(raised, g_inv, axes=([0], [0]))
    perms, signs, keep, slots = _increasing_tails(n, p)
    head = perms[keep, :p]
    vals = raised[tuple(head.T)] if p else np.full(len(head), float(raised))
    out = np.zeros(len(basis(n - p, n)))
    np.add.at(out, slots, sqrt_g / factorial(p) * signs[keep] * vals)
    return PForm(n - p, out, n)


@lru_cache(maxsize=None)
def _increasing_tails(n: int, p: int):
    """Permutations whose last n-p labels increase, with the basis slot of the tail."""
    perms, signs = _all_permutations(n)
    tails = perms[:, p:]
    keep = np.all(np.diff(tails, axis=1) > 0, axis=1) if n - p > 1 else np.ones(len(perms), bool)
    pos = {idx: k for k, idx in enumerate(basis(n - p, n))}
    slots = np.array([pos[tuple(int(i) + 1 for i in t)] for t in tails[keep]], dtype=int)
    return perms, signs, keep, slots


def wedge_shuffle(a: PForm, b: PForm) -> PForm:
    """a ^ b from (a^b)_{K} = sum over permutations of K of sign * a * b / (p! q!)."""
    n, p, q = a.dim, a.degree, b.degree
    A, B = full_tensor(a), full_tensor(b)
    out = np.zeros(len(basis(p + q, n)))
    for k, K in enumerate(basis(p + q, n)):
        K0 = [i - 1 for i in K]
        s = 0.0
        for perm in permutations(range(p + q)):
            labels = [K0[i] for i in perm]
            s += _sign(perm) * A[tuple(labels[:p])] * B[tuple(labels[p:])]
        out[k] = s / (factorial(p) * factorial(q))
    return PForm(p + q, out, n)


def sylvester_kronecker(rho: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Solve rho X + X rho = S through the 9x9 vectorized system."""
    rho = np.asarray(rho, dtype=complex)
    n = rho.shape[0]
    I = np.eye(n)
    # column-major vec: vec(rho X) = (I kron rho) vec X, vec(X rho) = (rho^T kron I) vec X
    K = np.kron(I, rho) + np.kron(rho.T, I)
    x = np.linalg.solve(K, np.asarray(S, dtype=complex).reshape(-1, order="F"))
    return x.reshape(n, n, order="F")


def random_density(rng: np.random.Generator, n: int = 3, min_gap: float = 1e-2) -> np.ndarray:
    """Random full-rank density matrix with well separated eigenvalues."""
    while True:
        lam = rng.dirichlet(np.ones(n))
        d = np.abs(lam[:, None] - lam[None, :])[np.triu_indices(n, 1)]
        if lam.min() > min_gap and d.min() > min_gap:
            break
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, _ = np.linalg.qr(Z)
    return (Q * lam) @ Q.conj().T


def random_spd(rng: np.random.Generator, n: int = 8) -> np.ndarray:
    A = rng.normal(size=(n, n))
    return A @ A.T + n * np.eye(n)
