"""Reference points and density matrices, evaluated from exact expressions.

Complex powers follow the principal branch: (-1)**x == exp(i*pi*x).
"""

import numpy as np

from .state import PointCoords

_PI = np.pi
_S2, _S3, _S6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)


def _root(x):
    return np.exp(1j * _PI * x)


Q1 = PointCoords(alpha=-_PI / 3, tau=2 * _PI / 3, a=3 * _PI / 4, beta=2 * _PI / 3,
                 b=-2 * _PI / 3, theta=-2 * _PI / 3, theta1=-2 * _PI / 3, theta2=-_PI / 3)

Q2 = PointCoords(alpha=_PI / 4, tau=3 * _PI / 4, a=2 * _PI / 3, beta=_PI / 4,
                 b=_PI / 4, theta=_PI / 3, theta1=_PI / 4, theta2=_PI / 6)

# second evaluation point for the constant q1 four-forms
Q3 = PointCoords(alpha=2 * _PI / 3, tau=2 * _PI / 3, a=5 * _PI / 6, beta=_PI / 4,
                 b=_PI / 3, theta=_PI / 6, theta1=_PI / 4, theta2=_PI / 6)

# Chart orientation under which the reference q1 four-forms carry their
# self-dual / anti-self-dual labels.  q1 lies outside the canonical
# coordinate ranges; with the positive volume branch the labels swap.
Q1_ORIENTATION = -1
Q2_ORIENTATION = 1
Q3_ORIENTATION = 1

RHO1 = np.array([
    [307 / 1024,
     -3 * (59j + 25 * _S3) / 2048,
     _root(5 / 12) * (51 + 29j * _S3) / 1024],
    [-3 * (-59j + 25 * _S3) / 2048,
     417 / 1024,
     -3 * _root(1 / 12) * (21j + 25 * _S3) / 1024],
    [_root(11 / 12) * (9 + 20j * _S3) / 512,
     3 / 512 * _root(3 / 4) * (24 + 1j * _S3),
     75 / 256],
])

# Entry (1,3) carries the factor (7 + 3i)/128 that makes the matrix Hermitian;
# it is written here as the conjugate of entry (3,1).
_RHO2_31 = (3 / 128 + 7j / 128) * (_root(1 / 4) + _root(7 / 12))
RHO2 = np.array([
    [41 / 128,
     -1 / 32 + 15j / 128,
     (7 + 3j) / 128 * _root(11 / 12) * (1 + _root(1 / 3))],
    [-1 / 32 - 15j / 128,
     41 / 128,
     (-3 / 128 - 7j / 128) * (_root(5 / 12) + _root(3 / 4))],
    [_RHO2_31,
     (1 / 64 + 5j / 128) * (-3j + _S3) / _S2,
     23 / 64],
])

RHO1_EIGENVALUES = (9 / 16, 1 / 4, 3 / 16)
RHO2_EIGENVALUES = (1 / 2, 3 / 8, 1 / 8)

# Reference four-form coefficients (self-dual label first).
OMEGA_Q1 = {
    +1: {(1, 2, 3, 4): 378375 / 1654016, (1, 2, 3, 5): -14037 / 127232,
         (1, 5, 7, 8): 601 / 71, (1, 6, 7, 8): -59079 / 284},
    -1: {(1, 2, 3, 4): 6975 / 23296, (1, 2, 3, 5): -14187 / 127232,
         (1, 5, 7, 8): -647 / 71, (1, 6, 7, 8): 58745 / 284},
}
OMEGA_Q2 = {
    +1: {(1, 2, 3, 4): (448 + 128 * _S3 + 27 * _S6) / 896, (1, 6, 7, 8): (-3 + 224 * _S6) / 6},
    -1: {(1, 2, 3, 4): (448 + 128 * _S3 - 27 * _S6) / 896, (1, 6, 7, 8): (-3 - 224 * _S6) / 6},
}

# Reference spectra (six significant figures).  The unsigned last octet at q2
# is split into a +/- quartet pair, as tracelessness requires.
SPECTRUM_Q1 = (
    [6.15149, -6.06045, -4.16211, 4.07107]
    + [5.11128] * 4 + [-5.11128] * 4
    + [0.994689] * 4 + [-0.994689] * 4
    + [0.0455182] * 4 + [-0.0455182] * 4
)
SPECTRUM_Q2 = (
    [2.68934, -2.60397, -1.69317, 1.6078]
    + [2.14857] * 4 + [-2.14857] * 4
    + [0.498082] * 4 + [-0.498082] * 4
    + [0.0426838] * 4 + [-0.0426838] * 4
)

CROSS_POINT_LEADING = {+1: (9.83657, -9.73817), -1: (9.66359, -9.59167)}
