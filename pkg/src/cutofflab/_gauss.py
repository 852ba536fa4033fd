"""Gauss quadrature primitives shared by the volume, Green and spectral code.

Three building blocks:
  * cached Gauss-Legendre rules,
  * Gauss-Jacobi rules for the one-sided weight (1+t)^beta via Golub-Welsch,
  * the order-16 reference matrix turning nodal values into running integrals
    of the nodal interpolant (used for within-panel cumulative integration).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def gauss_jacobi_one_sided(npts: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights integrating exactly int_{-1}^{1} (1+t)^beta p(t) dt.

    Golub-Welsch on the monic Jacobi recurrence with alpha=0. beta may be any
    real > -1; here it is the endpoint exponent of a radial volume density.
    """
    a, b = 0.0, float(beta)
    k = np.arange(npts, dtype=float)
    apb = a + b
    diag = np.empty(npts)
    with np.errstate(invalid="ignore", divide="ignore"):
        diag = (b * b - a * a) / ((2 * k + apb) * (2 * k + apb + 2))
    diag[0] = (b - a) / (apb + 2)
    kk = np.arange(1, npts, dtype=float)
    off_sq = (4 * kk * (kk + a) * (kk + b) * (kk + apb)
              / ((2 * kk + apb) ** 2 * (2 * kk + apb + 1) * (2 * kk + apb - 1)))
    nodes, vecs = np.linalg.eigh(np.diag(diag) + np.diag(np.sqrt(off_sq), 1)
                                 + np.diag(np.sqrt(off_sq), -1))
    mu0 = math.exp((apb + 1) * math.log(2) + math.lgamma(a + 1) + math.lgamma(b + 1)
                   - math.lgamma(apb + 2))
    weights = mu0 * vecs[0, :] ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def graded_breakpoints(length: float, depth: int = 14, ratio: float = 2.0) -> np.ndarray:
    """Panel boundaries on [0, length], geometrically refined toward both ends."""
    if depth < 1 or ratio <= 1.0:
        raise ValueError("need depth >= 1 and ratio > 1")
    half = length / 2
    left = [half * ratio ** (-j) for j in range(depth, 0, -1)]
    pts = [0.0] + left + [length - x for x in reversed(left)] + [length]
    return np.array(pts)


@lru_cache(maxsize=None)
def nodal_coefficient_map(order: int) -> np.ndarray:
    """Values at GL nodes -> Legendre coefficients of their interpolant."""
    x, w = leggauss(order)
    vander = np.polynomial.legendre.legvander(x, order - 1)
    out = ((2 * np.arange(order) + 1) / 2)[:, None] * vander.T * w[None, :]
    out.setflags(write=False)
    return out


def nodal_interp_matrix(order: int, xi: np.ndarray) -> np.ndarray:
    """Matrix evaluating the GL-node interpolant at reference points xi."""
    return np.polynomial.legendre.legvander(xi, order - 1) @ nodal_coefficient_map(order)


@lru_cache(maxsize=None)
def running_integral_matrix(order: int) -> np.ndarray:
    """Matrix K with (K v)_i = int_{-1}^{x_i} of the interpolant of v at GL nodes."""
    x, _ = leggauss(order)
    vander = np.polynomial.legendre.legvander(x, order)
    anti = np.zeros((order, order))
    anti[:, 0] = x + 1
    for m in range(1, order):
        anti[:, m] = (vander[:, m + 1] - vander[:, m - 1]) / (2 * m + 1)
    out = anti @ nodal_coefficient_map(order)
    out.setflags(write=False)
    return out
