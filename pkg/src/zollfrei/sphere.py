"""Geometry of the unit sphere and of its oriented small circles.

A pair ``(t, y)`` with ``t`` real and ``y`` a unit 3-vector labels the
oriented small circle ``{u : u . y = tanh t}`` bounding the open cap
``{u : u . y > tanh t}``.  The set of such pairs is a Lorentzian quadric
(2+1 de Sitter space) under ``(t, y) -> (sinh t, cosh t * y)``, and all
field-theoretic computations in this package live on it.

This module provides the point types, the cap/circle predicates, a
Gauss-Legendre product grid with exact quadrature for band-limited
integrands, the antipodal parity splitting, and the stereographic chart.
The stereographic pole sits on the first coordinate axis so that the
chart azimuth coincides with the azimuth used by the harmonic basis.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * math.pi
SPHERE_AREA = 4.0 * math.pi

#: distinguished value for the stereographic image of (-1, 0, 0)
INFINITY = complex(math.inf, 0.0)


def sphere_point(u, tol: float = 1e-12) -> np.ndarray:
    """Validate and renormalize a unit 3-vector."""
    u = np.asarray(u, dtype=float)
    if u.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {u.shape}")
    n = float(np.linalg.norm(u))
    if abs(n - 1.0) > tol:
        raise ValueError(f"|u| = {n!r} is not 1 within {tol}")
    return u / n


class DeSitterPoint(NamedTuple):
    """Point (t, y) of the circle space; ``y`` must be a unit 3-vector."""

    t: float
    y: np.ndarray

    def embedding(self) -> np.ndarray:
        """Quadric coordinates (sinh t, cosh t * y) in R^{1,3}."""
        return np.concatenate(([math.sinh(self.t)], math.cosh(self.t) * self.y))

    @property
    def z(self) -> float:
        """tanh t, the signed height of the circle plane."""
        return math.tanh(self.t)


def antipodal_flip(p: DeSitterPoint) -> DeSitterPoint:
    """The involution (t, y) -> (-t, -y): same circle, opposite orientation."""
    return DeSitterPoint(-p.t, -p.y)


def circle_frame(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic oriented orthonormal completion (y_perp1, y_perp2) of y.

    Gram-Schmidt against the coordinate axis with the smallest |y| component,
    then y_perp2 = y x y_perp1, so det(y_perp1, y_perp2, y) = +1.
    """
    k = int(np.argmin(np.abs(y)))
    e = np.zeros(3)
    e[k] = 1.0
    v = e - np.dot(e, y) * y
    v /= np.linalg.norm(v)
    w = np.cross(y, v)
    return v, w


def small_circle_point(p: DeSitterPoint, phi, frame=None) -> np.ndarray:
    """Point of the boundary circle of the cap at p, at circle angle phi.

    Returns (cos phi / cosh t) y_perp1 + (sin phi / cosh t) y_perp2
    + tanh t * y.  ``phi`` may be an array; the result then has shape
    (len(phi), 3).  The output satisfies u . y = tanh t.
    """
    if frame is None:
        frame = circle_frame(p.y)
    e1, e2 = frame
    sech = 1.0 / math.cosh(p.t)
    phi = np.asarray(phi, dtype=float)
    u = (
        np.multiply.outer(np.cos(phi) * sech, e1)
        + np.multiply.outer(np.sin(phi) * sech, e2)
        + math.tanh(p.t) * p.y
    )
    return u


def cap_contains(u, p: DeSitterPoint):
    """Strict cap membership u . y > tanh t (False exactly on the circle)."""
    u = np.asarray(u, dtype=float)
    return u @ p.y > math.tanh(p.t)


class SphereGrid:
    """Gauss-Legendre x uniform-azimuth product grid with quadrature weights.

    ``L + 1`` Gauss-Legendre nodes in x = u1 and ``2L + 2`` uniform azimuth
    nodes integrate every product of two harmonics of degree <= L exactly.
    The azimuth count is even, so the grid is closed under u -> -u and
    parity splitting is a pointwise permutation.
    """

    def __init__(self, L: int):
        if L < 0:
            raise ValueError("band limit must be >= 0")
        self.L = L
        self.n_polar = L + 1
        self.n_azimuth = 2 * L + 2
        x, wx = np.polynomial.legendre.leggauss(self.n_polar)
        phi = TWO_PI * np.arange(self.n_azimuth) / self.n_azimuth
        s = np.sqrt(1.0 - x**2)
        # polar-major layout: node (i, j) -> index i * n_azimuth + j
        u1 = np.repeat(x, self.n_azimuth)
        u2 = np.repeat(s, self.n_azimuth) * np.tile(np.cos(phi), self.n_polar)
        u3 = np.repeat(s, self.n_azimuth) * np.tile(np.sin(phi), self.n_polar)
        self.x = x
        self.phi = phi
        self.nodes = np.column_stack([u1, u2, u3])
        self.weights = np.repeat(wx, self.n_azimuth) * (TWO_PI / self.n_azimuth)
        self._antipode = self._antipodal_permutation()

    def __len__(self) -> int:
        return self.nodes.shape[0]

    def _antipodal_permutation(self) -> np.ndarray:
        # GL nodes are symmetric about 0 (reversal); phi -> phi + pi is an
        # index shift by n_azimuth / 2 because n_azimuth is even.
        i = np.arange(self.n_polar)[::-1]
        j = (np.arange(self.n_azimuth) + self.n_azimuth // 2) % self.n_azimuth
        return (i[:, None] * self.n_azimuth + j[None, :]).ravel()

    def antipode_samples(self, samples: np.ndarray) -> np.ndarray:
        """Samples of f(-u) given samples of f(u)."""
        return np.asarray(samples)[self._antipode]

    def integrate(self, samples) -> float:
        """Quadrature value of the full sphere integral of f."""
        samples = np.asarray(samples, dtype=float)
        if samples.shape != self.weights.shape:
            raise ValueError(
                f"sample length {samples.shape} does not match grid {self.weights.shape}"
            )
        return float(self.weights @ samples)


def sphere_integral(grid: SphereGrid, samples) -> float:
    """Integral of f over the sphere (constant 1 integrates to 4 pi)."""
    return grid.integrate(samples)


def parity_split(grid: SphereGrid, samples):
    """Split f into (mean value, even part with zero mean, odd part).

    The mean is the 4pi-normalized average; the pieces satisfy
    f = mean + f_even* + f_odd with f_even*(-u) = f_even*(u),
    integral(f_even*) = 0 and f_odd(-u) = -f_odd(u).
    """
    samples = np.asarray(samples, dtype=float)
    flipped = grid.antipode_samples(samples)
    mean = grid.integrate(samples) / SPHERE_AREA
    even_star = 0.5 * (samples + flipped) - mean
    odd = 0.5 * (samples - flipped)
    return mean, even_star, odd


def stereographic(y) -> complex:
    """Chart y -> (y2 + i y3) / (1 + y1); (-1, 0, 0) maps to INFINITY."""
    y = np.asarray(y, dtype=float)
    d = 1.0 + y[0]
    if d <= 1e-15:
        return INFINITY
    return complex(y[1] / d, y[2] / d)


def stereographic_inv(lam: complex) -> np.ndarray:
    """Inverse chart; accepts INFINITY (or any non-finite value)."""
    if not np.isfinite(lam):
        return np.array([-1.0, 0.0, 0.0])
    r2 = abs(lam) ** 2
    d = 1.0 + r2
    return np.array([(1.0 - r2) / d, 2.0 * lam.real / d, 2.0 * lam.imag / d])


def desitter_from_chart(t: float, lam: complex) -> DeSitterPoint:
    """Build (t, y) from the chart pair (t, lambda)."""
    return DeSitterPoint(float(t), stereographic_inv(lam))
