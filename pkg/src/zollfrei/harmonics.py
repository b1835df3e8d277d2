"""Legendre recurrences and a real orthonormal spherical-harmonic engine.

Conventions, fixed once for the whole package:

* harmonics are real and orthonormal, ``integral(Y_lm * Y_l'm') = delta``;
  the constant function 1 therefore has coefficient ``sqrt(4 pi)``;
* the polar axis of the associated-Legendre ladder is the *first*
  coordinate axis, so the harmonic azimuth equals the azimuth of the
  stereographic chart in :mod:`zollfrei.sphere` and chart derivatives of
  expansions reduce to polar-coordinate calculus;
* modes are stored flat, index ``l * (l + 1) + m`` for ``|m| <= l``,
  with ``m > 0`` the cosine branch and ``m < 0`` the sine branch.

Everything is plain upward recurrences in double precision; band limits
of interest here (L <= 32) are far below where that loses accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sphere import SPHERE_AREA, SphereGrid


# ---------------------------------------------------------------------------
# Legendre polynomials


def _check_domain(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 1.0 + 1e-14):
        raise ValueError("Legendre argument outside [-1, 1]")
    return np.clip(z, -1.0, 1.0)


def legendre_all(L: int, z):
    """Tables P_l(z) and Z_l(z) = dP_l/dz for 0 <= l <= L.

    Returns arrays of shape (L + 1,) + shape(z).  Three-term recurrence
    for P, and l Z_l = (2l - 1)(P_{l-1} + z Z_{l-1}) - (l - 1) Z_{l-2}
    for the derivative.
    """
    z = _check_domain(z)
    P = np.zeros((L + 1,) + z.shape)
    Z = np.zeros_like(P)
    P[0] = 1.0
    if L >= 1:
        P[1] = z
        Z[1] = 1.0
    for l in range(2, L + 1):
        P[l] = ((2 * l - 1) * z * P[l - 1] - (l - 1) * P[l - 2]) / l
        Z[l] = ((2 * l - 1) * (P[l - 1] + z * Z[l - 1]) - (l - 1) * Z[l - 2]) / l
    return P, Z


def legendre_p(l: int, z):
    """Legendre polynomial P_l(z), |z| <= 1."""
    if l < 0:
        raise ValueError("degree must be >= 0")
    return legendre_all(l, z)[0][l]


def legendre_z(l: int, z):
    """Derivative dP_l/dz, |z| <= 1."""
    if l < 0:
        raise ValueError("degree must be >= 0")
    return legendre_all(l, z)[1][l]


def cap_profile(l: int, z):
    """integral_z^1 P_l(z') dz', in closed form.

    Equals (1 - z^2) Z_l(z) / (l (l + 1)) for l >= 1 (integrate the
    Legendre ODE from z to 1) and 1 - z for l = 0.  This is the degree-l
    action of the normalized cap integral, and its value at z = 0 is the
    hemisphere eigenvalue of the cap transform.
    """
    z = _check_domain(z)
    if l == 0:
        return 1.0 - z
    P, Z = legendre_all(l, z)
    return (1.0 - z**2) * Z[l] / (l * (l + 1))


@dataclass
class LegendreTable:
    """Cached P and Z values on a z-grid, with a recurrence self-check."""

    L: int
    z: np.ndarray
    P: np.ndarray = field(init=False)
    Z: np.ndarray = field(init=False)

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=float)
        self.P, self.Z = legendre_all(self.L, self.z)

    def recurrence_residual(self) -> float:
        """Max violation of the three-term recurrence over the table."""
        r = 0.0
        for l in range(2, self.L + 1):
            lhs = l * self.P[l]
            rhs = (2 * l - 1) * self.z * self.P[l - 1] - (l - 1) * self.P[l - 2]
            r = max(r, float(np.max(np.abs(lhs - rhs))))
        return r


# ---------------------------------------------------------------------------
# Mode bookkeeping


def num_modes(L: int) -> int:
    return (L + 1) ** 2


def mode_index(l: int, m: int) -> int:
    if not (0 <= l and abs(m) <= l):
        raise ValueError(f"bad mode (l, m) = ({l}, {m})")
    return l * (l + 1) + m


def mode_degrees(L: int) -> np.ndarray:
    """Array giving l for every flat mode index."""
    return np.concatenate([np.full(2 * l + 1, l, dtype=int) for l in range(L + 1)])


def degree_multipliers(L: int, values_per_degree) -> np.ndarray:
    """Expand a per-degree table to a per-mode vector."""
    values_per_degree = np.asarray(values_per_degree, dtype=float)
    return values_per_degree[mode_degrees(L)]


# ---------------------------------------------------------------------------
# Associated Legendre (fully normalized) and real harmonics


def _assoc_norm_tables(L: int, x: np.ndarray, with_theta_derivative: bool = False):
    """Fully normalized associated Legendre values on x = cos(theta).

    T[l, m] carries the full spherical-harmonic normalization so that
    Y_{l,0} = T[l, 0] and Y_{l,+-m} = sqrt(2) T[l, m] {cos, sin}(m phi).
    Optionally also d/dtheta of T (requires sin(theta) > 0 at all nodes).
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.maximum(0.0, 1.0 - x**2))
    T = np.zeros((L + 1, L + 1) + x.shape)
    T[0, 0] = 1.0 / math.sqrt(SPHERE_AREA)
    for m in range(1, L + 1):
        T[m, m] = math.sqrt((2 * m + 1) / (2.0 * m)) * s * T[m - 1, m - 1]
    for m in range(0, L):
        T[m + 1, m] = math.sqrt(2 * m + 3.0) * x * T[m, m]
    for m in range(0, L + 1):
        for l in range(m + 2, L + 1):
            a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            T[l, m] = a * (x * T[l - 1, m] - b * T[l - 2, m])
    if not with_theta_derivative:
        return T, None
    if np.any(s < 1e-9):
        raise ValueError("theta-derivative requested at a pole of the chart")
    dT = np.zeros_like(T)
    for m in range(0, L + 1):
        for l in range(m, L + 1):
            low = 0.0
            if l > m:
                c = math.sqrt((2 * l + 1.0) * (l * l - m * m) / (2 * l - 1.0))
                low = c * T[l - 1, m]
            dT[l, m] = (l * x * T[l, m] - low) / s
    return T, dT


def _angles_from_points(points: np.ndarray):
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x = np.clip(points[:, 0], -1.0, 1.0)
    phi = np.arctan2(points[:, 2], points[:, 1])
    return x, phi


def real_harmonics(L: int, points) -> np.ndarray:
    """Matrix Y[k, i] of all modes k at sphere points i (shape (n, 3))."""
    x, phi = _angles_from_points(points)
    T, _ = _assoc_norm_tables(L, x)
    out = np.zeros((num_modes(L), x.shape[0]))
    sqrt2 = math.sqrt(2.0)
    for l in range(L + 1):
        out[mode_index(l, 0)] = T[l, 0]
        for m in range(1, l + 1):
            c, s = np.cos(m * phi), np.sin(m * phi)
            out[mode_index(l, m)] = sqrt2 * T[l, m] * c
            out[mode_index(l, -m)] = sqrt2 * T[l, m] * s
    return out


def real_harmonics_chart_jet(L: int, lam: complex):
    """Values plus stereographic-chart partials of all modes at one point.

    Returns (Y, dY_da, dY_db) for lam = a + i b, by polar calculus in the
    chart (r = tan(theta/2), phi).  Requires 1e-8 < |lam| < 1e8 so that
    neither chart pole is hit.
    """
    r = abs(lam)
    if not (1e-8 < r < 1e8):
        raise ValueError("chart jet needs a point away from both poles")
    a, b = lam.real, lam.imag
    x = (1.0 - r * r) / (1.0 + r * r)
    phi = math.atan2(b, a)
    T, dT = _assoc_norm_tables(L, np.array([x]), with_theta_derivative=True)
    n = num_modes(L)
    Y = np.zeros(n)
    dY_dth = np.zeros(n)
    dY_dph = np.zeros(n)
    sqrt2 = math.sqrt(2.0)
    for l in range(L + 1):
        Y[mode_index(l, 0)] = T[l, 0, 0]
        dY_dth[mode_index(l, 0)] = dT[l, 0, 0]
        for m in range(1, l + 1):
            c, s = math.cos(m * phi), math.sin(m * phi)
            kc, ks = mode_index(l, m), mode_index(l, -m)
            Y[kc] = sqrt2 * T[l, m, 0] * c
            Y[ks] = sqrt2 * T[l, m, 0] * s
            dY_dth[kc] = sqrt2 * dT[l, m, 0] * c
            dY_dth[ks] = sqrt2 * dT[l, m, 0] * s
            dY_dph[kc] = -sqrt2 * T[l, m, 0] * m * s
            dY_dph[ks] = sqrt2 * T[l, m, 0] * m * c
    # r = tan(theta/2): dtheta = 2 dr / (1 + r^2); polar chart partials
    dth_dr = 2.0 / (1.0 + r * r)
    dY_dr = dY_dth * dth_dr
    dY_da = dY_dr * (a / r) - dY_dph * (b / (r * r))
    dY_db = dY_dr * (b / r) + dY_dph * (a / (r * r))
    return Y, dY_da, dY_db


# ---------------------------------------------------------------------------
# Coefficient container and grid transforms


@dataclass
class HarmonicCoeffs:
    """Band-limited real expansion: flat coefficient vector up to degree L."""

    L: int
    c: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        if self.c.shape != (num_modes(self.L),):
            raise ValueError(
                f"coefficient vector has shape {self.c.shape}, "
                f"expected ({num_modes(self.L)},)"
            )

    @classmethod
    def zeros(cls, L: int) -> "HarmonicCoeffs":
        return cls(L, np.zeros(num_modes(L)))

    @classmethod
    def single(cls, L: int, l: int, m: int, value: float = 1.0) -> "HarmonicCoeffs":
        h = cls.zeros(L)
        h.c[mode_index(l, m)] = value
        return h

    @classmethod
    def from_modes(cls, L: int, modes) -> "HarmonicCoeffs":
        """Build from an iterable of (l, m, value) triples."""
        h = cls.zeros(L)
        for l, m, v in modes:
            h.c[mode_index(l, m)] += v
        return h

    def copy(self) -> "HarmonicCoeffs":
        return HarmonicCoeffs(self.L, self.c.copy())

    def evaluate(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        vals = self.c @ real_harmonics(self.L, pts)
        return vals if np.asarray(points).ndim > 1 else vals[0]

    def __call__(self, points):
        return self.evaluate(points)

    @property
    def degrees(self) -> np.ndarray:
        return mode_degrees(self.L)

    @property
    def mean(self) -> float:
        """Sphere average; the l = 0 coefficient over sqrt(4 pi)."""
        return float(self.c[0]) / math.sqrt(SPHERE_AREA)

    def degree_mask(self, keep) -> "HarmonicCoeffs":
        mask = keep(self.degrees)
        return HarmonicCoeffs(self.L, np.where(mask, self.c, 0.0))

    def odd_part(self) -> "HarmonicCoeffs":
        return self.degree_mask(lambda l: l % 2 == 1)

    def even_star_part(self) -> "HarmonicCoeffs":
        return self.degree_mask(lambda l: (l % 2 == 0) & (l > 0))

    def antipodal(self) -> "HarmonicCoeffs":
        """Coefficients of u -> f(-u): degree-l block scales by (-1)^l."""
        return HarmonicCoeffs(self.L, self.c * (-1.0) ** self.degrees)

    def scaled(self, factor: float) -> "HarmonicCoeffs":
        return HarmonicCoeffs(self.L, self.c * factor)

    def plus(self, other: "HarmonicCoeffs") -> "HarmonicCoeffs":
        if other.L != self.L:
            raise ValueError("band limits differ")
        return HarmonicCoeffs(self.L, self.c + other.c)

    def norm2(self) -> float:
        return float(self.c @ self.c)


def laplacian_spectral(h: HarmonicCoeffs) -> HarmonicCoeffs:
    """Laplace-Beltrami operator: multiply degree l by -l (l + 1)."""
    l = h.degrees
    return HarmonicCoeffs(h.L, h.c * (-l * (l + 1.0)))


class GridTransform:
    """Forward/inverse harmonic transform bound to one SphereGrid.

    Exact (to roundoff) for band-limited samples with coefficient band
    limit <= grid band limit.
    """

    def __init__(self, grid: SphereGrid, L: int | None = None):
        self.grid = grid
        self.L = grid.L if L is None else L
        if self.L > grid.L:
            raise ValueError("coefficient band limit exceeds grid band limit")
        self._Y = real_harmonics(self.L, grid.nodes)
        self._analysis = self._Y * grid.weights[None, :]

    def forward(self, samples) -> HarmonicCoeffs:
        samples = np.asarray(samples, dtype=float)
        if samples.shape != (len(self.grid),):
            raise ValueError("sample length does not match grid")
        return HarmonicCoeffs(self.L, self._analysis @ samples)

    def inverse(self, h: HarmonicCoeffs) -> np.ndarray:
        if h.L != self.L:
            raise ValueError("band limit mismatch")
        return h.c @ self._Y
