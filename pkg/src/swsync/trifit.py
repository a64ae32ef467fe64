"""Triangular (hat-shaped) density reconstruction from three moments.

A triangular density with support abscissae ``x1 <= x2 <= x3`` and peak
height ``h = 2/(x3 - x1)`` has moments

* ``M1 = (x1 + x2 + x3)/3``
* ``M2 = (x1^2 + x2^2 + x3^2 + x1 x2 + x1 x3 + x2 x3)/6``
* ``M3 = (all ten degree-3 monomials)/10``

Inverting the map, the abscissae are the roots of the monic cubic whose
coefficients are the elementary symmetric polynomials

``P1 = 3 M1``, ``P2 = 9 M1^2 - 6 M2``, ``P3 = 27 M1^3 - 36 M1 M2 + 10 M3``.

The solver works in the mean-shifted (depressed) frame, where the cubic is
``y^3 + p y + q`` with ``p = -6 (M2 - M1^2)`` and
``q = -10 (M3 - 3 M1 M2 + 2 M1^3)``; this avoids the large cancellations of
forming ``P3`` directly and makes a point-mass moment triple land exactly on
the triple root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CubicComplexRootsError, FitError, ParameterError

__all__ = [
    "TriangularFit",
    "fit_triangle",
    "triangle_moments",
    "triangle_density",
    "solve_cubic_real",
]

#: relative discriminant tolerance for declaring a complex pair
_DISC_RTOL = 1e-12
#: x1 may be clamped to zero if it is no more negative than this times M1
_CLAMP_RTOL = 1e-9


@dataclass(frozen=True)
class TriangularFit:
    """Support abscissae and peak height of a triangular density."""

    x1: float
    x2: float
    x3: float
    height: float

    @property
    def abscissae(self) -> tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)


def _depressed_real_roots(p: float, q: float) -> np.ndarray:
    """All-real roots of ``y^3 + p y + q``, ascending.

    Raises
    ------
    CubicComplexRootsError
        If the discriminant is negative beyond a scaled tolerance.
    """
    disc = -4.0 * p**3 - 27.0 * q**2
    scale = 4.0 * abs(p) ** 3 + 27.0 * q**2
    if disc < -_DISC_RTOL * max(scale, 1.0):
        raise CubicComplexRootsError(
            f"cubic has a complex root pair (discriminant {disc:.3e})"
        )
    if p >= 0.0:
        # within tolerance of the triple/degenerate boundary: p ~ 0
        y = np.full(3, math.copysign(abs(q) ** (1.0 / 3.0), -q))
        return y
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m)
    arg = min(1.0, max(-1.0, arg))
    theta = math.acos(arg) / 3.0
    y = np.array(
        [m * math.cos(theta - 2.0 * math.pi * kk / 3.0) for kk in range(3)]
    )
    # two Newton polish sweeps; skip where the derivative is tiny
    # (clustered roots: polishing there would amplify noise)
    for _ in range(2):
        f = y**3 + p * y + q
        df = 3.0 * y**2 + p
        ok = np.abs(df) > 1e-8 * max(abs(p), 1.0)
        y = np.where(ok, y - f / np.where(ok, df, 1.0), y)
    return np.sort(y)


def solve_cubic_real(a2: float, a1: float, a0: float) -> np.ndarray:
    """Three real roots of ``x^3 + a2 x^2 + a1 x + a0``, ascending.

    Uses the trigonometric three-real-root branch of the depressed cubic with
    a short Newton polish per root.

    Raises
    ------
    CubicComplexRootsError
        If the cubic has a complex conjugate pair beyond the scaled
        discriminant tolerance.
    """
    shift = a2 / 3.0
    p = a1 - a2 * a2 / 3.0
    q = a0 + (2.0 * a2**3 - 9.0 * a2 * a1) / 27.0
    return _depressed_real_roots(p, q) - shift


def fit_triangle(m1: float, m2: float, m3: float) -> TriangularFit:
    """Triangular density whose first three moments are ``(m1, m2, m3)``.

    Raises
    ------
    ParameterError
        If ``m1 <= 0``.
    FitError
        If the abscissa cubic has complex roots ("moments not realizable by
        a triangular density") or the smallest abscissa is negative beyond
        the clamp window (the target spectra are non-negative).
    """
    if not m1 > 0:
        raise ParameterError(f"first moment must be positive, got {m1}")
    p = -6.0 * (m2 - m1 * m1)
    q = -10.0 * (m3 - 3.0 * m1 * m2 + 2.0 * m1**3)
    try:
        roots = _depressed_real_roots(p, q) + m1
    except CubicComplexRootsError as exc:
        raise FitError(f"moments not realizable by a triangular density: {exc}") from exc
    x1, x2, x3 = roots
    if x1 < 0.0:
        if x1 >= -_CLAMP_RTOL * m1:
            x1 = 0.0
        else:
            raise FitError(
                f"support extends below zero (x1 = {x1:.6g}); "
                f"not a valid non-negative-spectrum estimate"
            )
    x1, x2, x3 = float(x1), float(x2), float(x3)
    height = 2.0 / (x3 - x1) if x3 > x1 else math.inf
    return TriangularFit(x1=x1, x2=x2, x3=x3, height=height)


def triangle_moments(fit: TriangularFit) -> tuple[float, float, float]:
    """First three moments of a triangular density, from its abscissae."""
    x1, x2, x3 = fit.abscissae
    m1 = (x1 + x2 + x3) / 3.0
    m2 = (x1**2 + x2**2 + x3**2 + x1 * x2 + x1 * x3 + x2 * x3) / 6.0
    m3 = (
        x1**3 + x2**3 + x3**3
        + x1**2 * x2 + x1**2 * x3
        + x2**2 * x1 + x2**2 * x3
        + x3**2 * x1 + x3**2 * x2
        + x1 * x2 * x3
    ) / 10.0
    return (m1, m2, m3)


def triangle_density(fit: TriangularFit, lam) -> np.ndarray | float:
    """Evaluate the hat density at ``lam`` (scalar or array).

    Rises linearly on ``[x1, x2)``, falls on ``[x2, x3]``, and is zero
    outside the support; the peak value at ``x2`` is ``fit.height``.
    """
    lam_arr = np.asarray(lam, dtype=float)
    x1, x2, x3 = fit.abscissae
    h = fit.height
    rise_w = x2 - x1
    fall_w = x3 - x2
    out = np.zeros_like(lam_arr)
    if rise_w > 0:
        on_rise = (lam_arr >= x1) & (lam_arr < x2)
        out = np.where(on_rise, h * (lam_arr - x1) / rise_w, out)
    if fall_w > 0:
        on_fall = (lam_arr >= x2) & (lam_arr <= x3)
        out = np.where(on_fall, h * (x3 - lam_arr) / fall_w, out)
    elif rise_w > 0:
        out = np.where(lam_arr == x2, h, out)
    if out.ndim == 0:
        return float(out)
    return out
