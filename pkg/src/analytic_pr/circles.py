"""Closed-form intersection of three circles with distinct centers.

The system is ``|z + v_j| = n_j`` for j = 1, 2, 3.  When the three centers
are not collinear a solution, if one exists, is unique and linear algebra
finds it: subtracting the squared equations pairwise cancels ``|z|^2`` and
leaves a 2x2 real system for (Re z, Im z).  Collinearity is detected through
the imaginary part of the center ratio ``(v1 - v2) / (v1 - v3)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoincidentCenters, DegenerateGeometry, NoCommonPoint

__all__ = ["CircleSystem", "im_ratio", "residual", "solve_three_circles"]


@dataclass(frozen=True)
class CircleSystem:
    """Three centers ``v_j`` and radii ``n_j >= 0`` describing ``|z + v_j| = n_j``."""

    centers: tuple[complex, complex, complex]
    radii: tuple[float, float, float]

    def __post_init__(self):
        if len(self.centers) != 3 or len(self.radii) != 3:
            raise ValueError("a circle system needs exactly three centers and radii")
        if any(r < 0 for r in self.radii):
            raise ValueError(f"radii must be nonnegative, got {self.radii}")

    @property
    def scale(self) -> float:
        """Magnitude scale of the system (largest center or radius)."""
        return max(max(abs(v) for v in self.centers), max(self.radii))


def im_ratio(v1: complex, v2: complex, v3: complex, tol: float = 1e-14) -> float:
    """Imaginary part of ``(v1 - v2) / (v1 - v3)``.

    Zero exactly when the three centers are collinear.  Raises
    :class:`CoincidentCenters` when ``v1`` and ``v3`` coincide within ``tol``
    relative to the center scale, since the ratio is then undefined.
    """
    scale = max(abs(v1), abs(v2), abs(v3))
    if abs(v1 - v3) <= tol * max(scale, np.finfo(float).tiny):
        raise CoincidentCenters(f"|v1 - v3| = {abs(v1 - v3):.3e} at scale {scale:.3e}")
    return float(((v1 - v2) / (v1 - v3)).imag)


def residual(z: complex, sys: CircleSystem) -> float:
    """Worst absolute circle-equation violation of a candidate point."""
    return max(abs(abs(z + v) - r) for v, r in zip(sys.centers, sys.radii))


def solve_three_circles(
    sys: CircleSystem,
    tol: float = 1e-6,
    tol_degenerate: float = 1e-9,
) -> complex:
    """Return the unique common point of the three circles.

    Parameters
    ----------
    sys : CircleSystem
        The circles ``|z + v_j| = n_j``.
    tol : float
        Residual acceptance threshold, relative to ``max(max(radii), 1)``.
    tol_degenerate : float
        Collinearity threshold on ``|im_ratio|``.

    Raises
    ------
    CoincidentCenters
        If two of the centers entering the ratio test coincide.
    DegenerateGeometry
        If the centers are (near-)collinear; a wrong answer is never returned
        in that situation.
    NoCommonPoint
        If the candidate point violates some circle equation by more than the
        residual threshold (inconsistent data).
    """
    v1, v2, v3 = sys.centers
    n1, n2, n3 = sys.radii
    ratio = im_ratio(v1, v2, v3)
    if abs(ratio) <= tol_degenerate:
        raise DegenerateGeometry(f"centers nearly collinear: im_ratio = {ratio:.3e}")

    c, d = (v1 - v2).real, (v1 - v2).imag
    e, f = (v1 - v3).real, (v1 - v3).imag
    det = c * f - d * e
    cscale = max(abs(v1), abs(v2), abs(v3), np.finfo(float).tiny)
    if abs(det) <= 1e-12 * cscale**2:
        raise DegenerateGeometry(f"pairwise-difference determinant {det:.3e} too small")

    rhs1 = n1**2 - n2**2 + abs(v2) ** 2 - abs(v1) ** 2
    rhs2 = n1**2 - n3**2 + abs(v3) ** 2 - abs(v1) ** 2
    a = (f * rhs1 - d * rhs2) / (2.0 * det)
    b = (-e * rhs1 + c * rhs2) / (2.0 * det)
    z = complex(a, b)

    res = residual(z, sys)
    if res > tol * max(max(sys.radii), 1.0):
        raise NoCommonPoint(f"best candidate misses a circle by {res:.3e}")
    return z
