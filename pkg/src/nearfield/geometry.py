"""Array geometries and polar locations.

Coordinate convention used everywhere in this package: antenna arrays lie in
the x axis (linear) or the x-y plane (planar), centered on the origin; a
:class:`PolarPoint` ``(theta, r)`` maps to Cartesian
``(r sin(theta), 0, r cos(theta))``, so ``theta`` is the angle off boresight
(+z) and broadside is ``theta = 0``.  ``r = FAR_FIELD`` (infinity) is the
explicit far-field sentinel: consumers must switch to the planar-wave model
for it rather than evaluating distances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

FAR_FIELD = math.inf


@dataclass(frozen=True)
class ArrayGeometry:
    """Explicit element positions (meters) plus a text label.

    ``elements`` is an (N, 3) float array; positions must be finite and
    pairwise distinct.  ``aperture`` is the maximum pairwise element
    distance (0 for a single element).
    """

    elements: np.ndarray
    name: str = "array"
    aperture: float = field(init=False)

    def __post_init__(self):
        pts = np.asarray(self.elements, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 1:
            raise InvalidArgumentError(
                f"elements must be an (N, 3) array with N >= 1, got shape {pts.shape}"
            )
        if not np.all(np.isfinite(pts)):
            raise InvalidArgumentError("element coordinates must be finite")
        if len({row.tobytes() for row in pts}) != pts.shape[0]:
            raise InvalidArgumentError("element positions must be unique")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "elements", pts)
        object.__setattr__(self, "aperture", _diameter(pts))

    @property
    def num_elements(self) -> int:
        return self.elements.shape[0]

    @property
    def xs(self) -> np.ndarray:
        """Element x coordinates (the planar-model phase axis)."""
        return self.elements[:, 0]


def _diameter(pts: np.ndarray) -> float:
    # Max pairwise distance, chunked so planar panels (a few thousand
    # elements) stay cheap without an O(N^2) memory blowup.
    n = pts.shape[0]
    if n == 1:
        return 0.0
    best = 0.0
    step = 512
    for i in range(0, n, step):
        block = pts[i : i + step]
        d2 = np.sum((block[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
        best = max(best, float(d2.max()))
    return math.sqrt(best)


def build_ula(n: int, spacing: float, name: str = "ula") -> ArrayGeometry:
    """Uniform linear array on the x axis, centered at the origin.

    Element i sits at x = (i - (n-1)/2) * spacing, so the aperture is
    exactly (n-1) * spacing.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidArgumentError(f"element count must be a positive integer, got {n!r}")
    if not spacing > 0:
        raise InvalidArgumentError(f"spacing must be > 0, got {spacing!r}")
    xs = (np.arange(n) - (n - 1) / 2.0) * spacing
    pts = np.zeros((n, 3))
    pts[:, 0] = xs
    return ArrayGeometry(pts, name=name)


def build_upa(nx: int, ny: int, spacing_x: float, spacing_y: float, name: str = "upa") -> ArrayGeometry:
    """Uniform planar array in the x-y plane, centered at the origin.

    The aperture is the panel diagonal sqrt(((nx-1) sx)^2 + ((ny-1) sy)^2).
    """
    for label, v in (("nx", nx), ("ny", ny)):
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise InvalidArgumentError(f"{label} must be a positive integer, got {v!r}")
    for label, v in (("spacing_x", spacing_x), ("spacing_y", spacing_y)):
        if not v > 0:
            raise InvalidArgumentError(f"{label} must be > 0, got {v!r}")
    xs = (np.arange(nx) - (nx - 1) / 2.0) * spacing_x
    ys = (np.arange(ny) - (ny - 1) / 2.0) * spacing_y
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel(), np.zeros(nx * ny)])
    return ArrayGeometry(pts, name=name)


@dataclass(frozen=True)
class PolarPoint:
    """Location (theta, r) relative to the array center.

    theta is in radians, strictly inside (-pi/2, pi/2); r is a positive
    distance in meters or the FAR_FIELD sentinel (infinity).
    """

    theta: float
    r: float

    def __post_init__(self):
        if not (-math.pi / 2 < self.theta < math.pi / 2):
            raise InvalidArgumentError(
                f"theta must lie strictly inside (-pi/2, pi/2), got {self.theta!r}"
            )
        if math.isnan(self.r) or self.r <= 0:
            raise InvalidArgumentError(f"r must be > 0 or FAR_FIELD, got {self.r!r}")

    @property
    def is_far_field(self) -> bool:
        return math.isinf(self.r)


def polar_to_cartesian(p: PolarPoint) -> np.ndarray:
    """Cartesian image (r sin(theta), 0, r cos(theta)) of a finite-range point."""
    if p.is_far_field:
        raise InvalidArgumentError("FAR_FIELD point has no Cartesian image")
    return np.array([p.r * math.sin(p.theta), 0.0, p.r * math.cos(p.theta)])
