"""Angular and polar-domain codebooks.

The angular codebook samples uniformly in sin(theta) (uniform spatial
frequency); with size N on a half-wavelength ULA it is the orthonormal DFT
basis.  The polar codebook keeps the same angular grid and, per angle, adds
distance rings generated greedily from the far-field ring inward: each next
ring is the largest r whose codeword has coherence <= mu_target with the
previous ring's codeword.  Working in the 1/r domain makes the search
well-conditioned (spherical-wave curvature is linear in 1/r), and the
resulting rings are automatically denser near the array.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .carrier import SPEED_OF_LIGHT
from .errors import DomainError, InvalidArgumentError, UnsupportedModelError
from .geometry import FAR_FIELD, ArrayGeometry, PolarPoint
from .propagation import planar_steering, spherical_steering


class CodebookKind(Enum):
    ANGULAR = "ANGULAR"
    POLAR = "POLAR"


@dataclass(frozen=True)
class Codebook:
    """Columns of ``codewords`` are unit-norm vectors labeled by ``labels``."""

    codewords: np.ndarray  # (N, Q), unit-norm columns
    labels: tuple[PolarPoint, ...]
    kind: CodebookKind
    geometry_name: str = ""
    frequency: float = 0.0
    mu_target: float | None = None

    def __post_init__(self):
        cw = np.asarray(self.codewords, dtype=complex)
        if cw.ndim != 2 or cw.shape[1] != len(self.labels):
            raise InvalidArgumentError("codewords must be (N, Q) with one label per column")
        norms = np.linalg.norm(cw, axis=0)
        if np.max(np.abs(norms - 1.0)) > 1e-9:
            raise InvalidArgumentError("every codeword must be unit norm")
        seen = set()
        for p in self.labels:
            key = (p.theta, p.r)
            if key in seen:
                raise InvalidArgumentError(f"duplicate codeword label {key}")
            seen.add(key)
        if self.kind is CodebookKind.POLAR:
            if not any(p.is_far_field for p in self.labels):
                raise InvalidArgumentError("polar codebook must contain a FAR_FIELD ring")
            for theta, rs in self.rings_by_angle().items():
                finite = [r for r in rs if math.isfinite(r)]
                if any(b >= a for a, b in zip(finite, finite[1:])):
                    raise InvalidArgumentError(
                        f"distance rings must be strictly decreasing at theta={theta}"
                    )
        cw = cw.copy()
        cw.flags.writeable = False
        object.__setattr__(self, "codewords", cw)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def size(self) -> int:
        return self.codewords.shape[1]

    def rings_by_angle(self) -> dict[float, list[float]]:
        """Ring distances per angle, in construction order (far field first)."""
        rings: dict[float, list[float]] = {}
        for p in self.labels:
            rings.setdefault(p.theta, []).append(p.r)
        return rings


def _sin_theta_grid(size: int) -> np.ndarray:
    # (2k - size + 1) / size, k = 0..size-1: uniform in sin(theta), symmetric,
    # endpoints +-(1 - 1/size); size 1 collapses to broadside.
    return (2 * np.arange(size) - size + 1) / size


def angular_codebook(
    geom: ArrayGeometry, f: float, size: int, speed: float = SPEED_OF_LIGHT
) -> Codebook:
    if not isinstance(size, (int, np.integer)) or size < 1:
        raise InvalidArgumentError(f"codebook size must be a positive integer, got {size!r}")
    root_n = math.sqrt(geom.num_elements)
    cols, labels = [], []
    for s in _sin_theta_grid(size):
        theta = math.asin(s)
        cols.append(planar_steering(geom, f, theta, speed=speed).entries / root_n)
        labels.append(PolarPoint(theta, FAR_FIELD))
    return Codebook(
        np.column_stack(cols), tuple(labels), CodebookKind.ANGULAR,
        geometry_name=geom.name, frequency=f,
    )


def coherence(u: np.ndarray, v: np.ndarray) -> float:
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape or u.ndim != 1:
        raise InvalidArgumentError(f"coherence needs equal-length vectors, got {u.shape} vs {v.shape}")
    for name, w in (("u", u), ("v", v)):
        if abs(np.linalg.norm(w) - 1.0) > 1e-6:
            raise InvalidArgumentError(f"{name} must be unit norm")
    return min(float(abs(np.vdot(u, v))), 1.0)


def _ring_codeword(geom, f, theta, r, root_n, speed):
    if math.isinf(r):
        return planar_steering(geom, f, theta, speed=speed).entries / root_n
    return spherical_steering(geom, f, PolarPoint(theta, r), speed=speed).entries / root_n


def polar_codebook(
    geom: ArrayGeometry,
    f: float,
    angle_count: int,
    mu_target: float = 0.5,
    r_min: float = 1.0,
    speed: float = SPEED_OF_LIGHT,
    scan_steps: int = 512,
) -> Codebook:
    """Greedy coherence-driven polar grid (see module docstring).

    Per angle, rings are found by scanning outward in u = 1/r from the
    previous ring until coherence drops to mu_target, then bisecting; the
    returned ring always sits on the <= mu_target side of the crossing.
    """
    if not (0 < mu_target < 1):
        raise InvalidArgumentError(f"mu_target must be in (0, 1), got {mu_target!r}")
    if not r_min > geom.aperture / 2:
        raise DomainError(
            f"r_min={r_min} must lie outside the array hull (aperture/2 = {geom.aperture / 2})"
        )
    if not isinstance(angle_count, (int, np.integer)) or angle_count < 1:
        raise InvalidArgumentError(f"angle_count must be a positive integer, got {angle_count!r}")

    root_n = math.sqrt(geom.num_elements)
    u_min = 1.0 / r_min
    du = u_min / scan_steps
    cols, labels = [], []

    for s in _sin_theta_grid(angle_count):
        theta = math.asin(s)
        prev_cw = _ring_codeword(geom, f, theta, FAR_FIELD, root_n, speed)
        cols.append(prev_cw)
        labels.append(PolarPoint(theta, FAR_FIELD))
        u_prev = 0.0
        while True:
            # outward scan in u: find the first grid point at/below mu_target
            u_hit = None
            k = 1
            while True:
                u = u_prev + k * du
                if u > u_min + 1e-15:
                    break
                if coherence(prev_cw, _ring_codeword(geom, f, theta, 1.0 / u, root_n, speed)) <= mu_target:
                    u_hit = u
                    break
                k += 1
            if u_hit is None:
                break
            # bisect the crossing inside (u_hit - du, u_hit]
            u_lo, u_hi = u_hit - du, u_hit  # coherence(u_lo) > mu >= coherence(u_hi)
            for _ in range(60):
                if (u_hi - u_lo) <= 1e-12 * u_min:
                    break
                mid = 0.5 * (u_lo + u_hi)
                c = coherence(prev_cw, _ring_codeword(geom, f, theta, 1.0 / mid, root_n, speed))
                if c <= mu_target:
                    u_hi = mid
                else:
                    u_lo = mid
            r_next = 1.0 / u_hi
            cw = _ring_codeword(geom, f, theta, r_next, root_n, speed)
            cols.append(cw)
            labels.append(PolarPoint(theta, r_next))
            prev_cw = cw
            u_prev = u_hi

    return Codebook(
        np.column_stack(cols), tuple(labels), CodebookKind.POLAR,
        geometry_name=geom.name, frequency=f, mu_target=mu_target,
    )


def codebook_coherence_profile(cb: Codebook) -> dict:
    """Quality report for a polar codebook.

    max_adjacent_ring_coherence: worst coherence between consecutive rings of
    the same angle (the quantity the greedy construction controls).
    max_cross_angle_coherence: worst coherence between neighboring angles at
    matched ring index.  histogram: (counts, bin_edges) over adjacent-ring
    coherences.
    """
    if cb.kind is not CodebookKind.POLAR:
        raise UnsupportedModelError("coherence profile is defined for polar codebooks only")

    by_angle: dict[float, list[int]] = {}
    for idx, p in enumerate(cb.labels):
        by_angle.setdefault(p.theta, []).append(idx)

    adjacent = []
    for idxs in by_angle.values():
        for a, b in zip(idxs, idxs[1:]):
            adjacent.append(coherence(cb.codewords[:, a], cb.codewords[:, b]))

    cross = 0.0
    thetas = sorted(by_angle)
    for t1, t2 in zip(thetas, thetas[1:]):
        for a, b in zip(by_angle[t1], by_angle[t2]):
            cross = max(cross, coherence(cb.codewords[:, a], cb.codewords[:, b]))

    counts, edges = np.histogram(adjacent if adjacent else [0.0], bins=10, range=(0.0, 1.0))
    return {
        "max_adjacent_ring_coherence": max(adjacent) if adjacent else 0.0,
        "max_cross_angle_coherence": cross,
        "histogram": (counts.tolist(), edges.tolist()),
        "num_codewords": cb.size,
        "num_angles": len(by_angle),
    }


# --- CSV export/import --------------------------------------------------------


def save_codebook(cb: Codebook, labels_path, entries_path) -> None:
    with open(labels_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "theta_deg", "r_m", "kind", "frequency_hz", "geometry", "mu_target"])
        for i, p in enumerate(cb.labels):
            w.writerow([
                i,
                "%.17g" % math.degrees(p.theta),
                "inf" if p.is_far_field else "%.17g" % p.r,
                cb.kind.value,
                "%.17g" % cb.frequency,
                cb.geometry_name,
                "" if cb.mu_target is None else "%.17g" % cb.mu_target,
            ])
    with open(entries_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "element", "re", "im"])
        for i in range(cb.size):
            col = cb.codewords[:, i]
            for n in range(col.size):
                w.writerow([i, n, "%.17g" % col[n].real, "%.17g" % col[n].imag])


def load_codebook(labels_path, entries_path) -> Codebook:
    labels, kind, freq, geom_name, mu = [], None, 0.0, "", None
    with open(labels_path, newline="") as fh:
        for row in csv.DictReader(fh):
            theta = math.radians(float(row["theta_deg"]))
            labels.append(PolarPoint(theta, float(row["r_m"])))
            kind = CodebookKind(row["kind"])
            freq = float(row["frequency_hz"])
            geom_name = row["geometry"]
            mu = float(row["mu_target"]) if row["mu_target"] else None
    if not labels:
        raise InvalidArgumentError(f"no codewords in {labels_path}")

    rows = []
    with open(entries_path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append((int(row["index"]), int(row["element"]), float(row["re"]), float(row["im"])))
    n_elem = max(r[1] for r in rows) + 1
    cw = np.zeros((n_elem, len(labels)), dtype=complex)
    for i, n, re, im in rows:
        cw[n, i] = re + 1j * im
    return Codebook(cw, tuple(labels), kind, geometry_name=geom_name, frequency=freq, mu_target=mu)
