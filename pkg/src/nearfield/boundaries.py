"""Far/near-field boundary calculators.

Closed forms: 2 D^2 / lambda (Rayleigh/Fraunhofer), the MIMO variant
2 (D_tx + D_rx)^2 / lambda, and the RIS effective distance d1 d2 / (d1 + d2)
(half the textbook harmonic mean -- the form that actually matches the
worked RIS example).  Numeric boundaries invert the pi/8 worst-element phase
discrepancy or a beamforming-gain floor by bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .carrier import SPEED_OF_LIGHT
from .errors import InvalidArgumentError, NumericError
from .geometry import ArrayGeometry, PolarPoint
from .propagation import phase_discrepancy, planar_steering, spherical_steering

UNBOUNDED = math.inf

PI_OVER_8 = math.pi / 8


class BoundaryCriterion(Enum):
    PHASE_PI_OVER_8 = "PHASE_PI_OVER_8"
    GAIN_THRESHOLD = "GAIN_THRESHOLD"


@dataclass(frozen=True)
class BoundaryReport:
    closed_form: float
    criterion: BoundaryCriterion
    numeric: float | None = None
    inputs: dict = field(default_factory=dict)


def rayleigh_distance(aperture: float, lam: float) -> float:
    if not (math.isfinite(lam) and lam > 0):
        raise InvalidArgumentError(f"wavelength must be finite and > 0, got {lam!r}")
    if not (math.isfinite(aperture) and aperture >= 0):
        raise InvalidArgumentError(f"aperture must be finite and >= 0, got {aperture!r}")
    return 2.0 * aperture * aperture / lam


def mimo_rayleigh_distance(d_tx: float, d_rx: float, lam: float) -> float:
    if not (math.isfinite(d_tx) and d_tx >= 0 and math.isfinite(d_rx) and d_rx >= 0):
        raise InvalidArgumentError("apertures must be finite and >= 0")
    return rayleigh_distance(d_tx + d_rx, lam)


def ris_effective_distance(d1: float, d2: float) -> float:
    if not (d1 > 0 and d2 > 0):
        raise InvalidArgumentError(f"distances must be > 0, got d1={d1!r}, d2={d2!r}")
    return d1 * d2 / (d1 + d2)


def ris_boundary_d2(aperture: float, lam: float, d1: float):
    """d2 threshold below which the RIS link is near-field; UNBOUNDED if the
    BS-RIS hop alone already is (d1 <= 2 D^2 / lambda)."""
    if not d1 > 0:
        raise InvalidArgumentError(f"d1 must be > 0, got {d1!r}")
    r = rayleigh_distance(aperture, lam)
    if d1 <= r:
        return UNBOUNDED
    return r * d1 / (d1 - r)


def numeric_phase_boundary(
    geom: ArrayGeometry,
    f: float,
    theta: float,
    threshold: float = PI_OVER_8,
    speed: float = SPEED_OF_LIGHT,
    rel_tol: float = 1e-6,
) -> float:
    """Bisection solve of phase_discrepancy(r) = threshold along theta.

    The discrepancy is monotone non-increasing in r, so the crossing is
    unique.  The nominal bracket is [aperture, 1e4 * closed form]; for very
    small arrays the crossing can sit below the aperture, so the lower end is
    allowed to slide down to just above aperture/2 (the domain boundary for
    exact element distances).
    """
    if not geom.aperture > 0:
        raise InvalidArgumentError("numeric boundary needs a non-degenerate array (aperture > 0)")
    if not (math.isfinite(threshold) and threshold > 0):
        raise InvalidArgumentError(f"threshold must be finite and > 0, got {threshold!r}")
    lam = speed / f
    closed = rayleigh_distance(geom.aperture, lam)

    def disc(r: float) -> float:
        return phase_discrepancy(geom, f, PolarPoint(theta, r), speed=speed)

    lo = geom.aperture
    hi = 1e4 * closed
    if disc(lo) < threshold:
        lo = (geom.aperture / 2) * (1 + 1e-9)
    d_lo, d_hi = disc(lo), disc(hi)
    if not (d_lo >= threshold >= d_hi):
        raise NumericError(
            "phase-discrepancy bracket does not straddle the threshold",
            diagnostics={
                "lo": lo,
                "hi": hi,
                "disc_lo": d_lo,
                "disc_hi": d_hi,
                "threshold": threshold,
            },
        )
    while (hi - lo) > rel_tol * lo:
        mid = 0.5 * (lo + hi)
        if disc(mid) >= threshold:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _planar_vs_spherical_gain(
    geom: ArrayGeometry, f: float, theta: float, r: float, speed: float
) -> float:
    a_pl = planar_steering(geom, f, theta, speed=speed).entries
    a_sp = spherical_steering(geom, f, PolarPoint(theta, r), speed=speed).entries
    return abs(np.vdot(a_pl, a_sp)) / geom.num_elements


def effective_rayleigh_distance(
    geom: ArrayGeometry,
    f: float,
    theta: float,
    gain_floor: float = 0.95,
    speed: float = SPEED_OF_LIGHT,
    rel_tol: float = 1e-6,
) -> float:
    """Smallest r such that far-field steering keeps >= gain_floor of the
    matched gain for every r' >= r.

    The gain-vs-distance curve ripples through Fresnel lobes deep in the
    near field, so this is the *last* upward crossing of the floor: locate
    the last below-floor sample on a dense log grid, then bisect inside
    that bracket.  The grid (400 points per search range) is dense enough
    that no later dip can hide between samples for physical thresholds.
    """
    if not (0 < gain_floor < 1):
        raise InvalidArgumentError(f"gain_floor must be in (0, 1), got {gain_floor!r}")
    if geom.num_elements == 1:
        return 0.0
    if not geom.aperture > 0:
        raise InvalidArgumentError("effective Rayleigh distance needs aperture > 0")
    lam = speed / f
    lo = (geom.aperture / 2) * (1 + 1e-6)
    hi = 10.0 * rayleigh_distance(geom.aperture, lam)

    def g(r: float) -> float:
        return _planar_vs_spherical_gain(geom, f, theta, r, speed)

    while g(hi) < gain_floor:
        hi *= 10.0
        if hi > 1e9 * rayleigh_distance(geom.aperture, lam):
            raise NumericError(
                "gain floor not reached at any searched distance",
                diagnostics={"gain_floor": gain_floor, "hi": hi},
            )

    rs = np.geomspace(lo, hi, 400)
    gains = np.array([g(r) for r in rs])
    below = np.nonzero(gains < gain_floor)[0]
    if below.size == 0:
        return lo  # above the floor everywhere outside the hull
    last = int(below[-1])
    if last == rs.size - 1:  # floor met only beyond the sampled range
        raise NumericError(
            "gain floor crossing not bracketed",
            diagnostics={"gain_floor": gain_floor, "hi": hi, "gain_hi": float(gains[-1])},
        )
    b_lo, b_hi = float(rs[last]), float(rs[last + 1])
    while (b_hi - b_lo) > rel_tol * b_lo:
        mid = 0.5 * (b_lo + b_hi)
        if g(mid) >= gain_floor:
            b_hi = mid
        else:
            b_lo = mid
    return 0.5 * (b_lo + b_hi)


def phase_boundary_report(
    geom: ArrayGeometry, f: float, theta: float = 0.0, speed: float = SPEED_OF_LIGHT
) -> BoundaryReport:
    lam = speed / f
    return BoundaryReport(
        closed_form=rayleigh_distance(geom.aperture, lam),
        numeric=numeric_phase_boundary(geom, f, theta, speed=speed),
        criterion=BoundaryCriterion.PHASE_PI_OVER_8,
        inputs={"aperture_m": geom.aperture, "frequency_hz": f, "theta_rad": theta},
    )


def erd_report(
    geom: ArrayGeometry,
    f: float,
    theta: float = 0.0,
    gain_floor: float = 0.95,
    speed: float = SPEED_OF_LIGHT,
) -> BoundaryReport:
    lam = speed / f
    return BoundaryReport(
        closed_form=rayleigh_distance(geom.aperture, lam),
        numeric=effective_rayleigh_distance(geom, f, theta, gain_floor=gain_floor, speed=speed),
        criterion=BoundaryCriterion.GAIN_THRESHOLD,
        inputs={
            "aperture_m": geom.aperture,
            "frequency_hz": f,
            "theta_rad": theta,
            "gain_floor": gain_floor,
        },
    )
