"""Narrowband beamfocusing/beamsteering and wideband PS vs. TTD beamformers.

Gain convention (package-wide, see propagation module): receive combining
with the Hermitian inner product,

    gain = |<w, a>| / sqrt(N) = |sum_n conj(w_n) a_n| / sqrt(N),

so the matched filter is w = a / sqrt(N) (the applied combining phases are
the conjugates of the propagation phases) and gain lives in [0, 1] by
Cauchy-Schwarz.

Wideband hardware model: one frequency-flat phase shifter per antenna plus
one true-time-delay line per subarray.  A TTD of t seconds multiplies the
combined signal by exp(-j 2 pi f t) -- frequency-proportional phase, which is
what lets delays track the spherical wavefront across the band while phase
shifters cannot.  Phase-delay focusing partitions the array into L contiguous
equal subarrays, compensates the first-order planar phase toward the target
angle about each subarray center with the PS bank (exact only at f_c), and
aligns subarray centers at every frequency with delays
t_l = (r_l - min_l r_l) / c.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .carrier import SPEED_OF_LIGHT, CarrierConfig, subcarrier_frequencies
from .errors import DomainError, InvalidArgumentError
from .geometry import FAR_FIELD, ArrayGeometry, PolarPoint, polar_to_cartesian
from .propagation import planar_steering, spherical_steering


class DesignKind(Enum):
    FOCUS = "FOCUS"
    STEER = "STEER"


@dataclass(frozen=True)
class NarrowbandBeamformer:
    weights: np.ndarray
    design: DesignKind
    target: PolarPoint

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=complex)
        if w.ndim != 1 or w.size < 1:
            raise InvalidArgumentError("weights must be a non-empty vector")
        if abs(np.linalg.norm(w) - 1.0) > 1e-9:
            raise InvalidArgumentError("beamformer weights must be unit norm")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class WidebandBeamformer:
    """Frequency-flat phases + per-subarray delays.

    ``partition`` is a tuple of half-open (start, stop) antenna index ranges
    covering every antenna exactly once; ``ttd_delays[l]`` applies to
    partition range l.  Delays are normalized so the minimum is exactly 0.
    """

    ps_phases: np.ndarray
    ttd_delays: np.ndarray
    partition: tuple[tuple[int, int], ...]
    target: PolarPoint

    def __post_init__(self):
        ps = np.asarray(self.ps_phases, dtype=float)
        td = np.asarray(self.ttd_delays, dtype=float)
        if ps.ndim != 1 or not np.all(np.isfinite(ps)):
            raise InvalidArgumentError("ps_phases must be a finite vector")
        if td.ndim != 1 or not np.all(np.isfinite(td)):
            raise InvalidArgumentError("ttd_delays must be a finite vector")
        part = tuple((int(s), int(e)) for s, e in self.partition)
        if len(part) != td.size:
            raise InvalidArgumentError("one delay per subarray required")
        expected = 0
        for s, e in part:
            if s != expected or e <= s:
                raise InvalidArgumentError(f"partition must tile antennas contiguously, got {part}")
            expected = e
        if expected != ps.size:
            raise InvalidArgumentError("partition must cover all antennas exactly once")
        td = td - td.min()  # normalize: min delay 0, all delays >= 0
        ps = ps.copy()
        ps.flags.writeable = False
        td.flags.writeable = False
        object.__setattr__(self, "ps_phases", ps)
        object.__setattr__(self, "ttd_delays", td)
        object.__setattr__(self, "partition", part)

    @property
    def num_antennas(self) -> int:
        return self.ps_phases.size

    @property
    def element_delays(self) -> np.ndarray:
        out = np.empty(self.num_antennas)
        for l, (s, e) in enumerate(self.partition):
            out[s:e] = self.ttd_delays[l]
        return out

    def weights_at(self, f: float) -> np.ndarray:
        """Effective unit-norm weights at frequency f:
        exp(j (ps_n - 2 pi f t_{l(n)})) / sqrt(N)."""
        phases = self.ps_phases - 2.0 * np.pi * f * self.element_delays
        return np.exp(1j * phases) / math.sqrt(self.num_antennas)


def focus_weights(
    geom: ArrayGeometry, f: float, p: PolarPoint, speed: float = SPEED_OF_LIGHT
) -> NarrowbandBeamformer:
    a = spherical_steering(geom, f, p, speed=speed)
    w = a.entries / math.sqrt(geom.num_elements)
    return NarrowbandBeamformer(w, DesignKind.FOCUS, p)


def steer_weights(
    geom: ArrayGeometry, f: float, theta: float, speed: float = SPEED_OF_LIGHT
) -> NarrowbandBeamformer:
    a = planar_steering(geom, f, theta, speed=speed)
    w = a.entries / math.sqrt(geom.num_elements)
    return NarrowbandBeamformer(w, DesignKind.STEER, PolarPoint(theta, FAR_FIELD))


def _weights_array(w) -> np.ndarray:
    if isinstance(w, NarrowbandBeamformer):
        return w.weights
    return np.asarray(w, dtype=complex)


def gain(
    geom: ArrayGeometry, f: float, w, p: PolarPoint, speed: float = SPEED_OF_LIGHT
) -> float:
    """|<w, a(p)>| / sqrt(N) against the exact response (planar for FAR_FIELD)."""
    wv = _weights_array(w)
    if p.is_far_field:
        a = planar_steering(geom, f, p.theta, speed=speed)
    else:
        a = spherical_steering(geom, f, p, speed=speed)
    return min(float(abs(np.vdot(wv, a.entries))) / math.sqrt(geom.num_elements), 1.0)


def _response_rows(geom: ArrayGeometry, f: float, thetas: np.ndarray, r: float, speed: float) -> np.ndarray:
    """Exact responses for all angles at one distance, one row per angle."""
    if math.isinf(r):
        return np.exp(2j * np.pi * f * np.sin(thetas)[:, None] * geom.xs[None, :] / speed)
    if not r > geom.aperture / 2:
        raise DomainError(
            f"grid distance r={r} lies inside the array hull; choose r > aperture/2"
        )
    src = np.column_stack([r * np.sin(thetas), np.zeros(thetas.size), r * np.cos(thetas)])
    d = np.linalg.norm(src[:, None, :] - geom.elements[None, :, :], axis=-1)
    return np.exp(-2j * np.pi * f * (d - r) / speed)


def gain_map(
    geom: ArrayGeometry,
    f: float,
    w,
    angle_grid,
    distance_grid,
    speed: float = SPEED_OF_LIGHT,
) -> np.ndarray:
    """Gain over the polar grid; rows follow angle_grid, columns distance_grid."""
    thetas = np.asarray(angle_grid, dtype=float)
    rs = np.asarray(distance_grid, dtype=float)
    if thetas.size == 0 or rs.size == 0:
        raise InvalidArgumentError("angle and distance grids must be non-empty")
    wv = _weights_array(w)
    root_n = math.sqrt(geom.num_elements)
    out = np.empty((thetas.size, rs.size))
    for j, r in enumerate(rs):
        rows = _response_rows(geom, f, thetas, float(r), speed)
        out[:, j] = np.abs(rows @ np.conj(wv)) / root_n
    return np.minimum(out, 1.0)


def ps_wideband(
    geom: ArrayGeometry, carrier: CarrierConfig, p: PolarPoint
) -> WidebandBeamformer:
    """Phase-shifter-only design: spherical match at f_c, no delays.

    Every antenna is its own (delay-free) subarray; the phase profile is
    frequency-flat, so off-center subcarriers see a mismatched beam -- the
    near-field beam-split effect this module quantifies.
    """
    a = spherical_steering(geom, carrier.center_frequency, p, speed=carrier.propagation_speed)
    n = geom.num_elements
    return WidebandBeamformer(
        ps_phases=np.angle(a.entries),
        ttd_delays=np.zeros(n),
        partition=tuple((i, i + 1) for i in range(n)),
        target=p,
    )


def ttd_pdf(
    geom: ArrayGeometry, carrier: CarrierConfig, p: PolarPoint, num_subarrays: int
) -> WidebandBeamformer:
    """Phase-delay focusing: planar PS per subarray + one TTD per subarray.

    Within subarray l the phase shifters compensate the first-order planar
    phase at f_c toward p.theta about the subarray center:
    ps_n = 2 pi f_c (x_n - x_center_l) sin(theta) / c.  The delays
    t_l = (r_l - min_l r_l) / c (r_l = subarray-center distance to p) keep
    the subarray centers aligned at every frequency.
    """
    n = geom.num_elements
    if not isinstance(num_subarrays, (int, np.integer)) or num_subarrays < 1:
        raise InvalidArgumentError(f"num_subarrays must be a positive integer, got {num_subarrays!r}")
    if n % num_subarrays != 0:
        raise InvalidArgumentError(
            f"num_subarrays={num_subarrays} must divide the antenna count {n}"
        )
    if p.is_far_field:
        raise InvalidArgumentError("ttd_pdf needs a finite-range focal point")
    per = n // num_subarrays
    fc = carrier.center_frequency
    c = carrier.propagation_speed
    tgt = polar_to_cartesian(p)
    sin_t = math.sin(p.theta)

    ps = np.empty(n)
    delays = np.empty(num_subarrays)
    partition = []
    for l in range(num_subarrays):
        s, e = l * per, (l + 1) * per
        partition.append((s, e))
        center = geom.elements[s:e].mean(axis=0)
        delays[l] = np.linalg.norm(tgt - center) / c
        ps[s:e] = 2.0 * np.pi * fc * (geom.xs[s:e] - center[0]) * sin_t / c
    return WidebandBeamformer(
        ps_phases=ps,
        ttd_delays=delays,  # constructor re-normalizes to min 0
        partition=tuple(partition),
        target=p,
    )


def gain_vs_frequency(
    geom: ArrayGeometry, carrier: CarrierConfig, wb: WidebandBeamformer, p: PolarPoint
) -> list[tuple[float, float]]:
    """Per-subcarrier gain of the beamformer's frequency law at the point p."""
    speed = carrier.propagation_speed
    out = []
    for fm in subcarrier_frequencies(carrier):
        fm = float(fm)
        out.append((fm, gain(geom, fm, wb.weights_at(fm), p, speed=speed)))
    return out


def min_band_gain(
    geom: ArrayGeometry, carrier: CarrierConfig, wb: WidebandBeamformer, p: PolarPoint
) -> float:
    return min(g for _, g in gain_vs_frequency(geom, carrier, wb, p))


def focal_point_map(
    geom: ArrayGeometry,
    carrier: CarrierConfig,
    wb: WidebandBeamformer,
    angle_grid,
    distance_grid,
) -> list[tuple[int, int]]:
    """Grid argmax (angle index, distance index) of the gain map per subcarrier."""
    thetas = np.asarray(angle_grid, dtype=float)
    rs = np.asarray(distance_grid, dtype=float)
    if thetas.size == 0 or rs.size == 0:
        raise InvalidArgumentError("angle and distance grids must be non-empty")
    out = []
    for fm in subcarrier_frequencies(carrier):
        m = gain_map(geom, float(fm), wb.weights_at(float(fm)), thetas, rs,
                     speed=carrier.propagation_speed)
        flat = int(np.argmax(m))
        out.append((flat // rs.size, flat % rs.size))
    return out
