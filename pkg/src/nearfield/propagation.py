"""Exact spherical-wave and approximate planar-wave array responses.

Conventions (fixed package-wide):

* Propagation phase is negative: a wave that travels distance ``d`` at
  frequency ``f`` picks up ``exp(-j 2 pi f d / c)``.
* Steering vectors are phase-referenced to the array center: the spherical
  entry is ``exp(-j 2 pi f (r_n - r) / c)`` with ``r_n`` the element-to-source
  distance and ``r`` the center-to-source distance, so a single-element array
  always yields ``[1]`` and codeword comparisons are decoupled from absolute
  delay.
* The planar model keeps the first-order term of the same expansion:
  ``r_n - r ~ -x_n sin(theta)``, hence the entry ``exp(+j 2 pi f x_n
  sin(theta) / c)``.  With these signs the spherical response converges to
  the planar one as ``r`` grows.
* Combining/beamforming gains elsewhere in the package use the Hermitian
  inner product (conjugate on the weight side), i.e. receive combining; the
  applied weight phases are then the conjugates of the propagation phases.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .carrier import SPEED_OF_LIGHT, CarrierConfig, subcarrier_frequencies, wavelength
from .errors import DomainError, InvalidArgumentError, UnsupportedModelError
from .geometry import ArrayGeometry, PolarPoint, polar_to_cartesian
from .scenario import AmplitudeModel, PathSpec


class WaveModel(Enum):
    SPHERICAL = "SPHERICAL"
    PLANAR = "PLANAR"


@dataclass(frozen=True)
class SteeringVector:
    entries: np.ndarray
    frequency: float
    model: WaveModel

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 1 or e.size < 1:
            raise InvalidArgumentError("steering entries must be a non-empty vector")
        mags = np.abs(e)
        if np.max(np.abs(mags - 1.0)) > 1e-12:
            raise InvalidArgumentError("steering entries must be unit modulus")
        if abs(np.linalg.norm(e) - np.sqrt(e.size)) > 1e-9:
            raise InvalidArgumentError("steering vector norm must be sqrt(N)")
        e = e.copy()
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    def __len__(self):
        return self.entries.size


@dataclass(frozen=True)
class ChannelMatrix:
    entries: np.ndarray
    frequency: float
    metadata: str = ""

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2:
            raise InvalidArgumentError("channel entries must be a matrix")
        if not np.all(np.isfinite(m.view(float))):
            raise InvalidArgumentError("channel entries must be finite")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def shape(self):
        return self.entries.shape


def _check_frequency(f: float):
    if not f > 0:
        raise InvalidArgumentError(f"frequency must be > 0, got {f!r}")


def element_distances(geom: ArrayGeometry, p: PolarPoint) -> np.ndarray:
    """Exact element-to-source distances r_n for a finite-range point."""
    if p.is_far_field:
        raise UnsupportedModelError(
            "FAR_FIELD point has no element distances; use the planar model"
        )
    if not p.r > geom.aperture / 2:
        raise DomainError(
            f"source at r={p.r} lies inside the array hull (aperture/2 = {geom.aperture / 2})"
        )
    src = polar_to_cartesian(p)
    return np.linalg.norm(geom.elements - src, axis=1)


def spherical_steering(
    geom: ArrayGeometry, f: float, p: PolarPoint, speed: float = SPEED_OF_LIGHT
) -> SteeringVector:
    _check_frequency(f)
    r_n = element_distances(geom, p)
    phases = -2.0 * np.pi * f * (r_n - p.r) / speed
    return SteeringVector(np.exp(1j * phases), f, WaveModel.SPHERICAL)


def planar_steering(
    geom: ArrayGeometry, f: float, theta: float, speed: float = SPEED_OF_LIGHT
) -> SteeringVector:
    _check_frequency(f)
    if not (-np.pi / 2 < theta < np.pi / 2):
        raise InvalidArgumentError(f"theta must lie strictly inside (-pi/2, pi/2), got {theta!r}")
    phases = 2.0 * np.pi * f * geom.xs * np.sin(theta) / speed
    return SteeringVector(np.exp(1j * phases), f, WaveModel.PLANAR)


def phase_discrepancy(
    geom: ArrayGeometry, f: float, p: PolarPoint, speed: float = SPEED_OF_LIGHT
) -> float:
    """Worst-case unwrapped phase error of the planar model at (theta, r).

    max_n | (2 pi f / c) * [(r_n - r) + x_n sin(theta)] | -- the planar
    first-order term minus the exact propagation difference, left unwrapped
    because it is a Taylor-error bound, not a modular phase.
    """
    _check_frequency(f)
    r_n = element_distances(geom, p)
    err = (r_n - p.r) + geom.xs * np.sin(p.theta)
    return float(np.max(np.abs(2.0 * np.pi * f * err / speed)))


def multipath_channel(
    geom: ArrayGeometry,
    f: float,
    paths,
    amplitude_model: AmplitudeModel = AmplitudeModel.UNIT,
    speed: float = SPEED_OF_LIGHT,
) -> np.ndarray:
    """h = sum_l g_l * a(p_l), spherical for finite r, planar for FAR_FIELD.

    FREE_SPACE additionally scales each path by lambda / (4 pi r_l); that
    amplitude is undefined for far-field paths, which are therefore rejected
    under FREE_SPACE.
    """
    paths = list(paths)
    if not paths:
        raise InvalidArgumentError("multipath_channel requires at least one path")
    _check_frequency(f)
    lam = speed / f
    h = np.zeros(geom.num_elements, dtype=complex)
    for ps in paths:
        if not isinstance(ps, PathSpec):
            raise InvalidArgumentError(f"paths must be PathSpec instances, got {type(ps).__name__}")
        if ps.point.is_far_field:
            if amplitude_model is AmplitudeModel.FREE_SPACE:
                raise InvalidArgumentError(
                    "FREE_SPACE amplitude is undefined for a FAR_FIELD path"
                )
            a = planar_steering(geom, f, ps.point.theta, speed=speed)
            amp = 1.0
        else:
            a = spherical_steering(geom, f, ps.point, speed=speed)
            amp = lam / (4.0 * np.pi * ps.point.r) if amplitude_model is AmplitudeModel.FREE_SPACE else 1.0
        h = h + ps.gain * amp * a.entries
    return h


def _bounding_sphere(pts: np.ndarray):
    center = pts.mean(axis=0)
    radius = float(np.max(np.linalg.norm(pts - center, axis=1)))
    return center, radius


def los_mimo_channel(
    tx: ArrayGeometry,
    rx: ArrayGeometry,
    f: float,
    rx_center: PolarPoint,
    rx_orientation: np.ndarray | None = None,
    amplitude_model: AmplitudeModel = AmplitudeModel.UNIT,
    speed: float = SPEED_OF_LIGHT,
    metadata: str = "los-mimo",
) -> ChannelMatrix:
    """Exact LoS MIMO channel: entry (m, n) = A_mn exp(-j 2 pi f d_mn / c).

    The tx array sits at the origin in its own frame; the rx array is rotated
    by ``rx_orientation`` (default: identity, i.e. broadside-parallel panels)
    and translated to the Cartesian image of ``rx_center``.  Arrays whose
    bounding spheres touch are rejected: that conservative test never accepts
    genuinely interpenetrating hulls.
    """
    _check_frequency(f)
    if rx_center.is_far_field:
        raise UnsupportedModelError("rx_center must be a finite-range point")
    rot = np.eye(3) if rx_orientation is None else np.asarray(rx_orientation, dtype=float)
    if rot.shape != (3, 3):
        raise InvalidArgumentError("rx_orientation must be a 3x3 rotation matrix")
    rx_pts = rx.elements @ rot.T + polar_to_cartesian(rx_center)

    c_tx, rad_tx = _bounding_sphere(tx.elements)
    c_rx, rad_rx = _bounding_sphere(rx_pts)
    if np.linalg.norm(c_tx - c_rx) <= rad_tx + rad_rx:
        raise DomainError("tx and rx arrays overlap (bounding spheres intersect)")

    d = np.linalg.norm(rx_pts[:, None, :] - tx.elements[None, :, :], axis=-1)
    amp = (speed / f) / (4.0 * np.pi * d) if amplitude_model is AmplitudeModel.FREE_SPACE else 1.0
    entries = amp * np.exp(-2j * np.pi * f * d / speed)
    return ChannelMatrix(entries, f, metadata=metadata)


def cascaded_ris_channel(
    bs: ArrayGeometry,
    ris: ArrayGeometry,
    ue: PolarPoint,
    bs_center: PolarPoint,
    f: float,
    ris_phases: np.ndarray,
    amplitude_model: AmplitudeModel = AmplitudeModel.UNIT,
    speed: float = SPEED_OF_LIGHT,
) -> np.ndarray:
    """Cascaded BS->RIS->UE channel h = G^T diag(omega) a, RIS at the origin.

    G[i, j] is the exact BS_j -> RIS_i element-pair channel and a[i] the exact
    RIS_i -> UE response (absolute phases: the per-element cascade phase is
    literally hop1 + hop2 + phase(omega_i)).
    """
    _check_frequency(f)
    omega = np.asarray(ris_phases, dtype=complex)
    if omega.ndim != 1 or omega.size != ris.num_elements:
        raise InvalidArgumentError(
            f"ris_phases length {omega.size} does not match RIS element count {ris.num_elements}"
        )
    if np.max(np.abs(np.abs(omega) - 1.0)) > 1e-9:
        raise InvalidArgumentError("ris_phases must be unit modulus")
    if ue.is_far_field or bs_center.is_far_field:
        raise UnsupportedModelError("cascaded channel needs finite-range UE and BS positions")

    bs_pts = bs.elements + polar_to_cartesian(bs_center)
    ue_pt = polar_to_cartesian(ue)
    lam = speed / f

    d_bs = np.linalg.norm(ris.elements[:, None, :] - bs_pts[None, :, :], axis=-1)
    d_ue = np.linalg.norm(ris.elements - ue_pt, axis=1)
    if amplitude_model is AmplitudeModel.FREE_SPACE:
        g_amp = lam / (4.0 * np.pi * d_bs)
        a_amp = lam / (4.0 * np.pi * d_ue)
    else:
        g_amp = 1.0
        a_amp = 1.0
    big_g = g_amp * np.exp(-2j * np.pi * f * d_bs / speed)
    a_ue = a_amp * np.exp(-2j * np.pi * f * d_ue / speed)
    return big_g.T @ (omega * a_ue)


def wideband_steering(
    geom: ArrayGeometry, carrier: CarrierConfig, p: PolarPoint
) -> list[SteeringVector]:
    """One steering vector per subcarrier, each at its own frequency."""
    out = []
    for fm in subcarrier_frequencies(carrier):
        if p.is_far_field:
            out.append(planar_steering(geom, float(fm), p.theta, speed=carrier.propagation_speed))
        else:
            out.append(spherical_steering(geom, float(fm), p, speed=carrier.propagation_speed))
    return out
