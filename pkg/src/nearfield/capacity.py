"""LoS-MIMO effective DoF, water-filling capacity, and multi-user SDMA.

The effective DoF counts singular values above a relative threshold, so it is
invariant to global channel scaling.  The distance sweep uses free-space
amplitudes and broadside-parallel arrays (tx at the origin, rx translated
along boresight), matching the geometry under which the DoF-vs-distance trend
and the aperture-product upper bound are meaningful.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boundaries import rayleigh_distance
from .carrier import SPEED_OF_LIGHT, CarrierConfig
from .errors import InvalidArgumentError, NumericError
from .geometry import ArrayGeometry, PolarPoint
from .propagation import ChannelMatrix, los_mimo_channel, spherical_steering, planar_steering
from .scenario import AmplitudeModel


@dataclass(frozen=True)
class DofReport:
    distance: float
    singular_values: np.ndarray
    effective_dof: int
    capacity_bps_hz: float
    snr_db: float

    def __post_init__(self):
        sv = np.asarray(self.singular_values, dtype=float)
        if sv.ndim != 1 or sv.size < 1 or np.any(sv < 0) or np.any(np.diff(sv) > 0):
            raise InvalidArgumentError("singular values must be non-negative and descending")
        if not (1 <= self.effective_dof <= sv.size):
            raise InvalidArgumentError("effective_dof must lie in [1, len(singular_values)]")
        if self.capacity_bps_hz < 0:
            raise InvalidArgumentError("capacity must be >= 0")
        sv = sv.copy()
        sv.flags.writeable = False
        object.__setattr__(self, "singular_values", sv)


def _entries(h) -> np.ndarray:
    if isinstance(h, ChannelMatrix):
        return h.entries
    return np.asarray(h, dtype=complex)


def effective_dof(h, rel_threshold: float = 0.01) -> int:
    """Count of singular values >= rel_threshold * sigma_1."""
    m = _entries(h)
    if not np.any(m != 0):
        raise InvalidArgumentError("effective DoF is undefined for a zero matrix")
    if not (0 < rel_threshold <= 1):
        raise InvalidArgumentError(f"rel_threshold must be in (0, 1], got {rel_threshold!r}")
    sv = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(sv >= rel_threshold * sv[0]))


def dof_upper_bound(d_tx: float, d_rx: float, lam: float, d: float) -> float:
    """max(1, D_tx * D_rx / (lambda * d)) -- aperture-product scaling law."""
    if not (lam > 0 and d > 0):
        raise InvalidArgumentError("wavelength and distance must be > 0")
    if d_tx < 0 or d_rx < 0:
        raise InvalidArgumentError("apertures must be >= 0")
    return max(1.0, d_tx * d_rx / (lam * d))


def waterfilling(singular_values, snr_db: float) -> float:
    """Water-filling capacity in bits/s/Hz.

    N0 = 1 and the total power is snr_lin / sigma_1^2, so the total SNR
    P_total * sigma_1^2 / N0 equals the requested snr.
    """
    sv = np.asarray(singular_values, dtype=float)
    if sv.ndim != 1 or sv.size < 1 or np.any(sv < 0):
        raise InvalidArgumentError("singular values must be a non-negative vector")
    pos = sv[sv > 0]
    if pos.size == 0:
        raise InvalidArgumentError("waterfilling needs at least one positive singular value")
    snr_lin = 10.0 ** (snr_db / 10.0)
    p_total = snr_lin / float(pos[0] ** 2)  # N0 = 1
    inv = 1.0 / pos**2  # noise-to-gain floor per mode
    lo, hi = 0.0, p_total + float(inv.max())
    for _ in range(200):
        level = 0.5 * (lo + hi)
        if np.sum(np.maximum(0.0, level - inv)) > p_total:
            hi = level
        else:
            lo = level
    level = 0.5 * (lo + hi)
    powers = np.maximum(0.0, level - inv)
    return float(np.sum(np.log2(1.0 + powers / inv)))


def recommend_rf_chains(report: DofReport) -> int:
    """Distance-adaptive activation: one RF chain per effective DoF."""
    return report.effective_dof


def dof_vs_distance(
    tx: ArrayGeometry,
    rx: ArrayGeometry,
    carrier: CarrierConfig,
    distances,
    snr_db: float = 10.0,
    rel_threshold: float = 0.1,
) -> list[DofReport]:
    """LoS SVD sweep over boresight distances (free-space amplitudes).

    rel_threshold defaults to 0.1 (amplitude, i.e. -20 dB in power): with
    free-space LoS channels this makes the far-field DoF collapse to exactly
    1 at the MIMO Rayleigh distance while still tracking the aperture-product
    bound in the near zone.
    """
    ds = [float(d) for d in distances]
    if not ds or any(d <= 0 for d in ds):
        raise InvalidArgumentError("distances must be positive")
    if sorted(ds) != ds:
        raise InvalidArgumentError("distances must be sorted ascending")
    out = []
    for d in ds:
        h = los_mimo_channel(
            tx, rx, carrier.center_frequency, PolarPoint(0.0, d),
            amplitude_model=AmplitudeModel.FREE_SPACE,
            speed=carrier.propagation_speed,
        )
        sv = np.linalg.svd(h.entries, compute_uv=False)
        dof = int(np.sum(sv >= rel_threshold * sv[0]))
        cap = waterfilling(sv, snr_db)
        out.append(DofReport(d, sv, dof, cap, snr_db))
    return out


def zf_precoder(h_multiuser: np.ndarray) -> np.ndarray:
    """Right pseudo-inverse with unit-norm columns; rows of H are user channels."""
    h = np.asarray(h_multiuser, dtype=complex)
    if h.ndim != 2:
        raise InvalidArgumentError("multiuser channel must be a K x N matrix")
    k, n = h.shape
    if k > n:
        raise InvalidArgumentError(f"more users ({k}) than antennas ({n})")
    if np.linalg.matrix_rank(h) < k:
        raise NumericError(
            "multiuser channel is rank deficient (users spatially inseparable)",
            diagnostics={"shape": (k, n)},
        )
    w = np.linalg.pinv(h)
    # sanity: H @ W must be (numerically) the identity before column scaling
    g = h @ w
    off = g - np.diag(np.diag(g))
    if np.max(np.abs(off)) > 1e-9 * np.min(np.abs(np.diag(g))):
        raise NumericError(
            "zero-forcing inversion failed its diagonal-dominance check",
            diagnostics={"max_offdiag": float(np.max(np.abs(off)))},
        )
    return w / np.linalg.norm(w, axis=0, keepdims=True)


def sum_rate(h_multiuser: np.ndarray, w: np.ndarray, snr_db: float) -> float:
    """Equal-power sum rate: per-user transmit power snr_lin, N0 = 1."""
    h = np.asarray(h_multiuser, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if h.ndim != 2 or w.ndim != 2 or h.shape[1] != w.shape[0] or h.shape[0] != w.shape[1]:
        raise InvalidArgumentError(f"inconsistent dimensions: H {h.shape}, W {w.shape}")
    snr_lin = 10.0 ** (snr_db / 10.0)
    g = np.abs(h @ w) ** 2  # g[k, j] = |h_k w_j|^2
    total = 0.0
    for k in range(h.shape[0]):
        signal = snr_lin * g[k, k]
        interference = snr_lin * (np.sum(g[k]) - g[k, k])
        total += math.log2(1.0 + signal / (interference + 1.0))
    return total


def sdma_compare(
    geom: ArrayGeometry,
    f: float,
    users,
    snr_db: float,
    speed: float = SPEED_OF_LIGHT,
) -> dict:
    """Near-field ZF vs. far-field steering for users sharing one angle.

    Near-field rate: exact spherical channels + ZF.  Far-field rate: beams are
    planar steering toward each user's angle -- identical for exactly shared
    angles, so inter-user interference is total.  Also reports the worst
    pairwise normalized channel correlation |<a_i, a_j>| / N.
    """
    users = list(users)
    if len(users) < 2:
        raise InvalidArgumentError("sdma_compare needs at least two users")
    thetas = [u.theta for u in users]
    if max(thetas) - min(thetas) > math.radians(0.1):
        raise InvalidArgumentError("users must share the same angle within 0.1 degrees")
    lam = speed / f
    r_limit = rayleigh_distance(geom.aperture, lam)
    for u in users:
        if u.is_far_field or u.r >= r_limit:
            raise InvalidArgumentError(
                f"user at r={u.r} is outside the Rayleigh distance {r_limit:.3f}"
            )

    rows = [spherical_steering(geom, f, u, speed=speed).entries for u in users]
    h = np.vstack(rows)
    n = geom.num_elements

    corr = 0.0
    for i in range(len(users)):
        for j in range(i + 1, len(users)):
            corr = max(corr, float(abs(np.vdot(rows[i], rows[j]))) / n)

    w_nf = zf_precoder(h)
    near_rate = sum_rate(h, w_nf, snr_db)

    # transmit-precoding convention (y = H @ W): a beam matched to a steering
    # vector is its conjugate
    cols = [
        np.conj(planar_steering(geom, f, u.theta, speed=speed).entries) / math.sqrt(n)
        for u in users
    ]
    w_ff = np.column_stack(cols)
    far_rate = sum_rate(h, w_ff, snr_db)

    return {
        "near_field_zf_rate": near_rate,
        "far_field_steering_rate": far_rate,
        "channel_correlation": corr,
    }
