"""Carrier / OFDM spectral configuration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

SPEED_OF_LIGHT = 299792458.0


@dataclass(frozen=True)
class CarrierConfig:
    center_frequency: float
    bandwidth: float = 0.0
    num_subcarriers: int = 1
    propagation_speed: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if not self.center_frequency > 0:
            raise InvalidArgumentError(f"center_frequency must be > 0, got {self.center_frequency!r}")
        if not self.bandwidth >= 0:
            raise InvalidArgumentError(f"bandwidth must be >= 0, got {self.bandwidth!r}")
        if not isinstance(self.num_subcarriers, (int, np.integer)) or self.num_subcarriers < 1:
            raise InvalidArgumentError(f"num_subcarriers must be a positive integer, got {self.num_subcarriers!r}")
        if not self.bandwidth < 2 * self.center_frequency:
            # keep every subcarrier frequency strictly positive
            raise InvalidArgumentError("bandwidth must be < 2 * center_frequency")
        if not self.propagation_speed > 0:
            raise InvalidArgumentError(f"propagation_speed must be > 0, got {self.propagation_speed!r}")


def wavelength(carrier: CarrierConfig) -> float:
    return carrier.propagation_speed / carrier.center_frequency


def subcarrier_frequencies(carrier: CarrierConfig) -> np.ndarray:
    """M frequencies spanning [f_c - B/2, f_c + B/2], endpoints included.

    M = 1 collapses to [f_c] regardless of bandwidth.
    """
    m = carrier.num_subcarriers
    if m == 1:
        return np.array([carrier.center_frequency])
    half = carrier.bandwidth / 2.0
    return np.linspace(carrier.center_frequency - half, carrier.center_frequency + half, m)
