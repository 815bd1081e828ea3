"""Compressed-sensing channel estimation over a codebook.

Pilots model analog phase-shifter combining: the sensing matrix has
unit-modulus random-phase entries scaled by 1/sqrt(N), and the per-measurement
SNR is defined after combining (noise power = mean |A h|^2 / snr).  Estimation
is standard OMP -- greedy max-correlation atom selection with a least-squares
refit each iteration -- over the dictionary A @ codewords.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from .codebook import Codebook
from .errors import InvalidArgumentError, NumericError
from .geometry import PolarPoint
from .propagation import multipath_channel
from .scenario import PathSpec, ScenarioConfig, derive_rng

NMSE_FLOOR_DB = -300.0

COMPARE_HEADER = ("distance_m", "snr_db", "codebook", "mean_nmse_db", "trials")


@dataclass(frozen=True)
class PilotSystem:
    sensing_matrix: np.ndarray  # (P, N), entries unit modulus / sqrt(N)
    snr_db: float
    seed: object

    def __post_init__(self):
        a = np.asarray(self.sensing_matrix, dtype=complex)
        if a.ndim != 2 or a.shape[0] < 1:
            raise InvalidArgumentError("sensing matrix must be (P, N) with P >= 1")
        n = a.shape[1]
        if np.max(np.abs(np.abs(a) - 1.0 / math.sqrt(n))) > 1e-12:
            raise InvalidArgumentError("sensing matrix entries must be unit modulus / sqrt(N)")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "sensing_matrix", a)

    @property
    def num_measurements(self) -> int:
        return self.sensing_matrix.shape[0]


@dataclass(frozen=True)
class EstimationResult:
    estimated_channel: np.ndarray
    support: tuple[int, ...]
    coefficients: np.ndarray
    residual_norm: float
    residual_history: tuple[float, ...] = ()


def simulate_pilots(h: np.ndarray, num_measurements: int, snr_db: float, seed) -> tuple[np.ndarray, PilotSystem]:
    """y = A h + n with seeded unit-modulus A; snr_db = inf means noiseless."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 1 or h.size < 1:
        raise InvalidArgumentError("channel must be a non-empty vector")
    if not isinstance(num_measurements, (int, np.integer)) or num_measurements < 1:
        raise InvalidArgumentError(f"num_measurements must be a positive integer, got {num_measurements!r}")
    rng = np.random.default_rng(seed)
    n = h.size
    a = np.exp(2j * np.pi * rng.random((num_measurements, n))) / math.sqrt(n)
    y = a @ h
    if not math.isinf(snr_db):
        snr_lin = 10.0 ** (snr_db / 10.0)
        sigma2 = float(np.mean(np.abs(y) ** 2)) / snr_lin
        noise = math.sqrt(sigma2 / 2.0) * (
            rng.standard_normal(num_measurements) + 1j * rng.standard_normal(num_measurements)
        )
        y = y + noise
    return y, PilotSystem(a, snr_db, seed)


def omp(
    y: np.ndarray,
    system: PilotSystem,
    cb: Codebook,
    sparsity: int,
    stop_residual: float = 0.0,
) -> EstimationResult:
    """Greedy OMP over the compressed dictionary A @ codewords.

    Stops after ``sparsity`` atoms or once ||residual|| / ||y|| <=
    stop_residual.  Correlations are normalized by dictionary column norms so
    atom selection matches the residual, but the least-squares refit uses the
    raw columns.
    """
    if not isinstance(sparsity, (int, np.integer)) or sparsity < 1:
        raise InvalidArgumentError(f"sparsity must be a positive integer, got {sparsity!r}")
    if sparsity > system.num_measurements:
        raise InvalidArgumentError(
            f"sparsity {sparsity} exceeds measurement count {system.num_measurements}"
        )
    y = np.asarray(y, dtype=complex)
    n = cb.codewords.shape[0]
    dictionary = system.sensing_matrix @ cb.codewords  # (P, Q)
    col_norms = np.linalg.norm(dictionary, axis=0)
    safe_norms = np.where(col_norms > 1e-300, col_norms, np.inf)

    y_norm = float(np.linalg.norm(y))
    if y_norm == 0.0:
        return EstimationResult(np.zeros(n, dtype=complex), (), np.zeros(0, dtype=complex), 0.0, (0.0,))

    support: list[int] = []
    residual = y
    coeffs = np.zeros(0, dtype=complex)
    history = [y_norm]
    for _ in range(int(sparsity)):
        corr = np.abs(dictionary.conj().T @ residual) / safe_norms
        corr[support] = -1.0
        atom = int(np.argmax(corr))
        support.append(atom)
        sub = dictionary[:, support]
        coeffs, _, rank, _ = np.linalg.lstsq(sub, y, rcond=None)
        if rank < len(support):
            raise NumericError(
                "least-squares refit is rank deficient",
                diagnostics={"support": tuple(support), "rank": int(rank)},
            )
        residual = y - sub @ coeffs
        history.append(float(np.linalg.norm(residual)))
        if history[-1] / y_norm <= stop_residual:
            break

    h_est = cb.codewords[:, support] @ coeffs
    return EstimationResult(h_est, tuple(support), coeffs, history[-1], tuple(history))


def nmse(h_true: np.ndarray, h_est: np.ndarray) -> float:
    """10 log10(||h_true - h_est||^2 / ||h_true||^2), floored at -300 dB."""
    h_true = np.asarray(h_true, dtype=complex)
    h_est = np.asarray(h_est, dtype=complex)
    if h_true.shape != h_est.shape:
        raise InvalidArgumentError("nmse needs equal-length vectors")
    denom = float(np.linalg.norm(h_true) ** 2)
    if denom == 0.0:
        raise InvalidArgumentError("nmse is undefined for a zero true channel")
    ratio = float(np.linalg.norm(h_true - h_est) ** 2) / denom
    if ratio <= 1e-30:
        return NMSE_FLOOR_DB
    return max(10.0 * math.log10(ratio), NMSE_FLOOR_DB)


def compare_codebooks(
    scenario: ScenarioConfig,
    cb_far: Codebook,
    cb_polar: Codebook,
    trials: int,
    distances,
    snrs_db,
    pilot_count: int,
    sparsity: int = 3,
    stop_residual: float = 0.0,
    array_name: str | None = None,
    threads: int = 1,
) -> list[tuple]:
    """Mean OMP NMSE per (distance, snr) cell for both codebooks.

    Each trial draws an off-grid user angle (sin(theta) uniform in
    [-0.8, 0.8], seeded per (cell, trial) so results do not depend on thread
    count or evaluation order) at the cell's distance, simulates pilots once,
    and runs OMP against both dictionaries on the same measurements.
    Rows follow COMPARE_HEADER.
    """
    if not isinstance(trials, (int, np.integer)) or trials < 1:
        raise InvalidArgumentError(f"trials must be a positive integer, got {trials!r}")
    name = array_name if array_name is not None else next(iter(scenario.arrays))
    geom = scenario.arrays[name]
    f = scenario.carrier.center_frequency

    def run_trial(cell_index: int, r: float, snr: float, t: int):
        rng = derive_rng(scenario.seed, "compare-codebooks", cell_index, t)
        theta = math.asin(rng.uniform(-0.8, 0.8))
        p = PolarPoint(theta, r)
        h = multipath_channel(
            geom, f, [PathSpec(1.0 + 0j, p)],
            amplitude_model=scenario.amplitude_model,
            speed=scenario.carrier.propagation_speed,
        )
        pilot_seed = np.random.SeedSequence(
            [int(scenario.seed) & 0xFFFFFFFF, cell_index, t, 0x9E3779B9]
        )
        y, system = simulate_pilots(h, pilot_count, snr, pilot_seed)
        res_far = omp(y, system, cb_far, sparsity, stop_residual)
        res_pol = omp(y, system, cb_polar, sparsity, stop_residual)
        return nmse(h, res_far.estimated_channel), nmse(h, res_pol.estimated_channel)

    rows = []
    for cell_index, (r, snr) in enumerate(product(distances, snrs_db)):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda t: run_trial(cell_index, r, snr, t), range(trials)))
        else:
            results = [run_trial(cell_index, r, snr, t) for t in range(trials)]
        far_vals = np.array([a for a, _ in results])
        pol_vals = np.array([b for _, b in results])
        rows.append((float(r), float(snr), "angular", float(np.mean(far_vals)), int(trials)))
        rows.append((float(r), float(snr), "polar", float(np.mean(pol_vals)), int(trials)))
    return rows
