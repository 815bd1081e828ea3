"""End-to-end acceptance gate.

One test function per release criterion, each asserting its stated tolerance
and runtime budget, so ``pytest -v tests/test_acceptance.py`` prints one
pass/fail line per criterion.  Criterion 9's 16-subarray clause documents a
known architectural ceiling and is expected to fail until the target or the
architecture changes; see the assertion message there.
"""

import json
import math
import time

import numpy as np
import pytest

from nearfield import (
    CarrierConfig,
    PolarPoint,
    ScenarioConfig,
    angular_codebook,
    build_ula,
    codebook_coherence_profile,
    compare_codebooks,
    dof_upper_bound,
    dof_vs_distance,
    focus_weights,
    gain,
    gain_map,
    min_band_gain,
    mimo_rayleigh_distance,
    numeric_phase_boundary,
    phase_discrepancy,
    polar_codebook,
    ps_wideband,
    rayleigh_distance,
    ris_boundary_d2,
    sdma_compare,
    steer_weights,
    ttd_pdf,
)
from nearfield.cli import dispatch

C = 299792458.0
F28 = 28e9
LAM28 = C / F28


@pytest.fixture(scope="module")
def ula256():
    return build_ula(256, LAM28 / 2)


@pytest.fixture(scope="module")
def angular256(ula256):
    return angular_codebook(ula256, F28, 256)


@pytest.fixture(scope="module")
def polar256(ula256):
    # shared between the codebook-quality and estimation-gap criteria; the
    # greedy ring construction dominates their combined setup cost
    return polar_codebook(ula256, F28, 256, mu_target=0.5, r_min=1.0)


def test_criterion_01_panel_rayleigh_distance():
    aperture = math.hypot(2.0, 3.0)  # 2 m x 3 m panel diagonal
    lam = C / 2.4e9
    start = time.perf_counter()
    value = rayleigh_distance(aperture, lam)
    elapsed = time.perf_counter() - start
    assert abs(value - 208.0) < 1.0
    assert abs(value - 200.0) <= 0.1 * 200.0
    assert elapsed < 1e-3


def test_criterion_02_single_array_example():
    value = rayleigh_distance(0.36, LAM28)
    assert abs(value - 24.2) < 0.1
    assert abs(value - 25.0) <= 0.1 * 25.0


def test_criterion_03_two_array_example():
    value = mimo_rayleigh_distance(0.36, 0.36, LAM28)
    assert abs(value - 96.8) < 0.1
    assert abs(value - 100.0) <= 0.1 * 100.0


def test_criterion_04_relay_surface_example():
    d2 = ris_boundary_d2(0.36, LAM28, 50.0)
    assert 40.0 <= d2 <= 50.0


def test_criterion_05_phase_threshold_boundary():
    for n in (64, 256):
        geom = build_ula(n, LAM28 / 2)
        closed = rayleigh_distance(geom.aperture, LAM28)
        start = time.perf_counter()
        numeric = numeric_phase_boundary(geom, F28, 0.0)
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"n={n}"
        assert abs(numeric - closed) <= 0.1 * closed, f"n={n}"
        disc = phase_discrepancy(geom, F28, PolarPoint(0.0, closed))
        assert abs(disc - math.pi / 8) <= 0.05 * math.pi / 8, f"n={n}"


def test_criterion_06_focus_vs_steer_contrast(ula256):
    r_ray = rayleigh_distance(ula256.aperture, LAM28)
    thetas = np.linspace(-math.pi / 3, math.pi / 3, 200)
    rs = np.geomspace(2.0, 2.0 * r_ray, 200)
    focal = PolarPoint(float(thetas[120]), float(rs[60]))

    w = focus_weights(ula256, F28, focal)
    start = time.perf_counter()
    m = gain_map(ula256, F28, w, thetas, rs)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    assert np.unravel_index(int(np.argmax(m)), m.shape) == (120, 60)

    theta_t = float(thetas[130])
    w_steer = steer_weights(ula256, F28, theta_t)
    far_rs = np.geomspace(r_ray, 100.0 * r_ray, 50)
    along = gain_map(ula256, F28, w_steer, [theta_t], far_rs)[0]
    assert np.min(along) >= 0.95
    assert gain(ula256, F28, w_steer, PolarPoint(theta_t, 0.05 * r_ray)) < 0.95


def test_criterion_07_codebook_quality(ula256, polar256, angular256):
    profile = codebook_coherence_profile(polar256)
    assert profile["max_adjacent_ring_coherence"] <= 0.5 + 1e-6

    for rings in polar256.rings_by_angle().values():
        finite = [r for r in rings if math.isfinite(r)]
        gaps = [a - b for a, b in zip(finite, finite[1:])]
        assert all(g > 0 for g in gaps)
        # sampling densifies toward the array: consecutive gaps shrink
        assert all(g2 <= g1 for g1, g2 in zip(gaps, gaps[1:]))

    gram = angular256.codewords.conj().T @ angular256.codewords
    assert np.max(np.abs(gram - np.eye(256))) <= 1e-9


def test_criterion_08_estimation_gap(ula256, polar256, angular256):
    scenario = ScenarioConfig(
        arrays={"bs": ula256}, carrier=CarrierConfig(F28), users=(), paths=(), seed=11
    )
    r_ray = rayleigh_distance(ula256.aperture, LAM28)
    start = time.perf_counter()
    rows = compare_codebooks(
        scenario,
        angular256,
        polar256,
        trials=100,
        distances=[0.1 * r_ray, 100.0 * r_ray],
        snrs_db=[20.0],
        pilot_count=64,
        sparsity=3,
        threads=4,
    )
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0

    by_cell = {(r[0], r[2]): r[3] for r in rows}
    near, far = 0.1 * r_ray, 100.0 * r_ray
    near_gap = by_cell[(near, "angular")] - by_cell[(near, "polar")]
    far_gap = abs(by_cell[(far, "angular")] - by_cell[(far, "polar")])
    assert near_gap >= 5.0  # polar wins by >= 5 dB inside the boundary
    assert far_gap <= 1.0  # no meaningful difference in the far field


def test_criterion_09_wideband_beam_split():
    fc, bw = 100e9, 10e9
    lam = C / fc
    geom = build_ula(256, lam / 2)
    carrier = CarrierConfig(fc, bw, 128)
    target = PolarPoint(math.radians(30.0), 10.0)

    start = time.perf_counter()
    ps_min = min_band_gain(geom, carrier, ps_wideband(geom, carrier, target), target)
    ttd16_min = min_band_gain(geom, carrier, ttd_pdf(geom, carrier, target, 16), target)
    ttd_full_min = min_band_gain(geom, carrier, ttd_pdf(geom, carrier, target, 256), target)
    elapsed = time.perf_counter() - start

    assert elapsed < 30.0
    assert ps_min < 0.8
    assert ttd16_min >= ps_min
    assert ttd_full_min >= 0.999
    assert ttd16_min >= 0.95, (
        "16-subarray delay-phase design reaches min-band gain %.4f; the "
        "residual per-subarray squint at N=256, B/fc=0.1, theta=30 deg caps "
        "the achievable min gain near 0.936 (Dirichlet envelope of a "
        "16-element subarray across a 5%% half-bandwidth), so the 0.95 target "
        "is out of reach for this architecture at L=16" % ttd16_min
    )


def test_criterion_10_dof_vs_distance():
    lam = LAM28
    tx = build_ula(128, 1.5 / 127, name="tx")
    rx = build_ula(128, 1.5 / 127, name="rx")
    mimo_r = mimo_rayleigh_distance(1.5, 1.5, lam)
    fracs = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 1.2, 2.0]
    distances = [f * mimo_r for f in fracs]

    start = time.perf_counter()
    reports = dof_vs_distance(tx, rx, CarrierConfig(F28), distances)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0

    dofs = [rep.effective_dof for rep in reports]
    assert all(a >= b for a, b in zip(dofs, dofs[1:]))  # non-increasing
    for frac, rep in zip(fracs, reports):
        if frac >= 1.0:
            assert rep.effective_dof == 1
        else:
            bound = math.ceil(max(1.0, dof_upper_bound(1.5, 1.5, lam, rep.distance)))
            assert bound / 2 <= rep.effective_dof <= 2 * bound


def test_criterion_11_same_angle_multiplexing(ula256):
    start = time.perf_counter()
    out = sdma_compare(ula256, F28, [PolarPoint(0.0, 10.0), PolarPoint(0.0, 50.0)], 10.0)
    corrs = [
        sdma_compare(ula256, F28, [PolarPoint(0.0, 10.0), PolarPoint(0.0, r2)], 10.0)[
            "channel_correlation"
        ]
        for r2 in (12.0, 20.0, 50.0)
    ]
    elapsed = time.perf_counter() - start

    assert elapsed < 10.0
    assert out["near_field_zf_rate"] > out["far_field_steering_rate"]
    assert out["channel_correlation"] < 1.0
    # |1/r1 - 1/r2| grows along (12, 20, 50); correlation must fall with it
    assert corrs[0] > corrs[1] > corrs[2]


def test_criterion_12_csv_determinism(tmp_path):
    scene = tmp_path / "scene.toml"
    scene.write_text(
        'seed = 7\n\n[carrier]\ncenter_frequency_hz = 28e9\n\n'
        '[arrays.bs]\nkind = "ula"\nn = 16\nspacing_m = 5.353e-3\n'
    )
    jobs = {
        "boundary": ["boundary", "simo", "--aperture", "0.36", "--freq", "28e9"],
        "fieldmap": ["fieldmap", "--elements", "16", "--spacing", "5.353e-3",
                     "--freq", "28e9", "--design", "steer", "--theta-deg", "15",
                     "--theta-count", "41", "--r-count", "31"],
        "codebook": ["codebook", "--elements", "16", "--spacing", "5.353e-3",
                     "--freq", "28e9", "--kind", "polar", "--r-min", "0.1"],
        "estimate": ["estimate", "--config", str(scene), "--distances", "0.3,2.0",
                     "--snrs", "10", "--trials", "3", "--sparsity", "2"],
        "beamsplit": ["beamsplit", "--elements", "32", "--fc", "100e9",
                      "--bandwidth", "10e9", "--subcarriers", "17",
                      "--theta-deg", "30", "--r", "5", "--subarrays", "8"],
        "dof": ["dof", "--tx-elements", "32", "--tx-spacing", "5.353e-3",
                "--rx-elements", "32", "--rx-spacing", "5.353e-3",
                "--freq", "28e9", "--distances", "1,5,30"],
    }
    for name, argv in jobs.items():
        outs = {}
        for run_id, threads in (("a", 1), ("b", 1), ("c", 8)):
            d = tmp_path / name / run_id
            code = dispatch([*argv, "--seed", "3", "--threads", str(threads),
                             "--out-dir", str(d)])
            assert code == 0, f"{name} run {run_id} exited {code}"
            outs[run_id] = {p.name: p.read_bytes() for p in d.glob("*.csv")}
        assert outs["a"], f"{name} produced no CSV output"
        assert outs["a"] == outs["b"], f"{name}: same-seed repeat differs"
        assert outs["a"] == outs["c"], f"{name}: thread count changed bytes"
