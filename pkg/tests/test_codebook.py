import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nearfield import (
    FAR_FIELD,
    Codebook,
    CodebookKind,
    DomainError,
    InvalidArgumentError,
    PolarPoint,
    UnsupportedModelError,
    angular_codebook,
    build_ula,
    codebook_coherence_profile,
    coherence,
    load_codebook,
    planar_steering,
    polar_codebook,
    save_codebook,
    spherical_steering,
)

C = 299792458.0
F = 28e9
LAM = C / F


@pytest.fixture(scope="module")
def polar64():
    g = build_ula(64, LAM / 2)
    return g, polar_codebook(g, F, 64, mu_target=0.5, r_min=1.0)


def test_angular_codebook_is_orthonormal_dft(ula64):
    cb = angular_codebook(ula64, F, 64)
    gram = cb.codewords.conj().T @ cb.codewords
    assert np.max(np.abs(gram - np.eye(64))) < 1e-9
    assert cb.kind is CodebookKind.ANGULAR


def test_angular_grid_uniform_in_sin_theta(ula64):
    cb = angular_codebook(ula64, F, 16)
    sines = np.sort([math.sin(p.theta) for p in cb.labels])
    expected = (2 * np.arange(16) - 15) / 16.0
    assert np.allclose(sines, expected, atol=1e-12)
    assert all(p.is_far_field for p in cb.labels)


def test_angular_codewords_match_planar_steering(ula64):
    cb = angular_codebook(ula64, F, 32)
    for q in range(0, 32, 7):
        a = planar_steering(ula64, F, cb.labels[q].theta)
        assert np.allclose(cb.codewords[:, q], a.entries / math.sqrt(64), atol=1e-12)


def test_coherence_oracle_and_range(ula64):
    a = planar_steering(ula64, F, 0.1).entries / 8.0
    b = planar_steering(ula64, F, 0.17).entries / 8.0
    mu = coherence(a, b)
    assert mu == pytest.approx(abs(np.vdot(a, b)), rel=1e-12)
    assert 0.0 <= mu <= 1.0
    assert coherence(a, a) == pytest.approx(1.0, abs=1e-12)


def test_coherence_rejects_non_unit_or_mismatched(ula64):
    a = planar_steering(ula64, F, 0.1).entries  # norm sqrt(N), not 1
    with pytest.raises(InvalidArgumentError):
        coherence(a, a)
    with pytest.raises(InvalidArgumentError):
        coherence(a[:32] / math.sqrt(32), a / 8.0)


def test_polar_rings_outermost_far_field(polar64):
    _, cb = polar64
    for theta, rings in cb.rings_by_angle().items():
        assert math.isinf(rings[0])
        finite = rings[1:]
        assert all(math.isfinite(r) for r in finite)
        # strictly decreasing toward the array
        assert all(a > b for a, b in zip(finite, finite[1:]))
        assert all(r >= 1.0 - 1e-9 for r in finite)


def test_polar_adjacent_ring_coherence_at_target(polar64):
    g, cb = polar64
    rings = cb.rings_by_angle()
    for theta in list(rings)[::9]:
        rs = rings[theta]
        for r_out, r_in in zip(rs, rs[1:]):
            if math.isinf(r_out):
                u = planar_steering(g, F, theta).entries / 8.0
            else:
                u = spherical_steering(g, F, PolarPoint(theta, r_out)).entries / 8.0
            v = spherical_steering(g, F, PolarPoint(theta, r_in)).entries / 8.0
            assert coherence(u, v) <= 0.5 + 1e-6


def test_polar_ring_gaps_shrink_toward_array(polar64):
    _, cb = polar64
    for rings in cb.rings_by_angle().values():
        finite = [r for r in rings if math.isfinite(r)]
        gaps = [a - b for a, b in zip(finite, finite[1:])]
        # sampling gets denser as r decreases
        assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))


def test_polar_includes_angular_grid(polar64):
    g, cb = polar64
    far = [p for p in cb.labels if p.is_far_field]
    assert len(far) == 64
    cb_a = angular_codebook(g, F, 64)
    sines_polar = np.sort([math.sin(p.theta) for p in far])
    sines_ang = np.sort([math.sin(p.theta) for p in cb_a.labels])
    assert np.allclose(sines_polar, sines_ang, atol=1e-12)


def test_polar_size_regression(polar64):
    # pinned output of the greedy search for this exact configuration;
    # guards against silent changes to the ring-placement rule
    _, cb = polar64
    assert cb.size == 134


def test_polar_r_min_validation(ula64):
    with pytest.raises(DomainError):
        polar_codebook(ula64, F, 64, r_min=0.0)
    with pytest.raises(DomainError):
        polar_codebook(ula64, F, 64, r_min=ula64.aperture / 4)  # inside hull


def test_polar_mu_validation(ula64):
    for bad in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(InvalidArgumentError):
            polar_codebook(ula64, F, 8, mu_target=bad)


def test_coherence_profile_fields(polar64):
    _, cb = polar64
    prof = codebook_coherence_profile(cb)
    assert prof["num_codewords"] == cb.size
    assert prof["num_angles"] == 64
    assert prof["max_adjacent_ring_coherence"] <= 0.5 + 1e-6
    counts, edges = prof["histogram"]
    assert len(counts) == 10 and len(edges) == 11
    assert sum(counts) == cb.size - 64  # one adjacent pair per non-far ring
    # cross-angle coherence is small for a half-wavelength grid
    assert prof["max_cross_angle_coherence"] < 0.5


def test_coherence_profile_rejects_angular(ula64):
    cb = angular_codebook(ula64, F, 16)
    with pytest.raises(UnsupportedModelError):
        codebook_coherence_profile(cb)


def test_save_load_round_trip(tmp_path, polar64):
    _, cb = polar64
    lp, ep = tmp_path / "labels.csv", tmp_path / "entries.csv"
    save_codebook(cb, lp, ep)
    back = load_codebook(lp, ep)
    assert back.kind is cb.kind
    assert back.size == cb.size
    assert back.mu_target == cb.mu_target
    assert back.frequency == cb.frequency
    assert np.allclose(back.codewords, cb.codewords, atol=1e-12)
    for p1, p2 in zip(back.labels, cb.labels):
        assert p1.theta == pytest.approx(p2.theta, abs=1e-12)
        assert (p1.is_far_field and p2.is_far_field) or p1.r == pytest.approx(p2.r, rel=1e-12)


def test_codebook_rejects_duplicate_labels(ula64):
    a = planar_steering(ula64, F, 0.1).entries / 8.0
    b = planar_steering(ula64, F, 0.2).entries / 8.0
    with pytest.raises(InvalidArgumentError):
        Codebook(
            codewords=np.column_stack([a, b]),
            labels=(PolarPoint(0.1, FAR_FIELD), PolarPoint(0.1, FAR_FIELD)),
            kind=CodebookKind.ANGULAR,
            frequency=F,
        )


@given(st.integers(min_value=2, max_value=48))
@settings(max_examples=12)
def test_angular_any_size_unit_norm_columns(k):
    g = build_ula(24, LAM / 2)
    cb = angular_codebook(g, F, k)
    assert cb.codewords.shape == (24, k)
    assert np.allclose(np.linalg.norm(cb.codewords, axis=0), 1.0, atol=1e-9)
