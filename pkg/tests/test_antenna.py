import numpy as np
import pytest

from remimo.antenna import (build_psi, coupling_ratio, gain_cost,
                            gain_stationary_points, gain_upper_bound,
                            optimal_config, optimize_gain, paired_gain)
from remimo.errors import InvalidParameterError
from remimo.numerics import RngStream, sample_cgauss

B45 = np.pi / 4


def test_build_psi_identity_and_zero():
    rng = RngStream(10, 0)
    h = sample_cgauss(rng, 1.0, (2, 2))
    np.testing.assert_array_equal(build_psi(h, np.ones((2, 2))), h)
    np.testing.assert_array_equal(build_psi(np.zeros((2, 2)), h), np.zeros((2, 2)))


def test_build_psi_against_entrywise_loop():
    rng = RngStream(11, 0)
    h = sample_cgauss(rng, 1.0, (2, 2))
    g = rng.uniform(0.1, 3.0, (2, 2))
    psi = build_psi(h, g)
    for i in range(2):
        for j in range(2):
            assert psi[i, j] == h[i, j] * g[i, j]


def test_paired_gain_examples():
    g_up = gain_upper_bound(B45)
    assert paired_gain(g_up, B45) == pytest.approx(g_up)
    assert paired_gain(0.0, B45) == pytest.approx(2 * np.pi / B45)
    assert paired_gain(4.0, B45) == pytest.approx((2 * np.pi - np.pi) / B45)
    assert paired_gain(4.0, B45) == pytest.approx(4.0)


def test_paired_gain_is_an_involution():
    rng = RngStream(12, 0)
    for _ in range(100):
        g = float(rng.uniform(0, 8))
        b = float(rng.uniform(0.1, 3.0))
        assert paired_gain(paired_gain(g, b), b) == pytest.approx(g, abs=1e-12)


def test_paired_gain_rejects_bad_beamwidth():
    with pytest.raises(InvalidParameterError):
        paired_gain(1.0, 0.0)


def test_gain_cost_roots():
    # k = 0: the complementary gain vanishes at g = 2*pi/B
    assert gain_cost(2 * np.pi / B45, 0.0, B45) == pytest.approx(0.0, abs=1e-18)
    # k = 1: both terms cancel where g equals its own paired gain
    g_balanced = np.pi / B45
    assert gain_cost(g_balanced, 1.0, B45) == pytest.approx(0.0, abs=1e-18)


def test_gain_cost_against_direct_evaluation():
    k, g = 20.0, 1.0
    paired = (2 * np.pi - g * B45) / B45
    expected = abs(k * g * g - paired * paired) ** 2
    assert gain_cost(g, k, B45) == pytest.approx(expected, rel=1e-15)


def test_stationary_points_reference_values():
    sp = gain_stationary_points(20.0, B45)
    assert sp.s3 == pytest.approx(-8 / 19)
    assert sp.s1 == pytest.approx(8 * (np.sqrt(20) - 1) / 19)
    assert sp.s2 == pytest.approx(-8 * (np.sqrt(20) + 1) / 19)
    assert sp.curvature_signs == (1, 1, -1)


def test_stationary_points_negative_k():
    sp = gain_stationary_points(-15.0, B45)
    assert sp.s1 is None and sp.s2 is None
    assert sp.s3 == pytest.approx(0.5)
    assert sp.curvature_signs == (None, None, 1)


def test_stationary_points_rejects_singular_k():
    with pytest.raises(InvalidParameterError):
        gain_stationary_points(1.0, B45)
    with pytest.raises(InvalidParameterError):
        gain_stationary_points(0.0, B45)


def _finite_diff(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def _second_diff(f, x, h):
    return (f(x + h) - 2 * f(x) + f(x - h)) / h**2


def test_stationary_points_are_flat_with_predicted_curvature():
    rng = RngStream(13, 0)
    for _ in range(100):
        k = float(rng.uniform(1.5, 40.0)) * (1 if rng.uniform() < 0.5 else -1)
        b = float(rng.uniform(np.pi / 16, 0.9 * np.pi))
        sp = gain_stationary_points(k, b)
        f = lambda g: gain_cost(g, k, b)
        pts = [(sp.s1, sp.curvature_signs[0]), (sp.s2, sp.curvature_signs[1]),
               (sp.s3, sp.curvature_signs[2])]
        for x, sign in pts:
            if x is None:
                continue
            h = 1e-7 * (1 + abs(x))
            assert abs(_finite_diff(f, x, h)) < 1e-6 * (1 + abs(f(x)))
            d2 = _second_diff(f, x, 1e-4 * (1 + abs(x)))
            assert np.sign(d2) == sign


@pytest.mark.parametrize("k", [20.0, -15.0])
def test_optimize_gain_matches_grid_search(k):
    g_up = gain_upper_bound(B45)
    grid = np.linspace(g_up * 1e-9, g_up, 100_000)
    vals = np.abs(k * grid**2 - ((2 * np.pi - grid * B45) / B45) ** 2) ** 2
    g_grid = grid[np.argmax(vals)]
    assert optimize_gain(k, B45) == pytest.approx(g_grid, abs=1e-4 * g_up)


def test_optimize_gain_stays_in_domain():
    rng = RngStream(14, 0)
    for _ in range(200):
        k = float(rng.uniform(-30, 30))
        b = float(rng.uniform(np.pi / 16, 0.9 * np.pi))
        g = optimize_gain(k, b)
        assert 0 < g <= gain_upper_bound(b) + 1e-12


def test_optimal_config_symmetries():
    cfg = optimal_config(20.0, B45)
    g = cfg.gains
    assert g[0, 0] == g[1, 1]        # g1(phi1) = g2(phi2)
    assert g[0, 1] == g[1, 0]        # g2(phi1) = g1(phi2)
    assert g[0, 0] + g[0, 1] == pytest.approx(2 * np.pi / B45)


def test_coupling_ratio():
    h = np.array([[2.0, 1.0], [1.0, 3.0]], dtype=complex)
    assert coupling_ratio(h) == pytest.approx(6.0)
    with pytest.raises(InvalidParameterError):
        coupling_ratio(np.array([[1, 0], [1, 1]], dtype=complex))
