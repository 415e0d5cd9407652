"""Reconfigurable directive antenna gains and their optimization.

The effective channel is the entrywise (Hadamard) product of the fading
matrix H and a gain matrix G whose entry (i, j) is the gain g_j(phi_i) of
transmit antenna j toward receive antenna i.  Under a rectangular pattern
abstraction the two steerable lobes of one antenna share a fixed power
budget,

    g(phi_1) * B + g(phi_2) * B = 2*pi,

with B the 3-dB beamwidth, which caps the optimization variable g(phi_1) at
g_up = pi / B.  With the cross-wired symmetry g1(phi_1) = g2(phi_2) and
g1(phi_2) = g2(phi_1), the channel-dependent part of the coding gain reduces
to a scalar cost in g = g1(phi_1),

    F(g) = | k * g^2 - ((2*pi - g*B) / B)^2 |^2,

where k is the real coupling ratio of the fading matrix.  F has at most
three real stationary points with closed forms; the optimizer evaluates
those plus the domain edges.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

log = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class AntennaConfig:
    """Gain matrix for one channel use; gains[i, j] = g_j(phi_i)."""

    b3db: float
    gains: np.ndarray

    def __post_init__(self):
        if not 0 < self.b3db < TWO_PI:
            raise InvalidParameterError(f"b3db must be in (0, 2*pi), got {self.b3db}")
        if np.any(np.asarray(self.gains) < 0):
            raise InvalidParameterError("gains must be non-negative")


@dataclass(frozen=True)
class GainStationaryPoints:
    """Real stationary points of the gain cost; s1/s2 are None for k < 0.

    curvature_signs holds the sign of the second derivative at each point
    (+1 minimum, -1 maximum), None where the point itself is absent.
    """

    s1: float | None
    s2: float | None
    s3: float
    curvature_signs: tuple[int | None, int | None, int]


def build_psi(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Effective channel: entrywise product of fading and gain matrices."""
    return np.asarray(h) * np.asarray(g)


def coupling_ratio(h: np.ndarray) -> complex:
    """Diagonal-to-off-diagonal product ratio of a 2x2 fading matrix.

    The gain optimizer consumes the real part; a significant imaginary
    remainder is logged because the closed-form analysis only covers real k.
    """
    h = np.asarray(h)
    denom = h[0, 1] * h[1, 0]
    if denom == 0:
        raise InvalidParameterError("off-diagonal fading product is zero")
    k = complex(h[0, 0] * h[1, 1] / denom)
    if abs(k) > 0 and abs(k.imag) / abs(k) > 0.01:
        log.debug("coupling ratio has |Im/abs| = %.3f, optimizing over Re only",
                  abs(k.imag) / abs(k))
    return k


def gain_upper_bound(b3db: float) -> float:
    if b3db <= 0:
        raise InvalidParameterError(f"b3db must be > 0, got {b3db}")
    return np.pi / b3db


def paired_gain(g1_phi1: float, b3db: float) -> float:
    """Complementary lobe gain under the rectangular-pattern power budget."""
    if b3db <= 0:
        raise InvalidParameterError(f"b3db must be > 0, got {b3db}")
    return (TWO_PI - g1_phi1 * b3db) / b3db


def gain_cost(g1_phi1: float, k: float, b3db: float) -> float:
    """Coding-gain cost F(g) = |k*g^2 - paired_gain(g)^2|^2."""
    p = paired_gain(g1_phi1, b3db)
    return float(abs(k * g1_phi1 ** 2 - p ** 2) ** 2)


def gain_stationary_points(k: float, b3db: float) -> GainStationaryPoints:
    """Closed-form stationary points of the gain cost and their curvatures.

    For k > 0 all three are real: s1 and s2 are minima (roots of the inner
    expression) and s3 is the local maximum between them.  For k < 0 only s3
    is real and it is the global minimum.  k = 1 makes the s1/s2 denominator
    singular and k = 0 leaves the curvature test degenerate; both are
    rejected.
    """
    if b3db <= 0:
        raise InvalidParameterError(f"b3db must be > 0, got {b3db}")
    if k == 1:
        raise InvalidParameterError("k = 1 is singular (zero denominator)")
    if k == 0:
        raise InvalidParameterError("k = 0 has degenerate curvature")
    s3 = -TWO_PI / (b3db * (k - 1))
    if k > 0:
        rk = np.sqrt(k)
        s1 = -TWO_PI * (1 - rk) / (b3db * (k - 1))
        s2 = -TWO_PI * (1 + rk) / (b3db * (k - 1))
        return GainStationaryPoints(s1, s2, s3, (1, 1, -1))
    return GainStationaryPoints(None, None, s3, (None, None, 1))


def optimize_gain(k: float, b3db: float) -> float:
    """argmax of the gain cost over the feasible lobe gains (0, g_up].

    Candidates: real stationary points inside the domain, the upper bound
    g_up, and a near-zero probe at 1e-6 * g_up.  Ties break toward the
    smaller gain.
    """
    g_up = gain_upper_bound(b3db)
    candidates = [1e-6 * g_up, g_up]
    if k not in (0, 1):
        sp = gain_stationary_points(k, b3db)
        for s in (sp.s1, sp.s2, sp.s3):
            if s is not None and 0 < s <= g_up:
                candidates.append(s)
    best_g = None
    best_f = -np.inf
    for g in sorted(candidates):
        f = gain_cost(g, k, b3db)
        if f > best_f:
            best_g, best_f = g, f
    return float(best_g)


def optimal_config(k: float, b3db: float) -> AntennaConfig:
    """Cross-wired gain matrix built from the optimized lobe gain.

    The paired lobe is budget-determined and may exceed g_up; the bound
    applies to the optimization variable only.
    """
    g_main = optimize_gain(k, b3db)
    g_pair = paired_gain(g_main, b3db)
    gains = np.array([[g_main, g_pair], [g_pair, g_main]], dtype=float)
    return AntennaConfig(b3db=b3db, gains=gains)
