"""Codeword construction, matched precoding, and rotation-angle design.

A codeword carries four information symbols over two slots and two transmit
antennas,

    C = sqrt(P) * [[ s1*a1 - conj(s2)*b1,  s3*a2 - conj(s4)*b2 ],
                   [-conj(s3)*a2 + s4*b2,  conj(s1)*a1 - s2*b1 ]],

with a_i = sin(theta_i), b_i = cos(theta_i).  Writing A = s1*a1 - conj(s2)*b1
and B = s3*a2 - conj(s4)*b2 this is an Alamouti array in (A, B), which is
what makes the receive-side pair decoupling exact.

Matched precoding right-multiplies by the Hermitian transpose of the
effective channel.  psi is stored with one row per receive antenna, so in
this orientation the precoder is the entrywise conjugate:

    precoded = C @ conj(psi) / ||psi||_F.

The coding-gain distance between two precoded codewords factors into a
symbol-difference part (|D|^2 + |D'|^2)^2 and a channel part
|det(psi)|^2 * P^2 / ||psi||_F^4, with D = d1*a1 - conj(d2)*b1 and
D' = d3*a2 - conj(d4)*b2 built from the symbol differences d_i.  The design
problem maximizes the worst-case symbol-difference part over the rotation
theta_1 (theta_2 = pi/2 - theta_1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellation import Constellation
from .errors import CapacityError, InvalidParameterError, SingularChannelError
from .numerics import frobenius_norm, herm

_DESIGN_M_CAP = 16


@dataclass(frozen=True)
class RotationAngles:
    theta1: float
    theta2: float
    alpha1: float
    beta1: float
    alpha2: float
    beta2: float

    def __post_init__(self):
        for a, b in ((self.alpha1, self.beta1), (self.alpha2, self.beta2)):
            if abs(a * a + b * b - 1.0) > 1e-12:
                raise InvalidParameterError("alpha^2 + beta^2 must equal 1")

    @classmethod
    def from_thetas(cls, theta1: float, theta2: float) -> "RotationAngles":
        return cls(theta1, theta2,
                   np.sin(theta1), np.cos(theta1),
                   np.sin(theta2), np.cos(theta2))

    @classmethod
    def from_theta1(cls, theta1: float) -> "RotationAngles":
        """Complementary rotation pair theta1 + theta2 = pi/2."""
        return cls.from_thetas(theta1, np.pi / 2 - theta1)


@dataclass(frozen=True)
class Codeword:
    """2x2 transmit block; rows are time slots, columns transmit antennas."""

    samples: np.ndarray
    power: float


@dataclass(frozen=True)
class DifferenceSet:
    d1: complex
    d2: complex
    d3: complex
    d4: complex


def encode_raw(symbols, rot: RotationAngles, power: float) -> Codeword:
    """Rotation-mixed Alamouti-structured block from four symbols."""
    if power <= 0:
        raise InvalidParameterError(f"power must be > 0, got {power}")
    s1, s2, s3, s4 = (complex(s) for s in symbols)
    a = s1 * rot.alpha1 - np.conj(s2) * rot.beta1
    b = s3 * rot.alpha2 - np.conj(s4) * rot.beta2
    samples = np.sqrt(power) * np.array([[a, b],
                                         [-np.conj(b), np.conj(a)]])
    return Codeword(samples=samples, power=power)


def encode_alamouti(symbols, power: float) -> Codeword:
    """Classical rate-1 orthogonal block from two symbols (baseline)."""
    if power <= 0:
        raise InvalidParameterError(f"power must be > 0, got {power}")
    s1, s2 = (complex(s) for s in symbols)
    samples = np.sqrt(power) * np.array([[s1, s2],
                                         [-np.conj(s2), np.conj(s1)]])
    return Codeword(samples=samples, power=power)


def precode(cw: Codeword, psi: np.ndarray) -> Codeword:
    """Matched precoding by the effective channel, normalized to its norm.

    With psi rows indexing receive antennas, the Hermitian transpose of the
    column-per-receive-antenna channel is the entrywise conjugate of psi.
    """
    psi = np.asarray(psi)
    norm = frobenius_norm(psi)
    if norm == 0:
        raise SingularChannelError("effective channel has zero norm")
    return Codeword(samples=cw.samples @ np.conj(psi) / norm, power=cw.power)


def diff_metrics(d: DifferenceSet, rot: RotationAngles) -> tuple[complex, complex]:
    """Rotated pair differences (D, D') of a symbol-difference set."""
    dd = d.d1 * rot.alpha1 - np.conj(d.d2) * rot.beta1
    dp = d.d3 * rot.alpha2 - np.conj(d.d4) * rot.beta2
    return complex(dd), complex(dp)


def det_difference(cw_c: Codeword, cw_u: Codeword) -> float:
    """det[(C - U)^H (C - U)] for two codewords precoded with the same psi."""
    m = cw_c.samples - cw_u.samples
    return float(np.linalg.det(herm(m) @ m).real)


def det_difference_factored(d: DifferenceSet, rot: RotationAngles,
                            psi: np.ndarray, power: float) -> float:
    """Factored coding-gain distance: symbol part times channel part.

    Equals :func:`det_difference` of the corresponding precoded codewords:
    (P * (|D|^2 + |D'|^2))^2 * |det(psi)|^2 / ||psi||_F^4.
    """
    psi = np.asarray(psi)
    dd, dp = diff_metrics(d, rot)
    sym = (power * (abs(dd) ** 2 + abs(dp) ** 2)) ** 2
    det_psi = psi[0, 0] * psi[1, 1] - psi[0, 1] * psi[1, 0]
    norm = frobenius_norm(psi)
    if norm == 0:
        raise SingularChannelError("effective channel has zero norm")
    return float(sym * abs(det_psi) ** 2 / norm ** 4)


def _differences(c: Constellation) -> np.ndarray:
    """Distinct pairwise symbol differences, zero included."""
    d = (c.points[:, None] - c.points[None, :]).ravel()
    return np.unique(d)


def _pair_min(u: np.ndarray, v: np.ndarray, alpha, beta):
    """min over difference pairs of |u*alpha - conj(v)*beta|^2.

    (u, v) enumerate all pairs with at least one nonzero entry; alpha/beta
    may be grids (vectorized over the last axis, evaluated in blocks to
    bound memory for dense grids).
    """
    alpha = np.atleast_1d(alpha)
    beta = np.atleast_1d(beta)
    vc = np.conj(v)
    out = np.empty(len(alpha))
    block = max(1, 2_000_000 // max(len(u), 1))
    for s in range(0, len(alpha), block):
        e = s + block
        vals = np.abs(u[:, None] * alpha[None, s:e]
                      - vc[:, None] * beta[None, s:e]) ** 2
        out[s:e] = vals.min(axis=0)
    return out


def _nonzero_pairs(c: Constellation) -> tuple[np.ndarray, np.ndarray]:
    d = _differences(c)
    u = np.repeat(d, len(d))
    v = np.tile(d, len(d))
    keep = (u != 0) | (v != 0)
    return u[keep], v[keep]


def min_cgd(c: Constellation, rot: RotationAngles) -> float:
    """Worst-case symbol-difference coding gain, (min |D|^2 + |D'|^2)^2.

    Because |D|^2 and |D'|^2 are non-negative and driven by independent
    difference pairs, the minimum over all nonzero four-symbol difference
    sets is attained with one pair zeroed; it suffices to minimize each
    rotated pair map over the M^2 difference pairs and take the smaller.
    """
    if c.m > _DESIGN_M_CAP:
        raise CapacityError(f"design search capped at M <= {_DESIGN_M_CAP}")
    u, v = _nonzero_pairs(c)
    m1 = float(_pair_min(u, v, rot.alpha1, rot.beta1)[0])
    m2 = float(_pair_min(u, v, rot.alpha2, rot.beta2)[0])
    return min(m1, m2) ** 2


def validate_injectivity(c: Constellation, rot: RotationAngles) -> float:
    """Worst-case |D| of the single-pair maps; zero means undecodable.

    A positive margin guarantees distinct symbol pairs produce distinct
    pair observables for both rotations, i.e. the decoupled detector has a
    unique answer on noiseless data.
    """
    if c.m > _DESIGN_M_CAP:
        raise CapacityError(f"design search capped at M <= {_DESIGN_M_CAP}")
    u, v = _nonzero_pairs(c)
    m1 = float(_pair_min(u, v, rot.alpha1, rot.beta1)[0])
    m2 = float(_pair_min(u, v, rot.alpha2, rot.beta2)[0])
    return float(np.sqrt(min(m1, m2)))


def closed_form_theta1(d: DifferenceSet) -> float | None:
    """Published closed-form rotation candidate for one difference set.

    arctan of sqrt[(b^2 - 2(c^2 - a*b/2)) / (a^2 - 2(c^2 - a*b/2))] with
    a = |d1|^2 + |d4|^2, b = |d2|^2 + |d3|^2, c = Re(d1*d2) + Re(d3*d4).
    Returns None where the radicand is undefined (non-positive denominator
    or negative numerator).
    """
    a = abs(d.d1) ** 2 + abs(d.d4) ** 2
    b = abs(d.d2) ** 2 + abs(d.d3) ** 2
    cc = (d.d1 * d.d2).real + (d.d3 * d.d4).real
    shared = 2.0 * (cc ** 2 - 0.5 * a * b)
    num = b ** 2 - shared
    den = a ** 2 - shared
    if den <= 0 or num < 0:
        return None
    return float(np.arctan(np.sqrt(num / den)))


def pairwise_objective(c: Constellation):
    """Callable theta -> worst-case |D|^2 over both rotated pair maps."""
    u, v = _nonzero_pairs(c)

    def objective(theta):
        theta = np.atleast_1d(theta)
        m1 = _pair_min(u, v, np.sin(theta), np.cos(theta))
        m2 = _pair_min(u, v, np.cos(theta), np.sin(theta))
        out = np.minimum(m1, m2)
        return out if out.size > 1 else float(out[0])

    return objective


def optimal_theta1(c: Constellation, grid_points: int = 4001) -> float:
    """Rotation maximizing the worst-case coding gain on [0, pi/2].

    Strategy: coarse grid scan of the exact max-min objective, closed-form
    candidates evaluated on the difference sets active at the grid optimum,
    then a golden-section refinement around the best bracket.  The best
    evaluated point is returned, so the result never falls below the grid
    certificate.  Ties (the objective is symmetric about pi/4) resolve to
    the smaller angle.
    """
    if c.m > _DESIGN_M_CAP:
        raise CapacityError(f"design search capped at M <= {_DESIGN_M_CAP}")
    objective = pairwise_objective(c)
    grid = np.linspace(0.0, np.pi / 2, grid_points)
    vals = objective(grid)
    i_best = int(np.argmax(vals))
    candidates = {float(grid[i_best]): float(vals[i_best])}

    u, v = _nonzero_pairs(c)
    theta_g = grid[i_best]
    pair_vals = np.abs(u * np.sin(theta_g) - np.conj(v) * np.cos(theta_g)) ** 2
    active = pair_vals <= pair_vals.min() * (1 + 1e-9)
    for uu, vv in zip(u[active], v[active]):
        for ds in (DifferenceSet(uu, vv, 0, 0), DifferenceSet(0, 0, uu, vv)):
            t = closed_form_theta1(ds)
            if t is not None and 0 <= t <= np.pi / 2:
                candidates[t] = float(objective(t))

    lo = grid[max(i_best - 1, 0)]
    hi = grid[min(i_best + 1, grid_points - 1)]
    t_golden = _golden_max(objective, lo, hi)
    candidates[t_golden] = float(objective(t_golden))
    # the objective is symmetric about pi/4; offer the mirrored twin so exact
    # ties resolve to the smaller angle
    t_mirror = float(np.pi / 2 - t_golden)
    candidates[t_mirror] = float(objective(t_mirror))

    best = max(candidates.items(), key=lambda kv: (kv[1], -kv[0]))
    return float(best[0])


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Golden-section maximization on [lo, hi]."""
    inv_phi = (np.sqrt(5.0) - 1) / 2
    a, b = lo, hi
    c1 = b - inv_phi * (b - a)
    c2 = a + inv_phi * (b - a)
    f1, f2 = f(c1), f(c2)
    while b - a > tol:
        if f1 >= f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - inv_phi * (b - a)
            f1 = f(c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + inv_phi * (b - a)
            f2 = f(c2)
    return float((a + b) / 2)
