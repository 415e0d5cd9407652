"""Detectors: exhaustive joint search, decoupled pair search, and the
conditional linear-complexity search.

The receive side forms two combined observables from the four received
samples,

    r1 = (y1(1) + conj(y2(2))) / sqrt(2)
    r2 = (y2(1) - conj(y1(2))) / sqrt(2),

which on a matched-precoded noiseless block collapse to
r1 = sqrt(P/2) * ||psi||_F * (s1*a1 - conj(s2)*b1) and the mirrored
expression for r2, while iid noise stays iid with unchanged variance.  All
three detectors minimize the same residual of this combined model and
therefore return identical decisions trial by trial; they differ only in
enumeration strategy and hence cost:

* exhaustive: all M^4 quadruplets of the joint metric;
* pair: the metric separates, so each pair is searched over M^2 hypotheses;
* conditional: for each hypothesis of the second symbol, the first symbol's
  conditionally-optimal value is a single slicer call, leaving M cost
  evaluations per pair.

Tie-breaking is lexicographic over symbol indices everywhere, which the
conditional search reproduces exactly by comparing (cost, idx_a, idx_b)
tuples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .constellation import Constellation, slice_many, slice_symbol
from .encoder import RotationAngles
from .errors import (CapacityError, DegenerateRotationError,
                     SingularChannelError)

_EXHAUSTIVE_CAP = 1_000_000


@dataclass(frozen=True)
class ReceivedBlock:
    """y[n, i]: sample of receive antenna i in time slot n."""

    y: np.ndarray


@dataclass(frozen=True)
class PairDecision:
    idx_a: int
    idx_b: int
    metric: float
    cost_evaluations: int


@dataclass(frozen=True)
class DetectionResult:
    indices: tuple[int, int, int, int]
    metric: float
    cost_evaluations: int


def combine(rb: ReceivedBlock) -> tuple[complex, complex]:
    """Pair-decoupling combination of the four received samples."""
    y = rb.y
    r1 = (y[0, 0] + np.conj(y[1, 1])) / np.sqrt(2.0)
    r2 = (y[0, 1] - np.conj(y[1, 0])) / np.sqrt(2.0)
    return complex(r1), complex(r2)


def pair_gain(psi_norm: float, power: float) -> float:
    """Scalar gain of the combined observable, sqrt(P/2) * ||psi||_F."""
    return float(np.sqrt(power / 2.0) * psi_norm)


def hypothesis_table(c: Constellation, alpha: float, beta: float) -> np.ndarray:
    """h[a, b] = x_a * alpha - conj(x_b) * beta over the constellation."""
    return c.points[:, None] * alpha - np.conj(c.points)[None, :] * beta


def pair_ml(r: complex, psi_norm: float, power: float, alpha: float,
            beta: float, c: Constellation) -> PairDecision:
    """Joint search of one symbol pair over all M^2 hypotheses.

    Ties break lexicographically on (idx_a, idx_b).
    """
    if psi_norm <= 0:
        raise SingularChannelError("psi_norm must be positive")
    gamma = pair_gain(psi_norm, power)
    metrics = np.abs(r - gamma * hypothesis_table(c, alpha, beta)) ** 2
    flat = int(np.argmin(metrics))
    idx_a, idx_b = divmod(flat, c.m)
    return PairDecision(idx_a, idx_b, float(metrics.flat[flat]), c.m * c.m)


def conditional_ml(r: complex, psi_norm: float, power: float, alpha: float,
                   beta: float, c: Constellation) -> PairDecision:
    """Linear-complexity pair search, exactly equivalent to :func:`pair_ml`.

    For each second-symbol hypothesis the first symbol is recovered by
    cancelling the hypothesis from r and slicing; only the M resulting
    pair costs are compared.  The (cost, idx_a, idx_b) comparison makes the
    tie-break identical to the joint search.
    """
    if psi_norm <= 0:
        raise SingularChannelError("psi_norm must be positive")
    if alpha == 0:
        raise DegenerateRotationError("alpha = 0 leaves the sliced symbol undefined")
    gamma = pair_gain(psi_norm, power)
    best: tuple[float, int, int] | None = None
    evals = 0
    for m in range(c.m):
        r_tilde = r + gamma * np.conj(c.points[m]) * beta
        idx_a = slice_symbol(c, r_tilde / (gamma * alpha))
        cost = float(np.abs(r - gamma * (c.points[idx_a] * alpha
                                         - np.conj(c.points[m]) * beta)) ** 2)
        evals += 1
        cand = (cost, idx_a, m)
        if best is None or cand < best:
            best = cand
    return PairDecision(best[1], best[2], best[0], evals)


def _pair_rotations(rot: RotationAngles):
    return ((rot.alpha1, rot.beta1), (rot.alpha2, rot.beta2))


def decode_pair_ml(rb: ReceivedBlock, psi_norm: float, power: float,
                   rot: RotationAngles, c: Constellation) -> DetectionResult:
    """Combine, then run the M^2 pair search on each observable (2M^2 total)."""
    r1, r2 = combine(rb)
    d1 = pair_ml(r1, psi_norm, power, rot.alpha1, rot.beta1, c)
    d2 = pair_ml(r2, psi_norm, power, rot.alpha2, rot.beta2, c)
    return DetectionResult((d1.idx_a, d1.idx_b, d2.idx_a, d2.idx_b),
                           d1.metric + d2.metric,
                           d1.cost_evaluations + d2.cost_evaluations)


def decode_conditional_ml(rb: ReceivedBlock, psi_norm: float, power: float,
                          rot: RotationAngles, c: Constellation) -> DetectionResult:
    """Combine, then run the conditional search on each observable (2M total)."""
    r1, r2 = combine(rb)
    d1 = conditional_ml(r1, psi_norm, power, rot.alpha1, rot.beta1, c)
    d2 = conditional_ml(r2, psi_norm, power, rot.alpha2, rot.beta2, c)
    return DetectionResult((d1.idx_a, d1.idx_b, d2.idx_a, d2.idx_b),
                           d1.metric + d2.metric,
                           d1.cost_evaluations + d2.cost_evaluations)


def exhaustive_ml(rb: ReceivedBlock, chan: ChannelRealization,
                  rot: RotationAngles, power: float,
                  c: Constellation) -> DetectionResult:
    """Brute-force search of the joint metric over all M^4 quadruplets.

    Evaluates |r1 - gamma*h1(s1, s2)|^2 + |r2 - gamma*h2(s3, s4)|^2 for
    every quadruplet; ties break lexicographically on (s1, s2, s3, s4).
    """
    m4 = c.m ** 4
    if m4 > _EXHAUSTIVE_CAP:
        raise CapacityError(f"M^4 = {m4} exceeds the cap {_EXHAUSTIVE_CAP}")
    if chan.psi_norm <= 0:
        raise SingularChannelError("psi_norm must be positive")
    gamma = pair_gain(chan.psi_norm, power)
    r1, r2 = combine(rb)
    met1 = np.abs(r1 - gamma * hypothesis_table(c, rot.alpha1, rot.beta1)) ** 2
    met2 = np.abs(r2 - gamma * hypothesis_table(c, rot.alpha2, rot.beta2)) ** 2
    joint = met1.reshape(-1, 1) + met2.reshape(1, -1)
    flat = int(np.argmin(joint))
    i12, i34 = divmod(flat, c.m * c.m)
    i1, i2 = divmod(i12, c.m)
    i3, i4 = divmod(i34, c.m)
    return DetectionResult((i1, i2, i3, i4), float(joint.flat[flat]), m4)


# ---------------------------------------------------------------------------
# Vectorized batch decoding for the Monte-Carlo engine.  Decisions (including
# tie-breaks) match the scalar reference detectors above; instrumented cost
# counters come from the reference implementations.
# ---------------------------------------------------------------------------

def _pair_batch_full(r: np.ndarray, gamma: np.ndarray, alpha: float,
                     beta: float, c: Constellation):
    """Vectorized pair_ml over a batch; returns (idx_a, idx_b) arrays."""
    h = hypothesis_table(c, alpha, beta).ravel()
    metrics = np.abs(r[:, None] - gamma[:, None] * h[None, :]) ** 2
    flat = np.argmin(metrics, axis=1)
    return flat // c.m, flat % c.m


def _pair_batch_conditional(r: np.ndarray, gamma: np.ndarray, alpha: float,
                            beta: float, c: Constellation):
    """Vectorized conditional_ml over a batch, same tie-break as scalar."""
    if alpha == 0:
        raise DegenerateRotationError("alpha = 0 leaves the sliced symbol undefined")
    m = c.m
    n = len(r)
    costs = np.empty((m, n))
    a_idx = np.empty((m, n), dtype=np.int64)
    for b in range(m):
        r_tilde = r + gamma * np.conj(c.points[b]) * beta
        a_b = slice_many(c, r_tilde / (gamma * alpha))
        costs[b] = np.abs(r - gamma * (c.points[a_b] * alpha
                                       - np.conj(c.points[b]) * beta)) ** 2
        a_idx[b] = a_b
    min_cost = costs.min(axis=0)
    tied = costs == min_cost
    a_best = np.where(tied, a_idx, m).min(axis=0)
    b_grid = np.arange(m)[:, None]
    b_best = np.where(tied & (a_idx == a_best), b_grid, m).min(axis=0)
    return a_best, b_best


def decode_batch(r1: np.ndarray, r2: np.ndarray, gamma: np.ndarray,
                 rot: RotationAngles, c: Constellation,
                 method: str = "cond") -> np.ndarray:
    """Decode a batch of combined observables; returns indices (n, 4).

    method 'exhaustive' shares the 'pair' implementation: the joint metric
    is separable, so the per-pair argmins (with matching lexicographic
    tie-breaks) reproduce the full enumeration's decisions exactly.
    """
    if method == "cond":
        pair = _pair_batch_conditional
    elif method in ("pair", "exhaustive"):
        pair = _pair_batch_full
    else:
        raise ValueError(f"unknown decoder {method!r}")
    a1, b1 = pair(r1, gamma, rot.alpha1, rot.beta1, c)
    a2, b2 = pair(r2, gamma, rot.alpha2, rot.beta2, c)
    return np.stack([a1, b1, a2, b2], axis=1)


def combine_batch(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batch version of :func:`combine`; y has shape (n, 2, 2)."""
    r1 = (y[:, 0, 0] + np.conj(y[:, 1, 1])) / np.sqrt(2.0)
    r2 = (y[:, 0, 1] - np.conj(y[:, 1, 0])) / np.sqrt(2.0)
    return r1, r2
