"""Fixed-size complex matrix helpers and keyed random streams.

Everything in this package lives in 2x2: a matrix is a plain numpy array of
shape (2, 2) and dtype complex128, rows indexing time slots or receive
antennas depending on context.  Randomness comes from :class:`RngStream`, a
counter-based (Philox) stream keyed by ``(seed, stream_id)`` so that any unit
of work can derive its own stream independent of execution order.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError

_MASK64 = (1 << 64) - 1


class RngStream:
    """Deterministic random stream keyed by ``(seed, stream_id)``.

    Two streams with the same key produce identical sample sequences on any
    platform and under any thread count; streams with different keys are
    statistically independent.  A stream is owned by exactly one consumer at
    a time (sampling advances internal state).
    """

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = seed & _MASK64
        self.stream_id = stream_id & _MASK64
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def standard_normal(self, size=None):
        return self._gen.standard_normal(size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)

    def integers(self, low, high, size=None):
        return self._gen.integers(low, high, size)


def compose_stream_id(major: int, minor: int) -> int:
    """Pack two small indices into one 64-bit stream id (major:32 | minor:32)."""
    if not (0 <= major < 1 << 32 and 0 <= minor < 1 << 32):
        raise InvalidParameterError("stream indices must fit in 32 bits")
    return (major << 32) | minor


def sample_cgauss(rng: RngStream, variance: float, size=None):
    """Circularly-symmetric complex Gaussian with total variance ``variance``.

    Real and imaginary parts are independent N(0, variance/2).
    """
    if variance < 0:
        raise InvalidParameterError(f"variance must be >= 0, got {variance}")
    if variance == 0:
        return 0j if size is None else np.zeros(size, dtype=complex)
    scale = np.sqrt(variance / 2.0)
    if size is None:
        re, im = rng.standard_normal(2)
        return scale * complex(re, im)
    out = rng.standard_normal((2,) + tuple(np.atleast_1d(size)))
    return scale * (out[0] + 1j * out[1])


def sample_lognormal(rng: RngStream, mu: float, sigma: float, size=None):
    """exp(X) with X ~ Normal(mu, sigma^2); strictly positive."""
    if sigma < 0:
        raise InvalidParameterError(f"sigma must be >= 0, got {sigma}")
    return np.exp(mu + sigma * rng.standard_normal(size))


def frobenius_norm(m: np.ndarray) -> float:
    """sqrt of the sum of squared entry magnitudes."""
    m = np.asarray(m)
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def hadamard(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Entrywise product of two same-shape matrices."""
    return np.asarray(a) * np.asarray(b)


def herm(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(m)).T


def det2(m: np.ndarray) -> complex:
    """Determinant of a 2x2 matrix."""
    m = np.asarray(m)
    return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
