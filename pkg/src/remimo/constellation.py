"""M-ary signal sets with Gray bit labels.

Label convention (frozen by golden tests, BER depends on it):

* a point's index in ``points`` equals the integer value of its bit label,
  so the label list is simply ``format(i, "0kb")`` for ``k = log2(M)``;
* PSK places the point at angular position ``n`` (counter-clockwise from the
  positive real axis) at index ``gray(n)``, giving geometric neighbours
  single-bit label distance.  BPSK is {+1, -1}; for M >= 4 the circle is
  rotated by pi/M so QPSK is the diamond {(+-1 +- j)/sqrt(2)};
* square QAM Gray-codes the I and Q level indices independently, label =
  I bits followed by Q bits, grid scaled to unit average energy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError

_QAM_SIZES = (4, 16, 64)


def gray(n: int) -> int:
    """Reflected Gray code of n."""
    return n ^ (n >> 1)


@dataclass(frozen=True)
class Constellation:
    scheme: str
    m: int
    points: np.ndarray
    labels: tuple[str, ...] = field(repr=False)

    @property
    def bits_per_symbol(self) -> int:
        return self.m.bit_length() - 1

    def __post_init__(self):
        if len(self.points) != self.m or len(self.labels) != self.m:
            raise InvalidParameterError("points/labels must have length M")
        energy = float(np.mean(np.abs(self.points) ** 2))
        if abs(energy - 1.0) > 1e-12:
            raise InvalidParameterError(f"average energy must be 1, got {energy}")


def build_constellation(scheme: str, m: int) -> Constellation:
    """Unit-average-energy Gray-labelled constellation.

    Supported: PSK for any power-of-two M >= 2, square QAM for M in
    {4, 16, 64}.  Point ordering is deterministic: index = label value.
    """
    scheme = scheme.lower()
    if m < 2 or m & (m - 1):
        raise InvalidParameterError(f"M must be a power of two >= 2, got {m}")
    if scheme == "psk":
        points = np.empty(m, dtype=complex)
        offset = 0.0 if m == 2 else np.pi / m
        for n in range(m):
            points[gray(n)] = np.exp(1j * (2 * np.pi * n / m + offset))
        # snap exact axis points (BPSK et al.) to clean values
        points.real[np.abs(points.real) < 1e-15] = 0.0
        points.imag[np.abs(points.imag) < 1e-15] = 0.0
    elif scheme == "qam":
        if m not in _QAM_SIZES:
            raise InvalidParameterError(f"QAM supports M in {_QAM_SIZES}, got {m}")
        k = int(np.sqrt(m))
        levels = np.arange(k) * 2 - (k - 1)
        points = np.empty(m, dtype=complex)
        for col in range(k):
            for row in range(k):
                points[gray(col) * k + gray(row)] = levels[col] + 1j * levels[row]
        points /= np.sqrt(np.mean(np.abs(points) ** 2))
    else:
        raise InvalidParameterError(f"unknown scheme {scheme!r}")
    bits = m.bit_length() - 1
    labels = tuple(format(i, f"0{bits}b") for i in range(m))
    return Constellation(scheme=scheme, m=m, points=points, labels=labels)


def map_bits(c: Constellation, bits: str) -> np.ndarray:
    """Map a bit string to symbols, log2(M) bits per symbol."""
    k = c.bits_per_symbol
    if len(bits) % k:
        raise InvalidParameterError(f"bit string length must be a multiple of {k}")
    if bits.strip("01"):
        raise InvalidParameterError("bit string may only contain 0 and 1")
    idx = [int(bits[i:i + k], 2) for i in range(0, len(bits), k)]
    return c.points[idx]


def slice_symbol(c: Constellation, y: complex) -> int:
    """Index of the nearest constellation point; ties go to the lowest index.

    For PSK under circular noise this coincides with the angular-sector
    (phase threshold) decision; nearest-neighbour extends it to QAM.
    """
    return int(np.argmin(np.abs(c.points - y) ** 2))


def slice_many(c: Constellation, y: np.ndarray) -> np.ndarray:
    """Vectorised :func:`slice_symbol` over an array of observations."""
    y = np.asarray(y, dtype=complex)
    d = np.abs(y[..., None] - c.points) ** 2
    return np.argmin(d, axis=-1)
