"""Channel models: Rician fading with path loss and shadowing, Wiener phase
noise, and AWGN.

Matrix orientation: H[i, j] is the fading coefficient from transmit antenna
j to receive antenna i, G[i, j] the matching antenna gain, and
psi = H o G (entrywise) the effective channel.  A noiseless received block
for a transmitted 2x2 codeword cw (rows = time slots, columns = transmit
antennas) is Y = cw @ psi.T with Y[n, i] the sample at receive antenna i in
slot n.

Two simulation modes exist: ``normalized`` forces the path-loss/shadowing
scale to one (unit-power fading, the mode used for BER-versus-receive-SNR
sweeps) and ``physical`` applies the full large-scale model.  Shadowing is
log-normal with its standard deviation specified in dB and is redrawn once
per channel realization (quasi-static within a codeword block).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError
from .numerics import RngStream, frobenius_norm, sample_cgauss, sample_lognormal

SPEED_OF_LIGHT = 299_792_458.0
_LN10_OVER_10 = np.log(10.0) / 10.0


def _unit_los() -> np.ndarray:
    return np.ones((2, 2), dtype=complex)


@dataclass(frozen=True)
class RicianParams:
    """Large- and small-scale fading parameters.

    ``k_r`` is the linear Rician factor (line-of-sight to scattered power
    ratio); ``los`` the deterministic unit-modulus line-of-sight matrix;
    ``sigma_s_db`` the shadowing standard deviation in dB.  With
    ``normalized`` set, path loss and shadowing are skipped entirely.
    """

    fc: float = 60e9
    d0: float = 1.0
    d: float = 25.0
    gamma: float = 4.0
    mu_s_db: float = 0.0
    sigma_s_db: float = 9.0
    k_r: float = 0.0
    los: np.ndarray = field(default_factory=_unit_los)
    normalized: bool = False

    def __post_init__(self):
        if self.fc <= 0 or self.d0 <= 0 or self.d <= 0:
            raise InvalidParameterError("fc, d0 and d must be positive")
        if self.gamma < 0 or self.k_r < 0 or self.sigma_s_db < 0:
            raise InvalidParameterError("gamma, k_r and sigma_s_db must be >= 0")
        los = np.asarray(self.los)
        if los.shape != (2, 2) or np.any(np.abs(np.abs(los) - 1) > 1e-9):
            raise InvalidParameterError("los must be 2x2 with unit-modulus entries")

    @classmethod
    def rayleigh_normalized(cls) -> "RicianParams":
        return cls(k_r=0.0, sigma_s_db=0.0, normalized=True)

    @classmethod
    def rician_normalized(cls, k_r: float) -> "RicianParams":
        return cls(k_r=k_r, sigma_s_db=0.0, normalized=True)


def physical_preset(k_r_db: float = 5.0) -> RicianParams:
    """60 GHz link preset: 25 m range, path-loss exponent 4, 9 dB shadowing."""
    return RicianParams(fc=60e9, d0=1.0, d=25.0, gamma=4.0, mu_s_db=0.0,
                        sigma_s_db=9.0, k_r=10 ** (k_r_db / 10.0))


@dataclass(frozen=True)
class PhaseNoiseParams:
    """Per-slot Wiener phase-increment variances (rad^2) at each end."""

    var_tx: float = 0.0
    var_rx: float = 0.0

    def __post_init__(self):
        if self.var_tx < 0 or self.var_rx < 0:
            raise InvalidParameterError("phase-noise variances must be >= 0")

    @property
    def enabled(self) -> bool:
        return self.var_tx > 0 or self.var_rx > 0


@dataclass(frozen=True)
class ChannelRealization:
    h: np.ndarray
    g: np.ndarray
    psi: np.ndarray
    psi_norm: float

    @classmethod
    def from_parts(cls, h: np.ndarray, g: np.ndarray) -> "ChannelRealization":
        psi = np.asarray(h) * np.asarray(g)
        return cls(h=np.asarray(h), g=np.asarray(g), psi=psi,
                   psi_norm=frobenius_norm(psi))


def pathloss_scale(p: RicianParams, s: float) -> float:
    """Linear received-power scale K(fc)/s * (d0/d)^gamma.

    K(fc) = (lambda / (4*pi*d0))^2 is the free-space reference-distance
    loss; s the linear shadowing draw.
    """
    if s <= 0:
        raise InvalidParameterError(f"shadowing draw must be > 0, got {s}")
    lam = SPEED_OF_LIGHT / p.fc
    k_fc = (lam / (4 * np.pi * p.d0)) ** 2
    return k_fc / s * (p.d0 / p.d) ** p.gamma


def sample_rician(p: RicianParams, rng: RngStream) -> np.ndarray:
    """One 2x2 fading matrix draw.

    Each entry is sqrt(scale) * (sqrt(K/(K+1)) * los + sqrt(1/(K+1)) * n)
    with n iid CN(0, 1); the shadowing factor is drawn once per call.
    """
    if p.normalized:
        scale = 1.0
    else:
        s = float(sample_lognormal(rng, p.mu_s_db * _LN10_OVER_10,
                                   p.sigma_s_db * _LN10_OVER_10))
        scale = pathloss_scale(p, s)
    scatter = sample_cgauss(rng, 1.0, (2, 2))
    w_los = np.sqrt(p.k_r / (p.k_r + 1.0))
    w_nlos = np.sqrt(1.0 / (p.k_r + 1.0))
    return np.sqrt(scale) * (w_los * p.los + w_nlos * scatter)


def sample_rician_batch(p: RicianParams, rng: RngStream, n: int) -> np.ndarray:
    """n fading matrices, shape (n, 2, 2); one shadowing draw per matrix.

    Draw order (shadowing first, then scatter) is fixed so results are
    reproducible for a given stream regardless of the caller.
    """
    if p.normalized:
        scale = np.ones(n)
    else:
        s = sample_lognormal(rng, p.mu_s_db * _LN10_OVER_10,
                             p.sigma_s_db * _LN10_OVER_10, n)
        lam = SPEED_OF_LIGHT / p.fc
        k_fc = (lam / (4 * np.pi * p.d0)) ** 2
        scale = k_fc / s * (p.d0 / p.d) ** p.gamma
    scatter = sample_cgauss(rng, 1.0, (n, 2, 2))
    w_los = np.sqrt(p.k_r / (p.k_r + 1.0))
    w_nlos = np.sqrt(1.0 / (p.k_r + 1.0))
    return np.sqrt(scale)[:, None, None] * (w_los * p.los + w_nlos * scatter)


def phase_noise_step(theta_prev: float, var: float, rng: RngStream) -> float:
    """One Wiener step: theta + Normal(0, var)."""
    if var < 0:
        raise InvalidParameterError(f"var must be >= 0, got {var}")
    if var == 0:
        return theta_prev
    return theta_prev + float(np.sqrt(var) * rng.standard_normal())

def sample_phase_paths(pn: PhaseNoiseParams, rng: RngStream,
                       n_slots: int = 2, n: int = 1):
    """Wiener phase trajectories for both ends, starting from theta(0) = 0.

    Returns (tx, rx) arrays of shape (n, n_slots, 2): tx[t, n, j] is the
    phase of transmit antenna j in slot n of trial t, likewise rx for the
    receive antennas.  Draw order: all tx increments, then all rx.
    """
    tx = np.sqrt(pn.var_tx) * rng.standard_normal((n, n_slots, 2))
    rx = np.sqrt(pn.var_rx) * rng.standard_normal((n, n_slots, 2))
    return np.cumsum(tx, axis=1), np.cumsum(rx, axis=1)


def apply_phase_noise(cw_samples: np.ndarray, psi: np.ndarray,
                      tx_phases: np.ndarray | None = None,
                      rx_phases: np.ndarray | None = None) -> np.ndarray:
    """Noiseless received block with per-path oscillator rotations.

    Y[n, i] = sum_j exp(j*rx[n, i]) * psi[i, j] * exp(j*tx[n, j]) * cw[n, j].
    With both phase arrays absent this is the plain linear model
    Y = cw @ psi.T.  Unit-modulus rotations leave per-path magnitudes
    untouched.
    """
    cw_samples = np.asarray(cw_samples)
    psi = np.asarray(psi)
    if tx_phases is not None:
        cw_samples = cw_samples * np.exp(1j * np.asarray(tx_phases))
    y = cw_samples @ psi.T
    if rx_phases is not None:
        y = y * np.exp(1j * np.asarray(rx_phases))
    return y


def apply_awgn(samples: np.ndarray, n0: float, rng: RngStream) -> np.ndarray:
    """Add iid CN(0, N0) noise to every sample."""
    if n0 < 0:
        raise InvalidParameterError(f"N0 must be >= 0, got {n0}")
    samples = np.asarray(samples)
    if n0 == 0:
        return samples.astype(complex)
    return samples + sample_cgauss(rng, n0, samples.shape)
