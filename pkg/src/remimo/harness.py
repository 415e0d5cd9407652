"""Monte-Carlo BER engine: SNR sweeps, decoder-equivalence campaigns,
diversity-slope estimation, and CSV persistence.

Determinism contract: a simulation is fully determined by its configuration
and master seed.  Work is split into fixed-size batches; batch ``b`` of SNR
point ``i`` draws everything it needs from the keyed stream
``(seed, i << 32 | b)`` in a fixed order, and results are reduced in batch
order.  The worker count therefore changes only the schedule, never the
numbers, and the early-stopping point (first batch at which the cumulative
error target is met) is identical under any parallelism.

The sweep variable is receive SNR, P * E[||psi||_F^2] / (N_r * N0), with the
mean effective-channel power estimated once per configuration from a
dedicated stream.  Each trial draws a fresh channel block (quasi-static
fading), four fresh symbols, encodes, precodes, passes through the
(optionally phase-noisy) channel, decodes, and counts bit errors against the
Gray labels.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from .channel import (ChannelRealization, PhaseNoiseParams, RicianParams,
                      sample_phase_paths, sample_rician_batch)
from .constellation import Constellation, build_constellation
from .decoder import (ReceivedBlock, combine_batch, decode_batch,
                      decode_conditional_ml, decode_pair_ml, exhaustive_ml)
from .encoder import RotationAngles, optimal_theta1, validate_injectivity
from .errors import ConfigError, DesignRejectedError, InsufficientDataError
from .numerics import RngStream, compose_stream_id, sample_cgauss

_ESTIMATE_STREAM = 0xFFFFFFFF   # major id for the channel-power estimate
_VERIFY_STREAM = 0xFFFFFFFE     # major id for decoder-equivalence campaigns
_PSI_NORM_ESTIMATE_DRAWS = 4096

_DECODERS = ("cond", "pair", "exhaustive")


@dataclass(frozen=True)
class SimConfig:
    """Everything a BER run needs; hashable into a provenance tag."""

    scheme: str = "psk"
    m: int = 4
    theta1: float | None = None        # None = designed rotation
    channel_mode: str = "normalized"   # 'normalized' | 'physical'
    k_r: float = 0.0                   # linear Rician factor
    fc: float = 60e9
    d0: float = 1.0
    d: float = 25.0
    gamma_pl: float = 4.0
    mu_s_db: float = 0.0
    sigma_s_db: float = 9.0
    pn_var_tx: float = 0.0
    pn_var_rx: float = 0.0
    snr_db: tuple = (0.0, 4.0, 8.0, 12.0, 16.0, 20.0)
    max_trials: int = 200_000
    target_errors: int = 400
    seed: int = 0
    decoder: str = "cond"
    power: float = 1.0
    batch_size: int = 2048

    def __post_init__(self):
        if self.decoder not in _DECODERS:
            raise ConfigError(f"decoder must be one of {_DECODERS}")
        if self.channel_mode not in ("normalized", "physical"):
            raise ConfigError("channel_mode must be 'normalized' or 'physical'")
        snr = tuple(float(s) for s in self.snr_db)
        if len(snr) == 0 or any(b <= a for a, b in zip(snr, snr[1:])):
            raise ConfigError("snr_db must be non-empty and strictly increasing")
        object.__setattr__(self, "snr_db", snr)
        if self.max_trials < 1 or self.target_errors < 1 or self.batch_size < 1:
            raise ConfigError("max_trials, target_errors and batch_size must be >= 1")
        if self.power <= 0:
            raise ConfigError("power must be positive")

    def constellation(self) -> Constellation:
        return build_constellation(self.scheme, self.m)

    def rotation(self) -> RotationAngles:
        if self.theta1 is None:
            return RotationAngles.from_theta1(optimal_theta1(self.constellation()))
        return RotationAngles.from_theta1(self.theta1)

    def rician_params(self) -> RicianParams:
        if self.channel_mode == "normalized":
            return RicianParams(k_r=self.k_r, sigma_s_db=0.0, normalized=True)
        return RicianParams(fc=self.fc, d0=self.d0, d=self.d, gamma=self.gamma_pl,
                            mu_s_db=self.mu_s_db, sigma_s_db=self.sigma_s_db,
                            k_r=self.k_r)

    def phase_noise(self) -> PhaseNoiseParams:
        return PhaseNoiseParams(var_tx=self.pn_var_tx, var_rx=self.pn_var_rx)

    def config_hash(self) -> str:
        items = []
        for f in fields(self):
            items.append(f"{f.name}={getattr(self, f.name)!r}")
        digest = hashlib.sha256("\n".join(items).encode()).hexdigest()
        return digest[:12]


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    bit_errors: int
    bits: int
    ber: float
    trials: int


@dataclass(frozen=True)
class BerCurve:
    points: tuple
    seed: int
    config_hash: str


@dataclass(frozen=True)
class EquivalenceReport:
    trials: int
    mismatches: int
    mean_cost_exhaustive: float
    mean_cost_pair: float
    mean_cost_conditional: float


def _popcount_table(m: int) -> np.ndarray:
    return np.array([bin(x).count("1") for x in range(m)], dtype=np.int64)


def estimate_mean_psi_sq(cfg: SimConfig) -> float:
    """Mean squared effective-channel norm from a dedicated keyed stream."""
    rng = RngStream(cfg.seed, compose_stream_id(_ESTIMATE_STREAM, 0))
    h = sample_rician_batch(cfg.rician_params(), rng, _PSI_NORM_ESTIMATE_DRAWS)
    return float(np.mean(np.sum(np.abs(h) ** 2, axis=(1, 2))))


def _encode_batch(points: np.ndarray, tx_idx: np.ndarray, rot: RotationAngles,
                  power: float) -> np.ndarray:
    a = points[tx_idx[:, 0]] * rot.alpha1 - np.conj(points[tx_idx[:, 1]]) * rot.beta1
    b = points[tx_idx[:, 2]] * rot.alpha2 - np.conj(points[tx_idx[:, 3]]) * rot.beta2
    cw = np.empty((len(a), 2, 2), dtype=complex)
    cw[:, 0, 0] = a
    cw[:, 0, 1] = b
    cw[:, 1, 0] = -np.conj(b)
    cw[:, 1, 1] = np.conj(a)
    return np.sqrt(power) * cw


def _ber_batch(cfg: SimConfig, c: Constellation, rot: RotationAngles,
               rparams: RicianParams, pn: PhaseNoiseParams, n0: float,
               snr_idx: int, batch_idx: int, size: int,
               popcount: np.ndarray) -> tuple[int, int]:
    """Simulate one batch; returns (bit_errors, trials).

    Draw order per batch is fixed: symbols, channel, unit noise, then phase
    increments.  Noise before phases keeps a phase-noise-on run paired with
    its phase-noise-off twin (identical symbols, channel and noise draws),
    which makes degradation comparisons common-random-number coupled.
    """
    rng = RngStream(cfg.seed, compose_stream_id(snr_idx, batch_idx))
    tx_idx = rng.integers(0, c.m, (size, 4))
    h = sample_rician_batch(rparams, rng, size)
    psi = h  # unit antenna gains in the BER sweeps
    psi_norm = np.sqrt(np.sum(np.abs(psi) ** 2, axis=(1, 2)))
    unit_noise = sample_cgauss(rng, 1.0, (size, 2, 2))
    cw = _encode_batch(c.points, tx_idx, rot, cfg.power)
    precoded = np.einsum("bij,bjk->bik", cw, np.conj(psi)) / psi_norm[:, None, None]
    if pn.enabled:
        tx_ph, rx_ph = sample_phase_paths(pn, rng, n_slots=2, n=size)
        precoded = precoded * np.exp(1j * tx_ph)
        y = np.einsum("bnj,bij->bni", precoded, psi)
        y = y * np.exp(1j * rx_ph)
    else:
        y = np.einsum("bnj,bij->bni", precoded, psi)
    if n0 > 0:
        y = y + np.sqrt(n0) * unit_noise
    r1, r2 = combine_batch(y)
    gamma = np.sqrt(cfg.power / 2.0) * psi_norm
    rx_idx = decode_batch(r1, r2, gamma, rot, c, cfg.decoder)
    errors = int(popcount[np.bitwise_xor(tx_idx, rx_idx)].sum())
    return errors, size


def _run_batches_ordered(n_batches, batch_fn, n_workers, stop_fn):
    """Run batches concurrently, reduce strictly in batch order.

    ``stop_fn(cumulative)`` is consulted after each in-order batch; results
    of batches past the stopping index are discarded, so the outcome does
    not depend on the worker count.
    """
    results = []
    n_workers = max(1, n_workers)
    with ThreadPoolExecutor(max_workers=n_workers) as ex:
        inflight = {}
        next_i = 0
        idx = 0
        while idx < n_batches:
            while next_i < n_batches and len(inflight) < n_workers + 1:
                inflight[next_i] = ex.submit(batch_fn, next_i)
                next_i += 1
            out = inflight.pop(idx).result()
            results.append(out)
            idx += 1
            if stop_fn(results):
                break
        for fut in inflight.values():
            fut.cancel()
    return results


def run_ber(cfg: SimConfig, n_workers: int = 1) -> BerCurve:
    """Sweep the SNR grid; each point stops at the error target or trial cap.

    Raises DesignRejectedError before simulating anything if the configured
    rotation is not uniquely decodable for the constellation.
    """
    c = cfg.constellation()
    rot = cfg.rotation()
    if validate_injectivity(c, rot) <= 1e-9:
        raise DesignRejectedError(
            f"rotation theta1={rot.theta1!r} collapses symbol pairs for "
            f"{cfg.scheme.upper()}-{cfg.m}")
    rparams = cfg.rician_params()
    pn = cfg.phase_noise()
    mean_psi_sq = estimate_mean_psi_sq(cfg)
    popcount = _popcount_table(c.m)
    bits_per_trial = 4 * c.bits_per_symbol

    points = []
    for snr_idx, snr in enumerate(cfg.snr_db):
        if math.isinf(snr):
            n0 = 0.0
        else:
            n0 = cfg.power * mean_psi_sq / (2.0 * 10 ** (snr / 10.0))
        sizes = [min(cfg.batch_size, cfg.max_trials - s)
                 for s in range(0, cfg.max_trials, cfg.batch_size)]

        def batch_fn(i, _n0=n0, _si=snr_idx, _sizes=sizes):
            return _ber_batch(cfg, c, rot, rparams, pn, _n0, _si, i,
                              _sizes[i], popcount)

        def stop_fn(results):
            return sum(r[0] for r in results) >= cfg.target_errors

        outs = _run_batches_ordered(len(sizes), batch_fn, n_workers, stop_fn)
        errors = sum(o[0] for o in outs)
        trials = sum(o[1] for o in outs)
        bits = trials * bits_per_trial
        points.append(BerPoint(snr_db=float(snr), bit_errors=errors, bits=bits,
                               ber=errors / bits, trials=trials))
    return BerCurve(points=tuple(points), seed=cfg.seed,
                    config_hash=cfg.config_hash())


def _verify_batch(cfg: SimConfig, c: Constellation, rot: RotationAngles,
                  rparams: RicianParams, n0_grid: np.ndarray, batch_idx: int,
                  size: int, start_trial: int) -> tuple[int, int, int, int]:
    """Decode one batch with all three detectors; returns
    (mismatches, cost_exh, cost_pair, cost_cond)."""
    rng = RngStream(cfg.seed, compose_stream_id(_VERIFY_STREAM, batch_idx))
    tx_idx = rng.integers(0, c.m, (size, 4))
    h = sample_rician_batch(rparams, rng, size)
    psi_norm = np.sqrt(np.sum(np.abs(h) ** 2, axis=(1, 2)))
    cw = _encode_batch(c.points, tx_idx, rot, cfg.power)
    precoded = np.einsum("bij,bjk->bik", cw, np.conj(h)) / psi_norm[:, None, None]
    y = np.einsum("bnj,bij->bni", precoded, h)
    unit_noise = sample_cgauss(rng, 1.0, y.shape)
    n0 = n0_grid[(start_trial + np.arange(size)) % len(n0_grid)]
    y = y + np.sqrt(n0)[:, None, None] * unit_noise

    mism = ce = cp = cc = 0
    ones = np.ones((2, 2))
    for t in range(size):
        chan = ChannelRealization(h=h[t], g=ones, psi=h[t],
                                  psi_norm=float(psi_norm[t]))
        rb = ReceivedBlock(y=y[t])
        de = exhaustive_ml(rb, chan, rot, cfg.power, c)
        dp = decode_pair_ml(rb, float(psi_norm[t]), cfg.power, rot, c)
        dc = decode_conditional_ml(rb, float(psi_norm[t]), cfg.power, rot, c)
        if not (de.indices == dp.indices == dc.indices):
            mism += 1
        ce += de.cost_evaluations
        cp += dp.cost_evaluations
        cc += dc.cost_evaluations
    return mism, ce, cp, cc


def verify_decoders(cfg: SimConfig, trials: int,
                    n_workers: int = 1) -> EquivalenceReport:
    """Run all three detectors on identical noisy blocks and compare.

    Trials cycle through the configured SNR grid.  The phase-noise setting
    is ignored here on purpose: equivalence is a property of the detectors,
    which always share the combined observables, so the campaign uses the
    matched channel the metrics are defined for.
    """
    c = cfg.constellation()
    rot = cfg.rotation()
    rparams = cfg.rician_params()
    mean_psi_sq = estimate_mean_psi_sq(cfg)
    snr_lin = np.array([10 ** (s / 10.0) for s in cfg.snr_db])
    n0_grid = cfg.power * mean_psi_sq / (2.0 * snr_lin)

    batch = 512
    sizes = [min(batch, trials - s) for s in range(0, trials, batch)]
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])

    def batch_fn(i):
        return _verify_batch(cfg, c, rot, rparams, n0_grid, i, sizes[i],
                             int(starts[i]))

    outs = _run_batches_ordered(len(sizes), batch_fn, n_workers,
                                lambda results: False)
    mism = sum(o[0] for o in outs)
    ce = sum(o[1] for o in outs)
    cp = sum(o[2] for o in outs)
    cc = sum(o[3] for o in outs)
    return EquivalenceReport(trials=trials, mismatches=mism,
                             mean_cost_exhaustive=ce / trials,
                             mean_cost_pair=cp / trials,
                             mean_cost_conditional=cc / trials)


def estimate_diversity_slope(curve: BerCurve, window: tuple[float, float]) -> float:
    """Least-squares slope of log10(BER) against log10(linear SNR), negated."""
    lo, hi = window
    xs, ys = [], []
    for p in curve.points:
        if lo <= p.snr_db <= hi and p.ber > 0:
            xs.append(p.snr_db / 10.0)   # log10 of linear SNR
            ys.append(math.log10(p.ber))
    if len(xs) < 2:
        raise InsufficientDataError(
            f"need >= 2 nonzero-BER points in [{lo}, {hi}] dB, found {len(xs)}")
    slope = np.polyfit(xs, ys, 1)[0]
    return float(-slope)


def check_monotone(curve: BerCurve, min_errors: int = 100) -> list[tuple[float, float]]:
    """SNR pairs violating monotonicity with both points above the error floor."""
    bad = []
    for a, b in zip(curve.points, curve.points[1:]):
        if b.ber > a.ber and a.bit_errors >= min_errors and b.bit_errors >= min_errors:
            bad.append((a.snr_db, b.snr_db))
    return bad


CSV_HEADER = "snr_db,ber,bit_errors,bits,trials,seed,config_hash"


def write_csv(curve: BerCurve, path) -> None:
    """Persist a curve; full-precision decimal, one row per SNR point."""
    lines = [CSV_HEADER]
    for p in curve.points:
        lines.append(f"{p.snr_db!r},{p.ber!r},{p.bit_errors},{p.bits},"
                     f"{p.trials},{curve.seed},{curve.config_hash}")
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write BER curve to {path}: {exc}") from exc


def with_overrides(cfg: SimConfig, **kwargs) -> SimConfig:
    """Functional update helper (dataclasses.replace with validation)."""
    return replace(cfg, **kwargs)
