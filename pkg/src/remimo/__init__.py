"""remimo: full-rate space-time block coding for 2x2 reconfigurable MIMO.

Encoder, antenna-gain optimization, channel models, three equivalent ML
detectors (including the linear-complexity conditional search), and a
deterministic Monte-Carlo BER harness.
"""

from .antenna import (AntennaConfig, GainStationaryPoints, build_psi,
                      coupling_ratio, gain_cost, gain_stationary_points,
                      gain_upper_bound, optimal_config, optimize_gain,
                      paired_gain)
from .channel import (ChannelRealization, PhaseNoiseParams, RicianParams,
                      apply_awgn, apply_phase_noise, pathloss_scale,
                      phase_noise_step, physical_preset, sample_rician,
                      sample_rician_batch)
from .constellation import (Constellation, build_constellation, map_bits,
                            slice_many, slice_symbol)
from .decoder import (DetectionResult, PairDecision, ReceivedBlock, combine,
                      conditional_ml, decode_conditional_ml, decode_pair_ml,
                      exhaustive_ml, pair_ml)
from .encoder import (Codeword, DifferenceSet, RotationAngles,
                      closed_form_theta1, det_difference,
                      det_difference_factored, diff_metrics, encode_alamouti,
                      encode_raw, min_cgd, optimal_theta1, precode,
                      validate_injectivity)
from .errors import (CapacityError, ConfigError, DegenerateRotationError,
                     DesignRejectedError, InsufficientDataError,
                     InvalidParameterError, RemimoError, SingularChannelError)
from .harness import (BerCurve, BerPoint, EquivalenceReport, SimConfig,
                      check_monotone, estimate_diversity_slope, run_ber,
                      verify_decoders, write_csv)
from .numerics import (RngStream, compose_stream_id, det2, frobenius_norm,
                       hadamard, herm, sample_cgauss, sample_lognormal)

__version__ = "0.1.0"
