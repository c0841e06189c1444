"""Metric entropy of exponentially decaying causal LTI systems under the H-infinity metric.

Explicit packings and coverings of the class C(a, b), certified norm
enclosures, a fixed-rate impulse-response codec, and brute-force oracles on
tiny instances.
"""

from .codec import Bitstream, decode, encode, rate_report
from .core import (
    GAMMA,
    DecayClass,
    ImpulseResponse,
    MixedRadixIndex,
    Signal,
    convolve,
    envelope,
    is_member,
    random_member,
)
from .covering import (
    CoveringParams,
    covering_cardinality_exact,
    covering_element,
    covering_log2_cardinality,
    covering_params,
    covering_upper_bound,
    k_constants,
    quantize,
    verify_cover,
)
from .entropy import asymptotic_rate, big_o_remainder_check, entropy_report, gamma_const
from .norms import NormInterval, h2_norm, hinf_norm, l1_norm, l2_norm, opnorm_lower, rho, zeval
from .packing import (
    PackingParams,
    packing_cardinality_exact,
    packing_element,
    packing_log2_cardinality,
    packing_lower_bound,
    packing_params,
    verify_separation,
)

__version__ = "0.1.0"
