"""Explicit eps-covering of C(a, b) by uniform per-slot quantization.

The first ``C2 + 1`` coefficients are quantized with step
``delta = eps / (C2 + 1)``; everything after ``C2`` is dropped.  The H-infinity
distance to the reconstruction is at most its l1 distance, which splits into
at most ``(C2 + 1) * delta / 2 = eps / 2`` from quantization and the geometric
tail ``a e^{-b(C2+1)} / (1 - e^{-b}) <= eps / 2``.

The grid map for slot t is ``f_t(i) = min(-a e^{-bt} - delta/2 + i delta, a e^{-bt})``
for ``i = 1..n_t``.  Its image lies in ``[-a e^{-bt} + delta/2, a e^{-bt}]``,
so every element of the covering is itself a member of the class.  When
``delta / 2`` exceeds the envelope the lower end lands above ``-a e^{-bt}``
and ``f_t(1)`` may be clipped to the top; that only happens for slots with
``n_t = 1`` and the quantization error bound still holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import (
    GAMMA,
    DecayClass,
    ImpulseResponse,
    MixedRadixIndex,
    envelope,
    is_member,
    random_member,
    snap_ceil,
    snap_floor,
)
from .norms import l1_norm

__all__ = [
    "CoveringParams",
    "KConstants",
    "CoverReport",
    "covering_params",
    "grid_point",
    "covering_element",
    "quantize",
    "tail_bound",
    "certified_distortion",
    "verify_cover",
    "covering_log2_cardinality",
    "covering_cardinality_exact",
    "k_constants",
    "covering_upper_bound",
]


@dataclass(frozen=True)
class CoveringParams:
    eps: float
    C2: int
    delta: float
    counts: tuple[int, ...]

    @property
    def radices(self) -> tuple[int, ...]:
        return self.counts


def covering_params(cls: DecayClass, eps: float) -> CoveringParams:
    """Derive ``C2``, ``delta`` and the per-slot counts.

    The evaluation order is fixed (``2a / (eps (1 - e^{-b}))``, then ``log``,
    then ``/ b``, then the snapped floor) so a decoder recomputes identical
    parameters from ``(a, b, eps)``.
    """
    eps = cls.check_eps(eps)
    a, b = cls.a, cls.b
    C2 = snap_floor(math.log(2.0 * a / (eps * -math.expm1(-b))) / b)
    C2 = max(C2, 0)
    delta = eps / (C2 + 1)
    counts = tuple(max(1, snap_ceil(2.0 * envelope(cls, t) / delta)) for t in range(C2 + 1))
    return CoveringParams(eps, C2, delta, counts)


def grid_point(cls: DecayClass, delta: float, t: int, i: int, n_t: int | None = None) -> float:
    """``min(-a e^{-bt} - delta/2 + i delta, a e^{-bt})`` for ``1 <= i (<= n_t)``."""
    if i < 1 or (n_t is not None and i > n_t):
        raise ValueError(f"grid index {i} outside [1, {n_t}]")
    env = envelope(cls, t)
    return min(-env - delta / 2.0 + i * delta, env)


def covering_element(params: CoveringParams, cls: DecayClass, idx: MixedRadixIndex) -> ImpulseResponse:
    """Covering element for 1-based digits ``d_t``.

    ``idx`` stores ``d_t - 1`` against radix ``n_t`` (see :func:`quantize`).
    """
    if len(idx) != params.C2 + 1 or idx.radices != params.counts:
        raise ValueError("index does not match the covering parameters")
    return ImpulseResponse(
        grid_point(cls, params.delta, t, d + 1) for t, d in enumerate(idx.digits)
    )


def covering_element_from_digits(params: CoveringParams, cls: DecayClass, digits) -> ImpulseResponse:
    """Same as :func:`covering_element` but takes the 1-based digits directly."""
    digits = tuple(int(d) for d in digits)
    for t, (d, n) in enumerate(zip(digits, params.counts)):
        if not 1 <= d <= n:
            raise ValueError(f"digit {d} at slot {t} outside [1, {n}]")
    return covering_element(params, cls, MixedRadixIndex(tuple(d - 1 for d in digits), params.counts))


def _nearest(cls: DecayClass, params: CoveringParams, t: int, x: float) -> int:
    n = params.counts[t]
    env = envelope(cls, t)
    delta = params.delta
    guess = round((x + env + delta / 2.0) / delta)
    best_i, best_err = 0, math.inf
    for i in range(max(1, guess - 1), min(n, guess + 1) + 1):
        err = abs(x - grid_point(cls, delta, t, i))
        if err < best_err:  # strict: ties keep the smaller index
            best_i, best_err = i, err
    if best_i == 0:
        # x far outside the envelope; clamp to the nearest end
        best_i = 1 if x < 0 else n
    return best_i


def quantize(params: CoveringParams, cls: DecayClass, k: ImpulseResponse) -> MixedRadixIndex:
    """Nearest grid point per slot ``t <= C2``; ties go to the smaller index.

    Returns a :class:`MixedRadixIndex` whose digit at slot t is ``i_t - 1``
    (0-based) with radix ``n_t``.  Coefficients past ``C2`` are ignored.
    """
    if not is_member(cls, k, 0.0):
        raise ValueError("impulse response is not a member of the class")
    digits = tuple(_nearest(cls, params, t, k[t]) - 1 for t in range(params.C2 + 1))
    return MixedRadixIndex(digits, params.counts)


def tail_bound(cls: DecayClass, C2: int) -> float:
    """``sum_{t > C2} a e^{-bt} = a e^{-b(C2+1)} / (1 - e^{-b})``."""
    return envelope(cls, C2 + 1) / -math.expm1(-cls.b)


def certified_distortion(
    params: CoveringParams, cls: DecayClass, k: ImpulseResponse, k_hat: ImpulseResponse
) -> float:
    """Upper bound on the H-infinity distance between a member and its reconstruction.

    The l1 distance over ``0..C2`` plus the analytic tail of the envelope;
    any stored coefficients of ``k`` past ``C2`` are bounded by the tail.
    """
    head = ImpulseResponse(k[t] for t in range(params.C2 + 1))
    return l1_norm(head - k_hat) + tail_bound(cls, params.C2)


@dataclass
class CoverReport:
    samples: int
    worst_distortion: float
    eps: float
    quantization_error_max: float
    violations: list[tuple[int, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and self.worst_distortion <= self.eps


def verify_cover(
    params: CoveringParams,
    cls: DecayClass,
    eps: float,
    samples: int = 1000,
    seed: int = 0,
    extra_support: int = 10,
) -> CoverReport:
    """Certify ``rho(k, reconstruction) <= eps`` for seeded random members.

    Sample ``s`` is ``random_member(cls, C2 + extra_support, seed + s)``.
    Violations are collected in the report rather than raised.
    """
    worst = 0.0
    worst_q = 0.0
    violations = []
    T = params.C2 + extra_support
    for s in range(samples):
        k = random_member(cls, T, seed + s)
        k_hat = covering_element(params, cls, quantize(params, cls, k))
        d = certified_distortion(params, cls, k, k_hat)
        worst_q = max(worst_q, max(abs(k[t] - k_hat[t]) for t in range(params.C2 + 1)))
        worst = max(worst, d)
        if d > eps:
            violations.append((s, d))
    return CoverReport(samples, worst, eps, worst_q, violations)


def covering_cardinality_exact(params: CoveringParams) -> int:
    return math.prod(params.counts)


def covering_log2_cardinality(params: CoveringParams) -> float:
    return math.fsum(math.log2(n) for n in params.counts)


@dataclass(frozen=True)
class KConstants:
    K1: float
    K2: float
    K3: float
    K4: float
    K5: float
    K6: float


def k_constants(cls: DecayClass) -> KConstants:
    a, b = cls.a, cls.b
    K1 = math.log(2.0 / -math.expm1(-b)) / b
    K2 = -(GAMMA * b / 2.0) * K1 + GAMMA * b / 2.0 + 2.0
    K3 = K1 + 1.0
    K4 = K2 / b + (GAMMA / 2.0) * K3
    K5 = (GAMMA / b) * math.log(a) + GAMMA * K3
    K6 = K4 * math.log(a) + K3 * K2
    return KConstants(K1, K2, K3, K4, K5, K6)


def covering_upper_bound(cls: DecayClass, eps: float) -> float:
    """Closed-form upper bound on log2 of the covering size.

    ``gamma/(2b) ln^2(a/eps) + gamma/b ln(1/eps) ln(C2+1) + K4 ln(1/eps)
    + K5 ln(C2+1) + K6``.
    """
    eps = cls.check_eps(eps)
    C2 = covering_params(cls, eps).C2
    K = k_constants(cls)
    L = math.log(cls.a / eps)
    inv = math.log(1.0 / eps)
    lc = math.log(C2 + 1)
    return (
        GAMMA / (2.0 * cls.b) * L * L
        + (GAMMA / cls.b) * inv * lc
        + K.K4 * inv
        + K.K5 * lc
        + K.K6
    )
