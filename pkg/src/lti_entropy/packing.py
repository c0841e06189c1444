"""Explicit 2*eps-packing of C(a, b).

Slot ``t = 0..C1`` carries the levels ``-a e^{-bt} + i * delta_t`` for
``i = 0..n_t``, where ``n_t = ceil(a e^{-bt} / eps) - 1`` and
``delta_t = 2 a e^{-bt} / n_t > 2 eps``.  Two elements that differ in any slot
are therefore more than ``2 eps`` apart already in l2, and the l2 distance of
impulse responses never exceeds their H-infinity distance (probe the system
with a unit impulse).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import GAMMA, DecayClass, ImpulseResponse, MixedRadixIndex, SplitMix64, envelope, snap_ceil

__all__ = [
    "PackingParams",
    "SeparationReport",
    "packing_params",
    "packing_element",
    "packing_log2_cardinality",
    "packing_cardinality_exact",
    "packing_lower_bound",
    "verify_separation",
    "EXHAUSTIVE_LIMIT",
]

EXHAUSTIVE_LIMIT = 10_000


@dataclass(frozen=True)
class PackingParams:
    eps: float
    C1: int
    counts: tuple[int, ...]
    steps: tuple[float, ...]

    @property
    def radices(self) -> tuple[int, ...]:
        # digits run over 0..n_t, i.e. n_t + 1 values
        return tuple(n + 1 for n in self.counts)


def packing_params(cls: DecayClass, eps: float) -> PackingParams:
    """Derive C1, the per-slot counts n_t and the steps delta_t."""
    eps = cls.check_eps(eps)
    C1 = snap_ceil(math.log(cls.a / eps) / cls.b) - 1
    counts: list[int] = []
    steps: list[float] = []
    for t in range(C1 + 1):
        env = envelope(cls, t)
        n = snap_ceil(env / eps) - 1
        if n < 1 or not 2.0 * env / n > 2.0 * eps:
            # Only reachable when a e^{-bt}/eps rounds to ~1 at the last slot;
            # dropping the slot keeps every remaining step strictly above 2 eps.
            break
        counts.append(n)
        steps.append(2.0 * env / n)
    if not counts:
        raise ValueError(f"eps={eps!r} too close to a={cls.a!r} for a nontrivial packing")
    assert all(d > 2.0 * eps for d in steps)
    return PackingParams(eps, len(counts) - 1, tuple(counts), tuple(steps))


def packing_element(params: PackingParams, cls: DecayClass, idx: MixedRadixIndex) -> ImpulseResponse:
    """``k[t] = -a e^{-bt} + d_t * delta_t`` on ``0..C1``."""
    if len(idx) != params.C1 + 1:
        raise ValueError(f"index has {len(idx)} slots, expected {params.C1 + 1}")
    if idx.radices != params.radices:
        raise ValueError("index radices do not match the packing counts")
    return ImpulseResponse(
        -envelope(cls, t) + d * step for t, (d, step) in enumerate(zip(idx.digits, params.steps))
    )


def packing_element_from_digits(params: PackingParams, cls: DecayClass, digits) -> ImpulseResponse:
    return packing_element(params, cls, MixedRadixIndex(tuple(digits), params.radices))


def packing_cardinality_exact(params: PackingParams) -> int:
    return math.prod(params.radices)


def packing_log2_cardinality(params: PackingParams) -> float:
    return math.fsum(math.log2(r) for r in params.radices)


def packing_lower_bound(cls: DecayClass, eps: float) -> float:
    """Closed-form lower bound on log2 of the packing size.

    ``gamma/(2b) L^2 - gamma/2 L - b gamma/2`` with ``L = ln(a/eps)``.
    """
    eps = cls.check_eps(eps)
    L = math.log(cls.a / eps)
    b = cls.b
    return GAMMA / (2.0 * b) * L * L - GAMMA / 2.0 * L - b * GAMMA / 2.0


@dataclass
class SeparationReport:
    pairs_checked: int
    exhaustive: bool
    min_separation: float
    threshold: float
    violations: list[tuple[tuple[int, ...], tuple[int, ...], float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and self.min_separation > self.threshold


def _element_matrix(params: PackingParams, cls: DecayClass) -> np.ndarray:
    grids = [
        -envelope(cls, t) + np.arange(r) * step
        for t, (r, step) in enumerate(zip(params.radices, params.steps))
    ]
    mesh = np.meshgrid(*grids, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def verify_separation(
    params: PackingParams, cls: DecayClass, eps: float, pairs: int = 1000, seed: int = 0
) -> SeparationReport:
    """Check that distinct packing elements are more than ``2 eps`` apart in l2.

    With at most ``EXHAUSTIVE_LIMIT`` elements every pair is checked.
    Otherwise ``pairs`` random distinct pairs are checked together with every
    adjacent pair (one slot differing by one step), which is the closest
    configuration by construction.  Violations are reported, not raised.
    """
    card = packing_cardinality_exact(params)
    if card < 2:
        raise ValueError("packing has fewer than two elements")
    threshold = 2.0 * eps
    radices = params.radices

    if card <= EXHAUSTIVE_LIMIT:
        elems = _element_matrix(params, cls)
        n = elems.shape[0]
        best = math.inf
        violations = []
        # row by row keeps memory at O(n * slots)
        for i in range(n - 1):
            d = np.sqrt(np.sum((elems[i + 1 :] - elems[i]) ** 2, axis=1))
            j = int(np.argmin(d))
            best = min(best, float(d[j]))
            for jj in np.nonzero(d <= threshold)[0]:
                a_idx = np.unravel_index(i, radices)
                b_idx = np.unravel_index(i + 1 + int(jj), radices)
                violations.append((tuple(map(int, a_idx)), tuple(map(int, b_idx)), float(d[jj])))
        return SeparationReport(n * (n - 1) // 2, True, best, threshold, violations)

    rng = SplitMix64(seed)
    candidates: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for t, r in enumerate(radices):
        # adjacent pairs: only the differing slot matters for the l2 distance,
        # so one representative per (slot, level) covers every adjacent pair
        for d in range(r - 1):
            lo = [0] * len(radices)
            lo[t] = d
            hi = list(lo)
            hi[t] = d + 1
            candidates.append((tuple(lo), tuple(hi)))
    for _ in range(pairs):
        while True:
            i = [rng.randrange(r) for r in radices]
            j = [rng.randrange(r) for r in radices]
            if i != j:
                break
        candidates.append((tuple(i), tuple(j)))

    best = math.inf
    violations = []
    for i, j in candidates:
        ki = packing_element_from_digits(params, cls, i)
        kj = packing_element_from_digits(params, cls, j)
        d = math.sqrt(math.fsum((x - y) ** 2 for x, y in zip(ki, kj)))
        best = min(best, d)
        if not d > threshold:
            violations.append((i, j, d))
    return SeparationReport(len(candidates), False, best, threshold, violations)


def iter_packing_indices(params: PackingParams):
    """All digit tuples of the packing, slot 0 varying slowest."""
    return itertools.product(*(range(r) for r in params.radices))
