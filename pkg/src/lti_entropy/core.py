"""Domain types for the class C(a, b) of exponentially decaying causal systems.

A member of C(a, b) is a causal discrete-time LTI system whose impulse
response obeys ``|k[t]| <= a * exp(-b t)`` for every ``t >= 0``.  The class
itself contains infinitely long responses; everything this package
*constructs* has finite support, and arbitrary members are handled through
the geometric tail bound in :mod:`lti_entropy.covering`.

Random members are drawn with SplitMix64 (Steele, Lea & Flood 2014):

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

all arithmetic modulo 2**64.  A 64-bit output ``z`` becomes the double
``(z >> 11) * 2**-53`` in ``[0, 1)``.  The generator is seeded with the raw
64-bit seed (negative seeds are reduced modulo 2**64), so the streams are
reproducible from any language.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "GAMMA",
    "DecayClass",
    "ImpulseResponse",
    "Signal",
    "MixedRadixIndex",
    "SplitMix64",
    "envelope",
    "is_member",
    "random_member",
    "convolve",
    "snap_ceil",
    "snap_floor",
]

# log2(e): converts nats to bits
GAMMA = math.log2(math.e)

_MASK64 = (1 << 64) - 1
# Arguments of floor/ceil this close to an integer are treated as that integer.
SNAP_ULPS = 8


@dataclass(frozen=True)
class DecayClass:
    """The pair (a, b): envelope amplitude and decay rate in nats per step."""

    a: float
    b: float

    def __post_init__(self) -> None:
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("a and b must be finite")
        if a <= 0 or b <= 0:
            raise ValueError(f"a and b must be positive, got a={a!r}, b={b!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def check_eps(self, eps: float) -> float:
        """Return ``eps`` as a float, raising unless ``0 < eps < a``."""
        eps = float(eps)
        if not (0.0 < eps < self.a):
            raise ValueError(f"eps must lie in (0, a) = (0, {self.a!r}), got {eps!r}")
        return eps


@dataclass(frozen=True)
class _OneSided:
    # Index t = 0..len-1; everything outside is implicitly zero.
    coeffs: tuple[float, ...] = field(default=())

    def __init__(self, coeffs: Iterable[float] = ()) -> None:
        object.__setattr__(self, "coeffs", tuple(float(c) for c in coeffs))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self) -> Iterator[float]:
        return iter(self.coeffs)

    def __getitem__(self, t: int) -> float:
        if t < 0 or t >= len(self.coeffs):
            return 0.0
        return self.coeffs[t]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=np.float64)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.coeffs)!r})"


class ImpulseResponse(_OneSided):
    """Finite-support causal impulse response ``k[0..T]``."""

    def __sub__(self, other: "ImpulseResponse") -> "ImpulseResponse":
        n = max(len(self), len(other))
        return ImpulseResponse(self[t] - other[t] for t in range(n))

    def scaled(self, alpha: float) -> "ImpulseResponse":
        return ImpulseResponse(alpha * c for c in self.coeffs)


class Signal(_OneSided):
    """Finite one-sided input or output signal."""


@dataclass(frozen=True)
class MixedRadixIndex:
    """Per-slot digits ``d_t`` with ``0 <= d_t < r_t``.

    The integer value is ``sum(d_t * prod(r_s for s < t))``, i.e. slot 0 is
    the least significant digit.
    """

    digits: tuple[int, ...]
    radices: tuple[int, ...]

    def __post_init__(self) -> None:
        digits = tuple(int(d) for d in self.digits)
        radices = tuple(int(r) for r in self.radices)
        if len(digits) != len(radices):
            raise ValueError("digits and radices must have equal length")
        for t, (d, r) in enumerate(zip(digits, radices)):
            if r < 1:
                raise ValueError(f"radix at slot {t} must be positive, got {r}")
            if not 0 <= d < r:
                raise ValueError(f"digit {d} at slot {t} outside [0, {r})")
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "radices", radices)

    def __len__(self) -> int:
        return len(self.digits)

    @property
    def cardinality(self) -> int:
        return math.prod(self.radices)

    def to_int(self) -> int:
        value = 0
        for d, r in zip(reversed(self.digits), reversed(self.radices)):
            value = value * r + d
        return value

    @classmethod
    def from_int(cls, value: int, radices: Sequence[int]) -> "MixedRadixIndex":
        value = int(value)
        radices = tuple(int(r) for r in radices)
        if value < 0 or value >= math.prod(radices):
            raise ValueError(f"value {value} out of range for radices {radices}")
        digits = []
        for r in radices:
            value, d = divmod(value, r)
            digits.append(d)
        return cls(tuple(digits), radices)


class SplitMix64:
    """SplitMix64 generator; see the module docstring for the exact recurrence."""

    def __init__(self, seed: int) -> None:
        self.state = int(seed) & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n < 1:
            raise ValueError("n must be positive")
        if n == 1:
            return 0
        bits = (n - 1).bit_length()
        while True:
            x = 0
            got = 0
            while got < bits:
                x = (x << 64) | self.next_u64()
                got += 64
            x >>= got - bits
            if x < n:
                return x


def envelope(cls: DecayClass, t: int) -> float:
    """``a * exp(-b t)``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return cls.a * math.exp(-cls.b * t)


def is_member(cls: DecayClass, k: ImpulseResponse, tol: float = 0.0) -> bool:
    """True iff ``|k[t]| <= envelope(t) + tol`` on the support of ``k``.

    Membership is read as a pointwise bound for every ``t >= 0``; past the
    stored support ``k`` is zero and trivially satisfies it.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return all(abs(c) <= envelope(cls, t) + tol for t, c in enumerate(k.coeffs))


def random_member(cls: DecayClass, T: int, seed: int) -> ImpulseResponse:
    """Draw ``k[t]`` uniformly from ``[-env(t), env(t)]`` for ``t = 0..T``.

    Uses one SplitMix64 stream seeded with ``seed``; ``k[t] = env(t) * (2u - 1)``
    with ``u`` the t-th uniform double, so ``|k[t]| <= env(t)`` holds exactly.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    rng = SplitMix64(seed)
    return ImpulseResponse(envelope(cls, t) * (2.0 * rng.random() - 1.0) for t in range(T + 1))


def convolve(k: ImpulseResponse, x: Signal) -> Signal:
    """Causal convolution ``y[t] = sum_{tau <= t} k[tau] x[t - tau]``."""
    if len(k) == 0 or len(x) == 0:
        return Signal(())
    return Signal(np.convolve(k.as_array(), x.as_array()))


def _near_integer(x: float) -> int | None:
    r = round(x)
    if abs(x - r) <= SNAP_ULPS * math.ulp(max(abs(x), 1.0)):
        return int(r)
    return None


def snap_ceil(x: float) -> int:
    """``ceil(x)``, except that x within 8 ulp of an integer n returns n.

    The parameter formulas feed transcendental values into ceil/floor; an
    argument that is mathematically an integer (``2 / 0.025 = 80``) may
    evaluate one ulp high and flip the result.  Snapping makes the derived
    integers reproducible and matches the exact-arithmetic values.
    """
    n = _near_integer(x)
    return n if n is not None else math.ceil(x)


def snap_floor(x: float) -> int:
    """``floor(x)`` with the same 8-ulp snapping as :func:`snap_ceil`."""
    n = _near_integer(x)
    return n if n is not None else math.floor(x)
