"""Fixed-rate codec for impulse responses of C(a, b) at distortion eps.

The encoder quantizes a member onto the eps-covering and writes the covering
index as one mixed-radix integer, which needs ``ceil(log2 N)`` bits for a
covering of size ``N``.  This is within one bit of ``log2 N`` and hence
follows the ``gamma/(2b) ln^2(a/eps)`` rate to leading order.  The format is
this package's own: it is one direct way to turn the covering into a code,
not an implementation of an external standard.

Stream layout (big-endian throughout)::

    offset  size  field
    0       1     format version, 0x01
    1       8     a    (IEEE 754 binary64)
    9       8     b    (IEEE 754 binary64)
    17      8     eps  (IEEE 754 binary64)
    25      P     payload, P = ceil(B / 8) bytes, B = ceil(log2 N)

The payload holds ``v = sum_t (i_t - 1) * prod_{s<t} n_s`` right-aligned in
the ``8P`` bits; the ``8P - B`` leading pad bits are zero.  The decoder
recomputes ``C2``, ``delta`` and ``n_t`` from the header, so parameter
derivation must be bit-reproducible (see :func:`lti_entropy.core.snap_ceil`).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .core import DecayClass, ImpulseResponse, MixedRadixIndex, is_member
from .covering import (
    CoveringParams,
    certified_distortion,
    covering_cardinality_exact,
    covering_element,
    covering_params,
    covering_upper_bound,
    quantize,
)
from .entropy import asymptotic_rate

__all__ = [
    "FORMAT_VERSION",
    "HEADER_SIZE",
    "CodecError",
    "BitstreamFormatError",
    "BitstreamCorruptError",
    "NotAMemberError",
    "Bitstream",
    "RateReport",
    "payload_bits",
    "encode",
    "decode",
    "rate_report",
]

FORMAT_VERSION = 0x01
_HEADER = struct.Struct(">Bddd")
HEADER_SIZE = _HEADER.size  # 25


class CodecError(Exception):
    pass


class BitstreamFormatError(CodecError):
    """Header is missing, has an unknown version, or holds invalid parameters."""


class BitstreamCorruptError(CodecError):
    """Payload has the wrong length or an out-of-range value."""


class NotAMemberError(CodecError, ValueError):
    """Input impulse response violates the envelope of the class."""


def payload_bits(params: CoveringParams) -> int:
    """``ceil(log2 N)`` computed exactly on the integer ``N``."""
    return (covering_cardinality_exact(params) - 1).bit_length()


@dataclass(frozen=True)
class Bitstream:
    a: float
    b: float
    eps: float
    value: int
    nbits: int
    version: int = FORMAT_VERSION

    def to_bytes(self) -> bytes:
        nbytes = (self.nbits + 7) // 8
        return _HEADER.pack(self.version, self.a, self.b, self.eps) + self.value.to_bytes(nbytes, "big")

    @classmethod
    def from_bytes(cls, data: bytes) -> "Bitstream":
        if len(data) < HEADER_SIZE:
            raise BitstreamFormatError(f"stream has {len(data)} bytes, header needs {HEADER_SIZE}")
        version, a, b, eps = _HEADER.unpack_from(data)
        if version != FORMAT_VERSION:
            raise BitstreamFormatError(f"unknown format version {version:#04x}")
        try:
            params = covering_params(DecayClass(a, b), eps)
        except ValueError as exc:
            raise BitstreamFormatError(f"invalid header parameters: {exc}") from None
        nbits = payload_bits(params)
        payload = data[HEADER_SIZE:]
        if len(payload) != (nbits + 7) // 8:
            raise BitstreamCorruptError(
                f"payload has {len(payload)} bytes, expected {(nbits + 7) // 8}"
            )
        value = int.from_bytes(payload, "big")
        if value >= covering_cardinality_exact(params):
            raise BitstreamCorruptError("payload value exceeds the covering size")
        return cls(a, b, eps, value, nbits, version)


def encode(cls: DecayClass, eps: float, k: ImpulseResponse) -> Bitstream:
    """Quantize ``k`` onto the eps-covering and pack its index."""
    eps = cls.check_eps(eps)
    if not is_member(cls, k, 0.0):
        raise NotAMemberError("impulse response exceeds the envelope a*exp(-b t)")
    params = covering_params(cls, eps)
    idx = quantize(params, cls, k)
    return Bitstream(cls.a, cls.b, eps, idx.to_int(), payload_bits(params))


def decode(bits: Bitstream | bytes) -> tuple[DecayClass, float, ImpulseResponse]:
    """Reconstruct the covering element named by a stream."""
    if isinstance(bits, (bytes, bytearray)):
        bits = Bitstream.from_bytes(bytes(bits))
    try:
        cls = DecayClass(bits.a, bits.b)
        params = covering_params(cls, bits.eps)
    except ValueError as exc:
        raise BitstreamFormatError(f"invalid header parameters: {exc}") from None
    if not 0 <= bits.value < covering_cardinality_exact(params):
        raise BitstreamCorruptError("payload value exceeds the covering size")
    idx = MixedRadixIndex.from_int(bits.value, params.counts)
    return cls, bits.eps, covering_element(params, cls, idx)


def round_trip_distortion(cls: DecayClass, eps: float, k: ImpulseResponse) -> float:
    """Certified bound on ``rho(k, decode(encode(k)))``."""
    _, _, k_hat = decode(encode(cls, eps, k))
    return certified_distortion(covering_params(cls, eps), cls, k, k_hat)


@dataclass(frozen=True)
class RateReport:
    bits: int
    rate_formula: float
    overhead_bits: int
    upper_bound: float

    @property
    def header_bytes(self) -> int:
        return self.overhead_bits // 8


def rate_report(cls: DecayClass, eps: float) -> RateReport:
    eps = cls.check_eps(eps)
    params = covering_params(cls, eps)
    bits = payload_bits(params)
    upper = covering_upper_bound(cls, eps)
    assert bits <= upper + 1, (bits, upper)
    return RateReport(bits, asymptotic_rate(cls, eps), 8 * HEADER_SIZE, upper)
