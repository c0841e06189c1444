import math

import pytest

from lti_entropy.codec import (
    HEADER_SIZE,
    Bitstream,
    BitstreamCorruptError,
    BitstreamFormatError,
    NotAMemberError,
    decode,
    encode,
    payload_bits,
    rate_report,
    round_trip_distortion,
)
from lti_entropy.core import DecayClass, ImpulseResponse, random_member
from lti_entropy.covering import covering_cardinality_exact, covering_params
from lti_entropy.norms import hinf_norm

UNIT = DecayClass(1.0, 1.0)


def test_payload_size_unit():
    p = covering_params(UNIT, 0.1)
    assert payload_bits(p) == 17 == math.ceil(math.log2(105600))
    k = random_member(UNIT, 6, 1)
    data = encode(UNIT, 0.1, k).to_bytes()
    assert HEADER_SIZE == 25
    assert len(data) == 25 + 3
    assert data[0] == 0x01


def test_payload_bits_exact_powers():
    # ceil(log2 N) on the integer: N = 2^m needs exactly m bits
    for n, bits in [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (1 << 20, 20), ((1 << 20) + 1, 21)]:
        assert (n - 1).bit_length() == bits


def test_round_trip_unit():
    worst = 0.0
    for s in range(1000):
        k = random_member(UNIT, 12, s)
        d = round_trip_distortion(UNIT, 0.1, k)
        worst = max(worst, d)
    assert worst <= 0.1


def test_round_trip_hinf_spot_check():
    for s in range(20):
        k = random_member(UNIT, 12, 500 + s)
        _, _, k_hat = decode(encode(UNIT, 0.1, k).to_bytes())
        assert hinf_norm(k - k_hat, 1e-9).upper <= round_trip_distortion(UNIT, 0.1, k) + 1e-9


def test_decode_is_idempotent():
    for s in range(50):
        k = random_member(UNIT, 8, s)
        first = encode(UNIT, 0.1, k)
        cls, eps, k_hat = decode(first.to_bytes())
        assert (cls, eps) == (UNIT, 0.1)
        again = encode(cls, eps, k_hat)
        assert again.to_bytes() == first.to_bytes()


def test_distinct_cells_give_distinct_streams():
    seen = {}
    for s in range(300):
        k = random_member(UNIT, 4, s)
        stream = encode(UNIT, 0.1, k)
        _, _, k_hat = decode(stream)
        seen.setdefault(stream.to_bytes(), set()).add(k_hat.coeffs)
    assert all(len(v) == 1 for v in seen.values())
    assert len(seen) > 250


def test_truncated_and_padded_streams():
    data = encode(UNIT, 0.1, random_member(UNIT, 4, 0)).to_bytes()
    with pytest.raises(BitstreamCorruptError):
        decode(data[:-1])
    with pytest.raises(BitstreamCorruptError):
        decode(data + b"\x00")
    with pytest.raises(BitstreamFormatError):
        decode(data[:10])


def test_out_of_range_payload():
    p = covering_params(UNIT, 0.1)
    n = covering_cardinality_exact(p)
    bad = Bitstream(1.0, 1.0, 0.1, n, 17).to_bytes()
    with pytest.raises(BitstreamCorruptError):
        decode(bad)
    last = Bitstream(1.0, 1.0, 0.1, n - 1, 17).to_bytes()
    _, _, k_hat = decode(last)
    assert len(k_hat) == 4


def test_bad_header():
    good = Bitstream(1.0, 1.0, 0.1, 0, 17).to_bytes()
    with pytest.raises(BitstreamFormatError):
        decode(b"\x02" + good[1:])
    with pytest.raises(BitstreamFormatError):
        decode(Bitstream(1.0, 1.0, 2.0, 0, 17).to_bytes())
    with pytest.raises(BitstreamFormatError):
        decode(Bitstream(1.0, -1.0, 0.1, 0, 17).to_bytes())


def test_non_member_rejected():
    with pytest.raises(NotAMemberError):
        encode(UNIT, 0.1, ImpulseResponse([0.5, 0.9]))
    with pytest.raises(ValueError):
        encode(UNIT, 1.5, ImpulseResponse([0.5]))


def test_other_classes_round_trip():
    for a, b, eps in [(10.0, 0.3, 0.05), (0.5, 3.0, 1e-4), (2.0, 0.1, 0.3)]:
        cls = DecayClass(a, b)
        for s in range(50):
            k = random_member(cls, 40, s)
            assert round_trip_distortion(cls, eps, k) <= eps


def test_rate_along_sweep():
    ratios = []
    for j in range(1, 9):
        eps = 10.0**-j
        rr = rate_report(UNIT, eps)
        assert rr.bits <= rr.upper_bound + 1
        assert rr.header_bytes == 25
        ratios.append(rr.bits / rr.rate_formula)
    assert all(x > y for x, y in zip(ratios, ratios[1:]))
    assert ratios[-1] < 1.5
