import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lti_entropy.core import DecayClass, ImpulseResponse, MixedRadixIndex, SplitMix64, random_member
from lti_entropy.covering import (
    certified_distortion,
    covering_cardinality_exact,
    covering_element,
    covering_element_from_digits,
    covering_log2_cardinality,
    covering_params,
    covering_upper_bound,
    grid_point,
    k_constants,
    quantize,
    tail_bound,
    verify_cover,
)
from lti_entropy.norms import hinf_norm
from lti_entropy.packing import packing_log2_cardinality, packing_lower_bound, packing_params

UNIT = DecayClass(1.0, 1.0)
GRID = [
    (a, b, a * r)
    for a in (0.5, 1.0, 10.0)
    for b in (0.1, 1.0, 3.0)
    for r in (0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
]


def mp_snap(x, up):
    n = mpmath.nint(x)
    if abs(x - n) <= 1e-14 * max(1, abs(n)):
        return int(n)
    return int(mpmath.ceil(x) if up else mpmath.floor(x))


def mp_covering(a, b, eps):
    with mpmath.workdps(50):
        a, b, eps = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(eps)
        C2 = max(0, mp_snap(mpmath.log(2 * a / (eps * (1 - mpmath.exp(-b)))) / b, False))
        delta = eps / (C2 + 1)
        counts = [max(1, mp_snap(2 * a * mpmath.exp(-b * t) / delta, True)) for t in range(C2 + 1)]
        return C2, delta, counts


def test_unit_params():
    p = covering_params(UNIT, 0.1)
    assert p.C2 == 3
    assert p.delta == 0.025
    assert p.counts == (80, 30, 11, 4)
    assert covering_cardinality_exact(p) == 105600
    C2, delta, counts = mp_covering(1, 1, 0.1)
    assert (C2, counts) == (3, [80, 30, 11, 4])
    assert covering_log2_cardinality(p) == pytest.approx(math.log2(105600), rel=1e-14)


@pytest.mark.parametrize("a,b,eps", GRID)
def test_params_match_high_precision(a, b, eps):
    p = covering_params(DecayClass(a, b), eps)
    C2, delta, counts = mp_covering(a, b, eps)
    assert p.C2 == C2
    assert p.delta == pytest.approx(float(delta), rel=1e-15)
    assert list(p.counts) == counts


def test_grid_point_examples():
    assert grid_point(UNIT, 0.025, 0, 1) == pytest.approx(-0.9875, abs=1e-15)
    assert grid_point(UNIT, 0.025, 0, 80) == pytest.approx(0.9875, abs=1e-15)
    # the last point never passes the envelope
    env = math.exp(-3)
    assert grid_point(UNIT, 0.025, 3, 4) <= env
    with pytest.raises(ValueError):
        grid_point(UNIT, 0.025, 0, 0)
    with pytest.raises(ValueError):
        grid_point(UNIT, 0.025, 0, 81, 80)


def test_grid_covers_envelope_interval():
    # every x in [-env, env] is within delta / 2 of some grid point
    for a, b, eps in GRID[::5]:
        cls = DecayClass(a, b)
        p = covering_params(cls, eps)
        for t in range(min(p.C2 + 1, 4)):
            env = a * math.exp(-b * t)
            n = p.counts[t]
            slack = 4 * math.ulp(a)
            assert grid_point(cls, p.delta, t, 1) - p.delta / 2 <= -env + slack
            assert grid_point(cls, p.delta, t, n) + p.delta / 2 >= env - slack
            rng = SplitMix64(t)
            for i in [1, n - 1] + [1 + rng.randrange(n - 1) for _ in range(200)] if n > 1 else []:
                gap = grid_point(cls, p.delta, t, i + 1) - grid_point(cls, p.delta, t, i)
                assert 0 <= gap <= p.delta + slack


def test_quantize_fixed_point():
    p = covering_params(UNIT, 0.1)
    for digits in [(1, 1, 1, 1), (80, 30, 11, 4), (40, 15, 6, 2), (17, 3, 9, 1)]:
        k = covering_element_from_digits(p, UNIT, digits)
        idx = quantize(p, UNIT, k)
        assert tuple(d + 1 for d in idx.digits) == digits
        assert covering_element(p, UNIT, idx) == k


def test_quantize_tie_goes_to_smaller_index():
    p = covering_params(UNIT, 0.1)
    x = (grid_point(UNIT, p.delta, 0, 40) + grid_point(UNIT, p.delta, 0, 41)) / 2
    idx = quantize(p, UNIT, ImpulseResponse([x]))
    assert idx.digits[0] + 1 in (40, 41)
    # exact midpoint 0.0 between i=40 (-0.0125) and i=41 (0.0125)
    idx = quantize(p, UNIT, ImpulseResponse([0.0]))
    assert idx.digits[0] + 1 == 40


def test_quantize_rejects_nonmember():
    p = covering_params(UNIT, 0.1)
    with pytest.raises(ValueError):
        quantize(p, UNIT, ImpulseResponse([1.5]))


def test_slot_error_at_most_half_step():
    p = covering_params(UNIT, 0.1)
    rep = verify_cover(p, UNIT, 0.1, samples=1000, seed=0)
    assert rep.quantization_error_max <= p.delta / 2 * (1 + 1e-12)
    assert rep.ok and rep.worst_distortion <= 0.1


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.2, 3), st.floats(1e-3, 0.4), st.integers(0, 2**32))
def test_certified_distortion_bounds_hinf(a, b, r, seed):
    cls = DecayClass(a, b)
    eps = a * r
    p = covering_params(cls, eps)
    k = random_member(cls, p.C2 + 6, seed)
    k_hat = covering_element(p, cls, quantize(p, cls, k))
    d = certified_distortion(p, cls, k, k_hat)
    assert d <= eps * (1 + 1e-12)
    assert hinf_norm(k - k_hat, 1e-9).upper <= d + 1e-9


def test_tail_bound_value():
    assert tail_bound(UNIT, 3) == pytest.approx(math.exp(-4) / (1 - math.exp(-1)), rel=1e-15)
    assert tail_bound(UNIT, 3) == pytest.approx(0.0289749, abs=1e-7)
    with mpmath.workdps(30):
        direct = mpmath.nsum(lambda t: mpmath.exp(-t), [4, mpmath.inf])
    assert tail_bound(UNIT, 3) == pytest.approx(float(direct), rel=1e-14)


def test_tail_within_half_eps():
    for a, b, eps in GRID:
        cls = DecayClass(a, b)
        p = covering_params(cls, eps)
        assert tail_bound(cls, p.C2) <= eps / 2 * (1 + 1e-12)


def test_k_constants_unit():
    K = k_constants(UNIT)
    with mpmath.workdps(30):
        g = 1 / mpmath.log(2)
        K1 = mpmath.log(2 / (1 - mpmath.exp(-1)))
        K2 = -g / 2 * K1 + g / 2 + 2
        K3 = K1 + 1
        K4 = K2 + g / 2 * K3
        K5 = g * K3
        K6 = K3 * K2
    for got, want in zip(
        (K.K1, K.K2, K.K3, K.K4, K.K5, K.K6), (K1, K2, K3, K4, K5, K6)
    ):
        assert got == pytest.approx(float(want), rel=1e-14)
    assert (round(K.K1, 5), round(K.K2, 5), round(K.K3, 5)) == (1.15182, 1.89048, 2.15182)


def test_upper_bound_product_form():
    for a, b, eps in GRID:
        cls = DecayClass(a, b)
        K = k_constants(cls)
        C2 = covering_params(cls, eps).C2
        L = math.log(a / eps)
        g = 1 / math.log(2)
        product = (L / b + K.K3) * (g / 2 * L + g * math.log(C2 + 1) + K.K2)
        assert covering_upper_bound(cls, eps) == pytest.approx(product, rel=1e-12, abs=1e-12)
    assert covering_upper_bound(UNIT, 0.1) == pytest.approx(24.7284084, abs=1e-6)


def test_slot_count_bracket():
    # C2 = floor(L/b + K1), so x - 1 < C2 <= x and m = C2 + 1 lies in (x, x + 1]
    for a, b, eps in GRID:
        cls = DecayClass(a, b)
        K = k_constants(cls)
        C2 = covering_params(cls, eps).C2
        x = math.log(a / eps) / b + K.K1
        assert x - 1 - 1e-9 <= C2 <= x + 1e-9
    assert covering_params(UNIT, 0.1).C2 == 3
    x = math.log(10) + k_constants(UNIT).K1
    assert 2.45 < x - 1 <= 3 <= x < 3.46


@pytest.mark.parametrize("a,b,eps", GRID)
def test_bracketing(a, b, eps):
    cls = DecayClass(a, b)
    lp = packing_log2_cardinality(packing_params(cls, eps))
    lc = covering_log2_cardinality(covering_params(cls, eps))
    assert packing_lower_bound(cls, eps) <= lp <= lc <= covering_upper_bound(cls, eps)


def test_element_index_validation():
    p = covering_params(UNIT, 0.1)
    with pytest.raises(ValueError):
        covering_element(p, UNIT, MixedRadixIndex((0, 0, 0), (80, 30, 11)))
    with pytest.raises(ValueError):
        covering_element_from_digits(p, UNIT, (0, 1, 1, 1))
