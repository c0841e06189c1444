"""Bracketing the metric entropy of C(a, b) between the two constructions.

The true metric entropy ``log2 N(eps)`` is not computed; what is reported is
the constructive bracket

    closed-form lower <= log2 |packing(2 eps)| <= log2 N(eps) <= log2 |covering(eps)| <= closed-form upper

and its comparison with the leading term ``gamma/(2b) ln^2(a/eps)``.  No
constants are guessed for lower-order terms; only the explicit closed forms
enter the bracket.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

from .core import GAMMA, DecayClass
from .covering import covering_log2_cardinality, covering_params, covering_upper_bound
from .packing import packing_lower_bound, packing_log2_cardinality, packing_params

__all__ = [
    "EntropyReport",
    "BigOReport",
    "RATE_FACTOR",
    "UNCORRECTED_RATE_FACTOR",
    "gamma_const",
    "rate_constant",
    "asymptotic_rate",
    "entropy_report",
    "entropy_sweep",
    "log_sweep",
    "big_o_remainder_check",
]


def gamma_const() -> float:
    """``log2(e)``."""
    return GAMMA


# Entropy ~ FACTOR / b * ln^2(a/eps).  The older literature value 1/b is wrong
# by the factor 2 ln 2 ~ 1.386; it is kept only to compare quoted figures.
RATE_FACTOR = GAMMA / 2.0
UNCORRECTED_RATE_FACTOR = 1.0


def rate_constant(b: float) -> float:
    """Leading coefficient ``gamma / (2b)`` of ``ln^2(a/eps)`` in the entropy."""
    return RATE_FACTOR / b


def asymptotic_rate(cls: DecayClass, eps: float) -> float:
    eps = cls.check_eps(eps)
    L = math.log(cls.a / eps)
    return rate_constant(cls.b) * L * L


@dataclass(frozen=True)
class EntropyReport:
    eps: float
    log2_packing: float
    log2_covering: float
    closed_form_lower: float
    closed_form_upper: float
    asymptotic: float
    ratio_lower: float
    ratio_upper: float
    C1: int
    C2: int

    @property
    def ordered(self) -> bool:
        return (
            self.closed_form_lower <= self.log2_packing
            <= self.log2_covering
            <= self.closed_form_upper
        )

    def row(self) -> dict:
        return asdict(self)


def entropy_report(cls: DecayClass, eps: float, tol: float = 0.0) -> EntropyReport:
    """Evaluate both constructions and both closed forms at ``eps``.

    ``tol`` is accepted for interface symmetry with the norm routines; all
    quantities here are closed-form, so it is unused.
    """
    eps = cls.check_eps(eps)
    pp = packing_params(cls, eps)
    cp = covering_params(cls, eps)
    lp = packing_log2_cardinality(pp)
    lc = covering_log2_cardinality(cp)
    rate = asymptotic_rate(cls, eps)
    return EntropyReport(
        eps=eps,
        log2_packing=lp,
        log2_covering=lc,
        closed_form_lower=packing_lower_bound(cls, eps),
        closed_form_upper=covering_upper_bound(cls, eps),
        asymptotic=rate,
        ratio_lower=lp / rate,
        ratio_upper=lc / rate,
        C1=pp.C1,
        C2=cp.C2,
    )


def log_sweep(start: float, stop: float, points: int) -> list[float]:
    """``points`` log-spaced values from ``start`` to ``stop`` inclusive."""
    if points < 1:
        raise ValueError("points must be positive")
    if start <= 0 or stop <= 0:
        raise ValueError("sweep endpoints must be positive")
    if points == 1:
        return [float(start)]
    la, lb = math.log10(start), math.log10(stop)
    return [10.0 ** (la + (lb - la) * i / (points - 1)) for i in range(points)]


def entropy_sweep(cls: DecayClass, eps_values: Sequence[float]) -> list[EntropyReport]:
    """Reports sorted by decreasing eps."""
    return [entropy_report(cls, e) for e in sorted(eps_values, reverse=True)]


@dataclass(frozen=True)
class BigOReport:
    eps: tuple[float, ...]
    remainders: tuple[float, ...]
    scale: tuple[float, ...]
    constants: tuple[float, ...]
    fitted_C: float
    tail_spread: float
    ok: bool


def big_o_remainder_check(cls: DecayClass, sweep: Sequence[float]) -> BigOReport:
    """Fit ``r(eps) <= C ln(1/eps) ln ln(1/eps)`` across a sweep.

    ``r(eps)`` is the larger deviation of the two constructive counts from the
    leading term.  Each point yields ``c_i = r / (ln(1/eps) ln ln(1/eps))``;
    the fitted constant is ``max c_i``.  The fit is accepted when every point
    has a positive scale (``eps < 1/e``) and the ``c_i`` over the tail (the
    smaller half of the eps values) stay within a factor 2 of each other.
    """
    if not sweep:
        raise ValueError("sweep must be nonempty")
    eps_sorted = sorted((cls.check_eps(e) for e in sweep), reverse=True)
    rems, scales, consts = [], [], []
    for e in eps_sorted:
        rep = entropy_report(cls, e)
        r = max(abs(rep.log2_covering - rep.asymptotic), abs(rep.log2_packing - rep.asymptotic))
        inv = math.log(1.0 / e)
        s = inv * math.log(inv) if inv > 1.0 else 0.0
        rems.append(r)
        scales.append(s)
        consts.append(r / s if s > 0 else math.inf)
    tail = consts[len(consts) // 2 :]
    finite = all(math.isfinite(c) for c in consts)
    spread = max(tail) / min(tail) if finite and min(tail) > 0 else math.inf
    fitted = max(consts)
    return BigOReport(
        eps=tuple(eps_sorted),
        remainders=tuple(rems),
        scale=tuple(scales),
        constants=tuple(consts),
        fitted_C=fitted,
        tail_spread=spread,
        ok=finite and spread <= 2.0,
    )
