"""Exhaustive covering and packing numbers on small finite surrogates of C(a, b).

Every distance decision is made from a certified H-infinity enclosure: a
pair counts as "farther than eps" only if the lower end exceeds eps, and as
"within eps" only if the upper end is at most eps.  Undecided pairs are
re-evaluated with a tighter tolerance; if that still fails,
:class:`UncertainDistanceError` is raised instead of guessing.

The surrogate sets are finite, so their covering and packing numbers exist
trivially.  Nothing here bears on compactness of the full class.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .core import DecayClass, ImpulseResponse, envelope, is_member
from .norms import NormInterval, hinf_norm

__all__ = [
    "FiniteMetricSet",
    "SandwichReport",
    "UncertainDistanceError",
    "MAX_DISCRETE_POINTS",
    "MAX_EXACT_POINTS",
    "discretize_class",
    "greedy_maximal_packing",
    "exact_packing_number",
    "exact_covering_number",
    "sandwich_check",
    "default_eps_grid",
]

MAX_DISCRETE_POINTS = 10_000
MAX_EXACT_POINTS = 24
_TIGHTEST_TOL = 1e-15


class UncertainDistanceError(RuntimeError):
    """A distance enclosure straddles the threshold even at the tightest tolerance."""


@dataclass
class FiniteMetricSet:
    points: list[ImpulseResponse]
    lower: np.ndarray
    upper: np.ndarray
    tol: float = 1e-12

    @classmethod
    def from_points(cls, points, tol: float = 1e-12) -> "FiniteMetricSet":
        points = [p if isinstance(p, ImpulseResponse) else ImpulseResponse(p) for p in points]
        n = len(points)
        lower = np.zeros((n, n))
        upper = np.zeros((n, n))
        for i, j in itertools.combinations(range(n), 2):
            iv = hinf_norm(points[i] - points[j], tol)
            lower[i, j] = lower[j, i] = iv.lower
            upper[i, j] = upper[j, i] = iv.upper
        return cls(points, lower, upper, tol)

    def __len__(self) -> int:
        return len(self.points)

    def interval(self, i: int, j: int) -> NormInterval:
        return NormInterval(self.lower[i, j], self.upper[i, j])

    @property
    def diameter(self) -> float:
        return float(self.upper.max()) if len(self) else 0.0

    def _tighten(self, i: int, j: int, eps: float) -> NormInterval:
        iv = self.interval(i, j)
        tol = self.tol
        while iv.lower <= eps < iv.upper and tol > _TIGHTEST_TOL:
            tol = max(tol / 1000.0, _TIGHTEST_TOL)
            iv = hinf_norm(self.points[i] - self.points[j], tol)
        self.lower[i, j] = self.lower[j, i] = iv.lower
        self.upper[i, j] = self.upper[j, i] = iv.upper
        return iv

    def farther_than(self, i: int, j: int, eps: float) -> bool:
        """Certified ``rho(p_i, p_j) > eps``."""
        if i == j:
            return False
        iv = self.interval(i, j)
        if iv.lower <= eps < iv.upper:
            iv = self._tighten(i, j, eps)
        if iv.lower > eps:
            return True
        if iv.upper <= eps:
            return False
        raise UncertainDistanceError(f"rho(p{i}, p{j}) in [{iv.lower}, {iv.upper}] straddles {eps}")

    def within(self, i: int, j: int, eps: float) -> bool:
        """Certified ``rho(p_i, p_j) <= eps``."""
        return not self.farther_than(i, j, eps)


def discretize_class(cls: DecayClass, T: int, levels: int, tol: float = 1e-12) -> FiniteMetricSet:
    """All responses on ``0..T`` whose coefficients sit on ``levels`` equispaced values.

    Slot t uses ``env(t) (2 j / (levels - 1) - 1)`` for ``j = 0..levels-1``;
    ``levels = 1`` gives the single value 0.  Points are ordered
    lexicographically by level, slot 0 most significant.
    """
    if T < 0 or levels < 1:
        raise ValueError("need T >= 0 and levels >= 1")
    if levels ** (T + 1) > MAX_DISCRETE_POINTS:
        raise ValueError(
            f"levels**(T+1) = {levels ** (T + 1)} exceeds the limit of {MAX_DISCRETE_POINTS}"
        )
    values = []
    for t in range(T + 1):
        env = envelope(cls, t)
        if levels == 1:
            values.append([0.0])
        else:
            # env * (2j/(L-1) - 1) hits +-env exactly at the ends
            values.append([env * (2.0 * j / (levels - 1) - 1.0) for j in range(levels)])
    points = [ImpulseResponse(p) for p in itertools.product(*values)]
    assert all(is_member(cls, p) for p in points)
    return FiniteMetricSet.from_points(points, tol)


def greedy_maximal_packing(fms: FiniteMetricSet, eps: float) -> list[int]:
    """Scan points in order, keeping each one farther than eps from all kept.

    The result cannot be extended, so every point is within eps of a kept
    one; it is an eps-packing and an eps-covering at the same time.
    """
    chosen: list[int] = []
    for i in range(len(fms)):
        if all(fms.farther_than(i, j, eps) for j in chosen):
            chosen.append(i)
    return chosen


def _check_size(fms: FiniteMetricSet) -> None:
    if len(fms) > MAX_EXACT_POINTS:
        raise ValueError(f"exhaustive search limited to {MAX_EXACT_POINTS} points, got {len(fms)}")


def exact_packing_number(fms: FiniteMetricSet, eps: float) -> int:
    """Largest subset with all pairwise distances > eps (maximum clique)."""
    _check_size(fms)
    n = len(fms)
    if n == 0:
        return 0
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(
        (i, j) for i, j in itertools.combinations(range(n), 2) if fms.farther_than(i, j, eps)
    )
    clique, _ = nx.max_weight_clique(g, weight=None)
    return len(clique)


def exact_covering_number(fms: FiniteMetricSet, eps: float) -> int:
    """Smallest subset S with every point within eps of S (minimum dominating set).

    Branch and bound over bitmasks: pick an uncovered point and branch
    on which of its eps-neighbours covers it.
    """
    _check_size(fms)
    n = len(fms)
    if n == 0:
        return 0
    full = (1 << n) - 1
    ball = [0] * n
    for i in range(n):
        m = 1 << i
        for j in range(n):
            if j != i and fms.within(i, j, eps):
                m |= 1 << j
        ball[i] = m
    max_ball = max(bin(m).count("1") for m in ball)
    best = n

    def search(covered: int, used: int) -> None:
        nonlocal best
        if covered == full:
            best = min(best, used)
            return
        remaining = n - bin(covered).count("1")
        if used + math.ceil(remaining / max_ball) >= best:
            return
        u = (~covered & full).bit_length() - 1
        # neighbours of u are exactly the centres that can cover it
        cands = sorted(
            (v for v in range(n) if ball[u] >> v & 1),
            key=lambda v: -bin(ball[v] & ~covered).count("1"),
        )
        for v in cands:
            search(covered | ball[v], used + 1)

    search(0, 0)
    return best


@dataclass(frozen=True)
class SandwichReport:
    eps: float
    size: int
    M2eps: int
    Neps: int
    Meps: int

    @property
    def ok(self) -> bool:
        return self.M2eps <= self.Neps <= self.Meps


def sandwich_check(fms: FiniteMetricSet, eps: float) -> SandwichReport:
    """Exact ``M(2 eps) <= N(eps) <= M(eps)`` on a finite set."""
    _check_size(fms)
    return SandwichReport(
        eps,
        len(fms),
        exact_packing_number(fms, 2.0 * eps),
        exact_covering_number(fms, eps),
        exact_packing_number(fms, eps),
    )


# Fractions of the diameter; chosen off simple rationals so that neither eps
# nor 2 eps lands on a distance of the lattice-like surrogate sets.
_EPS_FRACTIONS = (0.031, 0.097, 0.163, 0.229, 0.311, 0.397, 0.443, 0.587, 0.719, 1.093)


def default_eps_grid(fms: FiniteMetricSet) -> list[float]:
    """Ten eps values spread over ``(0, 1.1 * diameter]`` (the raw fractions for a singleton)."""
    d = fms.diameter
    if d == 0.0:
        return list(_EPS_FRACTIONS)
    return [f * d for f in _EPS_FRACTIONS]
