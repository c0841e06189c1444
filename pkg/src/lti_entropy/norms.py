"""Sequence norms, transfer-function evaluation and the H-infinity metric.

Transfer functions use positive powers of z, ``K(z) = sum_t k[t] z**t`` on
the closed unit disk.  Hardy norms are defined for Z-transforms of bounded
one-sided sequences; every response handled here has finite support, so
``K`` is a polynomial and boundary values need no limiting argument.

For a polynomial the supremum of ``|K|`` over the open disk equals its
maximum over the unit circle (maximum modulus principle), so
:func:`hinf_norm` works on the circle only.  Two certified grid bounds are
combined.  First order: ``theta -> |K(e^{i theta})|`` is Lipschitz with
constant ``Lambda = sum_t t |k[t]|``, so the true maximum exceeds the best of
a uniform grid with spacing ``h`` by at most ``h Lambda / 2``.  Second order:
``g = |K|^2`` is a trigonometric polynomial with coefficients given by the
autocorrelation ``r_s`` of ``k``, so ``|g''| <= M = sum_s s^2 |r_s|``; since
``g' = 0`` at the maximum, ``max g <= (grid max of g) + M h^2 / 8``.  The
second bound shrinks quadratically in ``h`` and is what makes tight
tolerances reachable.

Once the uniform grid has ``max(1024, 16 len(k))`` points the search turns
local. The nearest grid point to the maximiser sits within ``h / 2`` of it,
so its ``g`` value is at least ``max g - M h^2 / 8``; any cell whose
endpoints both fall below the current best minus that margin cannot hold the
maximiser and is dropped. Surviving cells are halved, which keeps the bound
valid at the finer spacing. The enclosure is exact up to floating-point
rounding, far below any tolerance used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ImpulseResponse, Signal, SplitMix64, convolve

__all__ = [
    "NormInterval",
    "HinfToleranceError",
    "l1_norm",
    "l2_norm",
    "zeval",
    "h2_norm",
    "h2_norm_radial",
    "hinf_norm",
    "rho",
    "opnorm_lower",
    "DEFAULT_MAX_GRID",
]

DEFAULT_MAX_GRID = 2**40
_MIN_GRID = 64
_UNIFORM_GRID = 1024


class HinfToleranceError(RuntimeError):
    """Requested enclosure width not reached within the grid cap."""


@dataclass(frozen=True)
class NormInterval:
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError("interval bounds must be finite")
        if self.lower < 0 or self.lower > self.upper:
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __contains__(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def l1_norm(k: ImpulseResponse) -> float:
    return math.fsum(abs(c) for c in k.coeffs)


def l2_norm(k: ImpulseResponse) -> float:
    return math.sqrt(math.fsum(c * c for c in k.coeffs))


def zeval(k: ImpulseResponse, z: complex) -> complex:
    """Evaluate ``sum_t k[t] z**t`` by Horner's scheme for ``|z| <= 1``."""
    z = complex(z)
    if abs(z) > 1.0:
        raise ValueError(f"|z| must be <= 1, got |z| = {abs(z)!r}")
    acc = 0j
    for c in reversed(k.coeffs):
        acc = acc * z + c
    return acc


def h2_norm(k: ImpulseResponse) -> float:
    """H2 norm of the transfer function; equals the l2 norm of ``k``."""
    return l2_norm(k)


def h2_norm_radial(k: ImpulseResponse, r: float, n_theta: int) -> float:
    """Trapezoid-rule value of ``sqrt(1/(2 pi) * int |K(r e^{i theta})|^2 dtheta)``.

    Evaluates ``K`` directly on ``n_theta`` equispaced points of the circle of
    radius ``r``; used only to check the isometry numerically.
    """
    if not 0.0 < r <= 1.0:
        raise ValueError("r must lie in (0, 1]")
    if n_theta < 1:
        raise ValueError("n_theta must be positive")
    if len(k) == 0:
        return 0.0
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    z = r * np.exp(1j * theta)
    values = np.polynomial.polynomial.polyval(z, k.as_array())
    return float(np.sqrt(np.mean(np.abs(values) ** 2)))


def hinf_norm(
    k: ImpulseResponse, tol: float = 1e-9, max_grid: int = DEFAULT_MAX_GRID
) -> NormInterval:
    """Certified enclosure ``[lo, hi]`` of ``sup_{|z|<1} |K(z)|`` with width <= tol.

    The uniform grid starts at a power of two of at least ``max(64, 4
    len(k))`` points and doubles up to ``max(1024, 16 len(k))``; after that
    only cells that may hold the maximiser are halved (see the module
    docstring). ``hi`` is also capped by the l1 norm. ``max_grid`` limits
    the effective resolution ``2 pi / h``; :class:`HinfToleranceError` is
    raised when it would be exceeded.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    coeffs = k.as_array()
    if coeffs.size == 0:
        return NormInterval(0.0, 0.0)
    l1 = l1_norm(k)
    lipschitz = math.fsum(t * abs(c) for t, c in enumerate(k.coeffs))
    if lipschitz == 0.0:
        # constant polynomial: |K| = |k[0]| everywhere
        return NormInterval(abs(k.coeffs[0]), abs(k.coeffs[0]))

    r = np.correlate(coeffs, coeffs, mode="full")
    s = np.arange(-(coeffs.size - 1), coeffs.size)
    curvature = math.fsum(np.abs(r) * s.astype(float) ** 2)

    def enclosure(gmax: float, h: float, uniform: bool) -> tuple[float, float]:
        lo = min(math.sqrt(gmax), l1)
        hi = min(math.sqrt(gmax + curvature * h * h / 8.0), l1)
        if uniform:
            hi = min(hi, lo + h * lipschitz / 2.0)
        return lo, max(hi, lo)

    n_grid = _MIN_GRID
    while n_grid < 4 * coeffs.size:
        n_grid *= 2
    while True:
        g = np.abs(np.fft.fft(coeffs, n=n_grid)) ** 2
        gmax = float(g.max())
        h = 2.0 * math.pi / n_grid
        lo, hi = enclosure(gmax, h, True)
        if hi - lo <= tol:
            return NormInterval(lo, hi)
        if 2 * n_grid > max_grid:
            raise HinfToleranceError(
                f"width {hi - lo:.3g} > tol {tol:.3g} at the grid cap of {max_grid} points"
            )
        if n_grid >= max(_UNIFORM_GRID, 16 * coeffs.size):
            break
        n_grid *= 2

    # local phase.  fft index j holds K(e^{-i j h}), so cell j spans
    # [-(j+1) h, -j h] with g[j+1] on the left and g[j] on the right.
    poly = coeffs[::-1]
    left = -h * np.arange(1, n_grid + 1)
    g_left = np.roll(g, -1)
    g_right = g
    resolution = n_grid
    slack = 8.0 * np.finfo(float).eps * (1.0 + gmax)
    while True:
        margin = curvature * h * h / 8.0
        keep = np.maximum(g_left, g_right) >= gmax - margin - slack
        left, g_left, g_right = left[keep], g_left[keep], g_right[keep]
        mid = left + h / 2.0
        g_mid = np.abs(np.polyval(poly, np.exp(1j * mid))) ** 2
        gmax = max(gmax, float(g_mid.max()))
        left = np.concatenate([left, mid])
        g_left, g_right = np.concatenate([g_left, g_mid]), np.concatenate([g_mid, g_right])
        h /= 2.0
        resolution *= 2
        lo, hi = enclosure(gmax, h, False)
        if hi - lo <= tol:
            return NormInterval(lo, hi)
        if 2 * resolution > max_grid:
            raise HinfToleranceError(
                f"width {hi - lo:.3g} > tol {tol:.3g} at the resolution cap of {max_grid} points"
            )


def rho(
    k: ImpulseResponse, k2: ImpulseResponse, tol: float = 1e-9, max_grid: int = DEFAULT_MAX_GRID
) -> NormInterval:
    """Enclosure of the H-infinity distance between two systems."""
    return hinf_norm(k - k2, tol, max_grid)


def opnorm_lower(
    k: ImpulseResponse,
    k2: ImpulseResponse,
    trials: int,
    seed: int,
    length: int | None = None,
) -> float:
    """Lower bound on ``sup_{||x||_2 = 1} ||(k - k2) * x||_2`` by sampling.

    Tries the unit impulse plus ``trials`` random unit-norm inputs of
    ``length`` samples (default ``4 * len(k - k2)``, at least 8) with entries
    drawn uniformly from [-1, 1].
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    diff = k - k2
    if len(diff) == 0:
        return 0.0
    best = l2_norm(diff)  # x = unit impulse
    n = length if length is not None else max(8, 4 * len(diff))
    rng = SplitMix64(seed)
    for _ in range(trials):
        x = np.array([rng.uniform(-1.0, 1.0) for _ in range(n)])
        norm = float(np.linalg.norm(x))
        if norm == 0.0:
            continue
        y = convolve(diff, Signal(x / norm))
        best = max(best, float(np.linalg.norm(y.as_array())))
    return best
