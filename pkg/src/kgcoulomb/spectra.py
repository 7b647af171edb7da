"""Bound-state energies of the undeformed problem.

Square integrability of the closed-form wavefunction forces its
hypergeometric factor to terminate, i.e.

    1/2 - g eta / sqrt(1 - eta^2) + mu(g) + n = 0,  n = 0, 1, 2, ...

which solves in closed form to eta = N / sqrt(N^2 + g^2) with
N = n + 1/2 + mu(g). The root finder exists to machine-check that
derivation rather than trust it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import RootFindingError, SupercriticalCouplingError

__all__ = [
    "SpectrumLine",
    "quantization_residual",
    "energy_closed_form",
    "solve_quantization",
]

_EDGE = 1e-9  # stay off eta = 0 and eta = 1, where w degenerates/diverges


@dataclass(frozen=True)
class SpectrumLine:
    n: int
    z: int | None
    eta: float
    residual: float


def _real_mu(g: float) -> float:
    if g < 0:
        raise ValueError("coupling must be nonnegative")
    if g > 0.5:
        raise SupercriticalCouplingError(
            f"coupling g = {g} exceeds 1/2: sqrt(1/4 - g^2) is imaginary and "
            "the square-integrability condition has no real solution")
    return math.sqrt(0.25 - g * g)


def quantization_residual(g: float, eta: float, n: int) -> float:
    """1/2 - g eta/sqrt(1-eta^2) + mu(g) + n; zero exactly at a bound state."""
    mu = _real_mu(g)
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie strictly inside (0, 1)")
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    w = g * eta / math.sqrt((1.0 - eta) * (1.0 + eta))
    return 0.5 - w + mu + n


def energy_closed_form(g: float, n: int) -> float:
    """eta = N / sqrt(N^2 + g^2), N = n + 1/2 + mu(g)."""
    mu = _real_mu(g)
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    big_n = n + 0.5 + mu
    return big_n / math.sqrt(big_n * big_n + g * g)


def solve_quantization(g: float, n: int, z: int | None = None) -> SpectrumLine:
    """Root of the quantization residual in (0, 1), found independently
    of the closed form: bisection to a tight bracket, then Newton.

    The residual is strictly decreasing in eta (its derivative is
    -g / (1-eta^2)^(3/2)), so the root is unique when it exists.
    """
    lo, hi = _EDGE, 1.0 - _EDGE
    f_lo = quantization_residual(g, lo, n)
    f_hi = quantization_residual(g, hi, n)
    if not (f_lo > 0.0 > f_hi):
        raise RootFindingError(
            f"no sign change on ({lo}, {hi}): residuals ({f_lo:.3g}, {f_hi:.3g}); "
            "this signals a parameter bug, not a missing state")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if quantization_residual(g, mid, n) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    eta = 0.5 * (lo + hi)
    for _ in range(4):
        slope = -g / ((1.0 - eta) * (1.0 + eta)) ** 1.5
        step = quantization_residual(g, eta, n) / slope
        eta -= step
        if not 0.0 < eta < 1.0:
            raise RootFindingError("Newton polish left the physical interval")
        if abs(step) < 1e-16:
            break
    return SpectrumLine(n=n, z=z, eta=eta, residual=quantization_residual(g, eta, n))
