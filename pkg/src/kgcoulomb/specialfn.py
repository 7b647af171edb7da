"""Gauss hypergeometric and Heun machinery.

``hyp2f1`` is a direct series implementation with a Pfaff-transformed
fallback, which together cover |z| < 1 and Re z < 1/2. Terminating
series are detected first and summed exactly, domain checks skipped,
since polynomial cases stay valid everywhere.

The Heun side stores the parameter block of

    H'' + (c/xi + d/(xi - xi0) + e/(xi - 1)) H'
        + (a b xi + q) / (xi (xi - 1) (xi - xi0)) H = 0

and evaluates the local solution analytic at xi = 0 (normalized to
H(0) = 1) by Frobenius expansion, continued by stepped Taylor
re-expansion when the target lies past the first disk of convergence.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import fuchsian
from .errors import ConvergenceError, OutOfDomainError, ParameterPoleError
from .physcore import CoulombSystem

__all__ = [
    "hyp2f1",
    "hyp2f1_with_derivatives",
    "hypergeometric_ode",
    "HeunParams",
    "heun_ode",
    "heun_series_coefficients",
    "heun_local",
    "psi_ordinary",
    "psi_ordinary_with_derivative",
]

_MAX_TERMS = 10_000


def _near_nonpositive_int(x: complex, tol: float = 1e-9) -> int | None:
    """Round x to a nonpositive integer when it is within tol of one.

    The tolerance is generous on purpose: quantized energies computed in
    floating point put the terminating parameter within ~1e-11 of the
    exact integer, and missing the termination throws evaluation into a
    divergent-argument branch.
    """
    if abs(x.imag) > tol:
        return None
    r = round(x.real)
    if r > 0 or abs(x.real - r) > tol:
        return None
    return int(r)


def _series_2f1(a: complex, b: complex, c: complex, z: complex,
                n_cap: int | None, tol: float) -> complex:
    """Plain power series; n_cap forces termination for polynomial cases."""
    term = 1.0 + 0j
    total = term
    small_streak = 0
    limit = n_cap if n_cap is not None else _MAX_TERMS
    for n in range(limit):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        if n_cap is None:
            if abs(term) <= tol * max(abs(total), 1e-300):
                small_streak += 1
                if small_streak >= 2:
                    return total
            else:
                small_streak = 0
    if n_cap is not None:
        return total
    raise ConvergenceError(
        f"hypergeometric series did not settle in {_MAX_TERMS} terms at z = {z}")


def hyp2f1(a: complex, b: complex, c: complex, z: complex,
           tol: float = 1e-15) -> complex:
    """Gauss 2F1(a, b; c; z).

    Terminating series (a or b a nonpositive integer) are summed exactly
    for any z. Otherwise the direct series covers |z| < 1 and the Pfaff
    transformation covers |z/(z-1)| < 1; whichever argument is smaller
    is used. Raises ParameterPoleError when c is a nonpositive integer
    and OutOfDomainError outside both regions.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if _near_nonpositive_int(c) is not None:
        raise ParameterPoleError(f"2F1 pole: c = {c} is a nonpositive integer")

    stops = [-n for x in (a, b) if (n := _near_nonpositive_int(x)) is not None]
    if stops:
        return _series_2f1(a, b, c, z, min(stops) + 1, tol)

    if z == 1:
        raise OutOfDomainError("2F1 evaluation at z = 1 is not supported")
    w = z / (z - 1.0)
    if abs(z) < 1.0 and abs(z) <= abs(w):
        return _series_2f1(a, b, c, z, None, tol)
    if abs(w) < 1.0:
        return (1.0 - z) ** (-a) * _series_2f1(a, c - b, c, w, None, tol)
    raise OutOfDomainError(
        f"z = {z} lies outside |z| < 1 and |z/(z-1)| < 1; no continuation path")


def hyp2f1_with_derivatives(a: complex, b: complex, c: complex,
                            z: complex) -> tuple[complex, complex, complex]:
    """(F, dF/dz, d2F/dz2).

    Terminating series are differentiated term by term (the parameter
    shift would leave the polynomial family and lose the everywhere
    convergence); otherwise the contiguous shift is used.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    stops = [-n for x in (a, b) if (n := _near_nonpositive_int(x)) is not None]
    if stops:
        coeff = 1.0 + 0j
        f0 = f1 = f2 = 0j
        for k in range(min(stops) + 1):
            zp = z ** (k - 2) if k >= 2 else 0j
            f2 += k * (k - 1) * coeff * zp
            f1 += k * coeff * (z ** (k - 1) if k >= 1 else 0j)
            f0 += coeff * z ** k
            coeff *= (a + k) * (b + k) / ((c + k) * (k + 1.0))
        return f0, f1, f2
    f0 = hyp2f1(a, b, c, z)
    f1 = a * b / c * hyp2f1(a + 1, b + 1, c + 1, z)
    f2 = a * (a + 1) * b * (b + 1) / (c * (c + 1)) * hyp2f1(a + 2, b + 2, c + 2, z)
    return f0, f1, f2


def hypergeometric_ode(a: complex, b: complex, c: complex) -> fuchsian.RationalCoeffODE:
    """z(1-z) F'' + (c - (a+b+1) z) F' - a b F = 0 in normalized form."""
    den = (0j, 1 + 0j, -1 + 0j)  # z - z^2
    return fuchsian.RationalCoeffODE(
        p1_num=(c, -(a + b + 1.0)),
        p1_den=den,
        p0_num=(-a * b,),
        p0_den=den,
        label="hypergeometric",
    )


@dataclass(frozen=True)
class HeunParams:
    """Parameter block (xi0, q, a, b, c, d, e) of the general Heun equation
    with singular points {0, xi0, 1, infinity}.

    The Fuchsian constraint a + b + 1 = c + d + e is checked on
    construction, as is xi0 staying away from the other finite points.
    """

    xi0: complex
    q: complex
    a: complex
    b: complex
    c: complex
    d: complex
    e: complex

    def __post_init__(self) -> None:
        scale = max(1.0, abs(self.a), abs(self.b), abs(self.c), abs(self.d), abs(self.e))
        gap = self.a + self.b + 1.0 - (self.c + self.d + self.e)
        if abs(gap) > 1e-12 * scale:
            raise ValueError(
                f"parameters violate the Fuchsian constraint: a+b+1-(c+d+e) = {gap}")
        if abs(self.xi0) < 1e-12 or abs(self.xi0 - 1.0) < 1e-12:
            raise ValueError("xi0 must be distinct from the singular points 0 and 1")

    @property
    def fuchsian_residual(self) -> float:
        return abs(self.a + self.b + 1.0 - (self.c + self.d + self.e))


def heun_ode(params: HeunParams) -> fuchsian.RationalCoeffODE:
    """The general Heun equation as a RationalCoeffODE in xi."""
    p = params
    # denominator xi (xi - 1) (xi - xi0), expanded
    den = (0j, p.xi0, -(1.0 + p.xi0), 1 + 0j)
    # numerator of p1: c (xi-1)(xi-xi0) + d xi (xi-1) + e xi (xi-xi0)
    num = [0j, 0j, 0j]
    num[0] += p.c * p.xi0
    num[1] += -p.c * (1.0 + p.xi0) + p.d * (-1.0) + p.e * (-p.xi0)
    num[2] += p.c + p.d + p.e
    return fuchsian.RationalCoeffODE(
        p1_num=tuple(num),
        p1_den=den,
        p0_num=(p.q, p.a * p.b),
        p0_den=den,
        label="heun",
    )


def heun_series_coefficients(params: HeunParams, n: int) -> list[complex]:
    """First n+1 coefficients of the solution analytic at xi = 0, H(0) = 1.

    Independent of the Frobenius engine: this is the classical
    three-term recurrence written out explicitly, useful as a cross
    check of the generic banded recurrence.
    """
    p = params
    if _near_nonpositive_int(p.c) is not None:
        raise ParameterPoleError(
            f"local solution at 0 undefined: c = {p.c} makes the recurrence pivot vanish")
    h = [1 + 0j]
    prev2 = 0j
    for m in range(1, n + 1):
        prev1 = h[m - 1]
        rise = ((1.0 + p.xi0) * (m - 1.0) * (m - 2.0)
                + (p.c * (1.0 + p.xi0) + p.d + p.e * p.xi0) * (m - 1.0)
                - p.q)
        fall = ((m - 2.0) * (m - 3.0)
                + (p.a + p.b + 1.0) * (m - 2.0)
                + p.a * p.b)
        h.append((rise * prev1 - fall * prev2) / (p.xi0 * m * (m - 1.0 + p.c)))
        prev2 = prev1
    return h


def _march_to(ode: fuchsian.RationalCoeffODE, start: fuchsian.FrobeniusSolution,
              target: complex, order: int) -> tuple[complex, complex]:
    """(value, derivative) at target, marching by Taylor re-expansion.

    The path is the straight segment from the start expansion point.
    Each local series is trusted to half its own radius (the radius
    already measures the distance to the nearest singular point), and
    each hop advances 0.4 of it.
    """
    center = complex(start.expansion_point)
    sings = [s.location for s in fuchsian.singular_points(ode)
             if s.location is not fuchsian.INFINITY]
    if min((abs(target - s) for s in sings), default=math.inf) < 1e-9:
        raise OutOfDomainError(f"target {target} sits on a singular point")

    current = start
    for _ in range(200):
        remaining = target - center
        if remaining == 0:
            # only reachable for exponent-0 series, whose leading
            # coefficients are the value and derivative at the center
            c = current.coefficients
            return c[0], (c[1] if len(c) > 1 else 0j)
        if abs(remaining) <= 0.5 * current.radius:
            w, dw, _ = fuchsian.evaluate_with_derivatives(current, target)
            return w, dw
        step = 0.4 * current.radius
        nxt = center + remaining / abs(remaining) * step
        w, dw, _ = fuchsian.evaluate_with_derivatives(current, nxt)
        current = fuchsian.taylor_series(ode, nxt, w, dw, order=order)
        center = nxt
    raise ConvergenceError(
        f"analytic continuation toward {target} did not converge in 200 steps "
        "(target too close to a singular point?)")


def heun_local(params: HeunParams, xi: complex, order: int = 64) -> complex:
    """The local Heun solution analytic at xi = 0 with H(0) = 1.

    Inside half the first radius of convergence this is a single
    Frobenius sum; beyond it the solution is carried to xi by stepped
    Taylor re-expansion along the straight path, stopping short of any
    singular point.
    """
    xi = complex(xi)
    ode = heun_ode(params)
    series = fuchsian.frobenius_series(ode, 0j, 0j, order=order)
    if abs(xi) <= 0.5 * series.radius:
        return fuchsian.evaluate(series, xi).value
    value, _ = _march_to(ode, series, xi, order)
    return value


# ---------------------------------------------------------------------------
# the closed-form bound-state wavefunction of the undeformed problem
# ---------------------------------------------------------------------------


def _psi_ordinary_pieces(system: CoulombSystem, u: float):
    mu = system.mu
    et = system.eps_tilde
    base = 1.0 + 1j * u / et
    zarg = 2.0 / base
    a = 1.5 + mu
    b = 0.5 - system.w + mu
    c = 2.0 * mu + 1.0
    return mu, et, base, zarg, a, b, c


def psi_ordinary(system: CoulombSystem, u: float) -> complex:
    """Momentum-space bound-state solution of the undeformed problem,

        psi(u) = u^-1 (1 + i u / eps_tilde)^(-3/2 - mu)
                 * 2F1(3/2 + mu, 1/2 - w + mu; 2 mu + 1; 2/(1 + i u/eps_tilde)),

    with overall normalization fixed to 1. At a quantized energy the
    hypergeometric factor terminates and the formula is valid for all
    u > 0; off quantization it needs u > sqrt(3) * eps_tilde, where the
    argument enters a convergence region.
    """
    if u <= 0:
        raise OutOfDomainError("psi_ordinary needs u > 0")
    mu, _, base, zarg, a, b, c = _psi_ordinary_pieces(system, u)
    return (1.0 / u) * base ** (-1.5 - mu) * hyp2f1(a, b, c, zarg)


def psi_ordinary_with_derivative(system: CoulombSystem, u: float) -> tuple[complex, complex]:
    """(psi, dpsi/du), the derivative taken analytically through both
    the prefactor and the hypergeometric argument."""
    if u <= 0:
        raise OutOfDomainError("psi_ordinary needs u > 0")
    mu, et, base, zarg, a, b, c = _psi_ordinary_pieces(system, u)
    f0, f1, _ = hyp2f1_with_derivatives(a, b, c, zarg)
    power = base ** (-1.5 - mu)
    psi = (1.0 / u) * power * f0
    dbase = 1j / et
    dzarg = -2.0 / (base * base) * dbase
    dpsi = (-1.0 / (u * u)) * power * f0 \
        + (1.0 / u) * (-1.5 - mu) * power / base * dbase * f0 \
        + (1.0 / u) * power * f1 * dzarg
    return psi, dpsi
