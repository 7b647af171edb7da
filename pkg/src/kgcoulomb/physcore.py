"""Physical parameters and the handful of closed-form quantities derived
from them.

Everything downstream works in dimensionless momentum units: u = p/(mc),
energies as the ratio eta = E/(mc^2), and deformation strengths
theta = beta (mc)^2, theta' = beta' (mc)^2 taken from the modified
commutator [X, P] = i hbar (1 + beta P^2 + beta' X-ordered terms).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

FINE_STRUCTURE_ALPHA = 1.0 / 137.035999


@dataclass(frozen=True)
class DeformationParams:
    """Minimal-length deformation strengths in dimensionless form.

    ``gamma`` is accepted for interface completeness but must be zero;
    the momentum-space representation used throughout fixes that gauge.
    """

    theta: float
    theta_prime: float
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if self.theta < 0 or self.theta_prime < 0:
            raise ValueError("deformation strengths must be nonnegative")
        if self.gamma != 0.0:
            raise ValueError("gamma must be 0; other gauges are not supported")

    @property
    def total(self) -> float:
        """theta + theta', the combination controlling large-u behavior."""
        return self.theta + self.theta_prime

    @property
    def omega1(self) -> float:
        """2*theta/(theta + theta')."""
        if self.total == 0.0:
            raise ValueError("omega1 undefined for an undeformed parameter set")
        return 2.0 * self.theta / self.total

    @property
    def omega2(self) -> float:
        """(theta + theta')/2."""
        return self.total / 2.0


def minimal_length(params: DeformationParams, dims: int = 3) -> float:
    """Smallest resolvable length implied by the deformed commutator,
    in units of hbar/(mc).

    For ``dims`` spatial dimensions the uncertainty relation bottoms out
    at sqrt(dims*theta + theta').
    """
    if dims < 1:
        raise ValueError("dims must be a positive integer")
    return math.sqrt(dims * params.theta + params.theta_prime)


def mu_of_coupling(g: float) -> complex:
    """sqrt(1/4 - g^2) with the branch that is positive imaginary past
    the critical coupling g = 1/2."""
    if g < 0:
        raise ValueError("coupling must be nonnegative")
    return cmath.sqrt(0.25 - g * g)


def critical_Z(alpha: float) -> int:
    """Largest integer charge with Z*alpha strictly below 1/2."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    z = math.floor(0.5 / alpha)
    while z > 0 and z * alpha >= 0.5:
        z -= 1
    while (z + 1) * alpha < 0.5:
        z += 1
    return max(z, 0)


@dataclass(frozen=True)
class CoulombSystem:
    """A point charge Z seen by a spin-0 particle, at a trial energy eta.

    ``eta`` is E/(mc^2); bound states live in (0, 1), and eta = 1 is the
    threshold. The derived attributes are the combinations the momentum
    space equations are written in.
    """

    z: int
    alpha: float = FINE_STRUCTURE_ALPHA
    eta: float = 0.5

    def __post_init__(self) -> None:
        if int(self.z) != self.z or self.z < 1:
            raise ValueError("z must be a positive integer")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must lie in (0, 1]")

    @property
    def g(self) -> float:
        """Coulomb coupling Z*alpha."""
        return self.z * self.alpha

    @property
    def k(self) -> float:
        """g^2, the square of the coupling."""
        return self.g * self.g

    @property
    def eps_tilde(self) -> float:
        """sqrt(1 - eta^2), the momentum-space inverse length scale."""
        return math.sqrt(max(0.0, (1.0 - self.eta) * (1.0 + self.eta)))

    @property
    def mu(self) -> complex:
        """sqrt(1/4 - g^2); imaginary once the coupling is supercritical."""
        return mu_of_coupling(self.g)

    @property
    def omega_tilde(self) -> float:
        """g*eta, the energy-weighted coupling."""
        return self.g * self.eta

    @property
    def w(self) -> float:
        """g*eta/sqrt(1 - eta^2); diverges at threshold."""
        if self.eta >= 1.0:
            raise ValueError("w undefined at threshold eta = 1")
        return self.omega_tilde / self.eps_tilde

    @property
    def supercritical(self) -> bool:
        return self.g > 0.5
