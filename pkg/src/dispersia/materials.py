"""Static material properties and the coupling constants they induce.

The strength of the pairwise volume-element attraction between two media
is set entirely by the static Clausius-Mossotti factors

    beta(0)  = (3/4pi) (eps(0) - 1) / (eps(0) + 2)
    gamma(0) = (3/4pi) (mu(0)  - 1) / (mu(0)  + 2)

combined into the pair constants

    B12 = (23/4pi) [beta1 beta2 + gamma1 gamma2]          (real-space 1/r^7)
    A12 = 23/(240 (2pi)^3) [beta1 beta2 + gamma1 gamma2]  (Fourier-space)

A perfect metal is the exact limit eps(0) -> inf, mu(0) = 0, for which
B_mm = 1035/(256 pi^3) and A_mm = (1035/3840) (2pi)^-5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants as _const

FOUR_PI = 4.0 * math.pi

#: Exact metal-pair constants, kept as closed expressions.
B_METAL_METAL = 1035.0 / (256.0 * math.pi**3)
A_METAL_METAL = (1035.0 / 3840.0) / (2.0 * math.pi) ** 5


def beta0(epsilon0: float) -> float:
    """Electric Clausius-Mossotti factor (3/4pi)(eps-1)/(eps+2).

    ``math.inf`` is accepted as the perfect-metal marker and returns
    exactly 3/(4pi).
    """
    if math.isinf(epsilon0):
        return 3.0 / FOUR_PI
    if epsilon0 <= 0.0:
        raise ValueError(f"static permittivity must be positive, got {epsilon0}")
    return (3.0 / FOUR_PI) * (epsilon0 - 1.0) / (epsilon0 + 2.0)


def gamma0(mu0: float) -> float:
    """Magnetic Clausius-Mossotti factor (3/4pi)(mu-1)/(mu+2).

    mu(0) = 0 (perfect metal) gives exactly -3/(8pi); the sign only ever
    enters through the product gamma1*gamma2.
    """
    if math.isinf(mu0):
        return 3.0 / FOUR_PI
    if mu0 < 0.0:
        raise ValueError(f"static magnetic permittivity must be >= 0, got {mu0}")
    return (3.0 / FOUR_PI) * (mu0 - 1.0) / (mu0 + 2.0)


@dataclass(frozen=True)
class Material:
    """Homogeneous medium described by its static response.

    ``model`` is one of ``dielectric``, ``perfect-metal``, ``dilute-gas``.
    For a dilute gas the electric factor is the molecular one, N*alpha(0),
    and the magnetic factor vanishes.
    """

    epsilon0: float = 1.0
    mu0: float = 1.0
    model: str = "dielectric"
    number_density: float = 0.0
    alpha0: float = 0.0

    def __post_init__(self):
        if self.model not in ("dielectric", "perfect-metal", "dilute-gas"):
            raise ValueError(f"unknown material model {self.model!r}")
        if self.model == "dilute-gas":
            if self.number_density < 0.0 or self.alpha0 < 0.0:
                raise ValueError("dilute gas needs N >= 0 and alpha0 >= 0")
        else:
            # validate eagerly so invalid materials never circulate
            beta0(self.epsilon0)
            gamma0(self.mu0)

    @property
    def beta(self) -> float:
        if self.model == "dilute-gas":
            return self.number_density * self.alpha0
        return beta0(self.epsilon0)

    @property
    def gamma(self) -> float:
        if self.model == "dilute-gas":
            return 0.0
        return gamma0(self.mu0)


def perfect_metal() -> Material:
    """The exact eps(0) -> inf, mu(0) = 0 limit."""
    return Material(epsilon0=math.inf, mu0=0.0, model="perfect-metal")


def vacuum() -> Material:
    return Material(epsilon0=1.0, mu0=1.0)


def dilute_gas(number_density: float, alpha0: float) -> Material:
    """Gas of molecules with polarizability alpha0 at number density N."""
    if number_density < 0.0:
        raise ValueError(f"number density must be >= 0, got {number_density}")
    if alpha0 < 0.0:
        raise ValueError(f"polarizability must be >= 0, got {alpha0}")
    return Material(model="dilute-gas", number_density=number_density, alpha0=alpha0)


@dataclass(frozen=True)
class PairCoupling:
    """Dimensionless pair constants B12 (real space) and A12 (Fourier space)."""

    b12: float
    a12: float


def pair_coupling(m1: Material, m2: Material) -> PairCoupling:
    """Coupling constants for a body pair; symmetric in its arguments."""
    s = m1.beta * m2.beta + m1.gamma * m2.gamma
    b12 = (23.0 / FOUR_PI) * s
    a12 = 23.0 / (240.0 * (2.0 * math.pi) ** 3) * s
    return PairCoupling(b12=b12, a12=a12)


@dataclass(frozen=True)
class UnitSystem:
    """Unit convention for reported energies.

    ``natural`` reports energies in units of hbar*c / length-unit with the
    length unit itself dimensionless.  ``SI`` interprets lengths as
    ``length_unit`` meters and reports Joules; the conversion is the single
    factor hbar*c / length_unit with hbar and c from scipy.constants.
    """

    mode: str = "natural"
    length_unit: float = 1.0

    def __post_init__(self):
        if self.mode not in ("natural", "SI"):
            raise ValueError(f"unknown unit mode {self.mode!r}")
        if self.length_unit <= 0.0:
            raise ValueError("length unit must be positive")

    @property
    def hbar_c(self) -> float:
        """Energy scale multiplying every dimensionless hbar*c/length energy."""
        if self.mode == "natural":
            return 1.0
        return _const.hbar * _const.c / self.length_unit
