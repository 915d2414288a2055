"""Cubic conformal maps, Richardson moments and the coefficient map.

A cubic map is f(z) = a1 z + a2 z^2 + a3 z^3 with a1 > 0 and, after
rotation normalization, a3 real and non-negative.  Its first three
Richardson moments are polynomial in the coefficients, and (M1, M2) are
conserved along a Hele-Shaw trajectory, which lets every later state be
written in closed form in terms of the leading coefficient a1 = tau.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateDegreeError, SingularParametrizationError

#: Floor on |tau^4 +- 3 m2| in the moment parametrization.
DENOMINATOR_FLOOR = 1e-12


@dataclass(frozen=True)
class CubicMap:
    """f(z) = a1 z + a2 z^2 + a3 z^3, normalized so a1 > 0 and a3 >= 0."""

    a1: float
    a2: complex
    a3: float

    def __post_init__(self):
        object.__setattr__(self, "a1", float(self.a1))
        object.__setattr__(self, "a2", complex(self.a2))
        object.__setattr__(self, "a3", float(self.a3))
        if not self.a1 > 0:
            raise ValueError(f"a1 must be positive, got {self.a1}")
        if self.a3 < 0:
            raise ValueError(f"a3 must be non-negative, got {self.a3}")

    @property
    def degree(self) -> int:
        if self.a3 > 0:
            return 3
        return 2 if self.a2 != 0 else 1

    def __call__(self, z):
        return z * (self.a1 + z * (self.a2 + z * self.a3))

    def derivative(self, z):
        return self.a1 + z * (2 * self.a2 + 3 * self.a3 * z)

    def second_derivative(self, z):
        return 2 * self.a2 + 6 * self.a3 * z

    def boundary(self, n: int) -> np.ndarray:
        """Image of n equally spaced points of the unit circle."""
        theta = 2 * np.pi * np.arange(n) / n
        return self(np.exp(1j * theta))

    def scaled(self) -> "CubicMap":
        """The map f / a1, which has the same coefficient-map image."""
        return CubicMap(1.0, self.a2 / self.a1, self.a3 / self.a1)


@dataclass(frozen=True)
class MomentData:
    m0: float
    m1: complex
    m2: float

    @property
    def p(self) -> float:
        return self.m1.real

    @property
    def q(self) -> float:
        return self.m1.imag


@dataclass(frozen=True)
class LambdaPoint:
    x1: float
    x2: float
    x3: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)


def normalize_rotation(a1: float, a2: complex, a3: complex) -> CubicMap:
    """Rotate f(z) -> e^{-i theta} f(e^{i theta} z) so that a3 becomes real and positive.

    The coefficient a_j picks up the factor e^{i (j-1) theta} with
    theta = -arg(a3) / 2; a1 and |a2| are unchanged.

    Raises DegenerateDegreeError if a3 == 0.
    """
    a3 = complex(a3)
    if a3 == 0:
        raise DegenerateDegreeError("a3 = 0: map has degree < 3")
    theta = -cmath.phase(a3) / 2
    rot = cmath.exp(1j * theta)
    return CubicMap(a1, complex(a2) * rot, abs(a3))


def moments(f: CubicMap) -> MomentData:
    """Richardson moments M0, M1, M2 of a cubic map, by the closed-form sums."""
    a1, a2, a3 = f.a1, f.a2, complex(f.a3)
    m0 = a1 * a1 + 2 * abs(a2) ** 2 + 3 * abs(a3) ** 2
    m1 = a1 * a1 * a2.conjugate() + 3 * a1 * a2 * a3.conjugate()
    m2 = (a1**3 * a3.conjugate()).real
    return MomentData(m0, complex(m1), m2)


def lambda_map(f: CubicMap) -> LambdaPoint:
    if f.a3 <= 0:
        raise DegenerateDegreeError("lambda_map needs a3 > 0")
    r = f.a2 / f.a1
    return LambdaPoint(r.real, r.imag, f.a3 / f.a1)


def lambda_from_moments(p: float, q: float, m2: float) -> LambdaPoint:
    """Coefficient-map image of the a1 = 1 map with moments (p + iq, m2)."""
    return LambdaPoint(p / (1 + 3 * m2), -q / (1 - 3 * m2), m2)


def coefficients_from_moments(p: float, q: float, m2: float, tau: float) -> CubicMap:
    """The cubic with a1 = tau and conserved moments M1 = p + iq, M2 = m2."""
    t2 = tau * tau
    t4 = t2 * t2
    d_plus = t4 + 3 * m2
    d_minus = t4 - 3 * m2
    if abs(d_plus) < DENOMINATOR_FLOOR or abs(d_minus) < DENOMINATOR_FLOOR:
        raise SingularParametrizationError(
            f"tau^4 = {t4!r} too close to +-3 m2 = {3 * m2!r}")
    # 0.0 - q rather than -q keeps q = 0 from producing a signed zero
    a2 = complex(p * t2 / d_plus, (0.0 - q) * t2 / d_minus)
    return CubicMap(tau, a2, m2 / (t2 * tau))


def from_lambda(x: LambdaPoint) -> CubicMap:
    """The a1 = 1 representative with the given coefficient-map image."""
    return CubicMap(1.0, complex(x.x1, x.x2), x.x3)

