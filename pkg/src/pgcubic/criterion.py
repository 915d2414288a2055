"""Global-existence criterion and the C1/C2/C3 classifier.

Along a trajectory with conserved moments (p + iq, m2) the coefficient
map image stays locally univalent at conformal radius tau iff

    h(tau) = p^2 tau^10 / (tau^4 + 3 m2)^4 + q^2 tau^10 / (tau^4 - 3 m2)^4 < 1/4,

so a cubic gives a global solution iff sup_{tau >= 1} h < 1/4.  In the
(p^2, q^2) plane the boundary of that set is the envelope of the lines
h(tau) = 1/4, parametrized by (g1(s, tau), g2(s, tau)) with s = m2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ._numerics import bisect, golden_max
from .exceptions import ConfigurationError, DomainError, NumericalError
from .poly_core import CubicMap, LambdaPoint, lambda_map, moments
from .region import (BOUNDARY_BAND, DEFAULT_SAMPLES, RegionVerdict, in_local_region,
                     univalence_oracle)

QUARTER = 0.25
DEFAULT_TOLERANCE = 1e-7
DEFAULT_GRID = 2048
SQRT21 = math.sqrt(21.0)


class Tag(str, Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    NOT_UNIVALENT = "NOT_UNIVALENT"
    BOUNDARY_INCONCLUSIVE = "BOUNDARY_INCONCLUSIVE"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SupResult:
    sup_value: float
    arg_tau: float
    evaluations: int


@dataclass(frozen=True)
class BoundaryCurvePoint:
    s: float
    tau: float
    g1: float
    g2: float
    point: LambdaPoint


@dataclass(frozen=True)
class ClassificationResult:
    tag: Tag
    sup: Optional[SupResult]
    local_verdict: RegionVerdict
    univalence_verdict: Optional[RegionVerdict]
    tolerance: float
    point: LambdaPoint
    in_set_a: bool

    @property
    def consistent(self) -> bool:
        """Cross-check against the closed-form description of the global region."""
        if self.tag is Tag.C1:
            return self.local_verdict.member and not self.in_set_a
        if self.tag is Tag.C3:
            return self.local_verdict.member and self.in_set_a
        return True


# -- the criterion function -------------------------------------------------

def h_value(p, q, m2, tau):
    """p^2 r1 + q^2 r2; works on scalars or arrays of tau."""
    t4 = tau**4
    t10 = t4 * t4 * tau * tau
    return p * p * t10 / (t4 + 3 * m2) ** 4 + q * q * t10 / (t4 - 3 * m2) ** 4


def h_derivative(p, q, m2, tau):
    t4 = tau**4
    t9 = t4 * t4 * tau
    alpha1 = 6 * t9 * (5 * m2 - t4) / (t4 + 3 * m2) ** 5
    alpha2 = 6 * t9 * (-5 * m2 - t4) / (t4 - 3 * m2) ** 5
    return p * p * alpha1 + q * q * alpha2


def search_limit(m2: float, tau_min: float = 1.0) -> float:
    """h is decreasing once tau^4 >= 5 m2, so the sup is attained below this."""
    return max(tau_min, (5 * m2) ** 0.25)


def sup_h(p: float, q: float, m2: float, n_grid: int = DEFAULT_GRID,
          tau_min: float = 1.0, tau_max: Optional[float] = None) -> SupResult:
    """sup of h over [tau_min, tau_max] (default: all tau >= tau_min).

    Dense grid, golden-section refinement around the best grid bracket,
    then a bisection polish on the analytic h' when it changes sign there.
    """
    if not m2 > 0 or not tau_min**4 > 3 * m2:
        raise DomainError(f"need 0 < 3 m2 < tau_min^4, got m2={m2!r}, tau_min={tau_min!r}")
    hi = search_limit(m2, tau_min)
    if tau_max is not None:
        hi = min(hi, tau_max)
    h0 = float(h_value(p, q, m2, tau_min))
    if hi <= tau_min:
        return SupResult(h0, tau_min, 1)

    def h(t):
        return float(h_value(p, q, m2, t))

    def dh(t):
        return float(h_derivative(p, q, m2, t))

    taus = np.linspace(tau_min, hi, n_grid)
    vals = h_value(p, q, m2, taus)
    k = int(np.argmax(vals))
    lo_b, hi_b = taus[max(k - 1, 0)], taus[min(k + 1, n_grid - 1)]
    tau_g, val_g, n_g = golden_max(h, lo_b, hi_b, xtol=1e-10)
    evaluations = n_grid + n_g

    if dh(lo_b) > 0 > dh(hi_b):
        # interior stationary point: locate it on h' rather than on flat h
        tau_r = bisect(dh, lo_b, hi_b, xtol=1e-15)
        best_val, best_tau = h(tau_r), tau_r
        evaluations += 60
    else:
        best_val, best_tau = float(vals[k]), float(taus[k])
        # on a flat maximum golden-section can win by rounding alone
        if val_g > best_val * (1 + 1e-14):
            best_val, best_tau = val_g, tau_g
    for v, tau in ((h0, tau_min), (float(vals[-1]), float(hi))):
        if v > best_val * (1 + 1e-14):
            best_val, best_tau = v, tau
    return SupResult(best_val, float(best_tau), evaluations)


# -- the boundary curve ---------------------------------------------------

def g1(s: float, tau: float) -> float:
    t4 = tau**4
    return (5 * s + t4) * (t4 + 3 * s) ** 5 / (64 * s * t4**3 * tau * tau)


def g2(s: float, tau: float) -> float:
    t4 = tau**4
    return (5 * s - t4) * (t4 - 3 * s) ** 5 / (64 * s * t4**3 * tau * tau)


def ellipse_excess(s: float, tau: float) -> float:
    """Ellipse expression at tau = 1 for the curve point at parameter tau, minus 1/4."""
    return g1(s, tau) / (1 + 3 * s) ** 4 + g2(s, tau) / (1 - 3 * s) ** 4 - QUARTER


def _check_slice(s: float) -> None:
    if not 0.2 < s < 1 / 3:
        raise DomainError(f"boundary curve needs 1/5 < s < 1/3, got {s!r}")


def tau_star(s: float) -> float:
    """Start of the monotone branch of the curve: (max(1, sqrt(21) s))^(1/4)."""
    _check_slice(s)
    return max(1.0, SQRT21 * s) ** 0.25


def tau_end(s: float) -> float:
    return (5 * s) ** 0.25


def tau_double_star(s: float) -> Optional[float]:
    """Parameter where the curve enters the locally univalent region, if s > 1/sqrt(21)."""
    _check_slice(s)
    if SQRT21 * s <= 1:
        return None
    lo, hi = (SQRT21 * s) ** 0.25, tau_end(s)
    e_lo, e_hi = ellipse_excess(s, lo), ellipse_excess(s, hi)
    if not e_hi < 0:
        raise NumericalError(f"excess at (5s)^(1/4) is {e_hi!r}, expected < 0 (s={s!r})")
    if e_lo <= 0:
        if e_lo > -1e-14:
            return lo
        raise NumericalError(f"excess at tau* is {e_lo!r}, expected > 0 (s={s!r})")
    return bisect(lambda t: ellipse_excess(s, t), lo, hi, xtol=1e-12)


def boundary_curve(s: float, n: int) -> list[BoundaryCurvePoint]:
    """n samples of the curve over [tau*(s), (5s)^(1/4)], endpoints included."""
    _check_slice(s)
    if n < 2:
        raise ConfigurationError("boundary_curve needs n >= 2")
    taus = np.linspace(tau_star(s), tau_end(s), n)
    out = []
    for k, tau in enumerate(taus):
        tau = float(tau)
        v1 = max(g1(s, tau), 0.0)
        # the last sample is the zero of g2
        v2 = 0.0 if k == n - 1 else max(g2(s, tau), 0.0)
        pt = LambdaPoint(math.sqrt(v1) / (1 + 3 * s), math.sqrt(v2) / (1 - 3 * s), s)
        out.append(BoundaryCurvePoint(s, tau, v1, v2, pt))
    return out


def in_set_A(x: LambdaPoint) -> bool:
    """Membership in the obstruction set whose complement is the global region.

    Inverts the decreasing map tau -> g2(s, tau) on [tau*, (5s)^(1/4)] for
    q^2, then compares p^2 with g1 at that tau.
    """
    s = x.x3
    if not 0.2 < s < 1 / 3:
        return False
    p2 = (x.x1 * (1 + 3 * s)) ** 2
    q2 = (x.x2 * (1 - 3 * s)) ** 2
    lo, hi = tau_star(s), tau_end(s)
    if q2 > g2(s, lo):
        return False
    if q2 <= g2(s, hi):
        # g2 vanishes at hi up to rounding
        tau = hi
    else:
        tau = bisect(lambda t: g2(s, t) - q2, lo, hi, xtol=1e-15)
    return p2 >= g1(s, tau)


# -- classification -------------------------------------------------------

def classify(f: CubicMap, tolerance: float = DEFAULT_TOLERANCE,
             n_samples: int = DEFAULT_SAMPLES, band: float = BOUNDARY_BAND) -> ClassificationResult:
    """Place a cubic in the trichotomy.

    The map is scaled to a1 = 1 and reflected into the first quadrant of
    a2 (both operations preserve the category).  C1 if the sup of h is
    below 1/4 - tolerance, C2 if it is within tolerance of 1/4 while the
    initial point is strictly inside the local region, otherwise the
    univalence oracle separates C3 from NOT_UNIVALENT.
    """
    if not tolerance > 0:
        raise ConfigurationError(f"tolerance must be positive, got {tolerance!r}")
    g = f.scaled()
    g = CubicMap(1.0, complex(abs(g.a2.real), abs(g.a2.imag)), g.a3)
    x = lambda_map(g)
    local = in_local_region(x, band)
    in_a = in_set_A(x)

    def result(tag, sup=None, univ=None):
        return ClassificationResult(tag, sup, local, univ, tolerance, x, in_a)

    if not 0 < x.x3 < 1 / 3:
        return result(Tag.NOT_UNIVALENT)
    m = moments(g)
    sup = sup_h(m.p, m.q, m.m2)
    s_val = sup.sup_value
    if local.inconclusive:
        return result(Tag.BOUNDARY_INCONCLUSIVE, sup)
    if not local.member:
        return result(Tag.NOT_UNIVALENT, sup)
    if s_val < QUARTER - tolerance:
        return result(Tag.C1, sup)
    if abs(s_val - QUARTER) <= tolerance:
        h1 = float(h_value(m.p, m.q, m.m2, 1.0))
        return result(Tag.C2 if h1 < QUARTER - tolerance else Tag.BOUNDARY_INCONCLUSIVE, sup)
    univ = univalence_oracle(g, n_samples, band)
    if univ.inconclusive:
        return result(Tag.BOUNDARY_INCONCLUSIVE, sup, univ)
    return result(Tag.C3 if univ.member else Tag.NOT_UNIVALENT, sup, univ)
