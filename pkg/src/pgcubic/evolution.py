"""Moment-conserving evolution of cubic Hele-Shaw solutions.

A trajectory is labelled by its conserved moments (p + iq, m2); the state
at conformal radius tau comes from the closed-form inverse of the moment
map, and physical time from the linear growth law M0(t) = M0(0) + 2t.
Nothing is time-stepped.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import mpmath
import numpy as np

from ._numerics import bisect
from .criterion import (DEFAULT_TOLERANCE, QUARTER, Tag, classify, h_value, sup_h)
from .exceptions import ClassificationError, DomainError, NumericalError, PreconditionError
from .poly_core import CubicMap, LambdaPoint, coefficients_from_moments, lambda_map, moments
from .region import critical_points, in_local_region

log = logging.getLogger(__name__)

CUSP_ORDERS = {"3/2": 1.5, "5/2": 2.5, "7/2": 3.5, "9/2": 4.5}
CUSP_WINDOW = (1e-6, 1e-2)
CUSP_MAX_RESIDUAL = 0.05
CUSP_MAX_DEVIATION = 0.15
#: |f'(zeta0)| / a1 above this means zeta0 is not a critical point.
CRITICAL_TOL = 1e-6
#: Default end of a scan: the tau where x3 = m2 / tau^4 drops below this.
SCAN_X3_FLOOR = 1e-4
BLOWUP_GRID = 1024


class ContinuationWarning(UserWarning):
    """Coefficients past a non-continuable blow-up were requested."""


@dataclass(frozen=True)
class Trajectory:
    p: float
    q: float
    m2: float
    tau0: float
    m0_initial: float

    @classmethod
    def from_map(cls, f: CubicMap) -> "Trajectory":
        m = moments(f)
        traj = cls(m.p, m.q, m.m2, f.a1, m.m0)
        # take M0 from the reconstructed map so that time_of_tau(tau0) is exactly 0
        return replace(traj, m0_initial=m0_of_tau(traj, f.a1))

    def at_tau(self, tau: float) -> CubicMap:
        return coefficients_from_moments(self.p, self.q, self.m2, tau)

    def h(self, tau):
        return h_value(self.p, self.q, self.m2, tau)


@dataclass(frozen=True)
class CuspReport:
    location: complex
    fitted_exponent: float
    declared_order: str
    fit_residual: float


@dataclass(frozen=True)
class BlowUpReport:
    blows_up: bool
    tau_blow: Optional[float] = None
    t_star: Optional[float] = None
    zeta0: Optional[complex] = None
    cusp: Optional[CuspReport] = None
    continuable: bool = False


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    tau: float
    f: CubicMap
    point: LambdaPoint
    ellipse_margin: float
    valid: bool


# -- time map ---------------------------------------------------------------

def m0_of_tau(traj: Trajectory, tau: float) -> float:
    f = traj.at_tau(tau)
    return f.a1 * f.a1 + 2 * abs(f.a2) ** 2 + 3 * f.a3 * f.a3


def time_of_tau(traj: Trajectory, tau: float) -> float:
    if tau < traj.tau0:
        raise DomainError(f"tau={tau!r} precedes tau0={traj.tau0!r}")
    return (m0_of_tau(traj, tau) - traj.m0_initial) / 2


def tau_of_time(traj: Trajectory, t: float) -> float:
    """Invert the area law: the tau >= tau0 with time_of_tau(tau) = t."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    if t == 0:
        return traj.tau0
    target = traj.m0_initial + 2 * t
    # M0(tau) >= tau^2, so sqrt(target) is past the solution
    hi = max(traj.tau0, math.sqrt(target))
    while m0_of_tau(traj, hi) < target:
        hi *= 2
    return bisect(lambda tau: m0_of_tau(traj, tau) - target, traj.tau0, hi, xtol=1e-15)


def _coefficient_velocity(traj: Trajectory, tau: float) -> tuple[complex, float]:
    """(da2/dtau, da3/dtau) along the trajectory; da1/dtau = 1."""
    p, q, m2 = traj.p, traj.q, traj.m2
    t4 = tau**4
    da2 = complex(2 * p * tau * (3 * m2 - t4) / (t4 + 3 * m2) ** 2,
                  2 * q * tau * (t4 + 3 * m2) / (t4 - 3 * m2) ** 2)
    return da2, -3 * m2 / t4


def injection_rate(traj: Trajectory, tau: float) -> float:
    """Q(tau) = dM0/dtau / 2, the constant value of Re[F_tau conj(F' z)] on |z| = 1."""
    f = traj.at_tau(tau)
    da2, da3 = _coefficient_velocity(traj, tau)
    return tau + 2 * (f.a2.real * da2.real + f.a2.imag * da2.imag) + 3 * f.a3 * da3


def boundary_flux(traj: Trajectory, tau: float, n: int = 512) -> np.ndarray:
    """Re[F_tau conj(F' z)] at n equally spaced boundary points."""
    z = np.exp(2j * np.pi * np.arange(n) / n)
    f = traj.at_tau(tau)
    da2, da3 = _coefficient_velocity(traj, tau)
    f_tau = z * (1 + z * (da2 + z * da3))
    return (f_tau * np.conj(f.derivative(z) * z)).real


def pg_residual(traj: Trajectory, tau: float, n: int = 512) -> float:
    """max |Re[f_t conj(f' z)] - 1| on the boundary, with f_t = F_tau / Q."""
    return float(np.max(np.abs(boundary_flux(traj, tau, n) / injection_rate(traj, tau) - 1)))


def enclosed_area(f: CubicMap, n: int = 8192) -> float:
    """Shoelace area of the boundary polygon with n vertices."""
    z = f.boundary(n)
    return 0.5 * float(np.sum((np.conj(z) * np.roll(z, -1)).imag))


# -- evolution ---------------------------------------------------------------

def exit_tau(traj: Trajectory, tolerance: float = DEFAULT_TOLERANCE) -> Optional[float]:
    """First tau at which h crosses 1/4 when the trajectory leaves the local region.

    None when sup h <= 1/4 + tolerance (global or tangential trajectories).
    """
    sup = sup_h(traj.p, traj.q, traj.m2, tau_min=traj.tau0)
    if sup.sup_value <= QUARTER + tolerance:
        return None
    if traj.h(traj.tau0) >= QUARTER:
        return traj.tau0
    taus = np.linspace(traj.tau0, sup.arg_tau, BLOWUP_GRID)
    k = int(np.argmax(traj.h(taus) >= QUARTER))
    return bisect(lambda t: float(traj.h(t)) - QUARTER, float(taus[k - 1]), float(taus[k]),
                  xtol=1e-15)


def evolve(f0: CubicMap, t: float, tolerance: float = DEFAULT_TOLERANCE) -> CubicMap:
    """State at time t of the solution starting from f0.

    Past a non-continuable blow-up the analytically continued coefficients
    are still returned, with a ContinuationWarning.
    """
    traj = Trajectory.from_map(f0)
    tau = tau_of_time(traj, t)
    tau_x = exit_tau(traj, tolerance)
    if tau_x is not None and tau > tau_x:
        warnings.warn(f"t={t!r} is past blow-up at tau={tau_x!r}; map is not univalent",
                      ContinuationWarning, stacklevel=2)
    return traj.at_tau(tau)


def trajectory_scan(f0: CubicMap, n: int, tau_max: Optional[float] = None,
                    tolerance: float = DEFAULT_TOLERANCE) -> list[TrajectorySample]:
    """n samples of the trajectory, equally spaced in tau from tau0 to tau_max."""
    if n < 2:
        raise DomainError("trajectory_scan needs n >= 2")
    traj = Trajectory.from_map(f0)
    if tau_max is None:
        tau_max = max((traj.m2 / SCAN_X3_FLOOR) ** 0.25, 2 * traj.tau0)
    tau_x = exit_tau(traj, tolerance)
    out = []
    for tau in np.linspace(traj.tau0, tau_max, n):
        tau = float(tau)
        out.append(_sample(traj, tau, time_of_tau(traj, tau), tau_x))
    return out


def _sample(traj: Trajectory, tau: float, t: float, tau_x: Optional[float]) -> TrajectorySample:
    f = traj.at_tau(tau)
    x = lambda_map(f)
    valid = tau_x is None or tau <= tau_x
    return TrajectorySample(t, tau, f, x, in_local_region(x).margin, valid)


def sample_at_times(f0: CubicMap, times, tolerance: float = DEFAULT_TOLERANCE) -> list[TrajectorySample]:
    traj = Trajectory.from_map(f0)
    tau_x = exit_tau(traj, tolerance)
    return [_sample(traj, tau_of_time(traj, t), t, tau_x) for t in times]


# -- blow-up -----------------------------------------------------------------

def cusp_report(f_star: CubicMap, zeta0: complex, window=CUSP_WINDOW, n_offsets: int = 41,
                critical_tol: float = CRITICAL_TOL) -> CuspReport:
    """Fit the local power law of the boundary curve at a critical point on the circle.

    In a frame with the cusp at the origin and its tangent along the first
    axis, the two branches of the boundary, taken at equal tangential
    distance u, are separated by a normal gap ~ C u^beta.  The branch gap is
    used rather than the normal offset of one branch, because a curved
    tangent adds an even term to the offset that does not change the cusp type.

    The expansion is taken about zeta0 with the linear term dropped, i.e.
    for the exactly critical map nearest to f_star, in 60-digit arithmetic
    so the gap stays resolved down to the smallest offsets.
    """
    if abs(abs(zeta0) - 1) > 1e-8:
        raise PreconditionError(f"|zeta0| = {abs(zeta0)!r} is not on the unit circle")
    if abs(f_star.derivative(zeta0)) > critical_tol * f_star.a1:
        raise PreconditionError(f"f'(zeta0) = {f_star.derivative(zeta0)!r} is not ~0")
    location = complex(f_star(zeta0))
    phis = np.geomspace(window[0], window[1], n_offsets)
    with mpmath.workdps(60):
        z0 = mpmath.mpc(zeta0.real, zeta0.imag)
        z0 /= abs(z0)
        c2 = mpmath.mpc(f_star.a2.real, f_star.a2.imag) + 3 * f_star.a3 * z0
        c3 = mpmath.mpf(f_star.a3)
        tangent = -c2 * z0 * z0
        if tangent == 0:
            return CuspReport(location, math.nan, "unresolved", math.inf)
        frame = mpmath.conj(tangent / abs(tangent))

        def local(phi):
            w = z0 * mpmath.expm1(1j * phi)
            return (c2 * w * w + c3 * w**3) * frame

        log_u, log_gap = [], []
        for phi in phis:
            phi = mpmath.mpf(float(phi))
            plus = local(phi)
            # the other branch, at the same tangential coordinate
            phi_minus = mpmath.findroot(lambda x: local(x).real - plus.real, -phi)
            gap = abs(plus.imag - local(phi_minus).imag)
            if plus.real == 0 or gap == 0:
                continue
            log_u.append(float(mpmath.log(abs(plus.real))))
            log_gap.append(float(mpmath.log(gap)))
    log_u, log_gap = np.array(log_u), np.array(log_gap)
    beta, c = np.polyfit(log_u, log_gap, 1)
    resid = float(np.sqrt(np.mean((log_gap - (beta * log_u + c)) ** 2)))
    name, val = min(CUSP_ORDERS.items(), key=lambda kv: abs(kv[1] - beta))
    declared = name if resid < CUSP_MAX_RESIDUAL and abs(beta - val) < CUSP_MAX_DEVIATION else "unresolved"
    return CuspReport(location, float(beta), declared, resid)


def blow_up(f0: CubicMap, tolerance: float = DEFAULT_TOLERANCE) -> BlowUpReport:
    """Locate the loss of univalence along the trajectory of f0, if any.

    Transversal exits are found by bisection on h = 1/4; tangential
    contacts (C2) sit at the maximizer of h.
    """
    result = classify(f0, tolerance)
    if result.tag is Tag.C1:
        return BlowUpReport(False)
    if not result.local_verdict.member:
        raise PreconditionError(f"initial map is not locally univalent ({result.tag})")
    traj = Trajectory.from_map(f0)
    tau_b = exit_tau(traj, tolerance)
    if tau_b is None:
        tau_b = sup_h(traj.p, traj.q, traj.m2, tau_min=traj.tau0).arg_tau
    f_star = traj.at_tau(tau_b)
    root = critical_points(f_star)[0]
    if abs(abs(root) - 1) > 1e-8:
        log.warning("critical point at |z| = %.17g, not on the circle", abs(root))
    zeta0 = root / abs(root)
    # a tangential contact accepted within `tolerance` leaves the critical point
    # O(sqrt(tolerance)) inside the circle
    cusp = cusp_report(f_star, zeta0, critical_tol=max(CRITICAL_TOL, 10 * math.sqrt(tolerance)))
    continuable = result.tag is Tag.C2
    if not continuable and cusp.declared_order in ("5/2", "9/2"):
        log.warning("continuable-type cusp %s fitted on %s data", cusp.declared_order, result.tag)
    return BlowUpReport(True, tau_b, time_of_tau(traj, tau_b), zeta0, cusp, continuable)


def continue_after_blowup(f0: CubicMap, t: float, tolerance: float = DEFAULT_TOLERANCE) -> CubicMap:
    """State at t > t* of a C2 solution, which re-enters the local region."""
    tag = classify(f0, tolerance).tag
    if tag is not Tag.C2:
        raise ClassificationError(f"continuation needs C2 data, got {tag}")
    report = blow_up(f0, tolerance)
    if not t > report.t_star:
        raise PreconditionError(f"t={t!r} is not after blow-up t*={report.t_star!r}")
    traj = Trajectory.from_map(f0)
    f = traj.at_tau(tau_of_time(traj, t))
    verdict = in_local_region(lambda_map(f))
    if not verdict.member:
        raise NumericalError(f"continued state left the local region (margin {verdict.margin!r})")
    return f
