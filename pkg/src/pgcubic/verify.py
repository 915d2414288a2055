"""Self-verification suites run by ``pgcubic verify``.

Each suite returns (status, detail).  Sizes are kept small enough for an
interactive run; tests/test_acceptance.py runs the full-size versions.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .criterion import (QUARTER, Tag, classify, g1, g2, sup_h, tau_double_star,
                        tau_end, tau_star)
from .evolution import Trajectory, blow_up, enclosed_area, pg_residual, tau_of_time
from .poly_core import (CubicMap, coefficients_from_moments, lambda_from_moments, lambda_map,
                        moments)
from .region import BOUNDARY_BAND, in_local_region, local_univalence_oracle

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


def _random_cubic(rng: np.random.Generator, max_a2: float = 1.0) -> CubicMap:
    r = max_a2 * math.sqrt(rng.uniform())
    return CubicMap(1.0, r * np.exp(2j * np.pi * rng.uniform()), rng.uniform(0, 1 / 3))


def _random_local(rng: np.random.Generator) -> CubicMap:
    """Uniform-ish sample from the locally univalent region, a1 = 1."""
    while True:
        s = rng.uniform(0.01, 0.32)
        x1 = rng.uniform(-0.5, 0.5) * (1 + 3 * s)
        x2 = rng.uniform(-0.5, 0.5) * (1 - 3 * s)
        v = in_local_region(lambda_map(CubicMap(1.0, complex(x1, x2), s)))
        if v.member and not v.inconclusive:
            return CubicMap(1.0, complex(x1, x2), s)


def quarter_identity(rng, tolerance):
    s = np.linspace(0.201, 0.333, 200)
    err = max(abs(g1(v, 1.0) / (1 + 3 * v) ** 4 + g2(v, 1.0) / (1 - 3 * v) ** 4 - QUARTER) for v in s)
    return (PASS if err < 1e-12 else FAIL), f"max_err={err:.3e}"


def round_trip(rng, tolerance):
    worst = 0.0
    for _ in range(500):
        f = _random_cubic(rng)
        m = moments(f)
        g = coefficients_from_moments(m.p, m.q, m.m2, 1.0)
        worst = max(worst, abs(g.a1 - f.a1), abs(g.a2 - f.a2), abs(g.a3 - f.a3))
        x, y = lambda_map(f), lambda_from_moments(m.p, m.q, m.m2)
        worst = max(worst, abs(x.x1 - y.x1), abs(x.x2 - y.x2), abs(x.x3 - y.x3))
    return (PASS if worst < 1e-12 else FAIL), f"max_err={worst:.3e}"


def oracle_agreement(rng, tolerance):
    n, band, bad = 20000, 0, 0
    for _ in range(n):
        f = _random_cubic(rng)
        a = in_local_region(lambda_map(f))
        b = local_univalence_oracle(f)
        if abs(a.margin) <= BOUNDARY_BAND or abs(b.margin) <= BOUNDARY_BAND:
            band += 1
        elif a.member != b.member:
            bad += 1
    ok = bad == 0 and band < 0.001 * n
    return (PASS if ok else FAIL), f"disagree={bad} in_band={band} n={n}"


def m2_collapse(rng, tolerance):
    bad = in_band = inconclusive = 0
    grid = np.linspace(-0.8, 0.8, 21)
    for s in np.linspace(0.02, 0.2, 5):
        for x1 in grid:
            for x2 in grid:
                f = CubicMap(1.0, complex(x1, x2), s)
                v = in_local_region(lambda_map(f))
                if v.inconclusive:
                    in_band += 1  # on the ellipse to rounding; no verdict expected
                    continue
                tag = classify(f, tolerance).tag
                if tag is Tag.BOUNDARY_INCONCLUSIVE:
                    inconclusive += 1
                elif (tag is Tag.C1) != v.member:
                    bad += 1
    status = FAIL if bad else (INCONCLUSIVE if inconclusive else PASS)
    return status, f"disagree={bad} inconclusive={inconclusive} in_band={in_band}"


def boundary_stationarity(rng, tolerance):
    worst_s = worst_tau = 0.0
    for s in (0.22, 0.25, 0.28, 0.31):
        lo = tau_double_star(s) or tau_star(s)
        for tau in np.linspace(lo, tau_end(s), 12)[1:-1]:
            p, q = math.sqrt(g1(s, tau)), math.sqrt(g2(s, tau))
            r = sup_h(p, q, s)
            worst_s = max(worst_s, abs(r.sup_value - QUARTER))
            worst_tau = max(worst_tau, abs(r.arg_tau - tau))
    ok = worst_s < 1e-8 and worst_tau < 1e-5
    return (PASS if ok else FAIL), f"max_dS={worst_s:.3e} max_dtau={worst_tau:.3e}"


def conservation(rng, tolerance):
    d1 = d2 = da = 0.0
    for _ in range(50):
        f0 = _random_local(rng)
        traj = Trajectory.from_map(f0)
        m = moments(f0)
        for t in np.linspace(0, 20, 20):
            f = traj.at_tau(tau_of_time(traj, t))
            mt = moments(f)
            d1 = max(d1, abs(mt.m1 - m.m1))
            d2 = max(d2, abs(mt.m2 - m.m2))
            da = max(da, abs(mt.m0 - m.m0 - 2 * t), abs(enclosed_area(f) / math.pi - mt.m0) / mt.m0)
    ok = d1 < 1e-11 and d2 < 1e-12 and da < 1e-6
    return (PASS if ok else FAIL), f"dM1={d1:.3e} dM2={d2:.3e} area={da:.3e}"


def pg_equation(rng, tolerance):
    worst = 0.0
    for _ in range(20):
        traj = Trajectory.from_map(_random_local(rng))
        worst = max(worst, pg_residual(traj, traj.tau0 * (1 + rng.uniform(0, 2))))
    return (PASS if worst < 1e-6 else FAIL), f"max_residual={worst:.3e}"


def symmetry(rng, tolerance):
    bad = 0
    for _ in range(200):
        f = _random_local(rng)
        base = classify(f, tolerance)
        for sx, sy in ((-1, 1), (1, -1), (-1, -1)):
            g = CubicMap(1.0, complex(sx * f.a2.real, sy * f.a2.imag), f.a3)
            other = classify(g, tolerance)
            if other.tag is not base.tag or other.sup.sup_value != base.sup.sup_value:
                bad += 1
    return (PASS if bad == 0 else FAIL), f"asymmetric={bad}"


def monotonicity(rng, tolerance):
    bad = n = 0
    while n < 500:
        f = _random_local(rng)
        m = moments(f)
        s_f = sup_h(m.p, m.q, m.m2).sup_value
        if s_f < QUARTER - tolerance:
            continue
        n += 1
        k1, k2 = 1 + rng.uniform(0, 0.5, size=2)
        g = CubicMap(1.0, complex(k1 * f.a2.real, k2 * f.a2.imag), f.a3)
        mg = moments(g)
        if sup_h(mg.p, mg.q, mg.m2).sup_value < s_f - 1e-12:
            bad += 1
    return (PASS if bad == 0 else FAIL), f"violations={bad} n={n}"


def c2_blowup(rng, tolerance):
    p = 2 * 1.25**-1.25
    f0 = coefficients_from_moments(p, 0.0, 0.25, 1.0)
    tag = classify(f0, tolerance).tag
    if tag is not Tag.C2:
        return INCONCLUSIVE, f"tag={tag}"
    r = blow_up(f0, tolerance)
    ok = (abs(r.tau_blow - 1.25**0.25) < 1e-4 and abs(r.zeta0 + 1) < 1e-6
          and r.cusp.declared_order in ("5/2", "9/2"))
    return (PASS if ok else FAIL), f"tau_b={r.tau_blow:.10f} cusp={r.cusp.declared_order}"


SUITES: dict[str, Callable] = {
    "quarter_identity": quarter_identity,
    "round_trip": round_trip,
    "oracle_agreement": oracle_agreement,
    "m2_collapse": m2_collapse,
    "boundary_stationarity": boundary_stationarity,
    "conservation": conservation,
    "pg_residual": pg_equation,
    "symmetry": symmetry,
    "monotonicity": monotonicity,
    "c2_blowup": c2_blowup,
}


def run_all(seed: int, tolerance: float) -> list[dict]:
    rows = []
    for k, (name, suite) in enumerate(SUITES.items()):
        # independent stream per suite so adding one does not reshuffle the rest
        rng = np.random.default_rng([seed, k])
        status, detail = suite(rng, tolerance)
        rows.append({"suite": name, "status": status, "detail": detail})
    return rows
