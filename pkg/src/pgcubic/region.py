"""Membership tests for locally univalent and univalent cubics.

Local univalence has a closed form: the coefficient-map image must lie in
an elliptic cylinder slice.  Global univalence has none, so it is tested
numerically by scanning the image of the unit circle for self-crossings.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .exceptions import ConfigurationError, DegenerateDegreeError
from .poly_core import CubicMap, LambdaPoint

#: Verdicts with |margin| at or below this are reported as inconclusive.
BOUNDARY_BAND = 1e-6
DEFAULT_SAMPLES = 4096
MIN_SAMPLES = 256
MAX_REFINEMENTS = 8

# Relative error bound for a float 2x2 orientation determinant.
_ORIENT_ERRBOUND = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class RegionVerdict:
    member: bool
    margin: float
    witness: Optional[complex] = None
    inconclusive: bool = False


def _verdict(margin: float, band: float, witness: Optional[complex] = None) -> RegionVerdict:
    return RegionVerdict(margin > 0, margin, witness, abs(margin) <= band)


def ellipse_lhs(x1: float, x2: float, x3: float) -> float:
    return x1 * x1 / (1 + 3 * x3) ** 2 + x2 * x2 / (1 - 3 * x3) ** 2


def in_local_region(x: LambdaPoint, band: float = BOUNDARY_BAND) -> RegionVerdict:
    """Closed-form test for the coefficient region of locally univalent cubics.

    The margin is 1/4 minus the ellipse expression, or -inf when x3 is
    outside (0, 1/3).
    """
    if not 0 < x.x3 < 1 / 3:
        return RegionVerdict(False, -math.inf)
    return _verdict(0.25 - ellipse_lhs(x.x1, x.x2, x.x3), band)


def critical_points(f: CubicMap) -> tuple[complex, complex]:
    """Both roots of f'(z) = a1 + 2 a2 z + 3 a3 z^2, smaller modulus first."""
    if f.a3 <= 0:
        raise DegenerateDegreeError("critical_points needs a3 > 0")
    a, b, c = 3 * f.a3, 2 * f.a2, complex(f.a1)
    sq = cmath.sqrt(b * b - 4 * a * c)
    # pick the sign that avoids cancellation; the second root comes from the product
    if (b.conjugate() * sq).real < 0:
        sq = -sq
    w = -(b + sq) / 2
    r1, r2 = w / a, c / w
    return (r1, r2) if abs(r1) <= abs(r2) else (r2, r1)


def local_univalence_oracle(f: CubicMap, band: float = BOUNDARY_BAND) -> RegionVerdict:
    """f' has no zero on the closed unit disk; margin = min |root| - 1."""
    r = critical_points(f)[0]
    margin = abs(r) - 1
    return _verdict(margin, band, None if margin > 0 else r)


# -- segment predicates -----------------------------------------------------

def _orient_exact(ax, ay, bx, by, cx, cy) -> int:
    ax, ay, bx, by, cx, cy = map(Fraction, (ax, ay, bx, by, cx, cy))
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (d > 0) - (d < 0)


def orientation(a: complex, b: complex, c: complex) -> int:
    """Sign of the turn a -> b -> c, exact for float inputs."""
    l = (b.real - a.real) * (c.imag - a.imag)
    r = (b.imag - a.imag) * (c.real - a.real)
    d = l - r
    if abs(d) > _ORIENT_ERRBOUND * (abs(l) + abs(r)):
        return (d > 0) - (d < 0)
    return _orient_exact(a.real, a.imag, b.real, b.imag, c.real, c.imag)


def _on_segment(p: complex, q: complex, r: complex) -> bool:
    # r collinear with pq; inside the bounding box?
    return (min(p.real, q.real) <= r.real <= max(p.real, q.real)
            and min(p.imag, q.imag) <= r.imag <= max(p.imag, q.imag))


def segments_intersect(p1: complex, p2: complex, q1: complex, q2: complex) -> bool:
    """Closed-segment intersection test (touching counts)."""
    o1 = orientation(p1, p2, q1)
    o2 = orientation(p1, p2, q2)
    o3 = orientation(q1, q2, p1)
    o4 = orientation(q1, q2, p2)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return ((o1 == 0 and _on_segment(p1, p2, q1)) or (o2 == 0 and _on_segment(p1, p2, q2))
            or (o3 == 0 and _on_segment(q1, q2, p1)) or (o4 == 0 and _on_segment(q1, q2, p2)))


def _float_orient(a, b, c):
    l = (b.real - a.real) * (c.imag - a.imag)
    r = (b.imag - a.imag) * (c.real - a.real)
    return l - r, _ORIENT_ERRBOUND * (np.abs(l) + np.abs(r))


def candidate_crossings(z: np.ndarray) -> np.ndarray:
    """Index pairs (i, j) of closed-polyline segments that may intersect.

    Segment k joins z[k] to z[k+1 mod n]; adjacent segments are skipped.
    Pairs are pruned by bounding boxes (x-sorted sweep) and then by float
    orientations, keeping every pair whose float signs are not decisive.
    """
    n = len(z)
    a, b = z, np.roll(z, -1)
    xmin, xmax = np.minimum(a.real, b.real), np.maximum(a.real, b.real)
    ymin, ymax = np.minimum(a.imag, b.imag), np.maximum(a.imag, b.imag)

    order = np.argsort(xmin, kind="stable")
    hi = np.searchsorted(xmin[order], xmax[order], side="right")
    counts = np.maximum(hi - np.arange(n) - 1, 0)
    total = int(counts.sum())
    if total == 0:
        return np.empty((0, 2), dtype=np.int64)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    rank_i = np.repeat(np.arange(n), counts)
    rank_j = rank_i + 1 + (np.arange(total) - starts)
    i, j = order[rank_i], order[rank_j]

    keep = (ymin[i] <= ymax[j]) & (ymin[j] <= ymax[i])
    gap = (i - j) % n
    keep &= (gap != 1) & (gap != n - 1)
    i, j = i[keep], j[keep]

    o1, e1 = _float_orient(a[i], b[i], a[j])
    o2, e2 = _float_orient(a[i], b[i], b[j])
    o3, e3 = _float_orient(a[j], b[j], a[i])
    o4, e4 = _float_orient(a[j], b[j], b[i])
    separated = (((o1 > e1) & (o2 > e2)) | ((o1 < -e1) & (o2 < -e2))
                 | ((o3 > e3) & (o4 > e4)) | ((o3 < -e3) & (o4 < -e4)))
    pairs = np.stack([np.minimum(i, j), np.maximum(i, j)], axis=1)[~separated]
    return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]


def _intersection_point(p1, p2, q1, q2) -> complex:
    r, s = p2 - p1, q2 - q1
    den = r.real * s.imag - r.imag * s.real
    if den == 0:
        return (p1 + p2 + q1 + q2) / 4
    w = q1 - p1
    t = (w.real * s.imag - w.imag * s.real) / den
    return p1 + t * r


def _crossing_sine(p1, p2, q1, q2) -> float:
    r, s = p2 - p1, q2 - q1
    return abs(r.real * s.imag - r.imag * s.real) / (abs(r) * abs(s))


def _refine_crossing(f: CubicMap, arc_a, arc_b, levels: int):
    """Follow a polyline crossing down `levels` subdivisions of both arcs.

    Each level widens both theta-arcs by a quarter on each side, splits
    them into four chords and keeps the first crossing chord pair.  Returns
    (witness, sine of crossing angle) or None if the crossing disappears.
    """
    hit = None
    for _ in range(levels):
        chords = []
        for lo, hi in (arc_a, arc_b):
            w = hi - lo
            th = np.linspace(lo - w / 4, hi + w / 4, 5)
            pts = [complex(v) for v in f(np.exp(1j * th))]
            chords.append([(th[k], th[k + 1], pts[k], pts[k + 1]) for k in range(4)])
        hit = None
        for ca in chords[0]:
            for cb in chords[1]:
                if ca[1] >= cb[0] and cb[1] >= ca[0]:
                    continue  # overlapping parameter ranges
                if segments_intersect(ca[2], ca[3], cb[2], cb[3]):
                    hit = (ca, cb)
                    break
            if hit:
                break
        if hit is None:
            return None
        arc_a, arc_b = (hit[0][0], hit[0][1]), (hit[1][0], hit[1][1])
    ca, cb = hit
    return (_intersection_point(ca[2], ca[3], cb[2], cb[3]),
            _crossing_sine(ca[2], ca[3], cb[2], cb[3]))


def find_self_intersection(f: CubicMap, n_samples: int = DEFAULT_SAMPLES,
                           max_refinements: int = MAX_REFINEMENTS):
    """First confirmed self-crossing of the boundary curve, or None.

    Returns (witness point, sine of the crossing angle).
    """
    z = f.boundary(n_samples)
    h = 2 * np.pi / n_samples
    for i, j in candidate_crossings(z):
        i, j = int(i), int(j)
        zi, zi1 = complex(z[i]), complex(z[(i + 1) % n_samples])
        zj, zj1 = complex(z[j]), complex(z[(j + 1) % n_samples])
        if not segments_intersect(zi, zi1, zj, zj1):
            continue
        found = _refine_crossing(f, (i * h, (i + 1) * h), (j * h, (j + 1) * h), max_refinements)
        if found is not None:
            return found
    return None


def univalence_oracle(f: CubicMap, n_samples: int = DEFAULT_SAMPLES,
                      band: float = BOUNDARY_BAND,
                      max_refinements: int = MAX_REFINEMENTS) -> RegionVerdict:
    """Semi-decision for univalence of f on the closed unit disk.

    Member iff f' has no zero in the closed disk and the sampled boundary
    curve has no confirmed self-crossing.  Margin is min |root of f'| - 1
    for members and minus the sine of the crossing angle for a crossing, so
    near-tangential contacts land in the inconclusive band.
    """
    if n_samples < MIN_SAMPLES:
        raise ConfigurationError(f"n_samples must be >= {MIN_SAMPLES}, got {n_samples}")
    local = local_univalence_oracle(f, band)
    if not local.member:
        return local
    found = find_self_intersection(f, n_samples, max_refinements)
    if found is not None:
        witness, sine = found
        return _verdict(-sine, band, witness)
    return local
