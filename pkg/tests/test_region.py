import math

import numpy as np
import pytest
import shapely
from hypothesis import given, settings
from hypothesis import strategies as st

from pgcubic import (ConfigurationError, CubicMap, DegenerateDegreeError, LambdaPoint,
                     in_local_region, lambda_map, local_univalence_oracle, univalence_oracle)
from pgcubic.region import (candidate_crossings, critical_points, ellipse_lhs,
                            find_self_intersection, orientation, segments_intersect)

from conftest import cubic_maps, local_maps


class TestLocalRegion:
    def test_origin(self):
        v = in_local_region(LambdaPoint(0, 0, 0.1))
        assert v.member and v.margin == 0.25

    def test_boundary_point(self):
        v = in_local_region(LambdaPoint(2 / 3, 0, 1 / 9))
        assert not v.member and v.inconclusive
        assert abs(v.margin) < 1e-15

    def test_far_outside(self):
        v = in_local_region(LambdaPoint(0.5, 0.5, 0.2))
        assert not v.member
        assert ellipse_lhs(0.5, 0.5, 0.2) == pytest.approx(0.25 / 2.56 + 0.25 / 0.16, rel=1e-14)

    @pytest.mark.parametrize("x3", [0.0, -0.1, 1 / 3, 0.4])
    def test_x3_out_of_range(self, x3):
        v = in_local_region(LambdaPoint(0, 0, x3))
        assert not v.member and v.margin == -math.inf

    @given(st.floats(-1, 1), st.floats(-1, 1), st.floats(0.001, 0.33))
    def test_reflection_symmetry(self, x1, x2, x3):
        base = in_local_region(LambdaPoint(x1, x2, x3))
        for sx, sy in ((-1, 1), (1, -1), (-1, -1)):
            assert in_local_region(LambdaPoint(sx * x1, sy * x2, x3)) == base


class TestCriticalPoints:
    def test_pure_imaginary_roots(self):
        r1, r2 = critical_points(CubicMap(1, 0, 0.1))
        assert abs(r1 - 1j / math.sqrt(0.3)) < 1e-14 or abs(r1 + 1j / math.sqrt(0.3)) < 1e-14
        assert abs(r1 + r2) < 1e-14
        assert abs(r1) == pytest.approx(1.8257418583505538, rel=1e-14)

    def test_factorized(self):
        r1, r2 = critical_points(CubicMap(1, 2 / 3, 1 / 9))
        assert abs(r1 + 1) < 1e-14 and abs(r2 + 3) < 1e-14

    def test_quadratic_formula(self):
        r1, r2 = critical_points(CubicMap(1, 0.4, 0.1))
        assert abs(r1) ** 2 == pytest.approx(1 / 0.3, rel=1e-14)
        assert abs(r1.real + 0.8 / 0.6) < 1e-14

    def test_degenerate(self):
        with pytest.raises(DegenerateDegreeError):
            critical_points(CubicMap(1, 0.4, 0))

    @given(cubic_maps())
    def test_against_numpy_roots(self, f):
        ours = critical_points(f)
        ref = np.roots([3 * f.a3, 2 * f.a2, f.a1])
        for a in ours:
            assert min(abs(a - b) for b in ref) < 1e-9 * max(1, abs(a))
        assert abs(ours[0]) <= abs(ours[1])


class TestLocalOracle:
    def test_member(self):
        v = local_univalence_oracle(CubicMap(1, 0, 0.1))
        assert v.member and v.margin == pytest.approx(0.8257418583505538, rel=1e-14)
        assert v.witness is None

    def test_root_on_circle(self):
        v = local_univalence_oracle(CubicMap(1, 2 / 3, 1 / 9))
        assert not v.member and v.inconclusive and abs(v.witness + 1) < 1e-14

    def test_member_b(self):
        assert local_univalence_oracle(CubicMap(1, 0.4, 0.1)).member

    @given(cubic_maps())
    @settings(max_examples=500)
    def test_agrees_with_ellipse(self, f):
        a = in_local_region(lambda_map(f))
        b = local_univalence_oracle(f)
        if not (a.inconclusive or b.inconclusive):
            assert a.member == b.member


class TestPredicates:
    def test_orientation_exact_on_near_collinear(self):
        a, b = 0j, complex(1, 1)
        c = complex(0.5, 0.5 + 2**-52)
        assert orientation(a, b, c) == 1
        assert orientation(a, b, complex(0.5, 0.5)) == 0
        assert orientation(a, c, b) == -1

    def test_segments(self):
        assert segments_intersect(0j, 1 + 1j, 1j, 1 + 0j)
        assert not segments_intersect(0j, 1 + 0j, 1j, 1 + 1j)
        assert segments_intersect(0j, 1 + 0j, 1 + 0j, 2 + 1j)  # shared endpoint
        assert segments_intersect(0j, 2 + 0j, 1 + 0j, 3 + 0j)  # collinear overlap
        assert not segments_intersect(0j, 1 + 0j, 2 + 0j, 3 + 0j)

    def test_candidates_on_figure_eight(self):
        t = 2 * np.pi * np.arange(64) / 64
        z = np.sin(t) + 1j * np.sin(2 * t) / 2
        pairs = candidate_crossings(z)
        assert len(pairs) > 0
        assert any(segments_intersect(complex(z[i]), complex(z[(i + 1) % 64]),
                                      complex(z[j]), complex(z[(j + 1) % 64])) for i, j in pairs)

    def test_candidates_on_circle(self):
        z = np.exp(2j * np.pi * np.arange(256) / 256)
        assert len(candidate_crossings(z)) == 0


class TestUnivalenceOracle:
    def test_identity_like(self):
        assert univalence_oracle(CubicMap(1, 0, 0.1)).member

    def test_second_example(self):
        assert univalence_oracle(CubicMap(1, 0.4, 0.1)).member

    def test_near_corner_point(self):
        # inside the ellipse (0.66^2 / 1.96^2 < 1/4) and its boundary curve is simple
        f = CubicMap(1, 0.66, 0.32)
        assert in_local_region(lambda_map(f)).member
        v = univalence_oracle(f)
        assert v.member
        assert shapely.LinearRing(np.column_stack([f.boundary(4096).real, f.boundary(4096).imag])).is_simple

    def test_self_crossing_reported_with_witness(self):
        f = CubicMap(1, 0.87, 0.25)
        assert in_local_region(lambda_map(f)).member
        v = univalence_oracle(f)
        assert not v.member and v.witness is not None
        z = f.boundary(4096)
        assert not shapely.LinearRing(np.column_stack([z.real, z.imag])).is_simple
        # the witness lies on the curve: distance to the polyline is tiny
        ring = shapely.LinearRing(np.column_stack([z.real, z.imag]))
        assert ring.distance(shapely.Point(v.witness.real, v.witness.imag)) < 1e-6

    def test_critical_point_inside(self):
        v = univalence_oracle(CubicMap(1, 1.0, 0.3))
        assert not v.member

    def test_too_few_samples(self):
        with pytest.raises(ConfigurationError):
            univalence_oracle(CubicMap(1, 0, 0.1), n_samples=64)

    def test_no_crossing_for_starlike(self):
        assert find_self_intersection(CubicMap(1, 0.1, 0.05)) is None

    @given(local_maps(margin=1e-3))
    @settings(max_examples=150, deadline=None)
    def test_agrees_with_shapely(self, f):
        v = univalence_oracle(f, 4096)
        if v.inconclusive:
            return
        z = f.boundary(4096)
        simple = shapely.LinearRing(np.column_stack([z.real, z.imag])).is_simple
        assert v.member == simple


def test_shapely_agreement_on_seeded_sample(rng):
    """Both outcomes occur, and every decided verdict matches the shapely test."""
    counts = {True: 0, False: 0}
    for _ in range(300):
        # crossings inside the local region only occur near its x1 tips at large s
        s = rng.uniform(0.28, 0.333)
        x1 = rng.choice([-1, 1]) * rng.uniform(0.46, 0.5) * (1 + 3 * s)
        x2 = rng.uniform(-0.1, 0.1) * (1 - 3 * s)
        f = CubicMap(1, complex(x1, x2), s)
        if not in_local_region(lambda_map(f)).member:
            continue
        v = univalence_oracle(f)
        if v.inconclusive:
            continue
        z = f.boundary(4096)
        assert v.member == shapely.LinearRing(np.column_stack([z.real, z.imag])).is_simple
        counts[v.member] += 1
    assert counts[True] > 10 and counts[False] > 10
