import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgcubic import (CubicMap, DegenerateDegreeError, LambdaPoint, SingularParametrizationError,
                     coefficients_from_moments, from_lambda, lambda_from_moments, lambda_map,
                     moments, normalize_rotation)

from conftest import cubic_maps


def brute_moment(f, k, n=4096):
    """(1/pi) * integral of z^k over the image of the unit disk.

    Green: integral of z^k dA = (1/(2i)) * contour integral of z^k conj(z) dz,
    evaluated with the trapezoid rule, exact here for n > 4 (k + 1).
    """
    th = 2 * np.pi * np.arange(n) / n
    zeta = np.exp(1j * th)
    z = f(zeta)
    dz = f.derivative(zeta) * 1j * zeta
    return np.sum(z**k * np.conj(z) * dz) * (2 * np.pi / n) / (2j * np.pi)


class TestCubicMap:
    def test_rejects_nonpositive_a1(self):
        with pytest.raises(ValueError):
            CubicMap(0.0, 0.1, 0.1)

    def test_rejects_negative_a3(self):
        with pytest.raises(ValueError):
            CubicMap(1.0, 0.1, -0.1)

    def test_degree(self):
        assert CubicMap(1, 0.1, 0.1).degree == 3
        assert CubicMap(1, 0.1, 0).degree == 2
        assert CubicMap(1, 0, 0).degree == 1

    def test_derivatives_match_finite_differences(self):
        f = CubicMap(1.3, 0.2 - 0.4j, 0.15)
        z, h = 0.3 + 0.4j, 1e-6
        assert abs((f(z + h) - f(z - h)) / (2 * h) - f.derivative(z)) < 1e-8
        assert abs((f.derivative(z + h) - f.derivative(z - h)) / (2 * h) - f.second_derivative(z)) < 1e-8

    def test_scaled(self):
        g = CubicMap(2.0, 0.2 + 0.2j, 0.4).scaled()
        assert (g.a1, g.a2, g.a3) == (1.0, 0.1 + 0.1j, 0.2)


class TestNormalizeRotation:
    def test_already_normalized(self):
        assert normalize_rotation(1, 0.2, 0.1) == CubicMap(1, 0.2, 0.1)

    def test_negative_a3(self):
        f = normalize_rotation(1, 0, -0.1)
        assert f.a2 == 0 and f.a3 == pytest.approx(0.1, abs=1e-15)

    def test_imaginary_a3(self):
        a2 = 0.1 + 0.1j
        f = normalize_rotation(1, a2, 0.1j)
        assert f.a3 == pytest.approx(0.1)
        assert abs(f.a2) == pytest.approx(abs(a2), rel=1e-15)
        assert cmath.phase(f.a2) == pytest.approx(cmath.phase(a2) - math.pi / 4)
        # rotate back: e^{i theta} g(e^{-i theta} z) recovers the input
        rot = cmath.exp(1j * math.pi / 4)
        assert abs(f.a2 * rot - a2) < 1e-15
        assert abs(f.a3 * rot**2 - 0.1j) < 1e-15

    def test_degenerate(self):
        with pytest.raises(DegenerateDegreeError):
            normalize_rotation(1, 0.3, 0)

    @given(st.floats(0.1, 3), st.complex_numbers(max_magnitude=1), st.complex_numbers(min_magnitude=1e-3, max_magnitude=1))
    def test_image_is_rotated(self, a1, a2, a3):
        g = normalize_rotation(a1, a2, a3)
        assert g.a3 >= 0 and g.a1 == a1
        theta = -cmath.phase(a3) / 2
        z = cmath.exp(0.7j)
        original = a1 * z + a2 * z**2 + a3 * z**3
        assert abs(cmath.exp(-1j * theta) * original - g(cmath.exp(-1j * theta) * z)) < 1e-12


class TestMoments:
    def test_real_example(self):
        m = moments(CubicMap(1, 0.2, 0.1))
        assert m.m1 == pytest.approx(0.26, abs=1e-15)
        assert m.m2 == 0.1
        assert m.m0 == pytest.approx(1.11, abs=1e-15)

    def test_a2_zero(self):
        s = 0.27
        m = moments(CubicMap(1, 0, s))
        assert m.m1 == 0 and m.m2 == s and m.m0 == pytest.approx(1 + 3 * s * s)

    def test_complex_example(self):
        m = moments(CubicMap(1, 0.1 + 0.2j, 0.1))
        assert abs(m.m1 - (0.13 - 0.14j)) < 1e-15
        assert (m.p, m.q) == (m.m1.real, m.m1.imag)

    @pytest.mark.parametrize("f", [CubicMap(1.0, 0.3 - 0.2j, 0.2), CubicMap(1.7, -0.4j, 0.05)])
    def test_against_contour_integral(self, f):
        m = moments(f)
        assert abs(brute_moment(f, 0) - m.m0) < 1e-12
        assert abs(brute_moment(f, 1) - m.m1) < 1e-12
        assert abs(brute_moment(f, 2) - m.m2) < 1e-12


class TestLambda:
    def test_identity_when_a1_is_one(self):
        assert lambda_map(CubicMap(1, 0.1 + 0.2j, 0.1)).as_tuple() == (0.1, 0.2, 0.1)

    def test_division_by_a1(self):
        assert lambda_map(CubicMap(2, 0.2, 0.4)).as_tuple() == (0.1, 0.0, 0.2)

    def test_degenerate(self):
        with pytest.raises(DegenerateDegreeError):
            lambda_map(CubicMap(1, 0.2, 0))

    def test_from_lambda(self):
        assert from_lambda(LambdaPoint(0.1, -0.2, 0.3)) == CubicMap(1, 0.1 - 0.2j, 0.3)

    @given(cubic_maps())
    def test_lambda_from_moments_matches(self, f):
        m = moments(f)
        a, b = lambda_map(f), lambda_from_moments(m.p, m.q, m.m2)
        assert np.allclose(a.as_tuple(), b.as_tuple(), atol=1e-13)


class TestCoefficientsFromMoments:
    def test_trivial(self):
        assert coefficients_from_moments(0, 0, 0.1, 1) == CubicMap(1, 0, 0.1)

    def test_inverse_of_moments_example(self):
        f = coefficients_from_moments(0.26, 0, 0.1, 1)
        assert abs(f.a2 - 0.2) < 1e-15 and f.a3 == 0.1

    def test_at_tau_two(self):
        f = coefficients_from_moments(0.26, 0, 0.1, 2)
        assert f.a2 == pytest.approx(0.26 * 4 / 16.3, rel=1e-15)
        assert f.a3 == pytest.approx(0.0125, rel=1e-15)
        m = moments(f)
        assert abs(m.m1 - 0.26) < 1e-15 and abs(m.m2 - 0.1) < 1e-15

    def test_no_signed_zero(self):
        f = coefficients_from_moments(0.3, 0.0, 0.1, 1.5)
        assert math.copysign(1, f.a2.imag) == 1

    def test_singular(self):
        with pytest.raises(SingularParametrizationError):
            coefficients_from_moments(0.2, 0.1, 1 / 3, 1.0)

    @given(cubic_maps(), st.floats(1.0, 5.0))
    @settings(max_examples=200)
    def test_moments_conserved_along_tau(self, f, tau):
        m = moments(f)
        g = coefficients_from_moments(m.p, m.q, m.m2, tau)
        mg = moments(g)
        assert abs(mg.m1 - m.m1) < 1e-12 and abs(mg.m2 - m.m2) < 1e-13
        assert g.a1 == tau

    @given(cubic_maps())
    def test_round_trip(self, f):
        m = moments(f)
        g = coefficients_from_moments(m.p, m.q, m.m2, 1.0)
        assert abs(g.a2 - f.a2) < 1e-12 and abs(g.a3 - f.a3) < 1e-15
