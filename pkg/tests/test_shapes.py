import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heatcov import (
    ConvexPolygon,
    Interval,
    Rectangle,
    UnitBall,
    covariance,
    covariance_profile,
    covariance_self_checks,
    directional_variation,
    gamma,
    gamma_profile,
    gamma_weighted_closed_form,
    gamma_weighted_integral,
    geometry,
    perimeter_from_variations,
    shape_from_json,
    square_I_terms,
    theta_integral,
    unit_ball_volume,
    unit_sphere_area,
)
from heatcov.errors import (
    DimensionMismatchError,
    DomainError,
    InvalidShapeError,
    NonUnitVectorError,
)

SQRT2 = math.sqrt(2.0)

TRIANGLE = ConvexPolygon([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
SQUARE_POLY = ConvexPolygon([(1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0)])


class TestShapeConstruction:
    def test_rejects_nonconvex(self):
        with pytest.raises(InvalidShapeError):
            ConvexPolygon([(0, 0), (2, 0), (1, 0.5), (2, 2), (0, 2)])

    def test_rejects_clockwise(self):
        with pytest.raises(InvalidShapeError):
            ConvexPolygon([(0, 0), (0, 1), (1, 0)])

    def test_rejects_repeated_vertices(self):
        with pytest.raises(InvalidShapeError):
            ConvexPolygon([(0, 0), (0, 0), (1, 0), (0, 1)])

    def test_drops_collinear(self):
        p = ConvexPolygon([(0, 0), (0.5, 0.0), (1, 0), (0, 1)])
        assert len(p.vertices) == 3

    def test_rectangle_positive(self):
        with pytest.raises(InvalidShapeError):
            Rectangle(0.0, 1.0)

    def test_interval_order(self):
        with pytest.raises(InvalidShapeError):
            Interval(1.0, 1.0)

    def test_from_json(self):
        assert shape_from_json({"kind": "ball", "dim": 3}) == UnitBall(3)
        assert shape_from_json({"kind": "rectangle", "half_widths": [1, 2]}) == Rectangle(1.0, 2.0)
        assert shape_from_json({"kind": "interval", "a": 0, "b": 1}) == Interval(0.0, 1.0)
        poly = shape_from_json({"kind": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]})
        assert geometry(poly).volume == pytest.approx(0.5)
        with pytest.raises(InvalidShapeError):
            shape_from_json({"kind": "blob"})


class TestGeometry:
    def test_ball2(self):
        geo = geometry(UnitBall(2))
        assert geo.volume == pytest.approx(math.pi)
        assert geo.perimeter == pytest.approx(2.0 * math.pi)
        assert geo.support_radius == 2.0

    def test_unit_square(self):
        geo = geometry(Rectangle(1.0, 1.0))
        assert (geo.volume, geo.perimeter) == (4.0, 8.0)
        assert geo.support_radius == pytest.approx(2.0 * SQRT2)

    def test_triangle(self):
        geo = geometry(TRIANGLE)
        assert geo.volume == pytest.approx(0.5)
        assert geo.perimeter == pytest.approx(2.0 + SQRT2)
        assert geo.support_radius == pytest.approx(SQRT2)

    def test_interval(self):
        geo = geometry(Interval(0.0, 1.0))
        assert (geo.volume, geo.perimeter, geo.support_radius) == (1.0, 2.0, 1.0)


class TestDirectionalVariation:
    @pytest.mark.parametrize("theta", [0.0, 0.3, math.pi / 4, 1.9, 4.0])
    def test_square_formula(self, theta):
        u = (math.cos(theta), math.sin(theta))
        expected = 4.0 * (abs(u[0]) + abs(u[1]))
        assert directional_variation(Rectangle(1.0, 1.0), u) == pytest.approx(expected)
        assert directional_variation(SQUARE_POLY, u) == pytest.approx(expected)

    def test_ball2_constant(self):
        for theta in (0.0, 1.0, 2.5):
            u = (math.cos(theta), math.sin(theta))
            assert directional_variation(UnitBall(2), u) == pytest.approx(4.0)

    def test_ball3_constant(self):
        assert directional_variation(UnitBall(3), (0, 0, 1.0)) == pytest.approx(2.0 * math.pi)

    def test_interval(self):
        assert directional_variation(Interval(0, 2), (1.0,)) == 2.0

    def test_non_unit_rejected(self):
        with pytest.raises(NonUnitVectorError):
            directional_variation(UnitBall(2), (1.0, 1.0))


class TestPerimeterIdentity:
    def test_ball2(self, quad):
        assert perimeter_from_variations(UnitBall(2), quad) == pytest.approx(
            2.0 * math.pi, abs=1e-10
        )

    def test_square(self, quad):
        assert perimeter_from_variations(Rectangle(1.0, 1.0), quad) == pytest.approx(
            8.0, abs=1e-8
        )

    def test_ball3(self, quad):
        assert perimeter_from_variations(UnitBall(3), quad) == pytest.approx(
            4.0 * math.pi, abs=1e-8
        )

    def test_triangle_matches_geometry(self, quad):
        assert perimeter_from_variations(TRIANGLE, quad) == pytest.approx(
            geometry(TRIANGLE).perimeter, abs=1e-8
        )


class TestThetaIntegral:
    def test_closed_values(self):
        assert theta_integral(2, 1.0) == pytest.approx(math.pi / 4.0)
        assert theta_integral(3, 1.0) == pytest.approx(1.0 / 3.0)
        assert theta_integral(2, 0.0) == 0.0

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 7])
    def test_theta_one_identity(self, d):
        expected = unit_ball_volume(d) / (2.0 * unit_sphere_area(d - 1))
        assert theta_integral(d, 1.0) == pytest.approx(expected, rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            theta_integral(2, 1.5)
        with pytest.raises(DomainError):
            theta_integral(1, 0.5)


class TestCovariance:
    def test_ball2_formula(self):
        for s in (0.1, 0.4, 0.75, 0.99):
            expected = 2.0 * math.asin(math.sqrt(1 - s * s)) - 2.0 * s * math.sqrt(1 - s * s)
            assert covariance(UnitBall(2), (2.0 * s, 0.0)) == pytest.approx(expected, abs=1e-12)

    def test_square_values(self):
        q = Rectangle(1.0, 1.0)
        assert covariance(q, (0.0, 0.0)) == 4.0
        assert covariance(q, (1.0, 1.0)) == 1.0
        assert covariance(q, (2.0, 0.3)) == 0.0

    def test_ball3_half(self):
        assert covariance(UnitBall(3), (0.0, 0.0, 1.0)) == pytest.approx(
            5.0 * math.pi / 12.0, abs=1e-12
        )

    def test_polygon_matches_rectangle_closed_form(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            y = rng.uniform(-2.4, 2.4, 2)
            assert covariance(SQUARE_POLY, y) == pytest.approx(
                covariance(Rectangle(1.0, 1.0), y), abs=1e-10
            )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            covariance(UnitBall(2), (1.0, 0.0, 0.0))

    @settings(max_examples=50, deadline=None)
    @given(
        h1=st.floats(0.1, 3.0),
        h2=st.floats(0.1, 3.0),
        y1=st.floats(-8, 8),
        y2=st.floats(-8, 8),
    )
    def test_rectangle_properties(self, h1, h2, y1, y2):
        r = Rectangle(h1, h2)
        geo = geometry(r)
        g = covariance(r, (y1, y2))
        assert 0.0 <= g <= geo.volume + 1e-12
        assert g == pytest.approx(covariance(r, (-y1, -y2)), rel=1e-14)
        if math.hypot(y1, y2) >= geo.support_radius:
            assert g == 0.0

    def test_profile(self):
        prof = covariance_profile(UnitBall(2))
        assert prof.closed_form
        assert prof.support_radius == 2.0
        assert prof.eval((0.0, 0.0)) == pytest.approx(math.pi)


def _square_gamma_oracle(s):
    """Fixed-grid deficit integral over 2^16 angles (independent of gamma())."""
    ell = 2.0 * SQRT2
    r = ell * s
    th = np.linspace(0.0, 2.0 * np.pi, 2**16, endpoint=False) + np.pi / 2**16
    c, si = np.cos(th), np.sin(th)
    vu_half = 2.0 * (np.abs(c) + np.abs(si))
    gy = np.maximum(0.0, 2.0 - r * np.abs(c)) * np.maximum(0.0, 2.0 - r * np.abs(si))
    return float(np.mean(vu_half - (4.0 - gy) / r) * 2.0 * np.pi)


class TestGamma:
    def test_ball3(self):
        for s in (0.2, 0.5, 0.9):
            assert gamma(UnitBall(3), s) == pytest.approx(4.0 / 3.0 * math.pi**2 * s * s)
        assert gamma(UnitBall(3), 0.5) == pytest.approx(math.pi**2 / 3.0)

    def test_ball2_at_one(self):
        assert gamma(UnitBall(2), 1.0) == pytest.approx(4.0 * math.pi - math.pi**2, abs=1e-12)

    def test_square_against_angle_grid_oracle(self):
        q = Rectangle(1.0, 1.0)
        for s in (0.3, 0.6, 0.9, 1.0):
            assert gamma(q, s) == pytest.approx(_square_gamma_oracle(s), abs=1e-6)

    def test_interval_vanishes(self):
        assert gamma(Interval(0.0, 1.0), 0.5) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma(UnitBall(2), 0.0)
        with pytest.raises(DomainError):
            gamma(UnitBall(2), 1.5)

    def test_nonnegative_probes(self, quad):
        rng = np.random.default_rng(7)
        for shape in (UnitBall(2), UnitBall(3), Rectangle(1.0, 1.0), TRIANGLE):
            for s in rng.uniform(1e-3, 1.0, 25):
                assert gamma(shape, float(s), quad) >= -1e-8

    @pytest.mark.parametrize("d", [2, 3])
    def test_ball_gamma_bound(self, d):
        # gamma_B(2s) <= A_d w_{d-1} sigma_d s^2
        sigma = 1.0 if d == 2 else (d - 1) / 2.0
        bound = unit_sphere_area(d) * unit_ball_volume(d - 1) * sigma
        rng = np.random.default_rng(d)
        for s in rng.uniform(1e-6, 1.0, 1000):
            assert gamma(UnitBall(d), float(s)) <= bound * s * s + 1e-12


class TestGammaWeightedIntegral:
    def test_ball2(self, quad):
        value, integrable, err = gamma_weighted_integral(UnitBall(2), quad)
        assert integrable
        assert value == pytest.approx(math.pi * (math.pi - 4.0 * math.log(2.0)), abs=1e-8)

    def test_ball3(self, quad):
        value, integrable, _ = gamma_weighted_integral(UnitBall(3), quad)
        assert integrable
        assert value == pytest.approx(2.0 * math.pi**2 / 3.0, abs=1e-8)

    def test_square(self, quad):
        value, integrable, _ = gamma_weighted_integral(Rectangle(1.0, 1.0), quad)
        assert integrable
        expected = 2.0 * SQRT2 * (math.pi - 8.0) + 8.0 * math.log(2.0 * (3.0 + 2.0 * SQRT2))
        assert value == pytest.approx(expected, abs=1e-8)
        assert gamma_weighted_closed_form(Rectangle(1.0, 1.0)) == pytest.approx(expected)

    def test_profile(self, quad):
        prof = gamma_profile(UnitBall(3), quad)
        assert prof.integrable
        assert prof.eval(0.5) == pytest.approx(math.pi**2 / 3.0)


class TestSquareITerms:
    def test_closed_forms(self, quad):
        terms = square_I_terms(quad)
        i0 = 2.0 * math.log(2.0 + SQRT2) + SQRT2 / 4.0 * (math.pi - 8.0)
        i2 = (
            2.0 * math.log(2.0)
            - 2.0 * math.log(2.0 + SQRT2)
            + 4.0 * math.log(SQRT2 + 1.0)
            + SQRT2 / 4.0 * (math.pi - 8.0)
        )
        assert terms[0] == pytest.approx(i0, abs=1e-8)
        assert terms[2] == pytest.approx(i2, abs=1e-8)

    def test_symmetries(self, quad):
        terms = square_I_terms(quad)
        for i in range(4):
            assert terms[i] == pytest.approx(terms[i + 4], abs=1e-8)

    def test_sum_matches_weighted_integral(self, quad):
        terms = square_I_terms(quad)
        value, _, _ = gamma_weighted_integral(Rectangle(1.0, 1.0), quad)
        assert sum(terms) == pytest.approx(value, abs=1e-8)


class TestSelfChecks:
    @pytest.mark.parametrize(
        "shape",
        [UnitBall(2), Rectangle(1.0, 1.0), TRIANGLE, Interval(0.0, 1.0)],
        ids=["ball2", "square", "triangle", "interval"],
    )
    def test_all_pass(self, shape, quad):
        report = covariance_self_checks(shape, quad, seed=123)
        failing = [c for c in report.checks if not c.passed]
        assert not failing, failing
