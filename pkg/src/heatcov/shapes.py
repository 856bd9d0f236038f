"""Shape descriptors, exact geometry, and set covariance evaluators.

Supported shapes are the unit ball (any dimension up to the package
guard), axis-aligned rectangles, convex polygons, and 1-D intervals.
All shapes are convex, so the covariance support radius equals the
diameter exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import kernel
from .errors import (
    DimensionMismatchError,
    DivergenceSuspectedError,
    DomainError,
    InvalidShapeError,
    NonUnitVectorError,
    QuadratureError,
)
from .quadrature import QuadSpec, integrate_1d, integrate_circle, integrate_sphere

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# Shape descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitBall:
    d: int

    def __post_init__(self):
        if not 1 <= self.d <= kernel.MAX_DIM:
            raise InvalidShapeError(f"ball dimension must be in [1, {kernel.MAX_DIM}]")

    @property
    def dim(self) -> int:
        return self.d


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle [-h1, h1] x [-h2, h2]."""

    h1: float
    h2: float

    def __post_init__(self):
        if self.h1 <= 0 or self.h2 <= 0:
            raise InvalidShapeError("rectangle half-widths must be positive")

    @property
    def dim(self) -> int:
        return 2

    @property
    def is_unit_square(self) -> bool:
        return self.h1 == 1.0 and self.h2 == 1.0


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex polygon with counterclockwise vertices; collinear points dropped."""

    vertices: tuple = field()

    def __init__(self, vertices: Sequence[Sequence[float]]):
        pts = [np.asarray(v, dtype=float) for v in vertices]
        if len(pts) < 3:
            raise InvalidShapeError("polygon needs at least 3 vertices")
        for p in pts:
            if p.shape != (2,):
                raise InvalidShapeError("polygon vertices must be 2-D points")
        for i, p in enumerate(pts):
            q = pts[(i + 1) % len(pts)]
            if np.linalg.norm(p - q) < 1e-12:
                raise InvalidShapeError(f"repeated vertex near {p}")
        # drop collinear vertices, then demand strict convexity and CCW order
        kept = []
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if abs(cross) > 1e-12:
                kept.append(b)
        if len(kept) < 3:
            raise InvalidShapeError("polygon is degenerate after removing collinear points")
        n = len(kept)
        for i in range(n):
            a, b, c = kept[i - 1], kept[i], kept[(i + 1) % n]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if cross <= 0:
                raise InvalidShapeError(
                    "polygon must be convex with counterclockwise orientation"
                )
        object.__setattr__(self, "vertices", tuple(tuple(p) for p in kept))

    @property
    def dim(self) -> int:
        return 2

    def vertex_array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise InvalidShapeError("interval requires a < b")

    @property
    def dim(self) -> int:
        return 1

    @property
    def length(self) -> float:
        return self.b - self.a


Shape = Union[UnitBall, Rectangle, ConvexPolygon, Interval]


def shape_from_json(obj: dict) -> Shape:
    """Build a shape from the CLI's JSON object format."""
    kind = obj.get("kind")
    if kind == "ball":
        return UnitBall(int(obj["dim"]))
    if kind == "rectangle":
        hw = obj["half_widths"]
        if len(hw) != 2:
            raise InvalidShapeError("rectangle needs exactly two half-widths")
        return Rectangle(float(hw[0]), float(hw[1]))
    if kind == "polygon":
        return ConvexPolygon(obj["vertices"])
    if kind == "interval":
        return Interval(float(obj["a"]), float(obj["b"]))
    raise InvalidShapeError(f"unknown shape kind {kind!r}")


# ---------------------------------------------------------------------------
# Exact geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShapeGeometry:
    volume: float
    perimeter: float
    support_radius: float
    dim: int


def _polygon_area(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def geometry(shape: Shape) -> ShapeGeometry:
    """Closed-form volume, perimeter, and support radius (= diameter)."""
    if isinstance(shape, UnitBall):
        return ShapeGeometry(
            volume=kernel.unit_ball_volume(shape.d),
            perimeter=kernel.unit_sphere_area(shape.d),
            support_radius=2.0,
            dim=shape.d,
        )
    if isinstance(shape, Rectangle):
        return ShapeGeometry(
            volume=4.0 * shape.h1 * shape.h2,
            perimeter=4.0 * (shape.h1 + shape.h2),
            support_radius=2.0 * math.hypot(shape.h1, shape.h2),
            dim=2,
        )
    if isinstance(shape, ConvexPolygon):
        verts = shape.vertex_array()
        per = float(np.sum(np.linalg.norm(np.roll(verts, -1, axis=0) - verts, axis=1)))
        diam = max(
            float(np.linalg.norm(verts[i] - verts[j]))
            for i in range(len(verts))
            for j in range(i + 1, len(verts))
        )
        return ShapeGeometry(
            volume=_polygon_area(verts), perimeter=per, support_radius=diam, dim=2
        )
    if isinstance(shape, Interval):
        return ShapeGeometry(
            volume=shape.length, perimeter=2.0, support_radius=shape.length, dim=1
        )
    raise InvalidShapeError(f"unsupported shape {shape!r}")


# ---------------------------------------------------------------------------
# Directional variation and the perimeter identity
# ---------------------------------------------------------------------------

def _check_unit(u, dim: int) -> np.ndarray:
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if u.shape != (dim,):
        raise DimensionMismatchError(f"direction must have dimension {dim}")
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise NonUnitVectorError(f"|u| = {np.linalg.norm(u)} is not 1")
    return u


def directional_variation(shape: Shape, u) -> float:
    """Total variation of the indicator in direction u (twice the shadow width)."""
    geo = geometry(shape)
    u = _check_unit(u, geo.dim)
    if isinstance(shape, UnitBall):
        return 2.0 * kernel.unit_ball_volume(shape.d - 1) if shape.d >= 2 else 2.0
    if isinstance(shape, Rectangle):
        return 4.0 * (shape.h2 * abs(u[0]) + shape.h1 * abs(u[1]))
    if isinstance(shape, ConvexPolygon):
        verts = shape.vertex_array()
        edges = np.roll(verts, -1, axis=0) - verts
        # outward normal of a CCW edge (dx, dy) is (dy, -dx); |n.u|*len folds
        # the edge length into the unnormalized normal
        return float(np.sum(np.abs(edges[:, 1] * u[0] - edges[:, 0] * u[1])))
    if isinstance(shape, Interval):
        return 2.0
    raise InvalidShapeError(f"unsupported shape {shape!r}")


def perimeter_from_variations(shape: Shape, quad: QuadSpec = QuadSpec()) -> float:
    """Recover Per via the spherical average of directional variations."""
    geo = geometry(shape)
    if geo.dim == 2:
        value, _ = integrate_circle(
            lambda th: directional_variation(shape, (math.cos(th), math.sin(th))),
            kinks=support_kinks(shape),
            spec=quad,
        )
        return value / (2.0 * kernel.unit_ball_volume(1))
    if geo.dim == 3:
        value, _ = integrate_sphere(lambda v: directional_variation(shape, v), quad)
        return value / (2.0 * kernel.unit_ball_volume(2))
    raise DomainError("perimeter_from_variations supports dim 2 and 3 only")


# ---------------------------------------------------------------------------
# Two-ball intersection helper
# ---------------------------------------------------------------------------

def theta_integral(d: int, z: float, quad: QuadSpec = QuadSpec()) -> float:
    """Theta(z) = integral over (0, arcsin z) of sin^(d-2) * cos^2."""
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"z must lie in [0, 1], got {z}")
    if d < 2:
        raise DomainError("theta_integral requires d >= 2")
    if d == 2:
        return 0.5 * (math.asin(z) + z * math.sqrt(max(0.0, 1.0 - z * z)))
    if d == 3:
        return (1.0 - (1.0 - z * z) ** 1.5) / 3.0
    if z == 0.0:
        return 0.0
    val, _ = integrate_1d(
        lambda th: math.sin(th) ** (d - 2) * math.cos(th) ** 2, 0.0, math.asin(z), quad
    )
    return val


# ---------------------------------------------------------------------------
# Covariance evaluators
# ---------------------------------------------------------------------------

def _clip_halfplane(poly: list, a: np.ndarray, b: np.ndarray) -> list:
    """Keep the part of poly on the left of the directed line a -> b."""
    out = []
    n = len(poly)
    d = b - a
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        sp = d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0])
        sq = d[0] * (q[1] - a[1]) - d[1] * (q[0] - a[0])
        if sp >= 0:
            out.append(p)
        if (sp > 0 > sq) or (sp < 0 < sq):
            t = sp / (sp - sq)
            out.append(p + t * (q - p))
    return out


def _polygon_intersection_area(verts: np.ndarray, offset: np.ndarray) -> float:
    """Area of P intersected with P + offset via half-plane clipping."""
    poly = [v.copy() for v in verts]
    shifted = verts + offset
    n = len(shifted)
    for i in range(n):
        poly = _clip_halfplane(poly, shifted[i], shifted[(i + 1) % n])
        if len(poly) < 3:
            return 0.0
    area = _polygon_area(np.array(poly))
    return area if area > 1e-14 else 0.0


def ball_covariance_radial(d: int, r: float, quad: QuadSpec = QuadSpec()) -> float:
    """g_B(r e) for the unit ball in R^d, zero for r >= 2."""
    if r < 0:
        raise DomainError("radius must be nonnegative")
    if r >= 2.0:
        return 0.0
    s = r / 2.0
    z = math.sqrt(max(0.0, 1.0 - s * s))
    if d == 1:
        return 2.0 - r
    return (
        2.0 * kernel.unit_sphere_area(d - 1) * theta_integral(d, z, quad)
        - 2.0 * s * kernel.unit_ball_volume(d - 1) * z ** (d - 1)
    )


def covariance(shape: Shape, y, quad: QuadSpec = QuadSpec()) -> float:
    """Set covariance g(y) = |Omega intersect (Omega + y)|."""
    geo = geometry(shape)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.shape != (geo.dim,):
        raise DimensionMismatchError(
            f"point has shape {y.shape}, shape has dimension {geo.dim}"
        )
    if isinstance(shape, UnitBall):
        return ball_covariance_radial(shape.d, float(np.linalg.norm(y)), quad)
    if isinstance(shape, Rectangle):
        gx = max(0.0, 2.0 * shape.h1 - abs(y[0]))
        gy = max(0.0, 2.0 * shape.h2 - abs(y[1]))
        return gx * gy
    if isinstance(shape, ConvexPolygon):
        return _polygon_intersection_area(shape.vertex_array(), y)
    if isinstance(shape, Interval):
        return max(0.0, shape.length - abs(float(y[0])))
    raise InvalidShapeError(f"unsupported shape {shape!r}")


@dataclass(frozen=True)
class CovarianceProfile:
    shape: Shape
    eval: Callable[[object], float]
    support_radius: float
    closed_form: bool


def covariance_profile(shape: Shape, quad: QuadSpec = QuadSpec()) -> CovarianceProfile:
    geo = geometry(shape)
    return CovarianceProfile(
        shape=shape,
        eval=lambda y: covariance(shape, y, quad),
        support_radius=geo.support_radius,
        closed_form=not isinstance(shape, ConvexPolygon),
    )


# ---------------------------------------------------------------------------
# Support geometry in polar form (2-D shapes)
# ---------------------------------------------------------------------------

def _difference_body(shape: Shape) -> np.ndarray:
    """Vertices (CCW) of the covariance support, the difference body of Omega."""
    if isinstance(shape, Rectangle):
        a, b = 2.0 * shape.h1, 2.0 * shape.h2
        return np.array([[a, b], [-a, b], [-a, -b], [a, -b]])
    if isinstance(shape, ConvexPolygon):
        verts = shape.vertex_array()
        diffs = (verts[:, None, :] - verts[None, :, :]).reshape(-1, 2)
        return _convex_hull(diffs)
    raise InvalidShapeError("difference body defined for 2-D polytopes only")


def _convex_hull(points: np.ndarray) -> np.ndarray:
    pts = sorted({(float(p[0]), float(p[1])) for p in points})
    if len(pts) < 3:
        raise InvalidShapeError("degenerate point set for hull")

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 1e-14:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return np.array(lower[:-1] + upper[:-1])


def support_kinks(shape: Shape) -> list:
    """Angles where circle integrands for this shape lose smoothness.

    Covers both the corners of the covariance support (difference body)
    and the edge directions of the shape itself, where the piecewise
    structure of g along rays changes.
    """
    if isinstance(shape, UnitBall) or isinstance(shape, Interval):
        return []
    body = _difference_body(shape)
    angles = {math.atan2(v[1], v[0]) % (2.0 * math.pi) for v in body}
    if isinstance(shape, Rectangle):
        edges = np.array([[1.0, 0.0], [0.0, 1.0]])
    else:
        verts = shape.vertex_array()
        edges = np.roll(verts, -1, axis=0) - verts
    for e in edges:
        a = math.atan2(e[1], e[0])
        angles.add(a % (2.0 * math.pi))
        angles.add((a + math.pi) % (2.0 * math.pi))
    return sorted(angles)


def support_radius_at(shape: Shape, theta: float) -> float:
    """Distance from the origin to the support boundary in direction theta."""
    if isinstance(shape, UnitBall):
        return 2.0
    if isinstance(shape, Interval):
        return shape.length
    u = np.array([math.cos(theta), math.sin(theta)])
    body = _difference_body(shape)
    n = len(body)
    r_min = math.inf
    for i in range(n):
        a, b = body[i], body[(i + 1) % n]
        edge = b - a
        normal = np.array([edge[1], -edge[0]])  # outward for CCW
        c = float(np.dot(normal, a))
        du = float(np.dot(normal, u))
        if du > 1e-15:
            r_min = min(r_min, c / du)
    if not math.isfinite(r_min):
        raise QuadratureError(f"no support boundary in direction {theta}")
    return r_min


def _circle_crossing_kinks(shape: Shape, r: float) -> list:
    """Angles where the circle of radius r crosses the support boundary."""
    if isinstance(shape, (UnitBall, Interval)):
        return []
    body = _difference_body(shape)
    angles = []
    n = len(body)
    for i in range(n):
        a, b = body[i], body[(i + 1) % n]
        d = b - a
        # |a + t d|^2 = r^2
        aa = float(np.dot(d, d))
        bb = 2.0 * float(np.dot(a, d))
        cc = float(np.dot(a, a)) - r * r
        disc = bb * bb - 4 * aa * cc
        if disc < 0:
            continue
        sq = math.sqrt(disc)
        for t in ((-bb - sq) / (2 * aa), (-bb + sq) / (2 * aa)):
            if 0.0 <= t <= 1.0:
                p = a + t * d
                angles.append(math.atan2(p[1], p[0]) % (2.0 * math.pi))
    return angles


# ---------------------------------------------------------------------------
# gamma and its weighted integral
# ---------------------------------------------------------------------------

def _asin_over_x_minus_one(x: float) -> float:
    """(arcsin x)/x - 1, series-stabilized for small x."""
    if x < 1e-3:
        x2 = x * x
        return x2 * (1.0 / 6.0 + x2 * (3.0 / 40.0 + x2 * 15.0 / 336.0))
    return math.asin(x) / x - 1.0


def _gamma_ball(d: int, s: float, quad: QuadSpec) -> float:
    """gamma_B(2s) for the unit ball in R^d."""
    if d == 2:
        # 2*pi*(2 - sqrt(1-s^2) - arcsin(s)/s) with the two near-cancelling
        # pairs rewritten: 2 - sqrt(1-s^2) = 1 + s^2/(1+sqrt(1-s^2)) and
        # arcsin(s)/s = 1 + series, so the 1's drop out exactly.
        root = math.sqrt(max(0.0, 1.0 - s * s))
        return 2.0 * math.pi * (s * s / (1.0 + root) - _asin_over_x_minus_one(s))
    if d == 3:
        return (4.0 / 3.0) * math.pi**2 * s * s
    a_d = kernel.unit_sphere_area(d)
    w_dm1 = kernel.unit_ball_volume(d - 1)
    a_dm1 = kernel.unit_sphere_area(d - 1)
    one_minus = -math.expm1(0.5 * (d - 1) * math.log1p(-s * s))
    # (Theta(1) - Theta(sqrt(1-s^2)))/s as an integral over the small cap
    cap, _ = integrate_1d(
        lambda ph: math.cos(ph) ** (d - 2) * math.sin(ph) ** 2, 0.0, math.asin(s), quad
    )
    return a_d * (w_dm1 * one_minus - a_dm1 * cap / s)


def _gamma_unit_square(s: float) -> float:
    """gamma_Q(2*sqrt(2)*s) for the square [-1,1]^2, from the sector split."""
    if s <= 1.0 / SQRT2:
        return 4.0 * SQRT2 * s
    c = 1.0 / (SQRT2 * s)
    tstar = math.acos(min(1.0, c))
    st, ct = math.sin(tstar), math.cos(tstar)
    sector = (
        2.0 * (st + 1.0 - ct)
        - SQRT2 * tstar / s
        + 2.0 * SQRT2 * s * (0.25 - 0.5 * st * st)
    )
    return 8.0 * sector


def _gamma_generic_2d(shape: Shape, s: float, quad: QuadSpec) -> float:
    geo = geometry(shape)
    ell = geo.support_radius
    r = ell * s

    def deficit(theta):
        u = (math.cos(theta), math.sin(theta))
        vu = directional_variation(shape, u)
        g0 = geo.volume
        gy = covariance(shape, np.array(u) * r, quad)
        return vu / 2.0 - (g0 - gy) / r

    kinks = support_kinks(shape) + _circle_crossing_kinks(shape, r)
    value, _ = integrate_circle(deficit, kinks=kinks, spec=quad)
    return value


def gamma(shape: Shape, s: float, quad: QuadSpec = QuadSpec()) -> float:
    """gamma(ell * s): spherical deficit between V_u/2 and the covariance slope."""
    if not 0.0 < s <= 1.0:
        raise DomainError(f"s must lie in (0, 1], got {s}")
    if isinstance(shape, UnitBall):
        value = _gamma_ball(shape.d, s, quad)
    elif isinstance(shape, Interval):
        value = 0.0
    elif isinstance(shape, Rectangle) and shape.is_unit_square:
        value = _gamma_unit_square(s)
    else:
        value = _gamma_generic_2d(shape, s, quad)
    if value < -1e-8:
        raise QuadratureError(f"gamma({s}) = {value} < 0 violates the slope bound")
    return value


def gamma_weighted_closed_form(shape: Shape) -> Optional[float]:
    """Known closed-form values of the s^-1-weighted gamma integral."""
    if isinstance(shape, UnitBall) and shape.d == 2:
        return math.pi * (math.pi - 4.0 * math.log(2.0))
    if isinstance(shape, UnitBall) and shape.d == 3:
        return 2.0 * math.pi**2 / 3.0
    if isinstance(shape, Rectangle) and shape.is_unit_square:
        return 2.0 * SQRT2 * (math.pi - 8.0) + 8.0 * math.log(2.0 * (3.0 + 2.0 * SQRT2))
    if isinstance(shape, Interval):
        return 0.0
    return None


def gamma_weighted_integral(shape: Shape, quad: QuadSpec = QuadSpec(), max_k: int = 48):
    """Integral over (0, 1] of gamma(ell*s)/s by dyadic panels.

    Returns (value, integrable, err_estimate).  Panels are summed from the
    smallest scale up; the integrable flag records whether the dyadic
    contributions decay geometrically (the class-W diagnostic).
    """
    if isinstance(shape, Interval):
        return 0.0, True, 0.0

    def integrand(s):
        return gamma(shape, s, quad) / s

    contributions = []
    errors = []
    for k in range(max_k + 1):
        lo, hi = 2.0 ** (-k - 1), 2.0 ** (-k)
        val, err = integrate_1d(integrand, lo, hi, quad)
        contributions.append(val)
        errors.append(err)
        if k >= 4 and abs(val) < 1e-3 * quad.abs_tol:
            break
    ratios = [
        abs(contributions[i + 1]) / abs(contributions[i])
        for i in range(len(contributions) - 1)
        if abs(contributions[i]) > 0
    ]
    tail_ratios = ratios[-4:] if len(ratios) >= 4 else ratios
    growing = sum(1 for r in ratios[-3:] if r >= 1.0)
    last = abs(contributions[-1])
    if growing >= 3 and last > quad.abs_tol:
        raise DivergenceSuspectedError(
            "dyadic contributions of s^-1 * gamma fail to decay"
        )
    integrable = bool(tail_ratios) and max(tail_ratios) < 0.95
    r_tail = min(max(tail_ratios, default=0.0), 0.9)
    truncation = last * r_tail / (1.0 - r_tail)
    value = math.fsum(reversed(contributions))
    err = math.fsum(errors) + truncation
    return value, integrable, err


@dataclass(frozen=True)
class GammaProfile:
    shape: Shape
    eval: Callable[[float], float]
    weighted_integral: float
    integrable: bool


def gamma_profile(shape: Shape, quad: QuadSpec = QuadSpec()) -> GammaProfile:
    value, integrable, _ = gamma_weighted_integral(shape, quad)
    return GammaProfile(
        shape=shape,
        eval=lambda s: gamma(shape, s, quad),
        weighted_integral=value,
        integrable=integrable,
    )


# ---------------------------------------------------------------------------
# The square's eight sector integrals
# ---------------------------------------------------------------------------

def _eta(i: int, theta: float) -> float:
    if i in (0, 3, 4, 7):
        return 2.0 / abs(math.cos(theta))
    return 2.0 / abs(math.sin(theta))


def square_I_terms(quad: QuadSpec = QuadSpec()) -> list:
    """The eight sector integrals whose sum is the square's gamma integral."""
    terms = []
    for i in range(8):
        lo, hi = math.pi / 4.0 * i, math.pi / 4.0 * (i + 1)

        def integrand(theta, _i=i):
            eta = _eta(_i, theta)
            ac, as_ = abs(math.cos(theta)), abs(math.sin(theta))
            return (
                ac * as_ * eta
                + 2.0 * (ac + as_) * math.log(2.0 * SQRT2 / eta)
                + SQRT2 * (1.0 - 2.0 * SQRT2 / eta)
            )

        val, _ = integrate_1d(integrand, lo, hi, quad)
        terms.append(val)
    return terms


# ---------------------------------------------------------------------------
# Randomized covariance property checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class CovarianceReport:
    shape: Shape
    checks: tuple

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def covariance_integral(shape: Shape, quad: QuadSpec = QuadSpec()) -> float:
    """Integral of g over its support; equals |Omega|^2."""
    geo = geometry(shape)
    if isinstance(shape, UnitBall):
        val, _ = integrate_1d(
            lambda r: r ** (shape.d - 1) * ball_covariance_radial(shape.d, r, quad),
            0.0,
            2.0,
            quad,
        )
        return kernel.unit_sphere_area(shape.d) * val
    if isinstance(shape, Interval):
        val, _ = integrate_1d(
            lambda y: max(0.0, shape.length - abs(y)),
            -shape.length,
            shape.length,
            quad,
        )
        return val
    if isinstance(shape, Rectangle):
        acc = 1.0
        for h in (shape.h1, shape.h2):
            val, _ = integrate_1d(
                lambda y, _h=h: max(0.0, 2.0 * _h - abs(y)), -2.0 * h, 2.0 * h, quad,
                points=[0.0],
            )
            acc *= val
        return acc
    # polygon: polar integration over the difference body
    def per_angle(theta):
        rb = support_radius_at(shape, theta)
        inner, _ = integrate_1d(
            lambda r: r * covariance(
                shape, np.array([r * math.cos(theta), r * math.sin(theta)]), quad
            ),
            0.0,
            rb,
            QuadSpec(abs_tol=max(quad.abs_tol, 1e-9), rel_tol=max(quad.rel_tol, 1e-9)),
        )
        return inner

    val, _ = integrate_circle(per_angle, kinks=support_kinks(shape), spec=quad)
    return val


def _random_unit(rng, dim):
    while True:
        v = rng.standard_normal(dim)
        n = np.linalg.norm(v)
        if n > 1e-12:
            v = v / n
            return v / np.linalg.norm(v)


def covariance_self_checks(
    shape: Shape, quad: QuadSpec = QuadSpec(), seed: int = 0, n_probes: int = 200
) -> CovarianceReport:
    """Randomized verification of the covariance properties (a)-(e)."""
    rng = np.random.default_rng(seed)
    geo = geometry(shape)
    ell = geo.support_radius
    vol = geo.volume
    checks = []

    # (a) bounds and (b) symmetry at random probes
    bounds_ok, sym_ok = True, True
    witness_b, witness_s = "", ""
    for _ in range(n_probes):
        y = (rng.uniform(-1.2, 1.2, size=geo.dim)) * ell
        g = covariance(shape, y, quad)
        if not -1e-12 <= g <= vol + 1e-9:
            bounds_ok, witness_b = False, f"g({y}) = {g}"
        gm = covariance(shape, -y, quad)
        if abs(g - gm) > 1e-9:
            sym_ok, witness_s = False, f"g({y}) = {g} vs g(-y) = {gm}"
    checks.append(CheckResult("bounds 0 <= g <= g(0)", bounds_ok, witness_b))
    checks.append(CheckResult("symmetry g(y) = g(-y)", sym_ok, witness_s))
    g0 = covariance(shape, np.zeros(geo.dim), quad)
    checks.append(
        CheckResult("g(0) = |Omega|", abs(g0 - vol) < 1e-10, f"g(0) = {g0}, |Omega| = {vol}")
    )

    # (c) total integral
    total = covariance_integral(shape, quad)
    rel = abs(total - vol * vol) / (vol * vol)
    checks.append(
        CheckResult("integral of g = |Omega|^2", rel < 1e-6, f"got {total}, rel err {rel:.2e}")
    )

    # (d) compact support
    supp_ok, witness = True, ""
    for _ in range(n_probes):
        u = _random_unit(rng, geo.dim)
        r = ell * rng.uniform(1.0, 3.0)
        g = covariance(shape, u * r, quad)
        if g != 0.0:
            supp_ok, witness = False, f"g({u * r}) = {g}"
    checks.append(CheckResult("support within |y| < ell", supp_ok, witness))

    # Lipschitz slope: difference quotients approach V_u / 2
    lip_ok, witness = True, ""
    for _ in range(10):
        u = _random_unit(rng, geo.dim)
        vu2 = directional_variation(shape, u) / 2.0
        q4 = (g0 - covariance(shape, u * 1e-4, quad)) / 1e-4
        q5 = (g0 - covariance(shape, u * 1e-5, quad)) / 1e-5
        if abs(q4 / q5 - 1.0) > 1e-2 or abs(q5 - vu2) > 1e-2 * max(1.0, vu2):
            lip_ok, witness = False, f"u = {u}: q(1e-4) = {q4}, q(1e-5) = {q5}, V_u/2 = {vu2}"
    checks.append(CheckResult("slope (g(0)-g(ru))/r -> V_u/2", lip_ok, witness))

    return CovarianceReport(shape=shape, checks=tuple(checks))
