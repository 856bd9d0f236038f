"""Heat content, its three-term small-time decomposition, and the third-term constant."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import kernel, shapes
from .errors import DomainError, InconsistentConstantError
from .quadrature import QuadSpec, extrapolate_limit, integrate_1d, integrate_circle
from .shapes import (
    ConvexPolygon,
    Interval,
    Rectangle,
    Shape,
    UnitBall,
    gamma,
    gamma_weighted_integral,
    geometry,
    support_kinks,
    support_radius_at,
)

SQRT2 = math.sqrt(2.0)


@lru_cache(maxsize=None)
def _tanh_deficit(d: int) -> float:
    return kernel.tanh_deficit(d)


def _check_t(t: float) -> float:
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    return float(t)


# ---------------------------------------------------------------------------
# Heat content
# ---------------------------------------------------------------------------

def _radial_heat_content(d: int, ell: float, gbar, t: float, quad: QuadSpec) -> float:
    """H = A_d kappa_d t * integral of r^(d-1) gbar(r) (t^2+r^2)^(-(d+1)/2)."""
    pref = kernel.unit_sphere_area(d) * kernel.kappa(d) * t

    def f(r):
        return r ** (d - 1) * gbar(r) * (t * t + r * r) ** (-(d + 1) / 2.0)

    # the kernel factor peaks at the scale of t; seed panels there
    pts = [p for p in (t, 4 * t, 16 * t, 64 * t, 256 * t) if p < ell]
    val, _ = integrate_1d(f, 0.0, ell, quad, points=pts)
    return pref * val


def heat_content(shape: Shape, t: float, quad: QuadSpec = QuadSpec()) -> float:
    """H(t): mass kept by Omega under the Poisson kernel, clamped to [0, |Omega|]."""
    t = _check_t(t)
    geo = geometry(shape)
    if isinstance(shape, UnitBall):
        value = _radial_heat_content(
            shape.d, 2.0, lambda r: shapes.ball_covariance_radial(shape.d, r, quad), t, quad
        )
    elif isinstance(shape, Interval):
        value = _radial_heat_content(
            1, shape.length, lambda r: max(0.0, shape.length - r), t, quad
        )
    else:
        # 2-D polar sectors: the integrand is smooth within each sector
        kap = kernel.kappa(2)

        def per_angle(theta):
            rb = support_radius_at(shape, theta)
            ct, st = math.cos(theta), math.sin(theta)

            def f(r):
                g = shapes.covariance(shape, np.array([r * ct, r * st]), quad)
                return r * g * (t * t + r * r) ** -1.5

            pts = [p for p in (t, 4 * t, 16 * t, 64 * t, 256 * t) if p < rb]
            inner, _ = integrate_1d(f, 0.0, rb, quad, points=pts)
            return inner

        outer, _ = integrate_circle(per_angle, kinks=support_kinks(shape), spec=quad)
        value = kap * t * outer
    return min(max(value, 0.0), geo.volume)


# ---------------------------------------------------------------------------
# phi, Psi/F, R
# ---------------------------------------------------------------------------

def phi_over_t(shape: Shape, t: float, quad: QuadSpec = QuadSpec()) -> float:
    """phi(t)/t without cancellation: (A_d k_d / t) * int_0^{t/ell} (1+u^2)^-(d+1)/2 du."""
    t = _check_t(t)
    geo = geometry(shape)
    d = geo.dim
    upper = t / geo.support_radius
    val, _ = integrate_1d(
        lambda u: (1.0 + u * u) ** (-(d + 1) / 2.0), 0.0, upper, quad
    )
    return kernel.unit_sphere_area(d) * kernel.kappa(d) * val / t


def phi(shape: Shape, t: float, quad: QuadSpec = QuadSpec()) -> float:
    """phi(t): kernel mass beyond the support radius."""
    return phi_over_t(shape, t, quad) * t


def phi_slope(shape: Shape) -> float:
    """lim phi(t)/t = A_d kappa_d / ell."""
    geo = geometry(shape)
    d = geo.dim
    return kernel.unit_sphere_area(d) * kernel.kappa(d) / geo.support_radius


def _tanh_deficit_partial(d: int, theta_max: float, quad: QuadSpec) -> float:
    """Integral of tanh^d - 1 on (0, theta_max)."""
    if kernel.tanh_deficit_tail_bound(d, theta_max) < 1e-16:
        return _tanh_deficit(d)

    def f(theta):
        q = 2.0 / (math.exp(2.0 * theta) + 1.0)
        if q >= 1.0:
            return -1.0
        return math.expm1(d * math.log1p(-q))

    val, _ = integrate_1d(f, 0.0, theta_max, quad)
    return val


def psi_F(shape: Shape, t: float, quad: QuadSpec = QuadSpec()):
    """(Psi(t), F(t)) with Psi = ln(1/t) + F."""
    t = _check_t(t)
    geo = geometry(shape)
    d = geo.dim
    ell = geo.support_radius
    theta_max = math.asinh(ell / t)
    f_val = math.log(ell + math.hypot(ell, t)) + _tanh_deficit_partial(d, theta_max, quad)
    return math.log(1.0 / t) + f_val, f_val


def F_limit(shape: Shape) -> float:
    geo = geometry(shape)
    return math.log(2.0 * geo.support_radius) + _tanh_deficit(geo.dim)


def big_R(shape: Shape, t: float, quad: QuadSpec = QuadSpec()) -> float:
    """R(t) = ell^(d+1) kappa_d * int_0^1 s^d gamma(ell s) (t^2 + ell^2 s^2)^-(d+1)/2 ds."""
    t = _check_t(t)
    geo = geometry(shape)
    d = geo.dim
    ell = geo.support_radius
    if isinstance(shape, Interval):
        return 0.0
    pref = ell ** (d + 1) * kernel.kappa(d)

    def f(s):
        return s**d * gamma(shape, s, quad) * (t * t + ell * ell * s * s) ** (-(d + 1) / 2.0)

    pts = sorted({2.0**-k for k in range(1, 24)} | {min(1.0, t / ell)} - {1.0})
    val, _ = integrate_1d(f, 0.0, 1.0, quad, points=pts)
    return pref * val


def R_limit(shape: Shape, quad: QuadSpec = QuadSpec()) -> float:
    value, _, _ = gamma_weighted_integral(shape, quad)
    return kernel.kappa(geometry(shape).dim) * value


# ---------------------------------------------------------------------------
# Decomposition and the third-term constant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionBreakdown:
    t: float
    H: float
    phi: float
    psi: float
    F: float
    R: float
    residual: float
    D: float


def decomposition(shape: Shape, t: float, quad: QuadSpec = QuadSpec()) -> ExpansionBreakdown:
    """All pieces of |Omega| - H = |Omega| phi + (Per/pi) t Psi - t R at one t."""
    t = _check_t(t)
    geo = geometry(shape)
    h = heat_content(shape, t, quad)
    pot = phi_over_t(shape, t, quad)
    psi, f_val = psi_F(shape, t, quad)
    r = big_R(shape, t, quad)
    residual = (geo.volume - h) - (
        geo.volume * pot * t + geo.perimeter / math.pi * t * psi - t * r
    )
    d_val = geo.volume * pot + geo.perimeter / math.pi * f_val - r
    return ExpansionBreakdown(
        t=t, H=h, phi=pot * t, psi=psi, F=f_val, R=r, residual=residual, D=d_val
    )


def closed_form_constant(shape: Shape) -> Optional[float]:
    """The exact third-term constant, for shapes where a closed form is known."""
    if isinstance(shape, UnitBall) and shape.d == 2:
        return 6.0 * math.log(2.0) - 2.0
    if isinstance(shape, UnitBall) and shape.d == 3:
        return 4.0 * math.log(2.0)
    if isinstance(shape, Rectangle) and shape.is_unit_square:
        return 4.0 / math.pi * (
            2.0 * (SQRT2 - 1.0) + math.log(16.0 / (3.0 + 2.0 * SQRT2))
        )
    if isinstance(shape, ConvexPolygon):
        # the unit square in polygon representation shares the closed form
        verts = sorted(shape.vertices)
        if np.allclose(verts, [(-1, -1), (-1, 1), (1, -1), (1, 1)], atol=1e-12):
            return closed_form_constant(Rectangle(1.0, 1.0))
    if isinstance(shape, Interval):
        return 2.0 / math.pi * (1.0 + math.log(shape.length))
    return None


@dataclass(frozen=True)
class ThirdTermReport:
    C_formula: float
    C_closed: Optional[float]
    C_extrapolated: float
    extrapolation_err: float
    observed_order: float
    pieces: dict


def default_t_grid(k_min: int = 4, k_max: int = 16) -> list:
    return [2.0**-k for k in range(k_min, k_max + 1)]


def third_term(
    shape: Shape,
    quad: QuadSpec = QuadSpec(),
    t_grid: Optional[Sequence[float]] = None,
) -> ThirdTermReport:
    """Assemble the third-term constant three ways: formula, closed form, limit."""
    geo = geometry(shape)
    d = geo.dim
    ell = geo.support_radius
    gamma_int, _, _ = gamma_weighted_integral(shape, quad)
    j_d = _tanh_deficit(d)
    c_formula = kernel.kappa(d) * (
        geo.volume * kernel.unit_sphere_area(d) / ell - gamma_int
    ) + geo.perimeter / math.pi * (math.log(2.0 * ell) + j_d)
    c_closed = closed_form_constant(shape)
    if c_closed is not None and abs(c_formula - c_closed) > 1e-6:
        raise InconsistentConstantError(
            f"formula constant {c_formula!r} vs closed form {c_closed!r}"
        )
    ts = list(t_grid) if t_grid is not None else default_t_grid()
    if len(ts) < 4 or any(a <= b for a, b in zip(ts, ts[1:])):
        raise DomainError("t_grid must be strictly decreasing with >= 4 points")
    samples = []
    for t in ts:
        pot = phi_over_t(shape, t, quad)
        _, f_val = psi_F(shape, t, quad)
        r = big_R(shape, t, quad)
        samples.append((t, geo.volume * pot + geo.perimeter / math.pi * f_val - r))
    fit = extrapolate_limit(samples)
    return ThirdTermReport(
        C_formula=c_formula,
        C_closed=c_closed,
        C_extrapolated=fit.C,
        extrapolation_err=fit.err_estimate,
        observed_order=fit.observed_order,
        pieces={
            "gamma_integral": gamma_int,
            "F_limit": F_limit(shape),
            "phi_slope": phi_slope(shape),
        },
    )
