"""Heat content of bounded sets under the Poisson kernel via set covariance functions."""

__version__ = "0.1.0"

from .asymptotics import (
    ExpansionBreakdown,
    ThirdTermReport,
    big_R,
    closed_form_constant,
    decomposition,
    default_t_grid,
    F_limit,
    heat_content,
    phi,
    phi_slope,
    psi_F,
    R_limit,
    third_term,
)
from .kernel import (
    KernelConstants,
    kappa,
    poisson_kernel,
    tanh_deficit,
    unit_ball_volume,
    unit_sphere_area,
)
from .mc import McEstimate, mc_covariance, mc_heat_content, sample_cauchy
from .quadrature import (
    LimitFit,
    QuadSpec,
    extrapolate_limit,
    integrate_1d,
    integrate_circle,
    integrate_sphere,
)
from .shapes import (
    ConvexPolygon,
    CovarianceProfile,
    GammaProfile,
    Interval,
    Rectangle,
    ShapeGeometry,
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
)

__all__ = [name for name in dir() if not name.startswith("_")]
