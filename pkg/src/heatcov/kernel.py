"""Dimension constants, Poisson (Cauchy) kernel, and the universal 1-D integrals.

Everything here is a pure function of the dimension ``d`` and, for the
kernel itself, of the evaluation point.  The gamma function is only ever
needed at integer and half-integer arguments, so it is computed by exact
recursion from Gamma(1) = 1 and Gamma(1/2) = sqrt(pi) instead of a
general-purpose approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import DomainError, ToleranceNotMetError

MAX_DIM = 16


def _check_dim(d: int) -> int:
    if not isinstance(d, (int, np.integer)):
        raise DomainError(f"dimension must be an integer, got {d!r}")
    if d < 1 or d > MAX_DIM:
        raise DomainError(f"dimension must satisfy 1 <= d <= {MAX_DIM}, got {d}")
    return int(d)


def gamma_half_integer(x: float) -> float:
    """Gamma(x) for x a positive multiple of 1/2, by exact recursion."""
    n2 = round(2 * x)
    if abs(2 * x - n2) > 1e-12 or n2 <= 0:
        raise DomainError(f"gamma_half_integer needs a positive half-integer, got {x}")
    if n2 == 1:  # Gamma(1/2)
        return math.sqrt(math.pi)
    if n2 == 2:  # Gamma(1)
        return 1.0
    return (x - 1.0) * gamma_half_integer(x - 1.0)


def kappa(d: int) -> float:
    """Normalizing constant of the d-dimensional Cauchy density."""
    d = _check_dim(d)
    return gamma_half_integer((d + 1) / 2) / math.pi ** ((d + 1) / 2)


def unit_ball_volume(d: int) -> float:
    d = _check_dim(d)
    return math.pi ** (d / 2) / gamma_half_integer(1 + d / 2)


def unit_sphere_area(d: int) -> float:
    d = _check_dim(d)
    return d * unit_ball_volume(d)


def poisson_kernel(d: int, t: float, x) -> float:
    """p_t(x) = kappa_d * t / (t^2 + |x|^2)^((d+1)/2)."""
    d = _check_dim(d)
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (d,):
        raise DomainError(f"x must be a vector of length {d}, got shape {x.shape}")
    r2 = float(np.dot(x, x))
    return kappa(d) * t / (t * t + r2) ** ((d + 1) / 2)


# Truncation point for the tanh-deficit integral; the tail beyond
# theta_star is below 1e-18 for every supported dimension.
def _theta_star(d: int) -> float:
    return 25.0 + d


def tanh_deficit_tail_bound(d: int, theta: float) -> float:
    """Upper bound on |integral over (theta, inf) of tanh^d - 1|."""
    return sum(comb(d, j) * 2**j * math.exp(-2 * j * theta) / (2 * j) for j in range(1, d + 1))


def tanh_deficit_bound(d: int) -> float:
    """A-priori bound on |J_d|: sum_j C(d,j) 2^j / (2j)."""
    return sum(comb(d, j) * 2**j / (2 * j) for j in range(1, d + 1))


def tanh_deficit(d: int, tol: float = 1e-12) -> float:
    """J_d = integral over (0, inf) of tanh^d(theta) - 1.

    Expands tanh^d(theta) - 1 = sum_j C(d,j) (-2)^j / (e^{2 theta}+1)^j and
    integrates each term adaptively on [0, theta_star], adding nothing for
    the tail, which is bounded analytically and must stay below ``tol``.
    """
    d = _check_dim(d)
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    theta_star = _theta_star(d)
    tail = tanh_deficit_tail_bound(d, theta_star)
    if tail > tol:
        raise ToleranceNotMetError(
            f"tail bound {tail:.3e} beyond theta={theta_star} exceeds tol={tol:.3e}"
        )
    from .quadrature import QuadSpec, integrate_1d

    spec = QuadSpec(abs_tol=min(tol / max(d, 1), 1e-12), rel_tol=1e-14)
    total = 0.0
    for j in range(1, d + 1):
        coeff = comb(d, j) * (-2.0) ** j

        def term(theta, _j=j):
            return 1.0 / (math.exp(2.0 * theta) + 1.0) ** _j

        val, _ = integrate_1d(term, 0.0, theta_star, spec)
        total += coeff * val
    return total


@dataclass(frozen=True)
class KernelConstants:
    """All d-dependent constants the expansion needs."""

    d: int
    kappa: float
    ball_volume: float
    sphere_area: float
    tanh_deficit: float

    @classmethod
    def for_dim(cls, d: int, tol: float = 1e-12) -> "KernelConstants":
        d = _check_dim(d)
        return cls(
            d=d,
            kappa=kappa(d),
            ball_volume=unit_ball_volume(d),
            sphere_area=unit_sphere_area(d),
            tanh_deficit=tanh_deficit(d, tol),
        )
