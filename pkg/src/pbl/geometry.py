"""Hyperbolic distance in the models, geodesic-ball volume, Petersson
weight factors, the cusp-neighbourhood objective, and a finite-difference
check of the curvature-form determinant.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from .errors import DimensionError, DomainError, PreconditionError
from .hermitian import Model, ModelPoint, inner_product, lift, model_indicator
from .logreal import LogReal

__all__ = [
    "cosh2_half_distance",
    "distance",
    "ball_volume",
    "ball_volume_constant",
    "petersson_norm_factor",
    "petersson_objective",
    "curvature_determinant",
]


def cosh2_half_distance(z: ModelPoint, w: ModelPoint) -> float:
    """cosh^2(d(z,w)/2) = <z,w><w,z> / (<z,z><w,w>) on lifted vectors.

    At least 1, with equality exactly on the diagonal.
    """
    if z.model is not w.model or z.n != w.n:
        raise DomainError("points must lie in the same model")
    form = z.form()
    zt, wt = lift(z), lift(w)
    num = abs(inner_product(form, zt, wt)) ** 2
    den = inner_product(form, zt, zt).real * inner_product(form, wt, wt).real
    return num / den


def _acosh_stable(y: float) -> float:
    # log1p form keeps full precision for y near 1
    dy = max(y - 1.0, 0.0)
    return math.log1p(dy + math.sqrt(dy * (y + 1.0)))


def distance(z: ModelPoint, w: ModelPoint) -> float:
    """Hyperbolic distance 2 arccosh(sqrt(cosh2_half_distance))."""
    c = cosh2_half_distance(z, w)
    return 2.0 * _acosh_stable(math.sqrt(max(c, 1.0)))


def ball_volume_constant(n: int) -> float:
    """The constant 4 pi / n! multiplying sinh^{2n}(r/2) in the ball volume."""
    return math.exp(math.log(4 * math.pi) - gammaln(n + 1))


def ball_volume(n: int, r: float, c_n: float | None = None) -> float:
    """Volume 4 pi sinh^{2n}(r/2) / n! of a geodesic ball of radius r.

    c_n overrides the leading constant so alternative normalizations can be
    compared without touching the formula.
    """
    if n < 2:
        raise PreconditionError("n >= 2 required")
    if r < 0:
        raise PreconditionError("radius must be nonnegative")
    if r == 0.0:
        return 0.0
    if c_n is None:
        c_n = ball_volume_constant(n)
    return c_n * math.exp(2 * n * math.log(math.sinh(r / 2.0)))


def petersson_norm_factor(p: ModelPoint, k: int) -> LogReal:
    """(-<lift p, lift p>)^k: (1-|z|^2)^k on the ball, (-2 Re z1 - |z2|^2)^k
    in model 3, (2 Im z1 - |z2|^2)^k in model 2."""
    if k < 1:
        raise PreconditionError("weight k must be >= 1")
    q = -model_indicator(p)
    if q <= 0.0:
        raise DomainError("boundary or exterior point")
    return LogReal.from_log(k * math.log(q))


def petersson_objective(p: ModelPoint, k: int) -> LogReal:
    """The model-3 ridge objective (-2 Re z1 - |z2|^2)^k exp(4 pi Re z1).

    Independent of Im z1; maximized on Re z1 = -k/(4 pi), z2 = 0.
    """
    if p.model is not Model.M3:
        raise DomainError("objective is defined on model-3 points")
    if k < 1:
        raise PreconditionError("weight k must be >= 1")
    q = -model_indicator(p)
    if q <= 0.0:
        raise DomainError("boundary or exterior point")
    return LogReal.from_log(k * math.log(q) + 4 * math.pi * p.coords[0].real)


def _log_one_minus_sq(coords: np.ndarray) -> float:
    q = 1.0 - float(np.sum(np.abs(coords) ** 2))
    if q <= 0.0:
        raise DomainError("stencil point left the ball")
    return math.log(q)


def _dolbeault_hessian(coords: np.ndarray, h: float) -> np.ndarray:
    """Matrix of second Wirtinger derivatives d^2/dz_j dzbar_k of
    log(1-|z|^2), by central differences with step h."""
    n = coords.shape[0]
    g = np.zeros((n, n), dtype=complex)

    def f(delta):
        return _log_one_minus_sq(coords + delta)

    e = np.eye(n)
    f0 = f(np.zeros(n, dtype=complex))
    for j in range(n):
        dxx = (f(h * e[j]) - 2 * f0 + f(-h * e[j])) / h**2
        dyy = (f(1j * h * e[j]) - 2 * f0 + f(-1j * h * e[j])) / h**2
        g[j, j] = 0.25 * (dxx + dyy)

    def cross(u, v):
        # 4-point stencil for the mixed second derivative along u, v
        return (
            f(h * (u + v)) - f(h * (u - v)) - f(h * (v - u)) + f(-h * (u + v))
        ) / (4 * h**2)

    for j in range(n):
        for k in range(j + 1, n):
            dxjxk = cross(e[j], e[k])
            dyjyk = cross(1j * e[j], 1j * e[k])
            dxjyk = cross(e[j], 1j * e[k])
            dyjxk = cross(1j * e[j], e[k])
            g[j, k] = 0.25 * ((dxjxk + dyjyk) + 1j * (dxjyk - dyjxk))
            g[k, j] = np.conj(g[j, k])
    return g


def _curvature_det_once(coords: np.ndarray, n: int, h: float) -> float:
    ghat = -_dolbeault_hessian(coords, h)  # of -log(1-|z|^2), positive definite
    c1 = ghat / (2 * math.pi)
    q = 1.0 - float(np.sum(np.abs(coords) ** 2))
    # metric matrix of the hyperbolic Kaehler form is 2G with
    # det G = (1-|z|^2)^-(n+1) in closed form
    log_den = n * math.log(2.0) - (n + 1) * math.log(q)
    det = np.linalg.det(c1).real
    return det / math.exp(log_den)


def curvature_determinant(z: ModelPoint, n: int | None = None, h: float = 1e-4) -> float:
    """Determinant of the curvature matrix -(1/2 pi) ddbar log(1-|z|^2),
    relative to the hyperbolic volume form; equals (4 pi)^-n at every
    interior point.

    Uses central differences with step h and a Richardson fallback when the
    full-step and half-step estimates disagree by more than 1e-5 relative.
    """
    if z.model is not Model.BALL:
        raise DomainError("curvature check runs in the ball model")
    coords = z.coords
    if n is None:
        n = coords.shape[0]
    elif n != coords.shape[0]:
        raise DimensionError("n does not match the point's dimension")
    radius = float(np.linalg.norm(coords))
    if (radius + 2 * h) ** 2 >= 1.0:
        raise DomainError("point too close to the boundary for the stencil")
    full = _curvature_det_once(coords, n, h)
    half = _curvature_det_once(coords, n, h / 2)
    if abs(full - half) > 1e-5 * abs(half):
        return (4.0 * half - full) / 3.0
    return half
