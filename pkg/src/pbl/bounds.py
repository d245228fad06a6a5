"""Bound pipelines: the cocompact three-term estimate, the cusp-stabilizer
lattice sum with certified truncation, the Gamma-function integral chain,
the combined one-cusp bound, the ridge locator for the cusp objective, and
the log-log exponent fitter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import NumericalError, PreconditionError
from .geometry import cosh2_half_distance
from .hermitian import ModelPoint
from .lattice import LatticeSpec, lattice_covolume
from .logreal import LogReal, log_sum
from .transforms import Isometry, apply

__all__ = [
    "ConstantModel",
    "BoundReport",
    "CuspSumResult",
    "GammaChain",
    "ScalingFit",
    "cocompact_bound",
    "cusp_lattice_sum",
    "cusp_term_log",
    "gamma_integral_chain",
    "cusp_bound",
    "maxima_locate",
    "scaling_fit",
    "orbit_cosh_power_sum",
]


@dataclass(frozen=True)
class ConstantModel:
    """C(k) = c_gamma * k^exponent, the unresolved normalizing constant of
    the kernel bound; exponent n in the cocompact case, 2 in the one-cusp
    case, 0 for a plain constant."""

    c_gamma: float = 1.0
    exponent: int = 0

    def __post_init__(self):
        if self.c_gamma <= 0:
            raise PreconditionError("c_gamma must be positive")

    def __call__(self, k: int) -> float:
        return self.c_gamma * float(k) ** self.exponent

    def log_value(self, k: int) -> LogReal:
        return LogReal.from_log(math.log(self.c_gamma) + self.exponent * math.log(k))


@dataclass(frozen=True)
class BoundReport:
    """Per-term log-domain breakdown of a bound at given (n, k, r_x)."""

    n: int
    k: int
    r_x: float
    terms: Mapping[str, LogReal]
    total: LogReal
    normalized_total: LogReal
    extras: Mapping[str, object] = field(default_factory=dict)

    def row(self) -> dict:
        """Flat dict for machine-readable output."""
        out = {"n": self.n, "k": self.k, "r_x": self.r_x}
        for name, term in self.terms.items():
            out[f"log_{name}"] = term.log()
        out["log_total"] = self.total.log()
        out["normalized_total"] = self.normalized_total.to_float()
        return out


def cocompact_bound(n: int, k: int, r_x: float, cm: ConstantModel) -> BoundReport:
    """Three-term bound for the cocompact case:

        C(k) + C(k) cosh^{2n}(r/4) / ((k-2n-1) sinh^{2n}(r/4))
             + C(k) sinh^{2n}(5r/8) / (sinh^{2n}(r/4) cosh^k(3r/8)).

    Requires k >= 2n+2 so the middle denominator stays positive.
    """
    if n < 2:
        raise PreconditionError("n >= 2 required")
    if k < 2 * n + 2:
        raise PreconditionError(f"k must be >= 2n+2 = {2 * n + 2}, got {k}")
    if r_x <= 0:
        raise PreconditionError("injectivity radius must be positive")
    log_c = cm.log_value(k).log()
    log_sh = math.log(math.sinh(r_x / 4.0))
    identity = LogReal.from_log(log_c)
    middle = LogReal.from_log(
        log_c
        + 2 * n * (math.log(math.cosh(r_x / 4.0)) - log_sh)
        - math.log(k - 2 * n - 1)
    )
    ring = LogReal.from_log(
        log_c
        + 2 * n * (math.log(math.sinh(5 * r_x / 8.0)) - log_sh)
        - k * math.log(math.cosh(3 * r_x / 8.0))
    )
    terms = {"identity_term": identity, "middle_term": middle, "ring_term": ring}
    total = log_sum(terms.values())
    return BoundReport(n, k, r_x, terms, total, total / cm.log_value(k))


# -- cusp lattice sum ------------------------------------------------------


@dataclass(frozen=True)
class CuspSumResult:
    """Certified evaluation of the stabilizer lattice sum
    sum_L (k/2pi)^k / |k/2pi + |alpha|^2/2 + i beta|^k."""

    value: LogReal
    k: int
    r_alpha: float
    r_beta: float
    tail_majorant: float
    n_terms: int


def _beta_line_constant(k: int) -> float:
    # int_0^inf (1+t^2)^{-k/2} dt
    return math.exp(
        0.5 * math.log(math.pi) - math.log(2.0) + gammaln((k - 1) / 2.0) - gammaln(k / 2.0)
    )


def _box_sum(spec: LatticeSpec, k: int, r_alpha: float, r_beta: float):
    a0 = k / (2 * math.pi)
    m_max, n_max = spec.index_bounds(r_alpha)
    m = np.arange(-m_max, m_max + 1)
    n = np.arange(-n_max, n_max + 1)
    alpha = m[:, None] * spec.a1 + n[None, :] * spec.a2
    keep = np.abs(alpha) <= r_alpha
    mm, nn = np.meshgrid(m, n, indexing="ij")
    mm, nn = mm[keep], nn[keep]
    a = a0 + np.abs(alpha[keep]) ** 2 / 2.0
    offs = np.array([spec.offset(int(mi), int(ni)) for mi, ni in zip(mm, nn)])
    step = spec.beta_step
    off_max = float(np.abs(offs).max()) if offs.size else 0.0
    l_max = int(math.floor((r_beta + off_max) / step)) + 1
    l = np.arange(-l_max, l_max + 1)
    total = 0.0
    count = 0
    log_a0k = k * math.log(a0)
    chunk = max(1, int(2_000_000 / (2 * l_max + 1)))
    for i in range(0, a.size, chunk):
        beta = offs[i : i + chunk, None] + l[None, :] * step
        mask = np.abs(beta) <= r_beta
        logs = log_a0k - (k / 2.0) * np.log(
            a[i : i + chunk, None] ** 2 + beta**2
        )
        vals = np.exp(np.minimum(logs, 0.0)) * mask
        total += float(vals.sum())
        count += int(mask.sum())
    return total, count


def _tail_logs(spec: LatticeSpec, k: int, r_alpha: float, r_beta: float):
    """Log-domain majorants for the sum outside the (r_alpha, r_beta) box,
    by monotone comparison of lattice cells with integrals."""
    a0 = k / (2 * math.pi)
    area = spec.cell_area
    step = spec.beta_step
    diam = spec.alpha_cell_diameter
    j_beta = _beta_line_constant(k)

    u0 = max(r_alpha - diam, 0.0)
    a_u0 = a0 + u0 * u0 / 2.0
    log_s0 = k * (math.log(a0) - math.log(a_u0)) + math.log(
        2.0 + (2.0 * j_beta / step) * a_u0
    )

    def log_s(u):
        au = a0 + u * u / 2.0
        return k * (math.log(a0) - math.log(au)) + math.log(
            2.0 + (2.0 * j_beta / step) * au
        )

    val, _ = quad(
        lambda u: math.exp(log_s(u) - log_s0) * (u + diam / 2.0),
        u0,
        np.inf,
        epsrel=1e-10,
        limit=200,
    )
    log_tail_alpha = (
        math.log(2 * math.pi) - math.log(area) + log_s0 + math.log(max(val, 1e-300))
    )

    # terms with |alpha| <= r_alpha but |beta| > r_beta, via (A^2+b^2)^{k/2} >= b^k
    b_eff = r_beta - step
    if b_eff <= 0:
        log_tail_beta = math.inf
    else:
        n_alpha = sum(
            1 for _ in _alpha_iter(spec, r_alpha)
        )
        log_tail_beta = (
            math.log(max(n_alpha, 1))
            + math.log(2.0 / step)
            + k * math.log(a0)
            + (1 - k) * math.log(b_eff)
            - math.log(k - 1)
        )
    return log_tail_alpha, log_tail_beta


def _alpha_iter(spec: LatticeSpec, r_alpha: float):
    m_max, n_max = spec.index_bounds(r_alpha)
    for m in range(-m_max, m_max + 1):
        for n in range(-n_max, n_max + 1):
            if abs(spec.alpha(m, n)) <= r_alpha:
                yield (m, n)


def cusp_lattice_sum(
    k: int, spec: LatticeSpec, rel_tol: float = 1e-8
) -> CuspSumResult:
    """The lattice sum with certified relative truncation error <= rel_tol.

    Enumeration radii grow geometrically until the analytic exterior-integral
    majorant of the tail drops below rel_tol times the partial sum.  The
    (0,0) term contributes exactly 1.
    """
    if k < 6:
        raise PreconditionError("k must be >= 6 for the sum to have margin")
    if not (0 < rel_tol <= 1e-3):
        raise PreconditionError("rel_tol must lie in (0, 1e-3]")
    a0 = k / (2 * math.pi)
    r_alpha = 2.0 + spec.alpha_cell_diameter
    r_beta = max(2.0 * a0, 4.0 * spec.beta_step)
    for _ in range(60):
        partial, count = _box_sum(spec, k, r_alpha, r_beta)
        log_ta, log_tb = _tail_logs(spec, k, r_alpha, r_beta)
        tail = math.exp(min(np.logaddexp(log_ta, log_tb), 700.0))
        if tail <= rel_tol * partial:
            return CuspSumResult(
                LogReal.from_log(math.log(partial)),
                k,
                r_alpha,
                r_beta,
                tail,
                count,
            )
        target = math.log(rel_tol * partial / 2.0)
        if log_ta > target:
            r_alpha *= 1.5
        if log_tb > target:
            r_beta *= 1.5
    raise NumericalError("lattice-sum truncation could not be certified")


# -- Gamma-function integral chain ----------------------------------------


@dataclass(frozen=True)
class GammaChain:
    """Closed-form vs quadrature values of the two auxiliary integrals and
    their chained product 2 pi (k/2pi)^k * beta_integral * r_integral."""

    k: int
    beta_closed: float
    beta_quad: float
    beta_ratio: float
    r_closed: LogReal
    r_quad: LogReal
    r_ratio: float
    chained: LogReal


def gamma_integral_chain(k: int) -> GammaChain:
    """Evaluates, closed-form and by adaptive quadrature:

      beta integral: A^{k-1} int_R (A^2 + beta^2)^{-k/2} dbeta
                     = sqrt(pi) Gamma(k/2 - 1/2) / Gamma(k/2),
      r integral:    int_0^inf (k/2pi + r^2/2)^{-(k-1)} dr, whose printed
                     closed form (2pi)^{k-1} Gamma(k - 3/2) / (k^{k-3/2} Gamma(k-1))
                     exceeds the quadrature by a constant factor (the ratio
                     is returned, not hidden).
    """
    if k < 6:
        raise PreconditionError("k must be >= 6")
    a0 = k / (2 * math.pi)

    beta_closed = math.exp(
        0.5 * math.log(math.pi) + gammaln(k / 2.0 - 0.5) - gammaln(k / 2.0)
    )
    val, err = quad(
        lambda b: (1.0 + (b / a0) ** 2) ** (-k / 2.0),
        -np.inf,
        np.inf,
        epsrel=1e-13,
        limit=200,
    )
    if not math.isfinite(val) or err > 1e-6 * val:
        raise NumericalError(f"beta-integral quadrature did not converge (err {err:.3g})")
    beta_quad = val / a0  # exact peak-shift by A^{k-1} A^{-k} = 1/A

    log_r_closed = (
        (k - 1) * math.log(2 * math.pi)
        + gammaln(k - 1.5)
        - (k - 1.5) * math.log(k)
        - gammaln(k - 1)
    )
    # exact substitution r = sqrt(2 a0) s keeps the quadrature problem
    # uniformly conditioned in k
    rv, rerr = quad(
        lambda s: (1.0 + s * s) ** (1.0 - k),
        0,
        np.inf,
        epsrel=1e-13,
        limit=200,
    )
    if not math.isfinite(rv) or rerr > 1e-6 * rv:
        raise NumericalError(f"r-integral quadrature did not converge (err {rerr:.3g})")
    log_r_quad = 0.5 * math.log(2 * a0) + (1.0 - k) * math.log(a0) + math.log(rv)

    chained = LogReal.from_log(
        math.log(2 * math.pi) + k * math.log(a0) + math.log(beta_quad) + log_r_quad
    )
    return GammaChain(
        k=k,
        beta_closed=beta_closed,
        beta_quad=beta_quad,
        beta_ratio=beta_quad / beta_closed,
        r_closed=LogReal.from_log(log_r_closed),
        r_quad=LogReal.from_log(log_r_quad),
        r_ratio=math.exp(log_r_quad - log_r_closed),
        chained=chained,
    )


# -- combined one-cusp bound ----------------------------------------------


def cusp_term_log(k: int, cm: ConstantModel, covolume: float = 1.0) -> float:
    """log of the closed-form stabilizer term

        (sqrt(pi)/2) Gamma(k/2-1/2) Gamma(k-3/2) / (Gamma(k/2) Gamma(k-1))
        * C(k) * k^{3/2} / covolume,

    the chained integral bound for the lattice sum times C(k)."""
    return (
        cm.log_value(k).log()
        + 1.5 * math.log(k)
        + 0.5 * math.log(math.pi)
        - math.log(2.0)
        + gammaln(k / 2.0 - 0.5)
        + gammaln(k - 1.5)
        - gammaln(k / 2.0)
        - gammaln(k - 1.0)
        - math.log(covolume)
    )


def cusp_bound(
    k: int,
    r_x: float,
    cm: ConstantModel,
    spec: LatticeSpec,
    rel_tol: float = 1e-6,
) -> BoundReport:
    """One-cusp bound: the three cocompact-style terms at n = 2 plus the
    closed-form stabilizer term.  The certified lattice sum times C(k) is
    attached as the sharper computed alternative, together with a flag
    recording that the closed form dominates it.
    """
    if k < 6:
        raise PreconditionError("k must be >= 6")
    base = cocompact_bound(2, k, r_x, cm)
    covol = lattice_covolume(spec)
    cusp = LogReal.from_log(cusp_term_log(k, cm, covol))
    sum_res = cusp_lattice_sum(k, spec, rel_tol)
    scaled = cm.log_value(k) * sum_res.value
    terms = dict(base.terms)
    terms["cusp_term"] = cusp
    total = log_sum(terms.values())
    extras = {
        "cusp_sum_scaled": scaled,
        "cusp_dominates_sum": bool(cusp >= scaled),
        "covolume": covol,
        "sum_r_alpha": sum_res.r_alpha,
        "sum_r_beta": sum_res.r_beta,
    }
    return BoundReport(2, k, r_x, terms, total, total / cm.log_value(k), extras)


# -- ridge locator ---------------------------------------------------------

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fun, lo, hi, iters=60):
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fun(x1), fun(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fun(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fun(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def maxima_locate(k: int, tol: float = 1e-6) -> ModelPoint:
    """Maximizes (-2 x1 - x2^2 - y2^2)^k exp(4 pi x1) over model 3 by
    coordinate descent with golden-section line searches from five spread
    starting points; the maximum lies on Re z1 = -k/(4 pi), z2 = 0.

    Raises if no start lands within tol (relative in x1, absolute in z2).
    """
    if k < 1:
        raise PreconditionError("k must be >= 1")
    if tol <= 0:
        raise PreconditionError("tol must be positive")

    def phi(x1, x2, y2):
        q = -2.0 * x1 - x2 * x2 - y2 * y2
        if q <= 0.0:
            return -math.inf
        return k * math.log(q) + 4 * math.pi * x1

    x_star = k / (4 * math.pi)
    best = None
    for i, s in enumerate((0.25, 0.5, 1.0, 2.0, 4.0)):
        x1 = -s * x_star
        r0 = 0.3 * math.sqrt(2.0 * s * x_star)
        theta = 2 * math.pi * i / 5.0
        x2, y2 = r0 * math.cos(theta), r0 * math.sin(theta)
        w1 = 2.0 * (x_star + 1.0)
        w2 = max(1.0, r0)
        prev = phi(x1, x2, y2)
        for _ in range(200):
            limit = -(x2 * x2 + y2 * y2) / 2.0
            hi = min(x1 + w1, limit - 1e-300 - abs(limit) * 1e-16)
            x1, _f = _golden_max(lambda t: phi(t, x2, y2), x1 - w1, hi)
            b = math.sqrt(max(-2.0 * x1 - y2 * y2, 0.0))
            x2, _f = _golden_max(
                lambda t: phi(x1, t, y2), max(x2 - w2, -b), min(x2 + w2, b)
            )
            b = math.sqrt(max(-2.0 * x1 - x2 * x2, 0.0))
            y2, cur = _golden_max(
                lambda t: phi(x1, x2, t), max(y2 - w2, -b), min(y2 + w2, b)
            )
            w1 = max(w1 * 0.5, 1e-12 * max(1.0, x_star))
            w2 = max(w2 * 0.5, 1e-12)
            if cur - prev < 1e-15 * (1.0 + abs(cur)) and w1 <= 1e-9 * max(1.0, x_star):
                break
            prev = cur
        cand = (cur, x1, x2, y2)
        if best is None or cand[0] > best[0]:
            best = cand

    _, x1, x2, y2 = best
    if abs(x1 + x_star) > tol * x_star or math.hypot(x2, y2) > tol:
        raise NumericalError(
            f"optimizer did not reach the ridge: x1={x1!r}, |z2|={math.hypot(x2, y2):.3g}"
        )
    return ModelPoint.m3(complex(x1, 0.0), complex(x2, y2))


# -- exponent fitting -------------------------------------------------------


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit of log bound(k) = intercept + slope * log k."""

    slope: float
    intercept: float
    residual_rms: float


def scaling_fit(ks: Sequence[int], bound: Callable[[int], LogReal]) -> ScalingFit:
    """Fits the growth exponent of a positive bound over the given weights."""
    ks = list(ks)
    if len(set(ks)) < 5:
        raise PreconditionError("at least 5 distinct k values are required")
    xs = np.log(np.array(ks, dtype=float))
    ys = []
    for k in ks:
        v = bound(k)
        ys.append(v.log() if isinstance(v, LogReal) else math.log(float(v)))
    ys = np.array(ys)
    a = np.vstack([xs, np.ones_like(xs)]).T
    (slope, intercept), *_ = np.linalg.lstsq(a, ys, rcond=None)
    resid = ys - a @ np.array([slope, intercept])
    return ScalingFit(float(slope), float(intercept), float(np.sqrt(np.mean(resid**2))))


def orbit_cosh_power_sum(elements: Sequence[Isometry], z: ModelPoint, k: int) -> LogReal:
    """Truncated series sum_gamma cosh^{-k}(d(z, gamma z)/2) over an explicit
    list of group elements, in the log domain with order-independent reduction."""
    terms = []
    for g in elements:
        c2 = cosh2_half_distance(z, apply(g, z))
        terms.append(LogReal.from_log(-(k / 2.0) * math.log(max(c2, 1.0))))
    return log_sum(terms)
