"""Form-preserving matrices, Cayley maps between the models, and their
fractional-linear action on points.

Direction convention: a Cayley matrix M with M* F_src M = F_dst pairs as
<Mz, Mw>_{F_src} = <z, w>_{F_dst}, so under the fractional-linear action it
transports points of the F_dst-model into the F_src-model. The attached
point_domain/point_codomain properties spell that out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DimensionError, DomainError, NumericalError
from .hermitian import (
    HermitianForm,
    Model,
    ModelPoint,
    ball_form,
    lift,
    model2_form,
    model3_form,
    standard_form_for,
)

__all__ = [
    "ISOMETRY_TOL",
    "CAYLEY_TOL",
    "Isometry",
    "CayleyMap",
    "apply",
    "cayley_gamma3",
    "cayley_gamma23",
    "cayley_gamma2",
    "verify_isometry",
    "random_isometry",
]

ISOMETRY_TOL = 1e-10
CAYLEY_TOL = 1e-12
_DENOM_TINY = 1e-14


def verify_isometry(mat, src: HermitianForm, dst: HermitianForm) -> float:
    """Max-norm residual of mat* . src . mat - dst; zero for a valid map."""
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (src.dim, src.dim) or src.dim != dst.dim:
        raise DimensionError(
            f"matrix {mat.shape} incompatible with forms of size {src.dim}, {dst.dim}"
        )
    return float(np.abs(mat.conj().T @ src.entries @ mat - dst.entries).max())


@dataclass(frozen=True)
class Isometry:
    """A matrix preserving a fixed Hermitian form (g* F g = F, |det g| = 1)."""

    mat: np.ndarray
    form: HermitianForm

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        r = verify_isometry(m, self.form, self.form)
        if r > ISOMETRY_TOL:
            raise DomainError(f"matrix does not preserve the form (residual {r:.3g})")
        d = abs(np.linalg.det(m))
        if abs(d - 1.0) > ISOMETRY_TOL:
            raise DomainError(f"|det| = {d:.12g} != 1")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def blocks(self):
        """(A, B, C, D) partition used by the fractional-linear action."""
        n = self.form.n
        m = self.mat
        return m[:n, :n], m[:n, n], m[n, :n], m[n, n]

    def compose(self, other: "Isometry") -> "Isometry":
        if self.form != other.form:
            raise DimensionError("cannot compose isometries of different forms")
        return Isometry(self.mat @ other.mat, self.form)

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self) -> "Isometry":
        return Isometry(np.linalg.inv(self.mat), self.form)


@dataclass(frozen=True)
class CayleyMap:
    """A change-of-model matrix with mat* . source_form . mat = target_form.

    Points flow the other way round: apply() takes points of the
    target_form model to the source_form model.
    """

    mat: np.ndarray
    source_form: HermitianForm
    target_form: HermitianForm
    point_domain: Model
    point_codomain: Model

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        r = verify_isometry(m, self.source_form, self.target_form)
        if r > CAYLEY_TOL:
            raise DomainError(f"matrix does not intertwine the forms (residual {r:.3g})")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    def inverse(self) -> "CayleyMap":
        return CayleyMap(
            np.linalg.inv(self.mat),
            self.target_form,
            self.source_form,
            self.point_codomain,
            self.point_domain,
        )


_GAMMA3 = np.array([[1, 1, 0], [0, 1, -1], [1, 1, -1]], dtype=complex)
_GAMMA23 = np.diag([1j, 1, 1]).astype(complex)


def cayley_gamma3() -> CayleyMap:
    """The map with gamma3* H gamma3 = H3; transports M3 points to the ball."""
    return CayleyMap(_GAMMA3, ball_form(2), model3_form(), Model.M3, Model.BALL)


def cayley_gamma23() -> CayleyMap:
    """diag(i,1,1) with gamma23* H3 gamma23 = H2; transports M2 points to M3."""
    return CayleyMap(_GAMMA23, model3_form(), model2_form(), Model.M2, Model.M3)


def cayley_gamma2() -> CayleyMap:
    """The composite gamma3 . gamma23 with gamma2* H gamma2 = H2; M2 to ball."""
    return CayleyMap(_GAMMA3 @ _GAMMA23, ball_form(2), model2_form(), Model.M2, Model.BALL)


def apply(g, p: ModelPoint) -> ModelPoint:
    """Fractional-linear action (A z + B) / (C z + D) on a model point."""
    if isinstance(g, Isometry):
        expected = standard_form_for(p.model, p.n)
        if g.form != expected:
            raise DomainError(
                f"isometry preserves a different form than the {p.model.value} model's"
            )
        out_model = p.model
        mat = g.mat
    elif isinstance(g, CayleyMap):
        if p.model is not g.point_domain:
            raise DomainError(
                f"map acts on {g.point_domain.value} points, got {p.model.value}"
            )
        out_model = g.point_codomain
        mat = g.mat
    else:
        raise TypeError(f"cannot apply object of type {type(g).__name__}")

    w = mat @ lift(p)
    denom = w[-1]
    if abs(denom) < _DENOM_TINY:
        raise DomainError("zero denominator: point outside the map's domain")
    return ModelPoint(out_model, w[:-1] / denom)


def random_isometry(form: HermitianForm, seed: int, scale: float = 0.5) -> Isometry:
    """A deterministic pseudo-random element of SU(form).

    Draws a matrix, projects it onto the Lie algebra (X* F + F X = 0, trace
    removed), rescales to Frobenius norm `scale`, and exponentiates.  The
    form residual is re-checked afterwards, so the exponential's accuracy
    is verified rather than assumed.  scale = 0 gives the identity.
    """
    rng = np.random.default_rng(seed)
    d = form.dim
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    finv = np.linalg.inv(form.entries)
    x = a - finv @ a.conj().T @ form.entries
    x -= (np.trace(x) / d) * np.eye(d)
    norm = np.linalg.norm(x)
    if norm > 0 and scale != 0:
        x *= scale / norm
    else:
        x = np.zeros_like(x)
    g = expm(x)
    resid = verify_isometry(g, form, form)
    if resid > ISOMETRY_TOL:
        raise NumericalError(f"exponential left the group (residual {resid:.3g})")
    return Isometry(g, form)
