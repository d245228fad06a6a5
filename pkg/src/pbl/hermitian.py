"""Hermitian forms of signature (n,1) and the three models of complex
hyperbolic space they cut out.

A point z in C^n lies in a model exactly when its lift (z, 1) is negative
for the model's form: |z|^2 < 1 on the ball, 2 Im(z1) > |z2|^2 in model 2,
2 Re(z1) + |z2|^2 < 0 in model 3.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError

__all__ = [
    "HERMITIAN_TOL",
    "Model",
    "HermitianForm",
    "ModelPoint",
    "ball_form",
    "model2_form",
    "model3_form",
    "standard_forms",
    "standard_form_for",
    "inner_product",
    "lift",
    "model_indicator",
]

# inputs are small exact integers and i, so this slack is generous
HERMITIAN_TOL = 1e-12


class Model(enum.Enum):
    """The three coordinate models: unit ball B^n, and the two Siegel-type
    domains of the n=2 space."""

    BALL = "ball"
    M2 = "m2"
    M3 = "m3"


@dataclass(frozen=True)
class HermitianForm:
    """An (n+1)x(n+1) Hermitian matrix of signature (n,1)."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise DimensionError(f"form must be square of size >= 2, got {m.shape}")
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
            raise DomainError("matrix is not Hermitian")
        eigs = np.linalg.eigvalsh(m)
        if not (np.sum(eigs > 0) == m.shape[0] - 1 and np.sum(eigs < 0) == 1):
            raise DomainError(f"signature is not (n,1); eigenvalues {eigs}")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        """Matrix size n+1."""
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.dim - 1

    def __eq__(self, other):
        return (
            isinstance(other, HermitianForm)
            and self.dim == other.dim
            and bool(np.abs(self.entries - other.entries).max() <= HERMITIAN_TOL)
        )


def ball_form(n: int) -> HermitianForm:
    """diag(Id_n, -1), the form of the unit ball model of B^n."""
    if n < 2:
        raise DimensionError("ball model needs n >= 2")
    return HermitianForm(np.diag([1.0] * n + [-1.0]).astype(complex))


def model2_form() -> HermitianForm:
    """The 3x3 form [[0,0,-i],[0,1,0],[i,0,0]] of model 2."""
    return HermitianForm(np.array([[0, 0, -1j], [0, 1, 0], [1j, 0, 0]], dtype=complex))


def model3_form() -> HermitianForm:
    """The 3x3 form [[0,0,1],[0,1,0],[1,0,0]] of model 3."""
    return HermitianForm(np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex))


def standard_forms(n: int):
    """The triple (ball form, model-2 form, model-3 form).

    The Siegel-type forms exist only for n = 2; for other n use ball_form.
    """
    if n != 2:
        raise DimensionError("model-2/model-3 forms are only defined for n = 2")
    return ball_form(2), model2_form(), model3_form()


def standard_form_for(model: Model, n: int = 2) -> HermitianForm:
    """The standard form whose negative cone defines the given model."""
    if model is Model.BALL:
        return ball_form(n)
    if model is Model.M2:
        return model2_form()
    return model3_form()


@dataclass(frozen=True)
class ModelPoint:
    """An interior point of one of the models, stored in affine coordinates.

    Constructors reject boundary and exterior points (indicator >= 0), so
    every ModelPoint in circulation is strictly interior.
    """

    model: Model
    coords: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coords, dtype=complex))
        if c.ndim != 1:
            raise DimensionError("coords must be a vector")
        if self.model in (Model.M2, Model.M3) and c.shape[0] != 2:
            raise DimensionError(f"{self.model.value} points live in C^2")
        if self.model is Model.BALL and c.shape[0] < 2:
            raise DimensionError("ball points need n >= 2 coordinates")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        ind = model_indicator(self)
        if not ind < 0:
            raise DomainError(
                f"not an interior {self.model.value} point (indicator {ind:.3g} >= 0)"
            )

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @staticmethod
    def ball(coords) -> "ModelPoint":
        return ModelPoint(Model.BALL, np.asarray(coords, dtype=complex))

    @staticmethod
    def m2(z1, z2) -> "ModelPoint":
        return ModelPoint(Model.M2, np.array([z1, z2], dtype=complex))

    @staticmethod
    def m3(z1, z2) -> "ModelPoint":
        return ModelPoint(Model.M3, np.array([z1, z2], dtype=complex))

    def form(self) -> HermitianForm:
        return standard_form_for(self.model, self.n)


def inner_product(form: HermitianForm, zt, wt) -> complex:
    """The pairing w* H z of two lifted vectors.

    Conjugate-symmetric: inner_product(H, z, w) == conj(inner_product(H, w, z)).
    """
    zt = np.asarray(zt, dtype=complex)
    wt = np.asarray(wt, dtype=complex)
    if zt.shape != (form.dim,) or wt.shape != (form.dim,):
        raise DimensionError(
            f"vectors must have length {form.dim}, got {zt.shape} and {wt.shape}"
        )
    return complex(wt.conj() @ form.entries @ zt)


def lift(p: ModelPoint) -> np.ndarray:
    """The canonical lift (z_1, ..., z_n, 1)."""
    return np.append(p.coords, 1.0 + 0.0j)


def model_indicator(p: ModelPoint) -> float:
    """<lift(p), lift(p)> under the model's standard form.

    Real by Hermitian symmetry and negative exactly on interior points.
    """
    zt = np.append(np.asarray(p.coords, dtype=complex), 1.0 + 0.0j)
    form = standard_form_for(p.model, zt.shape[0] - 1)
    return float((zt.conj() @ form.entries @ zt).real)
