"""The cusp-stabilizer Heisenberg group: parameters (alpha, beta), the
upper-triangular stabilizer matrices they define in models 2 and 3, and
enumeration of the discrete lattice L in C x R that indexes them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from .errors import DomainError, PreconditionError
from .hermitian import Model, model2_form, model3_form
from .transforms import Isometry

__all__ = [
    "HeisenbergParam",
    "LatticeSpec",
    "GAUSSIAN_SPEC",
    "stabilizer_matrix",
    "enumerate_indices",
    "enumerate_ball",
    "lattice_covolume",
]


@dataclass(frozen=True)
class HeisenbergParam:
    """Cusp-stabilizer coordinates alpha in C, beta in R."""

    alpha: complex
    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("parameters must be finite")

    @property
    def is_origin(self) -> bool:
        return self.alpha == 0 and self.beta == 0


def stabilizer_matrix(p: HeisenbergParam, model: Model) -> Isometry:
    """The upper-triangular stabilizer element for (alpha, beta).

    Model 3: [[1, -conj(a), -|a|^2/2 + i b], [0, 1, a], [0, 0, 1]].
    Model 2: [[1, i conj(a), i |a|^2/2 + b], [0, 1, a], [0, 0, 1]].
    Both fix the point at infinity and preserve their model's form exactly.
    """
    a, b = complex(p.alpha), float(p.beta)
    if model is Model.M3:
        mat = np.array(
            [[1, -np.conj(a), -abs(a) ** 2 / 2 + 1j * b], [0, 1, a], [0, 0, 1]],
            dtype=complex,
        )
        return Isometry(mat, model3_form())
    if model is Model.M2:
        mat = np.array(
            [[1, 1j * np.conj(a), 1j * abs(a) ** 2 / 2 + b], [0, 1, a], [0, 0, 1]],
            dtype=complex,
        )
        return Isometry(mat, model2_form())
    raise DomainError("stabilizer matrices exist in models 2 and 3 only")


def _default_offset(m: int, n: int) -> float:
    return 0.0


@dataclass(frozen=True)
class LatticeSpec:
    """The lattice L = {(m a1 + n a2, offset(m,n) + l step)} in C x R.

    Defaults to the Gaussian model a1=1, a2=i, step 1, zero offsets; other
    imaginary-quadratic shapes (e.g. Eisenstein a2 = exp(i pi/3)) are one
    field away.
    """

    a1: complex = 1.0 + 0.0j
    a2: complex = 0.0 + 1.0j
    beta_step: float = 1.0
    beta_offset_rule: Optional[Callable[[int, int], float]] = None

    def __post_init__(self):
        if self.beta_step <= 0:
            raise DomainError("beta_step must be positive")
        if abs(self.cell_area) < 1e-14 * max(abs(self.a1), abs(self.a2)) ** 2:
            raise DomainError("alpha basis is degenerate over R")

    @property
    def cell_area(self) -> float:
        return abs((np.conj(self.a1) * self.a2).imag)

    @property
    def alpha_cell_diameter(self) -> float:
        return max(abs(self.a1 + self.a2), abs(self.a1 - self.a2))

    def offset(self, m: int, n: int) -> float:
        rule = self.beta_offset_rule or _default_offset
        return float(rule(m, n))

    def alpha(self, m: int, n: int) -> complex:
        return m * self.a1 + n * self.a2

    def param(self, m: int, n: int, l: int) -> HeisenbergParam:
        return HeisenbergParam(self.alpha(m, n), self.offset(m, n) + l * self.beta_step)

    def index_bounds(self, r_alpha: float):
        """Box |m| <= m_max, |n| <= n_max guaranteed to contain |alpha| <= r_alpha,
        from the dual basis row norms."""
        basis = np.array(
            [[self.a1.real, self.a2.real], [self.a1.imag, self.a2.imag]], dtype=float
        )
        dual = np.linalg.inv(basis)
        m_max = int(math.floor(r_alpha * np.linalg.norm(dual[0]) + 1e-9))
        n_max = int(math.floor(r_alpha * np.linalg.norm(dual[1]) + 1e-9))
        return m_max, n_max


GAUSSIAN_SPEC = LatticeSpec()


def enumerate_indices(
    spec: LatticeSpec, r_alpha: float, r_beta: float, exclude_origin: bool = False
) -> Iterator[tuple[int, int, int]]:
    """Indices (m, n, l) of all lattice points with |alpha| <= r_alpha and
    |beta| <= r_beta, in lexicographic order, each exactly once."""
    if r_alpha < 0 or r_beta < 0:
        raise PreconditionError("radii must be nonnegative")
    m_max, n_max = spec.index_bounds(r_alpha)
    step = spec.beta_step
    for m in range(-m_max, m_max + 1):
        for n in range(-n_max, n_max + 1):
            if abs(spec.alpha(m, n)) > r_alpha:
                continue
            off = spec.offset(m, n)
            l_lo = math.ceil((-r_beta - off) / step - 1e-12)
            l_hi = math.floor((r_beta - off) / step + 1e-12)
            for l in range(l_lo, l_hi + 1):
                if exclude_origin and m == 0 and n == 0 and off + l * step == 0.0:
                    continue
                yield (m, n, l)


def enumerate_ball(
    spec: LatticeSpec, r_alpha: float, r_beta: float, exclude_origin: bool = False
) -> Iterator[HeisenbergParam]:
    """Lattice points as HeisenbergParam values, lexicographic in (m, n, l)."""
    for m, n, l in enumerate_indices(spec, r_alpha, r_beta, exclude_origin):
        yield spec.param(m, n, l)


def lattice_covolume(spec: LatticeSpec) -> float:
    """Volume |Im(conj(a1) a2)| * beta_step of a fundamental cell in C x R."""
    area = spec.cell_area
    if area <= 0:
        raise DomainError("degenerate alpha basis")
    return area * spec.beta_step
