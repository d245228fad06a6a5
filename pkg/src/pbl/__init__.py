"""pbl: complex hyperbolic ball models, Heisenberg lattice sums, and
sup-norm bound pipelines for Picard modular cusp forms.
"""

from .errors import (
    DimensionError,
    DomainError,
    NumericalError,
    PblError,
    PreconditionError,
)
from .logreal import LogReal, log_sum
from .hermitian import (
    HermitianForm,
    Model,
    ModelPoint,
    ball_form,
    inner_product,
    lift,
    model2_form,
    model3_form,
    model_indicator,
    standard_form_for,
    standard_forms,
)
from .transforms import (
    CayleyMap,
    Isometry,
    apply,
    cayley_gamma2,
    cayley_gamma23,
    cayley_gamma3,
    random_isometry,
    verify_isometry,
)
from .geometry import (
    ball_volume,
    ball_volume_constant,
    cosh2_half_distance,
    curvature_determinant,
    distance,
    petersson_norm_factor,
    petersson_objective,
)
from .lattice import (
    GAUSSIAN_SPEC,
    HeisenbergParam,
    LatticeSpec,
    enumerate_ball,
    enumerate_indices,
    lattice_covolume,
    stabilizer_matrix,
)
from .counting import (
    OrbitSource,
    TailBoundTerms,
    counting_function,
    counting_upper_bound,
    min_displacement,
    stabilizer_injectivity_radius,
    tail_bound,
    tail_bound_terms,
)
from .bounds import (
    BoundReport,
    ConstantModel,
    CuspSumResult,
    GammaChain,
    ScalingFit,
    cocompact_bound,
    cusp_bound,
    cusp_lattice_sum,
    cusp_term_log,
    gamma_integral_chain,
    maxima_locate,
    orbit_cosh_power_sum,
    scaling_fit,
)

__version__ = "0.1.0"
