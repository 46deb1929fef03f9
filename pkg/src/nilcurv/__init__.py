"""nilcurv: nilpotent-orbit minima and sharp curvature bounds.

Exact partition/composition calculus, the moment-map square norm on dense
complex nilpotent matrices with its sharp orbit minima, Monte Carlo and
gradient-descent verification of the inequalities, and the resulting
closed-form holomorphic-sectional-curvature bounds for period domains and
Calabi-Yau moduli.
"""

from .errors import DegenerateInputError, NilcurvError, NotNilpotentError, ZeroMatrixError
from .hodge import (
    BoundReport,
    HodgeVector,
    PeriodDomainDescriptor,
    bound_report,
    classify_period_domain,
    entropy_lower_bound,
    general_cy_bound,
    horizontal_curvature_bound,
    k_nilpotent_bound,
    length_scale,
    maximal_nilpotency_partition,
    verify_bound_attained,
)
from .nilpotent import (
    Chain,
    chain_assignment,
    chain_link_weights,
    extremal_graded_nilpotent,
    graded_nilpotent_from_chains,
    jordan_block,
    jordan_type,
    k_value,
    matrix_from_json,
    matrix_to_json,
    matrix_tokens,
    moment,
    random_conjugator,
    random_graded_nilpotent,
    random_unitary,
    rigidity_residual,
    sl2_check,
    standard_nilpotent,
)
from .orbit import (
    MinimizeOptions,
    MinimizeResult,
    VerificationReport,
    dominated_partitions,
    k_gradient,
    minimize_k_over_orbit,
    orbit_directional_derivative,
    sample_generator,
    verify_inequality,
)
from .partitions import (
    Composition,
    Dominance,
    Partition,
    c_constant,
    composition_dominates,
    compositions_of,
    conjugate_composition,
    conjugate_partition,
    conjugate_set_partition,
    d_constant,
    dominates,
    dual_profile,
    format_rational,
    induced_partition,
    parse_rational,
    partitions_of,
    union,
    young_diagram,
)

__version__ = "0.1.0"
