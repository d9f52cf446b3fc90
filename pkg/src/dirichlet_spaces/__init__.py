"""Numerical Hardy and Bergman spaces of Dirichlet series."""

from .errors import DirichletSpacesError, PreconditionError, SaturationError, ToleranceError
from .polynomial import (
    DirichletPolynomial,
    add,
    convolve,
    derivative,
    divisor_counts,
    evaluate,
    power,
    scale,
    translate,
    zeta_power,
)
from .bohr import Character, bohr_eval, factorize, sample_characters, twist
from .measures import (
    ConditionReport,
    WeightMeasure,
    check_D_condition,
    check_H_condition,
    density_at,
    moment_closed_form,
    moment_weight,
)
from .norms import NormEstimate, norm_a2, norm_ap, norm_h2, norm_hp_even, norm_hp_mc
from .riemann_liouville import kt_constant, reconstruct, rl_apply, rl_apply_quadrature
from .pointeval import (
    KernelValue,
    delta_lower_bound,
    delta_norm_a2,
    delta_norm_h2,
    delta_norm_hp,
)
from .asymptotics import (
    ExperimentResult,
    ExperimentSpec,
    ExponentFit,
    experiment_embedding,
    experiment_norm_equivalence,
    experiment_point_eval,
    experiment_zeta_power,
    fit_exponent,
    run_experiment,
)

__version__ = "0.1.0"
