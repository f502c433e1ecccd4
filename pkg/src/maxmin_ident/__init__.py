"""Identifiability of component distributions from extremes of dependent variables.

Build the joint law of observed maxima or minima from component
distributions and a dependence generator, invert it back to the components,
and check the inversion numerically or on simulated samples.
"""

from .dependence import (
    MAX_INDEPENDENT,
    MIN_INDEPENDENT,
    PointGenerator,
    RectGenerator,
    fgm_generator,
    fgm_rect_generator,
    frechet_bounds,
    independent_generator,
    lift_to_rect,
    load_tabulated_generator,
    min_shared_component_generator,
    rect_prob_from_generator,
    shared_component_generator,
    shared_component_triple,
    tabulated_generator,
    validate_generator,
)
from .dist_core import (
    Distribution,
    Exponential,
    Grid,
    GridCdf,
    Gumbel,
    Uniform,
    Weibull,
    cdf_eval,
    discretize,
    parse_distribution,
    quantile,
    sample,
    survival_eval,
)
from .empirics import (
    EmpiricalJointLaw,
    SampleBatch,
    dkw_bound,
    empirical_law,
    plugin_reconstruct,
    sample_scaled_maxima,
    sample_scaled_minima,
    sample_shared_component,
)
from .estimators import (
    MaximaReconstructor,
    MinimaReconstructor,
    MinMaxReconstructor,
    ScaledExtremesReconstructor,
)
from .exceptions import (
    ConfigError,
    GeneratorDomainError,
    MaxMinIdentError,
    UnrecoverableRegionError,
    ValidationError,
)
from .forward_model import (
    JointExtremeLaw,
    ScaleVectors,
    build_law,
    joint_cdf_maxima,
    joint_cdf_scaled_maxima,
    joint_survival_minima,
    joint_survival_scaled_minima,
    marginal_of_max,
    minmax_law,
    rect_prob_minmax,
    validate_joint,
)
from .reconstruct import (
    Anchor,
    ReconstructionReport,
    UniquenessVerdict,
    check_uniqueness,
    recover_from_maxima,
    recover_from_minima,
    recover_from_minmax,
    recover_scaled_extremes,
    single_max_nonuniqueness_demo,
    solve_peeling,
)

__version__ = "0.1.0"
