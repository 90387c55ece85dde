"""Once-reinforced random walk on the half line: exact lattice laws, generating
functions, Brownian-limit densities and moments."""

from .core import (
    DEFAULT_CONFIG,
    CapacityError,
    ConvergenceError,
    DomainError,
    GammaPoint,
    NumericConfig,
    ReinforcementParam,
    SingularityError,
    gamma_of,
    make_param,
)
from .discrete import (
    JointPmf,
    McHistogram,
    dp_evolve,
    dp_init,
    dp_step,
    marginal_maximum,
    marginal_position,
    maximum_law_unreinforced,
    mc_simulate,
)
from .genfunc import TruncatedSeries, gf_diag, gf_double, gf_origin, gf_to_pmf, gf_to_pmfs, theta_series
from .continuum import (
    SeriesValue,
    ilt,
    joint_density,
    laplace_joint,
    laplace_max,
    p_series,
    q_auto,
    q_poisson,
    q_series,
    walker_density,
)
from .moments import (
    MomentResult,
    max_dispersion,
    max_moment,
    max_moment_asymptotic,
    walker_dispersion,
    walker_mean,
    walker_second_moment,
)
from .bridge import ConvergenceRow, continuum_delta, convergence_report, max_bound_check, scaled_marginals

__version__ = "0.1.0"
