"""Schrodinger steering of bipartite pure states in the antilinear representation."""
from .antilinear import (AntilinearOp, PolarData, adjoint, antiunitarity_residual, apply, check_similarity,
                         factorization_residuals, from_state, hs_norm_sq, polar_factorize)
from .errors import *  # noqa: F401,F403
from .fine_structure import (DecayModel, SpectralModel, Tier, classify_vector, correlation_image,
                             decomposition_report, format_model, parse_model, sqrt_image, steering_image, summable)
from .numerics import DEFAULT_TOL, TolerancePolicy, hermitian_eig, psd_sqrt, svd
from .state import (BipartiteState, DensityOp, SchmidtDecomposition, load_state, make_state, parse_state,
                    product_state, reduced_density, schmidt)
from .steering import (Projector, SteeringOutcome, max_prob_representative, reach_target, steer_elementary,
                       steer_event, steering_equivalent, trace_rule_oracle)

__version__ = "0.1.0"
