"""Competitive population models with a unique globally attracting ESS.

The generalized model ``dn_i/dt = [r_i - sum_m w_m K_im L(sum_j B_jm n_j)] n_i``
contains symmetrizable Lotka-Volterra systems and resource models with
Holling II intake. Under its hypotheses the Lyapunov functional is convex,
its minimizer on the nonnegative orthant is the unique ESS, and every
solution with all species present converges to it.
"""
from .assumptions import AssumptionReport, check_assumptions
from .equilibrium import (EssResult, StationaryPoint, classify_stationary_point,
                          enumerate_stationary_points, find_ess_by_enumeration, solve_ess,
                          verify_ess)
from .errors import (EvaluationError, HypothesisViolation, InvariantError, LvessError,
                     MaxStepsExceeded, NoBalancing, NoConvergence, NonFiniteState, NotBalanced,
                     NotPositiveDefinite, NotStationary, NotSymmetric, ParseError, StepUnderflow,
                     TooManySubsets)
from .io import load_model, save_model
from .lyapunov import (LyapunovEvaluation, evaluate, lyapunov_dissipation, lyapunov_gradient,
                       lyapunov_hessian, lyapunov_value)
from .models import (DiscreteMeasure, GeneralizedModel, LotkaVolterraModel, ResourceModel,
                     growth_rates, lv_growth_rates, resource_growth_rates,
                     resource_to_generalized)
from .response import CustomResponse, Identity, ResponseFunction, Saturating
from .simulator import (SimOptions, Trajectory, check_lyapunov_monotone, detect_convergence,
                        simulate)
from .symmetry import (EmbeddingResult, embed_lotka_volterra, find_balancing_constants,
                       is_positive_definite, to_generalized)

__version__ = "0.1.0"
