"""Bayesian nonparametric estimation and testing of mutual information.

A Dirichlet process centered on a chosen base measure is updated by the
data; pushing its finite-atom realizations through weighted k-nearest-
neighbor entropy sums yields Monte Carlo draws of mutual information.
The midhinge of the posterior draws estimates MI, and the prior-to-
posterior mass ratio near zero tests mutual independence.
"""

from .dp import (DpParams, DpRealization, PosteriorBase, dirichlet_weights,
                 dirichlet_weights_from_uniforms, draw_posterior_dp,
                 draw_prior_dp, marginal_realization)
from .entropy import (bnp_posterior_entropy, bnp_prior_entropy, kl_entropy,
                      knn_kl_entropy, true_entropy, weighted_atom_entropy)
from .errors import (BnpmiError, CholeskyFailure, DegeneratePrior,
                     DegenerateSupport, ElicitationFailed, EmptyRequest,
                     InsufficientDraws, InvalidParameter, ParseError,
                     Unsupported, ZeroPriorMass)
from .knn import knn_distances, knn_distances_exact_oracle
from .mi import (MiConfig, MiDraws, MiEstimate, mi_draw, mi_draws,
                 mi_point_estimate, true_mi)
from .rbtest import (RbConfig, RbTestResult, Verdict, choose_concentration,
                     elicit_a, rb_estimate, run_independence_test,
                     strength_estimate, window_probability_profile)
from .rng import RngStream
from .sampling import (MaxwellProductSpec, MvNormalSpec, MvTSpec,
                       SphericalLognormalSpec, UbdSpec, UniformProductSpec,
                       dense_cov4, equicorrelated_cov, pair_correlation_cov,
                       parse_distribution, sample, standard_normal_spec,
                       standardize_columns)
from .simulate import CellSummary, SimPlan, run_plan

__version__ = "0.1.0"
