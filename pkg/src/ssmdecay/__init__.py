"""Fourier decay and dimension of homogeneous self-similar measures."""

from .constants import (bernoulli_diminf_bound, bernoulli_dim2_bound, bernoulli_dim2_bound_unbiased,
                        constants_report, delta, entropy, epsilon_tilde, eta, flattening_sigma,
                        frostman_exponent_osc, kaufman_sigma, n_a)
from .covering import covering_report, decompose, s_set_cover_count
from .dimension import (alpha2_estimate, dim_inf_estimate, dim_q_estimate, moment_sums,
                        young_check)
from .errors import SSMError
from .fourier import fourier_transform, phi, scan
from .mapexpr import parse_map
from .measure import (DiscreteMeasure, HomogeneousSSM, bernoulli, convolve, discrete_approximation,
                      normalize, scale, support_bounds)
from .pushforward import decay_fit, kaufman_verify, pushforward_ft

__version__ = "0.1.0"
