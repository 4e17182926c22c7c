"""Exact condition numbers, heights and bounded-height censuses for rational inputs."""

__version__ = "0.1.0"

from .exact import (BoundValue, artin_estimate_check, ball_volume_K, linear_bound_constants, mobius,
                    nonlinear_bound_constants, sigma_constant, zeta)
from .gauss import GaussInteger, GaussRational
from .heights import (ProjectivePointQ, ProjectivePointQi, bit_length, canonical_representative,
                      canonical_representative_qi, is_c_visible, is_visible, ns_height, ui_bit_length,
                      ui_height)
from .linear import (SquareMatrix, condition_k, condition_mu, frobenius_norm, fs_distance_to_singular,
                     singular_extremes)
from .polysys import (DegreeList, PolySystem, delta_weights, inner_delta, mu_norm_at, mu_norm_system,
                      norm_delta, rho_fiber, rho_of_system, unitary_apply, zeros_projective)
from .lattice import RegionOracle, davenport_check, enumerate_ball
from .census import (CensusReport, CensusSpec, census_linear, census_nonlinear, mobius_inversion_check,
                     tail_probability)
from .newton import (AffineSystem, CertResult, PrecisionValue, approx_zero_census, certify_approx_zero,
                     corollary41_precision, gamma_quantity, gamma_vs_mu_bound_check, newton_step,
                     precision_of)
