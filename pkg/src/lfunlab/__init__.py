"""lfunlab: a desk-scale numerical laboratory for degree-2 L-functions.

Completed L-values via incomplete-gamma sums, the simple-zero detector
series D = L (log L)'', additive/multiplicative twists and their character
assembly, local Euler factor analysis, critical-line zero certification,
and the completion-identity / expansion-lemma machinery, with exact and
independent-oracle verification throughout.
"""

from .characters import DirichletCharacter, character_table, gauss_sum, trivial_character
from .dirichlet import (CoeffSeries, convolve, detector_coefficients,
                        log_l_coefficients)
from .errors import (ContourError, ConvergenceError, LfunlabError, PoleError,
                     SearchCapError, TailBoundError, ValidationError,
                     WindingError)
from .evaluate import (EvalSettings, completed_detector, completed_l,
                       d2_funceq_residual, detector_value,
                       detector_value_omit_prime, l_value, l_with_derivatives)
from .identity import (TruncationSpec, assembled_remainder,
                       completion_identity_residual, completion_taylor_coeffs,
                       completion_term, detector_qexp, dual_expansion_residual,
                       ibp_expansion_residual, log_kernel_transform,
                       mellin_expansion_residual, remainder_decay_check,
                       transformed_dual_series)
from .kernels import kernel_jets, kernel_value, log_kernel
from .local import LocalFactor, abundance_report, local_factor, local_zeros, rankin_average
from .newforms import (Newform, check_deligne, dual, hecke_extend,
                       load_newform, ramanujan_delta, save_newform,
                       twist_newform, validate_newform)
from .special import (gamma, log_gamma, lower_incomplete_gamma,
                      reflection_csc2, trigamma, upper_incomplete_gamma)
from .twists import additive_twist, detector_additive_value, detector_twist_value
from .zeros import (BoxCount, ZeroRecord, certify_simple, count_zeros,
                    residues_up_to, scan_zeros)

__version__ = "0.1.0"
