"""Small-k expansion of one-dimensional Green functions for asymptotically
periodic potentials, with exact transfer-matrix references."""
from .brackets import bracket, bracket_function, parse_word, periodic_bracket
from .config import load_potential, parse_potential
from .errors import (ConditioningError, ConfigError, DomainError, ExceptionalCaseError,
                     LowKError, NoBandBottomError, NumericalDegeneracyError, PoleError,
                     PositivityError, ResonancePoleError, SingularCombinationError,
                     UnsupportedOrderError)
from .examples import Example1Params, Example2Params
from .expansion import (ExpansionResult, SCoefficients, a_coeffs, green_coeffs, q_integral,
                        rbar, reflection_series, s_coeffs, s_coeffs_two_sided)
from .generic import (SchrodingerProfile, ZeroEnergySolution, band_bottom_offset,
                      fp_potentials, generic_green_coeffs, schrodinger_band_edges,
                      schrodinger_green, schrodinger_profile, wronskian, zero_energy_solution)
from .oracle import LaurentFit, convergence_radius, extract_coeffs
from .periodic import PeriodConstants, one_period_brackets, period_constants
from .potential import (PeriodicPotential, PiecewiseConstant, PotentialProfile, delta_parts,
                        evaluate, example1_profile, example2_schrodinger_profile,
                        validate_decay)
from .scattering import (BlochData, TransferMatrix, band_edges, bloch, exact_green,
                         generalized_coeffs, green_evaluator, period_matrix,
                         right_semi_infinite_reflection, s_functions, scattering_coeffs,
                         semi_infinite_reflection, transfer_matrix)

__version__ = "0.1.0"
