"""Toolkit for Herglotz-Nevanlinna functions: canonical representations,
measure recovery, boundary values, asymptotic expansions and sum rules,
physical bounds for passive systems, spline-density ansatz with exact
Hilbert transforms, and passive approximation by convex optimization.
"""

from .asymptotics import (AsymptoticExpansion, SumRuleResult, classify_growth,
                          expand_at_infinity, expand_at_zero,
                          moments_from_expansion, sum_rule_at_infinity,
                          sum_rule_at_zero, symmetric_sum_rule)
from .boundary import (LimitSchedule, analytic_continuation_below,
                       boundary_limit, boundary_value, point_mass_at,
                       pv_integral, stieltjes_invert)
from .bounds import (BandSpec, BoundReport, amplitude_lower_bound,
                     bandwidth_resistance_bound, h_delta, metamaterial_bound,
                     resistance_integral_bound, resistance_integral_numeric,
                     verify_amplitude_bound)
from .circuits import (Circuit, ImpulseResponse, admittance_energy,
                       frequency_resistance, herglotz_to_pr, impedance,
                       impulse_response_eval, pr_to_herglotz)
from .errors import (ConvergenceError, DomainError, HerglotzKitError,
                     InvalidMeasureError, PreconditionError)
from .herglotz import (CanonicalFn, HerglotzFn, HerglotzRep, NamedFn,
                       eval_fn, exp_representation, fn_from_dict, is_stieltjes,
                       is_symmetric, recover_a_b, symmetric_extension,
                       symmetric_from_stieltjes, upper_half_grid)
from .measures import (DensityComponent, MeasureSpec, PointMass, growth_check,
                       mass_on_interval, moment)
from .passive_approx import (ApproxProblem, ApproxSolution, assemble,
                             bound_gap_report, error_norm, solve)
from .splinehilbert import (DensityAnsatz, SplineBasis, ansatz_as_herglotz,
                            ansatz_imag, ansatz_real, bspline_eval,
                            bspline_hilbert)

__version__ = "1.0.0"
