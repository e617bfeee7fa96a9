"""Rational approximant sequences for the Euler-Gompertz constant, exact
identity verification, and arbitrary-precision reference evaluation."""

from .approximants import (ApproximantRow, DecayReport, approx_table,
                           corollary1_pair, corollary2_pair,
                           error_decay_report)
from .errors import (CrossCheckFailure, DegenerateCase, DegenerateDenominator,
                     DomainError, GompertzError, IntegralityViolation,
                     NonIntegrable, PoleError, PrecisionUnreachable,
                     ZeroDenominator)
from .exactmath import (B1_MINUS_HALF, B1_PLUS_HALF, BigRat, DeltaLinear,
                        alt_factorial_sum, bernoulli, binom_gen, binom_int,
                        delta_linear_eval, factorial, stirling1_unsigned,
                        stirling2)
from .integrals import (IntegralValue, cross_checked_value,
                        frac_integral_closed, frac_integral_recurrence,
                        log_integral_closed, log_moment, shifted_log_moment)
from .precision import (BigFloat, MAX_DECIMAL_DIGITS, PrecisionContext,
                        bigfloat_str, to_bigfloat)
from .reference import (Integrand, QuadratureSpec, delta_reference, digamma,
                        euler_gamma, gamma_real, plan_quadrature,
                        quad_semi_infinite)
from .verify import (DigammaSeriesPoint, HyperGeomParams, IdentityReport,
                     calibrate_bernoulli_convention, check_gauss_terminating,
                     check_gen_binomial_sum, check_int_binomial_sum,
                     check_shift_expansion, check_shift_recurrence,
                     digamma_series_coeff, digamma_series_rhs,
                     digamma_series_scan, gauss_grid, gen_binomial_grid,
                     hypergeom_terminating, int_binomial_grid,
                     norm_log_moment, norm_log_moment_deriv,
                     series_partial_sum, series_partial_trend)

__version__ = "0.1.0"
