"""Laboratory for small fractional parts of polynomials and additive forms."""

from .arith import Angle, angle_from_rational, frac_distance, mul_pow_mod1, parse_angle
from .errors import BudgetExceeded, DomainError, OutOfRange, Refusal
from .weyl import CoefficientVector, weyl_sum

__version__ = "0.1.0"
