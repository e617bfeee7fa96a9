"""Working-precision bookkeeping for arbitrary-precision floats.

BigFloat values are mpmath.mpf numbers; every evaluator takes an explicit
PrecisionContext and rounds its result to the context's working precision,
so results are pure functions of (inputs, context).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import PrecisionUnreachable

BigFloat = mpmath.mpf

#: Largest supported target precision, in decimal digits.
MAX_DECIMAL_DIGITS = 1000


@dataclass(frozen=True)
class PrecisionContext:
    """Target output digits plus guard digits absorbed before final rounding.

    working_bits = ceil((decimal_digits + guard_digits) * log2(10)); all
    internal tolerances are 10**-(decimal_digits + guard_digits).
    """

    decimal_digits: int
    guard_digits: int = 15

    def __post_init__(self) -> None:
        if self.decimal_digits < 1:
            raise ValueError("decimal_digits must be positive")
        if self.guard_digits < 5:
            raise ValueError("guard_digits must be at least 5")

    @property
    def total_digits(self) -> int:
        return self.decimal_digits + self.guard_digits

    @property
    def working_bits(self) -> int:
        bits = math.ceil(self.total_digits * math.log2(10))
        # invariant: at least 16 bits beyond the bare target digits
        assert bits >= math.ceil(self.decimal_digits * math.log2(10)) + 16
        return bits

    def check_cap(self) -> None:
        if self.decimal_digits > MAX_DECIMAL_DIGITS:
            raise PrecisionUnreachable(
                f"requested {self.decimal_digits} digits exceeds the "
                f"{MAX_DECIMAL_DIGITS}-digit cap")

    def internal_tolerance(self) -> BigFloat:
        """10**-(decimal_digits + guard_digits), at working precision."""
        with mp.workprec(self.working_bits):
            return mpf(10) ** (-self.total_digits)

    def target_tolerance(self, slack_digits: int = 0) -> BigFloat:
        """10**-(decimal_digits - slack_digits)."""
        with mp.workprec(self.working_bits):
            return mpf(10) ** (-(self.decimal_digits - slack_digits))

    def round(self, x: BigFloat) -> BigFloat:
        """Round x to nearest at working_bits."""
        with mp.workprec(self.working_bits):
            return +mpf(x)


def to_bigfloat(q: Fraction | int, ctx: PrecisionContext) -> BigFloat:
    """Exact rational -> BigFloat with one rounding at working precision."""
    q = Fraction(q)
    with mp.workprec(ctx.working_bits):
        return mpf(q.numerator) / q.denominator


def bigfloat_str(x: BigFloat, digits: int) -> str:
    """Decimal string with exactly `digits` significant digits.

    Operates on the value's own mantissa; wrapping through mpf() here would
    re-round at the global default precision and corrupt digits beyond ~16.
    """
    return mpmath.nstr(x, digits, strip_zeros=False)


def log1p(y: BigFloat) -> BigFloat:
    """ln(1+y) at full relative precision, y >= 0 possibly far below eps."""
    if y == 0:
        return mpf(0)
    mag = mpmath.mag(y)  # ceil(log2 |y|)
    if mag >= -10:
        return mpmath.log(1 + y)
    if mag < -(mp.prec // 2):
        # |y**3/3| < 2**(-1.5*prec): two series terms suffice
        return y * (1 - y / 2)
    with mp.workprec(mp.prec - mag + 10):
        v = mpmath.log(1 + y)
    return +v
