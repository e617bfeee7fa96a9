"""Exact integer/rational combinatorics: binomials (integer and generalized),
factorials, Stirling numbers of both kinds, Bernoulli numbers, alternating
factorial sums, and elements of the rational span of {1, delta}.

Everything here is exact (Python int / Fraction); memo tables grow on demand
behind a lock so concurrent readers always see a consistent prefix.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .precision import BigFloat, PrecisionContext

BigRat = Fraction

#: Bernoulli-number sign conventions for the index-1 value.
B1_MINUS_HALF = "B1_minus_half"
B1_PLUS_HALF = "B1_plus_half"
BERNOULLI_CONVENTIONS = (B1_MINUS_HALF, B1_PLUS_HALF)

_table_lock = threading.Lock()


def binom_int(n: int, k: int) -> int:
    """C(n, k) for n >= 0; zero outside 0 <= k <= n (out-of-range terms
    in the summation formulas vanish rather than error)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def binom_gen(x: Fraction | int, k: int) -> Fraction:
    """Generalized binomial x(x-1)...(x-k+1)/k! at rational x, k >= 0."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    x = Fraction(x)
    num = Fraction(1)
    for t in range(k):
        num *= x - t
    return num / math.factorial(k)


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return math.factorial(n)


# Stirling tables, grown row by row; row m depends only on row m-1.
_stirling2_rows: list[list[int]] = [[1]]
_stirling1_rows: list[list[int]] = [[1]]


def _grow_stirling(rows: list[list[int]], n: int, second_kind: bool) -> None:
    with _table_lock:
        while len(rows) <= n:
            m = len(rows)
            prev = rows[m - 1]
            row = [0] * (m + 1)
            for t in range(1, m + 1):
                left = prev[t] if t < m else 0
                mult = t if second_kind else (m - 1)
                row[t] = mult * left + prev[t - 1]
            rows.append(row)


def stirling2(m: int, t: int) -> int:
    """Partitions of an m-set into t nonempty blocks; 0 when t > m."""
    if m < 0 or t < 0:
        raise ValueError("arguments must be nonnegative")
    if t > m:
        return 0
    if m >= len(_stirling2_rows):
        _grow_stirling(_stirling2_rows, m, second_kind=True)
    return _stirling2_rows[m][t]


def stirling1_unsigned(w: int, j: int) -> int:
    """Permutations of w elements with j cycles (unsigned first kind);
    0 when j > w. Signs are carried explicitly by callers."""
    if w < 0 or j < 0:
        raise ValueError("arguments must be nonnegative")
    if j > w:
        return 0
    if w >= len(_stirling1_rows):
        _grow_stirling(_stirling1_rows, w, second_kind=False)
    return _stirling1_rows[w][j]


# Bernoulli numbers under the B1 = -1/2 convention; the recurrence
# sum_{i=0}^{m} C(m+1, i) B_i = 0 (m >= 1) determines them all.
_bernoulli_minus: list[Fraction] = [Fraction(1)]


def bernoulli(j: int, convention: str = B1_MINUS_HALF) -> Fraction:
    """B_j; the index-1 value is convention-dependent, all others agree."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    if convention not in BERNOULLI_CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    with _table_lock:
        while len(_bernoulli_minus) <= j:
            m = len(_bernoulli_minus)
            s = sum(Fraction(math.comb(m + 1, i)) * _bernoulli_minus[i]
                    for i in range(m))
            _bernoulli_minus.append(-s / (m + 1))
        value = _bernoulli_minus[j]
    if j == 1 and convention == B1_PLUS_HALF:
        return -value
    return value


def alt_factorial_sum(k: int) -> int:
    """sum_{w=0}^{k-1} (-1)^w w!; empty sum (k = 0) is 0."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    total = 0
    term = 1  # w! with sign folded in below
    for w in range(k):
        total += term if w % 2 == 0 else -term
        term *= w + 1
    return total


@dataclass(frozen=True)
class DeltaLinear:
    """Element p + q*delta of the rational span of {1, delta}."""

    const_part: Fraction
    delta_part: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "const_part", Fraction(self.const_part))
        object.__setattr__(self, "delta_part", Fraction(self.delta_part))

    def __add__(self, other: "DeltaLinear") -> "DeltaLinear":
        return DeltaLinear(self.const_part + other.const_part,
                           self.delta_part + other.delta_part)

    def __sub__(self, other: "DeltaLinear") -> "DeltaLinear":
        return DeltaLinear(self.const_part - other.const_part,
                           self.delta_part - other.delta_part)

    def __neg__(self) -> "DeltaLinear":
        return DeltaLinear(-self.const_part, -self.delta_part)

    def scaled(self, q: Fraction | int) -> "DeltaLinear":
        q = Fraction(q)
        return DeltaLinear(q * self.const_part, q * self.delta_part)

    def __rmul__(self, q: Fraction | int) -> "DeltaLinear":
        return self.scaled(q)


DELTA_ZERO = DeltaLinear(Fraction(0), Fraction(0))
DELTA_UNIT = DeltaLinear(Fraction(0), Fraction(1))


def delta_linear_eval(v: DeltaLinear, delta_value: BigFloat,
                      ctx: PrecisionContext) -> BigFloat:
    """const_part + delta_part * delta_value, rounded at ctx precision."""
    with mp.workprec(ctx.working_bits + 16):
        c = mpf(v.const_part.numerator) / v.const_part.denominator
        d = mpf(v.delta_part.numerator) / v.delta_part.denominator
        out = c + d * mpf(delta_value)
    return ctx.round(out)
