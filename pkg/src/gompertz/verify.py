"""Exact and numeric identity verification: terminating hypergeometric sums
with their Gauss closed forms, the two alternating binomial-sum identities
(exact over Q), the shift recurrence/expansion satisfied by the normalized
log-moments, partial sums of the double series converging to u, and the
digamma-series harness with its convention calibration.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from .errors import (DegenerateCase, DegenerateDenominator, DomainError,
                     ZeroDenominator)
from .exactmath import (B1_MINUS_HALF, B1_PLUS_HALF, BERNOULLI_CONVENTIONS,
                        DeltaLinear, bernoulli, binom_gen, binom_int,
                        delta_linear_eval, factorial, stirling1_unsigned,
                        stirling2)
from .integrals import log_integral_closed, log_moment, shifted_log_moment
from .precision import BigFloat, PrecisionContext, to_bigfloat
from .reference import (Integrand, delta_reference, digamma, gamma_real,
                        quad_semi_infinite)

EXACT_PASS = "ExactPass"
NUMERIC_PASS = "NumericPass"
FAIL = "Fail"
SKIPPED = "Skipped"

#: Rational sample points inside the (-1, -1/2) window; exact arithmetic
#: makes the binomial-sum checks zero-tolerance.
EPS_WINDOW_SAMPLES = (Fraction(-3, 4), Fraction(-2, 3), Fraction(-5, 9))


@dataclass(frozen=True)
class HyperGeomParams:
    """2F1 parameters; all uses here are terminating (b a nonpositive int)."""

    a: Fraction
    b: Fraction
    c: Fraction
    x: Fraction

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "x"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))


@dataclass(frozen=True)
class IdentityReport:
    identity_name: str
    parameters: dict
    lhs: object
    rhs: object
    verdict: str
    residual: object
    tolerance: BigFloat | None = None

    @property
    def passed(self) -> bool:
        return self.verdict in (EXACT_PASS, NUMERIC_PASS)


def hypergeom_terminating(p: HyperGeomParams) -> Fraction:
    """Exact finite 2F1 sum for nonpositive-integer b: exactly 1-b terms."""
    if p.b > 0 or p.b.denominator != 1:
        raise DomainError(f"b must be a nonpositive integer, got {p.b}")
    n = -int(p.b)
    total = Fraction(0)
    rising_a = Fraction(1)
    rising_b = Fraction(1)
    rising_c = Fraction(1)
    xpow = Fraction(1)
    kfact = 1
    for k in range(n + 1):
        if k > 0:
            rising_a *= p.a + k - 1
            rising_b *= p.b + k - 1
            cf = p.c + k - 1
            if cf == 0:
                raise ZeroDenominator(
                    f"(c)_{k} vanished before termination (c={p.c}, b={p.b})")
            rising_c *= cf
            xpow *= p.x
            kfact *= k
        total += xpow * rising_a * rising_b / (rising_c * kfact)
    return total


def check_gauss_terminating(p: HyperGeomParams,
                            closed_form: Fraction) -> IdentityReport:
    """Exact comparison of the terminating sum against its Gauss closed form
    (supplied already reduced to a rational)."""
    lhs = hypergeom_terminating(p)
    rhs = Fraction(closed_form)
    params = {"a": str(p.a), "b": str(p.b), "c": str(p.c), "x": str(p.x)}
    if lhs == rhs:
        return IdentityReport("gauss_terminating", params, lhs, rhs,
                              EXACT_PASS, Fraction(0))
    return IdentityReport("gauss_terminating", params, lhs, rhs,
                          FAIL, lhs - rhs)


def check_gen_binomial_sum(m: int, i: int, r: int,
                           eps: Fraction) -> IdentityReport:
    """Exact check over Q of the alternating sum with generalized-binomial
    weights collapsing to a single generalized-binomial ratio:

      sum_{j=i}^{m} C(m,j) C(eps+j-r, j)**-1 C(eps+j-1, j-i) (-1)**j
        = C(m-i-r, m-i) C(m+eps-r, m)**-1 (-1)**i
    """
    eps = Fraction(eps)
    if eps.denominator == 1:
        raise DomainError("eps must be a non-integer rational")
    if not (0 <= i <= m) or r < 0:
        raise DomainError(f"need 0 <= i <= m and r >= 0, got m={m} i={i} r={r}")
    lhs = Fraction(0)
    for j in range(i, m + 1):
        inv = binom_gen(eps + j - r, j)
        if inv == 0:
            raise DegenerateDenominator(
                f"C({eps}+{j}-{r}, {j}) = 0 cannot be inverted")
        term = Fraction(binom_int(m, j)) / inv * binom_gen(eps + j - 1, j - i)
        lhs += -term if j % 2 else term
    outer = binom_gen(m + eps - r, m)
    if outer == 0:
        raise DegenerateDenominator(f"C({m}+{eps}-{r}, {m}) = 0 cannot be inverted")
    rhs = binom_gen(Fraction(m - i - r), m - i) / outer
    if i % 2:
        rhs = -rhs
    params = {"m": str(m), "i": str(i), "r": str(r), "eps": str(eps)}
    if lhs == rhs:
        return IdentityReport("gen_binomial_sum", params, lhs, rhs,
                              EXACT_PASS, Fraction(0))
    return IdentityReport("gen_binomial_sum", params, lhs, rhs, FAIL, lhs - rhs)


def check_int_binomial_sum(m: int, j: int, r: int) -> IdentityReport:
    """Exact check of sum_{k=j}^{m} C(m,k) C(k,r) (-1)**k
    = C(m,j) C(j,r) (j-r)/(m-r) (-1)**j; undefined at m = r."""
    if not (0 <= r <= j <= m):
        raise DomainError(f"need 0 <= r <= j <= m, got m={m} j={j} r={r}")
    if m == r:
        raise DegenerateCase("right-hand side divides by m - r = 0")
    lhs = Fraction(sum((binom_int(m, k) * binom_int(k, r)) * (-1 if k % 2 else 1)
                       for k in range(j, m + 1)))
    rhs = Fraction(binom_int(m, j) * binom_int(j, r) * (j - r), m - r)
    if j % 2:
        rhs = -rhs
    params = {"m": str(m), "j": str(j), "r": str(r)}
    if lhs == rhs:
        return IdentityReport("int_binomial_sum", params, lhs, rhs,
                              EXACT_PASS, Fraction(0))
    return IdentityReport("int_binomial_sum", params, lhs, rhs, FAIL, lhs - rhs)


def _run_grid(points, check, threads: int = 1) -> list[IdentityReport]:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(check, points))
    return [check(pt) for pt in points]


def gauss_grid(m_max: int = 15, threads: int = 1) -> list[IdentityReport]:
    """All terminating Gauss instances F(1, j-m, 1+j-r; 1) = (j-r)/(m-r)
    over 1 <= r < j <= m <= m_max."""
    points = [(m, j, r)
              for m in range(1, m_max + 1)
              for j in range(1, m + 1)
              for r in range(1, j)]

    def check(point):
        m, j, r = point
        p = HyperGeomParams(Fraction(1), Fraction(j - m), Fraction(1 + j - r),
                            Fraction(1))
        return check_gauss_terminating(p, Fraction(j - r, m - r))

    return _run_grid(points, check, threads)


def gen_binomial_grid(m_max: int = 12, r_max: int = 3,
                      eps_list=EPS_WINDOW_SAMPLES,
                      threads: int = 1) -> list[IdentityReport]:
    points = [(m, i, r, eps)
              for m in range(m_max + 1)
              for i in range(m + 1)
              for r in range(r_max + 1)
              for eps in eps_list]
    return _run_grid(points, lambda pt: check_gen_binomial_sum(*pt), threads)


def int_binomial_grid(m_max: int = 20, threads: int = 1) -> list[IdentityReport]:
    points = [(m, j, r)
              for m in range(m_max + 1)
              for j in range(m + 1)
              for r in range(j + 1)]

    def check(point):
        m, j, r = point
        try:
            return check_int_binomial_sum(m, j, r)
        except DegenerateCase as exc:
            return IdentityReport("int_binomial_sum",
                                  {"m": str(m), "j": str(j), "r": str(r)},
                                  None, None, SKIPPED, str(exc))

    return _run_grid(points, check, threads)


# --- normalized log-moments and their shift identities -------------------------

def norm_log_moment(q: Fraction, r: int, u: Fraction,
                    ctx: PrecisionContext) -> BigFloat:
    """C(q, r) / Gamma(q+1) * integral(0,inf) x**(q-1) e**-x ln(x*u+1) dx
    for rational q > -1, u >= 0."""
    q = Fraction(q)
    u = Fraction(u)
    if q <= -1:
        raise DomainError(f"need q > -1, got {q}")
    if u < 0:
        raise DomainError(f"need u >= 0, got {u}")
    if u == 0:
        return ctx.round(mpf(0))
    integral = quad_semi_infinite(Integrand(q - 1, log_scale=u), ctx)
    with mp.workprec(ctx.working_bits + 16):
        pref = to_bigfloat(binom_gen(q, r), ctx) / gamma_real(q + 1, ctx)
        out = pref * integral
    return ctx.round(out)


def norm_log_moment_deriv(q: Fraction, r: int, u: Fraction, order: int,
                          ctx: PrecisionContext) -> BigFloat:
    """order-th u-derivative of norm_log_moment, via the differentiated
    integrand (-1)**(order-1) (order-1)! x**(q+order-1) e**-x (u*x+1)**-order
    under the same prefactor; order 0 falls back to the moment itself."""
    if order < 0:
        raise DomainError("order must be nonnegative")
    if order == 0:
        return norm_log_moment(q, r, u, ctx)
    q = Fraction(q)
    u = Fraction(u)
    if q <= -1:
        raise DomainError(f"need q > -1, got {q}")
    if u <= 0:
        raise DomainError(f"need u > 0 for derivatives, got {u}")
    integrand = Integrand(q + order - 1, denom_power=order, denom_scale=u)
    integral = quad_semi_infinite(integrand, ctx)
    sign = 1 if (order - 1) % 2 == 0 else -1
    with mp.workprec(ctx.working_bits + 16):
        pref = to_bigfloat(binom_gen(q, r), ctx) / gamma_real(q + 1, ctx)
        out = pref * sign * factorial(order - 1) * integral
    return ctx.round(out)


def check_shift_recurrence(eps: Fraction, r: int, u: Fraction,
                           ctx: PrecisionContext) -> IdentityReport:
    """One-step shift identity for the normalized log-moment:
    f(eps+1) = eps/(eps+1-r) f(eps) + u/(eps+1-r) f'(eps),
    to within 10**-(decimal_digits - 5)."""
    eps = Fraction(eps)
    u = Fraction(u)
    if eps + 1 - r == 0:
        raise DegenerateDenominator("eps + 1 - r = 0")
    lhs = norm_log_moment(eps + 1, r, u, ctx)
    with mp.workprec(ctx.working_bits + 16):
        rhs = (to_bigfloat(eps / (eps + 1 - r), ctx)
               * norm_log_moment(eps, r, u, ctx))
        if u != 0:  # the derivative term carries coefficient u
            rhs += (to_bigfloat(u / (eps + 1 - r), ctx)
                    * norm_log_moment_deriv(eps, r, u, 1, ctx))
        residual = abs(lhs - rhs)
    tol = ctx.target_tolerance(slack_digits=5)
    params = {"eps": str(eps), "r": str(r), "u": str(u),
              "digits": str(ctx.decimal_digits)}
    verdict = NUMERIC_PASS if residual < tol else FAIL
    return IdentityReport("shift_recurrence", params, lhs, ctx.round(rhs),
                          verdict, ctx.round(residual), tolerance=tol)


def check_shift_expansion(j: int, eps: Fraction, r: int, u: Fraction,
                          ctx: PrecisionContext) -> IdentityReport:
    """j-step shift expansion in u-derivatives:
    f(eps+j) = C(eps+j-r, j)**-1 sum_{i=0}^{j} C(eps+j-1, j-i) u**i/i! f^(i)(eps),
    to within 10**-(decimal_digits - 8) (higher derivative orders carry the
    looser budget)."""
    if not 1 <= j <= 4:
        raise DomainError(f"j must be in 1..4, got {j}")
    eps = Fraction(eps)
    u = Fraction(u)
    lead = binom_gen(eps + j - r, j)
    if lead == 0:
        raise DegenerateDenominator(f"C({eps}+{j}-{r}, {j}) = 0")
    lhs = norm_log_moment(eps + j, r, u, ctx)
    with mp.workprec(ctx.working_bits + 16):
        total = mpf(0)
        for i in range(j + 1):
            coeff = binom_gen(eps + j - 1, j - i) * u ** i / factorial(i)
            if coeff == 0:  # u = 0 kills every derivative term
                continue
            total += (to_bigfloat(coeff, ctx)
                      * norm_log_moment_deriv(eps, r, u, i, ctx))
        rhs = to_bigfloat(1 / lead, ctx) * total
        residual = abs(lhs - rhs)
    tol = ctx.target_tolerance(slack_digits=8)
    params = {"j": str(j), "eps": str(eps), "r": str(r), "u": str(u),
              "digits": str(ctx.decimal_digits)}
    verdict = NUMERIC_PASS if residual < tol else FAIL
    return IdentityReport("shift_expansion", params, lhs, ctx.round(rhs),
                          verdict, ctx.round(residual), tolerance=tol)


# --- partial sums of the double series whose limit is u -------------------------

SERIES_PATHS = ("exact", "quadrature")


def _series_blocks(u: Fraction, r: int, m_max: int, ctx: PrecisionContext,
                   path: str):
    """Yield (m, block value); coefficients stay exact inside each block and
    each block is rounded once. At u = 1 the k >= 1 terms accumulate exactly
    in Q[delta] (path "exact"); path "quadrature" forces the numeric route."""
    if path not in SERIES_PATHS:
        raise ValueError(f"unknown path {path!r}")
    u = Fraction(u)
    if u < 0:
        raise DomainError("u must be nonnegative")
    if r < 0 or m_max < r:
        raise DomainError(f"need 0 <= r <= m_max, got r={r} m_max={m_max}")
    use_exact = path == "exact" and u == 1
    delta = delta_reference(ctx) if use_exact else None
    for m in range(r, m_max + 1):
        exact_acc = DeltaLinear(Fraction(0), Fraction(0))
        with mp.workprec(ctx.working_bits + 16):
            numeric_acc = mpf(0)
            for k in range(r, m + 1):
                coeff = Fraction(binom_int(m, k) * binom_int(k, r), factorial(k))
                if (k + r) % 2:
                    coeff = -coeff
                if use_exact and k >= 1:
                    exact_acc = exact_acc + coeff * log_integral_closed(k - 1)
                else:
                    numeric_acc += (to_bigfloat(coeff, ctx)
                                    * log_moment(k, u, ctx, path="quadrature"))
            block = numeric_acc
            if use_exact:
                block += delta_linear_eval(exact_acc, delta, ctx)
        yield m, ctx.round(block)


def series_partial_trend(u: Fraction, r: int, m_max: int,
                         ctx: PrecisionContext,
                         path: str = "exact") -> list[tuple[int, BigFloat]]:
    """All partial sums S_r..S_m_max in one pass."""
    out = []
    with mp.workprec(ctx.working_bits + 16):
        total = mpf(0)
        for m, block in _series_blocks(u, r, m_max, ctx, path):
            total += block
            out.append((m, ctx.round(total)))
    return out


def series_partial_sum(u: Fraction, r: int, m_max: int, ctx: PrecisionContext,
                       path: str = "exact") -> BigFloat:
    """S_M = sum_{m=r}^{M} sum_{k=r}^{m} C(m,k) C(k,r) (-1)**(k+r)/k! times
    the k-th log-moment at u; converges to u as M grows."""
    return series_partial_trend(u, r, m_max, ctx, path)[-1][1]


# --- digamma-series harness ------------------------------------------------------

@lru_cache(maxsize=None)
def digamma_series_coeff(k: int, m: int, convention: str = B1_MINUS_HALF) -> Fraction:
    """Exact coefficient sum_{t=2}^{m} S2(m,t) sum_{w=1}^{t-1} (-k)**(t-w)
    sum_{j=1}^{w} (-1)**j B_j S1u(w,j); empty for m = 1."""
    if k < 1 or m < 1:
        raise DomainError("k and m must be positive")
    total = Fraction(0)
    for t in range(2, m + 1):
        s2 = stirling2(m, t)
        for w in range(1, t):
            inner = Fraction(0)
            for j in range(1, w + 1):
                term = bernoulli(j, convention) * stirling1_unsigned(w, j)
                inner += -term if j % 2 else term
            total += s2 * Fraction(-k) ** (t - w) * inner
    return total


@dataclass(frozen=True)
class DigammaSeriesPoint:
    u: Fraction
    m: int
    convention: str
    rhs: BigFloat
    psi: BigFloat
    residual: BigFloat


def digamma_series_rhs(u: Fraction, m: int, convention: str,
                       ctx: PrecisionContext) -> DigammaSeriesPoint:
    """ln(u) + sum_{k=1}^{m} coeff(k, m+1) C(m,k) (-1)**k/(k! m!) times the
    k-th shifted log-moment, reported against digamma(u). No convergence is
    asserted; the point records the residual as observed."""
    u = Fraction(u)
    if u <= 0:
        raise DomainError("u must be positive")
    if convention not in BERNOULLI_CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    mfact = factorial(m)
    with mp.workprec(ctx.working_bits + 16):
        rhs = mpmath.log(to_bigfloat(u, ctx))
        for k in range(1, m + 1):
            coeff = (digamma_series_coeff(k, m + 1, convention)
                     * Fraction(binom_int(m, k), factorial(k) * mfact))
            if k % 2:
                coeff = -coeff
            rhs += to_bigfloat(coeff, ctx) * shifted_log_moment(k, u, ctx)
        psi = digamma(u, ctx)
        residual = abs(rhs - psi)
    return DigammaSeriesPoint(u=u, m=m, convention=convention,
                              rhs=ctx.round(rhs), psi=ctx.round(psi),
                              residual=ctx.round(residual))


def digamma_series_scan(u: Fraction, m_values, conventions,
                        ctx: PrecisionContext) -> list[DigammaSeriesPoint]:
    """Scan points in canonical (convention, m) order."""
    return [digamma_series_rhs(u, m, conv, ctx)
            for conv in conventions for m in m_values]


def calibrate_bernoulli_convention(ctx: PrecisionContext, u: Fraction = Fraction(1),
                                   m: int = 20) -> str:
    """The convention whose residual at (u, m) is smaller becomes the
    calibrated default for reporting."""
    pts = {conv: digamma_series_rhs(u, m, conv, ctx)
           for conv in BERNOULLI_CONVENTIONS}
    minus = pts[B1_MINUS_HALF].residual
    plus = pts[B1_PLUS_HALF].residual
    if minus == plus:
        raise DomainError("conventions produced identical residuals; "
                          "calibration point is degenerate")
    return B1_MINUS_HALF if minus < plus else B1_PLUS_HALF
