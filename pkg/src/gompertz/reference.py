"""Arbitrary-precision reference evaluation: semi-infinite quadrature for the
exp(-x)-weighted integrand family, the Gamma and digamma functions, Euler's
constant, and two independent evaluators of the Euler-Gompertz constant delta.

Quadrature splits at x = 1: a tanh-sinh (double-exponential) rule absorbs the
algebraic endpoint singularity on (0, 1], and composite Gauss-Legendre panels
cover [1, X] where the integrand is analytic and exp(-x)-damped. X carries an
explicit, audited tail bound.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import (CrossCheckFailure, DomainError, NonIntegrable, PoleError,
                     PrecisionUnreachable)
from .exactmath import bernoulli
from .precision import BigFloat, PrecisionContext, log1p, to_bigfloat

_cache_lock = threading.Lock()

# extra bits carried inside evaluators before the final ctx rounding
_SLACK_BITS = 16

_TANH_SINH_MAX_LEVEL = 12
_TANH_SINH_T_CAP = 16.0


@dataclass(frozen=True)
class Integrand:
    """Descriptor for integral(0, inf) of x**power * exp(-x) * F(x) dx where
    F is exactly one of: 1, ln(log_scale*x + 1), or (denom_scale*x + 1)**-denom_power.
    """

    power: Fraction
    log_scale: Fraction | None = None
    denom_power: int = 0
    denom_scale: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "power", Fraction(self.power))
        if self.log_scale is not None:
            object.__setattr__(self, "log_scale", Fraction(self.log_scale))
            if self.log_scale < 0:
                raise ValueError("log_scale must be nonnegative")
        object.__setattr__(self, "denom_scale", Fraction(self.denom_scale))
        if self.denom_power < 0:
            raise ValueError("denom_power must be nonnegative")
        if self.log_scale is not None and self.denom_power > 0:
            raise ValueError("at most one of log/denominator factors")
        if self.denom_power > 0 and self.denom_scale <= 0:
            raise ValueError("denom_scale must be positive")

    def check_integrable(self) -> None:
        # the log factor vanishes like x at 0, softening the power by one
        if self.log_scale is not None and self.log_scale > 0:
            if self.power <= -2:
                raise NonIntegrable(f"x**{self.power} * log diverges at 0")
        elif self.power <= -1:
            raise NonIntegrable(f"x**{self.power} diverges at 0")


@dataclass(frozen=True)
class QuadratureSpec:
    """Resolved plan for one semi-infinite integral."""

    tanh_sinh_max_level: int
    gl_nodes: int
    gl_panel_width: int
    truncation_x: int
    tail_bound: BigFloat

    def __post_init__(self) -> None:
        assert self.gl_nodes % 2 == 0


def plan_quadrature(integrand: Integrand, ctx: PrecisionContext) -> QuadratureSpec:
    """Choose truncation point and rule sizes, with the tail bound audited
    against the internal tolerance."""
    ctx.check_cap()
    integrand.check_integrable()
    # polynomial majorant degree of the prefactor on [1, inf): the log factor
    # costs at most one extra power, the denominator factor only helps
    c = max(0, math.ceil(integrand.power))
    scale = 1.0
    if integrand.log_scale is not None and integrand.log_scale > 0:
        c += 1
        scale = max(1.0, math.log1p(float(integrand.log_scale)) + 1.0)
    with mp.workprec(ctx.working_bits + _SLACK_BITS):
        tol = ctx.internal_tolerance()
        x = max(math.ceil(ctx.total_digits * math.log(10)), 2 * c + 1)
        while 2 * scale * mpf(x) ** c * mpmath.exp(-x) >= tol:
            x += 1
        tail = 2 * scale * mpf(x) ** c * mpmath.exp(-x)
    assert x >= 2 * c
    assert tail <= ctx.internal_tolerance()
    n = math.ceil(1.25 * ctx.total_digits) + 6
    n += n % 2  # even count: no root at the panel midpoint to special-case
    return QuadratureSpec(tanh_sinh_max_level=_TANH_SINH_MAX_LEVEL,
                          gl_nodes=n, gl_panel_width=4,
                          truncation_x=x, tail_bound=tail)


def _make_eval(integrand: Integrand):
    """Pointwise evaluator at the ambient working precision."""
    a = mpf(integrand.power.numerator) / integrand.power.denominator
    b = None
    if integrand.log_scale is not None:
        b = mpf(integrand.log_scale.numerator) / integrand.log_scale.denominator
    s = mpf(integrand.denom_scale.numerator) / integrand.denom_scale.denominator
    p = integrand.denom_power

    def f(x: BigFloat) -> BigFloat:
        v = x ** a * mpmath.exp(-x)
        if b is not None:
            v *= log1p(b * x)
        if p:
            v /= (s * x + 1) ** p
        return v

    return f


def _tanh_sinh_unit(f, tol: BigFloat, max_level: int) -> BigFloat:
    """integral(0,1) of f via the double-exponential transform
    x = (1 + tanh((pi/2) sinh t)) / 2, computed stably near x = 0."""
    pi2 = mpmath.pi / 2

    def node(t):
        s = pi2 * mpmath.sinh(t)
        e2s = mpmath.exp(2 * s)
        x = e2s / (1 + e2s)
        w = pi2 * mpmath.cosh(t) * (x / (1 + e2s)) * 2
        return x, w

    results: list[BigFloat] = []
    running = mpf(0)
    h = mpf(1)
    for level in range(max_level + 1):
        new = mpf(0)
        k = 0 if level == 0 else 1
        step = 1 if level == 0 else 2  # reuse all coarser-level nodes
        scale = max(mpf(1), abs(results[-1])) if results else mpf(1)
        cutoff = tol * scale / 100
        small_run = 0
        while True:
            t = k * h
            x, w = node(t)
            contrib = w * f(x)
            if k > 0:
                xm, wm = node(-t)
                contrib += wm * f(xm)
            new += contrib
            if float(t) > 3 and abs(contrib) < cutoff:
                small_run += 1
                if small_run >= 2:
                    break
            else:
                small_run = 0
            k += step
            if float(k * h) > _TANH_SINH_T_CAP:
                raise PrecisionUnreachable(
                    "tanh-sinh tail window exhausted before terms decayed")
        running += new
        results.append(running * h)
        if level > 0 and abs(results[-1] - results[-2]) < tol * max(mpf(1), abs(results[-1])):
            return results[-1]
        h = h / 2
    raise PrecisionUnreachable(
        f"tanh-sinh did not converge within {max_level} refinement levels")


_legendre_cache: dict[tuple[int, int], list] = {}


def _legendre_nodes(n: int, prec: int) -> list:
    """Gauss-Legendre nodes/weights on [-1,1] (n even), Newton-refined."""
    assert n % 2 == 0
    key = (n, prec)
    with _cache_lock:
        cached = _legendre_cache.get(key)
    if cached is not None:
        return cached
    with mp.workprec(prec + 40):
        half = []
        for i in range(1, n // 2 + 1):
            x = mpmath.cos(mpmath.pi * (i - mpf(1) / 4) / (n + mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for j in range(2, n + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpf(2) ** (-(prec + 20)):
                    break
            p0, p1 = mpf(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            w = 2 / ((1 - x * x) * dp * dp)
            half.append((x, w))
    nodes = half + [(-x, w) for x, w in half]
    with _cache_lock:
        _legendre_cache[key] = nodes
    return nodes


def _gl_panels(f, lo: int, hi: int, n: int, width: int) -> BigFloat:
    nodes = _legendre_nodes(n, mp.prec)
    total = mpf(0)
    a = mpf(lo)
    end = mpf(hi)
    while a < end:
        b = min(a + width, end)
        half = (b - a) / 2
        mid = (b + a) / 2
        s = mpf(0)
        for x, w in nodes:
            s += w * f(mid + half * x)
        total += s * half
        a = b
    return total


_quad_cache: dict[tuple[Integrand, int], BigFloat] = {}


def quad_semi_infinite(integrand: Integrand, ctx: PrecisionContext) -> BigFloat:
    """integral(0, inf) of the described integrand, correct to
    10**-decimal_digits. Results are cached by (integrand, working bits)."""
    if integrand.log_scale == 0:
        return ctx.round(mpf(0))  # ln(1) annihilates the integrand
    key = (integrand, ctx.working_bits)
    with _cache_lock:
        hit = _quad_cache.get(key)
    if hit is not None:
        return hit
    spec = plan_quadrature(integrand, ctx)
    with mp.workprec(ctx.working_bits + _SLACK_BITS):
        tol = ctx.internal_tolerance()
        f = _make_eval(integrand)
        lower = _tanh_sinh_unit(f, tol, spec.tanh_sinh_max_level)
        upper = _gl_panels(f, 1, spec.truncation_x, spec.gl_nodes,
                           spec.gl_panel_width)
        value = lower + upper
    value = ctx.round(value)
    with _cache_lock:
        _quad_cache[key] = value
    return value


# --- Gamma via Spouge's approximation ----------------------------------------

_spouge_cache: dict[tuple[int, int], list] = {}


def _spouge_coeffs(a: int, prec: int) -> list:
    key = (a, prec)
    with _cache_lock:
        cached = _spouge_cache.get(key)
    if cached is not None:
        return cached
    with mp.workprec(prec + 30):
        coeffs = [mpmath.sqrt(2 * mpmath.pi)]
        fact = mpf(1)
        for k in range(1, a):
            term = (a - k) ** (k - mpf(1) / 2) * mpmath.exp(a - k) / fact
            coeffs.append(term if k % 2 == 1 else -term)
            fact *= k
    with _cache_lock:
        _spouge_cache[key] = coeffs
    return coeffs


def gamma_real(x: BigFloat | Fraction | int, ctx: PrecisionContext) -> BigFloat:
    """Gamma(x) for real non-pole x. Spouge's series with the parameter set
    from its published error bound, lifted by the recurrence to x >= 1."""
    ctx.check_cap()
    if isinstance(x, (Fraction, int)):
        if x == int(x) and x <= 0:
            raise PoleError(f"Gamma pole at {x}")
        x = to_bigfloat(Fraction(x), ctx)
    with mp.workprec(ctx.working_bits + 30):
        x = mpf(x)
        if x <= 0 and x == mpmath.floor(x):
            raise PoleError(f"Gamma pole at {x}")
        lift = mpf(1)
        while x < 1:
            lift *= x
            x += 1
        z = x - 1
        # |relative error| <= a**-1/2 (2 pi)**-(a+1/2) < 10**-(D+g) needs
        # a > (D+g) ln10 / ln(2 pi)
        a = math.ceil(1.26 * ctx.total_digits) + 2
        coeffs = _spouge_coeffs(a, ctx.working_bits)
        s = coeffs[0]
        for k in range(1, a):
            s += coeffs[k] / (z + k)
        g = (z + a) ** (z + mpf(1) / 2) * mpmath.exp(-(z + a)) * s
        out = g / lift
    return ctx.round(out)


# --- digamma via shift + Bernoulli asymptotic series --------------------------

def digamma(u: BigFloat | Fraction | int, ctx: PrecisionContext) -> BigFloat:
    """psi(u) for u > 0: raise the argument by unit steps until the first
    omitted asymptotic term is below tolerance, then sum the even-Bernoulli
    series psi(v) ~ ln v - 1/(2v) - sum B_2n / (2n v**2n)."""
    ctx.check_cap()
    if isinstance(u, (Fraction, int)):
        if u <= 0:
            raise DomainError(f"digamma requires u > 0, got {u}")
        u = to_bigfloat(Fraction(u), ctx)
    with mp.workprec(ctx.working_bits + 30):
        u = mpf(u)
        if u <= 0:
            raise DomainError(f"digamma requires u > 0, got {u}")
        tol = ctx.internal_tolerance() / 100
        # minimum shift so the asymptotic series can reach tol: its smallest
        # term is ~ exp(-2 pi v), so v >= (D+g) ln10 / (2 pi) with margin
        v_min = 0.4 * ctx.total_digits + 2
        shift_sum = mpf(0)
        v = u
        while v < v_min:
            shift_sum += 1 / v
            v += 1
        out = mpmath.log(v) - 1 / (2 * v) - shift_sum
        v2 = v * v
        vpow = v2
        n = 1
        while True:
            b = bernoulli(2 * n)
            term = (mpf(b.numerator) / b.denominator) / (2 * n) / vpow
            if abs(term) < tol:
                break
            out -= term
            vpow *= v2
            n += 1
            if n > 4 * ctx.total_digits:
                raise PrecisionUnreachable("digamma series failed to reach tolerance")
    return ctx.round(out)


_gamma_const_cache: dict[int, BigFloat] = {}


def euler_gamma(ctx: PrecisionContext) -> BigFloat:
    """Euler's constant, computed (not stored) as -psi(1)."""
    key = ctx.working_bits
    with _cache_lock:
        hit = _gamma_const_cache.get(key)
    if hit is not None:
        return hit
    with mp.workprec(ctx.working_bits):
        # negation inside the block: mpmath rounds even unary minus at the
        # ambient precision
        value = -digamma(1, ctx)
    value = ctx.round(value)
    with _cache_lock:
        _gamma_const_cache[key] = value
    return value


# --- Euler-Gompertz constant ---------------------------------------------------

DELTA_METHODS = ("quadrature", "e_times_E1", "cross_validated")

_delta_cache: dict[tuple[str, int], BigFloat] = {}


def _delta_quadrature(ctx: PrecisionContext) -> BigFloat:
    return quad_semi_infinite(Integrand(Fraction(0), log_scale=Fraction(1)), ctx)


def _delta_series(ctx: PrecisionContext) -> BigFloat:
    # E1(1) = -gamma + sum_{k>=1} (-1)**(k+1) / (k * k!), summed exactly
    limit = Fraction(1, 10 ** (ctx.total_digits + 5))
    total = Fraction(0)
    k = 1
    kfact = 1
    while True:
        term = Fraction((-1) ** (k + 1), k * kfact)
        total += term
        if abs(term) < limit:
            break
        k += 1
        kfact *= k
    with mp.workprec(ctx.working_bits + _SLACK_BITS):
        e1 = -euler_gamma(ctx) + to_bigfloat(total, ctx)
        value = mpmath.exp(1) * e1
    return ctx.round(value)


def delta_reference(ctx: PrecisionContext,
                    method: str = "cross_validated") -> BigFloat:
    """The Euler-Gompertz constant integral(0,inf) ln(x+1) e**-x dx, by direct
    quadrature, by e*E1(1), or by both with a mandatory agreement check."""
    if method not in DELTA_METHODS:
        raise ValueError(f"unknown method {method!r}")
    key = (method, ctx.working_bits)
    with _cache_lock:
        hit = _delta_cache.get(key)
    if hit is not None:
        return hit
    if method == "quadrature":
        value = _delta_quadrature(ctx)
    elif method == "e_times_E1":
        value = _delta_series(ctx)
    else:
        q = _delta_quadrature(ctx)
        s = _delta_series(ctx)
        with mp.workprec(ctx.working_bits + _SLACK_BITS):
            if abs(q - s) >= ctx.target_tolerance():
                raise CrossCheckFailure(
                    f"delta evaluators disagree: quadrature={q} series={s}")
            value = (q + s) / 2
        value = ctx.round(value)
    with _cache_lock:
        _delta_cache[key] = value
    return value
