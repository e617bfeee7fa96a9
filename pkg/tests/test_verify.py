from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp, mpf

from conftest import absdiff
from gompertz import (B1_MINUS_HALF, B1_PLUS_HALF, DegenerateCase,
                      DomainError, HyperGeomParams, ZeroDenominator,
                      calibrate_bernoulli_convention, check_gauss_terminating,
                      check_gen_binomial_sum, check_int_binomial_sum,
                      check_shift_expansion, check_shift_recurrence,
                      delta_reference, digamma, digamma_series_coeff,
                      digamma_series_rhs, digamma_series_scan, gauss_grid,
                      hypergeom_terminating, int_binomial_grid,
                      norm_log_moment, norm_log_moment_deriv,
                      series_partial_sum, series_partial_trend)
from gompertz.verify import EXACT_PASS, FAIL, NUMERIC_PASS, SKIPPED


def H(a, b, c, x=1):
    return HyperGeomParams(Fraction(a), Fraction(b), Fraction(c), Fraction(x))


class TestHypergeomTerminating:
    def test_b_zero_is_constant_term(self):
        assert hypergeom_terminating(H(1, 0, 5)) == 1

    def test_two_term_sum(self):
        # 1 + (1*(-1))/(2*1)
        assert hypergeom_terminating(H(1, -1, 2)) == Fraction(1, 2)

    def test_closed_form_instance(self):
        # j=2, m=3, r=1: value must equal (j-r)/(m-r)
        assert hypergeom_terminating(H(1, 2 - 3, 1 + 2 - 1)) == Fraction(1, 2)

    def test_parameter_swap_symmetry(self):
        for a in range(-4, 0):
            for b in range(-4, 0):
                p = hypergeom_terminating(H(a, b, Fraction(7, 2)))
                q = hypergeom_terminating(H(b, a, Fraction(7, 2)))
                assert p == q

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            hypergeom_terminating(H(1, -3, -1))

    def test_domain(self):
        with pytest.raises(DomainError):
            hypergeom_terminating(H(1, Fraction(1, 2), 2))
        with pytest.raises(DomainError):
            hypergeom_terminating(H(1, 2, 3))


class TestGaussClosedForm:
    def test_grid_all_exact(self):
        reports = gauss_grid(m_max=15)
        assert reports
        assert all(r.verdict == EXACT_PASS for r in reports)

    def test_j_equals_m_trivial(self):
        p = H(1, 0, 1 + 5 - 2)
        report = check_gauss_terminating(p, Fraction(5 - 2, 5 - 2))
        assert report.verdict == EXACT_PASS

    def test_perturbed_closed_form_fails(self):
        p = H(1, -1, 2)
        report = check_gauss_terminating(p, Fraction(1, 2) + Fraction(1, 100))
        assert report.verdict == FAIL
        assert report.residual == Fraction(-1, 100)


class TestGenBinomialSum:
    def test_hand_frozen_case(self):
        # three-term sum at m=2, i=0, r=0, eps=-3/4: 1 + 6 - 3/5 = 32/5
        report = check_gen_binomial_sum(2, 0, 0, Fraction(-3, 4))
        assert report.verdict == EXACT_PASS
        assert report.lhs == Fraction(32, 5)
        assert report.rhs == Fraction(32, 5)

    def test_single_term_case(self):
        for (m, r, eps) in ((3, 1, Fraction(-2, 3)), (5, 0, Fraction(-5, 9))):
            report = check_gen_binomial_sum(m, m, r, eps)
            assert report.verdict == EXACT_PASS

    def test_small_grid(self):
        for m in range(7):
            for i in range(m + 1):
                for r in range(3):
                    report = check_gen_binomial_sum(m, i, r, Fraction(-3, 4))
                    assert report.verdict == EXACT_PASS

    def test_integer_eps_rejected(self):
        with pytest.raises(DomainError):
            check_gen_binomial_sum(2, 0, 0, Fraction(-1))


class TestIntBinomialSum:
    def test_hand_frozen_case(self):
        # m=3, j=2, r=1: 6 - 3 = 3 on both sides
        report = check_int_binomial_sum(3, 2, 1)
        assert report.verdict == EXACT_PASS
        assert report.lhs == 3

    def test_j_equals_r_telescopes_to_zero(self):
        report = check_int_binomial_sum(6, 2, 2)
        assert report.verdict == EXACT_PASS
        assert report.lhs == 0 == report.rhs

    def test_degenerate_m_equals_r(self):
        with pytest.raises(DegenerateCase):
            check_int_binomial_sum(3, 3, 3)

    @given(st.integers(0, 40), st.integers(0, 40), st.integers(0, 40))
    def test_random_parameters_exact(self, m, j, r):
        if not (0 <= r <= j <= m) or m == r:
            return
        assert check_int_binomial_sum(m, j, r).verdict == EXACT_PASS

    def test_grid_with_skips(self):
        reports = int_binomial_grid(m_max=10)
        skipped = [r for r in reports if r.verdict == SKIPPED]
        passed = [r for r in reports if r.verdict == EXACT_PASS]
        assert len(skipped) + len(passed) == len(reports)
        assert skipped  # the m with j=r=m points are reported, not hidden
        assert all(r.verdict != FAIL for r in reports)


class TestNormLogMoment:
    def test_zero_u(self, ctx30):
        assert norm_log_moment(Fraction(-3, 4), 0, 0, ctx30) == 0

    def test_precision_escalation(self, ctx30, ctx60):
        for q, r, u in ((Fraction(-3, 4), 0, Fraction(1)),
                        (Fraction(-2, 3), 1, Fraction(1, 2))):
            v30 = norm_log_moment(q, r, u, ctx30)
            v60 = norm_log_moment(q, r, u, ctx60)
            assert absdiff(v30, v60) < mpf(10) ** -30

    def test_limit_trend_toward_minus_u(self, ctx30):
        # r=1, u=1: values must approach (-1)**r * u = -1 monotonically
        gaps = []
        for eps in (Fraction(-9, 10), Fraction(-99, 100), Fraction(-999, 1000)):
            v = norm_log_moment(eps, 1, 1, ctx30)
            gaps.append(absdiff(v, -1))
        assert gaps[0] > gaps[1] > gaps[2]

    def test_domain(self, ctx30):
        with pytest.raises(DomainError):
            norm_log_moment(Fraction(-5, 4), 0, 1, ctx30)
        with pytest.raises(DomainError):
            norm_log_moment(Fraction(-3, 4), 0, -1, ctx30)


class TestNormLogMomentDeriv:
    def test_order_zero_falls_back(self, ctx30):
        a = norm_log_moment_deriv(Fraction(-3, 4), 0, 1, 0, ctx30)
        b = norm_log_moment(Fraction(-3, 4), 0, 1, ctx30)
        assert a == b

    def test_first_derivative_matches_finite_difference(self, ctx30):
        eps, r, u = Fraction(-3, 4), 0, Fraction(1)
        h = Fraction(1, 10 ** 6)
        direct = norm_log_moment_deriv(eps, r, u, 1, ctx30)
        with mp.workprec(600):
            fd = (norm_log_moment(eps, r, u + h, ctx30)
                  - norm_log_moment(eps, r, u - h, ctx30)) / (2 * mpf(10) ** -6)
        assert absdiff(direct, fd) < mpf(10) ** -10

    def test_second_derivative_matches_finite_difference(self, ctx30):
        eps, r, u = Fraction(-2, 3), 1, Fraction(1)
        h = Fraction(1, 10 ** 5)
        direct = norm_log_moment_deriv(eps, r, u, 2, ctx30)
        with mp.workprec(600):
            fd = (norm_log_moment(eps, r, u + h, ctx30)
                  - 2 * norm_log_moment(eps, r, u, ctx30)
                  + norm_log_moment(eps, r, u - h, ctx30)) / (mpf(10) ** -5) ** 2
        assert absdiff(direct, fd) < mpf(10) ** -6

    def test_domain(self, ctx30):
        with pytest.raises(DomainError):
            norm_log_moment_deriv(Fraction(-3, 4), 0, 0, 1, ctx30)
        with pytest.raises(DomainError):
            norm_log_moment_deriv(Fraction(-3, 4), 0, 1, -1, ctx30)


class TestShiftIdentities:
    def test_recurrence_passes(self, ctx30):
        for eps, r, u in ((Fraction(-3, 4), 0, Fraction(1)),
                          (Fraction(-2, 3), 1, Fraction(1, 2))):
            report = check_shift_recurrence(eps, r, u, ctx30)
            assert report.verdict == NUMERIC_PASS
            assert report.residual < report.tolerance

    def test_recurrence_zero_u(self, ctx30):
        report = check_shift_recurrence(Fraction(-3, 4), 0, 0, ctx30)
        assert report.verdict == NUMERIC_PASS
        assert report.lhs == 0

    def test_expansion_j1_consistent_with_recurrence(self, ctx30):
        eps, r, u = Fraction(-3, 4), 0, Fraction(1)
        expansion = check_shift_expansion(1, eps, r, u, ctx30)
        recurrence = check_shift_recurrence(eps, r, u, ctx30)
        assert expansion.verdict == NUMERIC_PASS
        assert expansion.lhs == recurrence.lhs

    def test_expansion_passes(self, ctx30):
        for j, eps, r, u in ((2, Fraction(-3, 4), 0, Fraction(1)),
                             (3, Fraction(-2, 3), 1, Fraction(1, 2))):
            report = check_shift_expansion(j, eps, r, u, ctx30)
            assert report.verdict == NUMERIC_PASS

    def test_expansion_order_capped(self, ctx30):
        with pytest.raises(DomainError):
            check_shift_expansion(5, Fraction(-3, 4), 0, 1, ctx30)


class TestSeriesPartialSums:
    def test_zero_u(self, ctx30):
        assert series_partial_sum(0, 0, 6, ctx30) == 0

    def test_paths_agree(self, ctx30):
        for r in (0, 1):
            exact = series_partial_sum(1, r, 8, ctx30, path="exact")
            quad = series_partial_sum(1, r, 8, ctx30, path="quadrature")
            assert absdiff(exact, quad) < mpf(10) ** -25

    def test_trend_toward_u(self, ctx30):
        trend = dict(series_partial_trend(1, 1, 10, ctx30))
        assert absdiff(trend[10], 1) < absdiff(trend[5], 1)

    def test_domain(self, ctx30):
        with pytest.raises(DomainError):
            series_partial_sum(1, 2, 1, ctx30)
        with pytest.raises(DomainError):
            series_partial_sum(-1, 0, 5, ctx30)
        with pytest.raises(ValueError):
            series_partial_sum(1, 0, 5, ctx30, path="fast")


def oracle_series_coeff(k, m, b1):
    """Brute-force triple sum with test-local Stirling/Bernoulli tables."""
    N = m + 1
    S2 = [[0] * (N + 1) for _ in range(N + 1)]
    S2[0][0] = 1
    for a in range(1, N + 1):
        for t in range(1, a + 1):
            S2[a][t] = t * S2[a - 1][t] + S2[a - 1][t - 1]
    S1 = [[0] * (N + 1) for _ in range(N + 1)]
    S1[0][0] = 1
    for w in range(1, N + 1):
        for j in range(1, w + 1):
            S1[w][j] = S1[w - 1][j - 1] + (w - 1) * S1[w - 1][j]
    B = [Fraction(1)]
    for a in range(1, N + 1):
        B.append(-sum(Fraction(comb(a + 1, i)) * B[i] for i in range(a))
                 / (a + 1))
    if b1 == B1_PLUS_HALF:
        B[1] = Fraction(1, 2)
    total = Fraction(0)
    for t in range(2, m + 1):
        for w in range(1, t):
            inner = sum((-1) ** j * B[j] * S1[w][j] for j in range(1, w + 1))
            total += S2[m][t] * Fraction(-k) ** (t - w) * inner
    return total


class TestDigammaSeries:
    def test_coeff_empty_at_m1(self):
        assert digamma_series_coeff(3, 1) == 0

    def test_coeff_m2_is_k_times_b1(self):
        assert digamma_series_coeff(1, 2, B1_MINUS_HALF) == Fraction(-1, 2)
        assert digamma_series_coeff(1, 2, B1_PLUS_HALF) == Fraction(1, 2)
        assert digamma_series_coeff(3, 2, B1_MINUS_HALF) == Fraction(-3, 2)

    def test_coeff_brute_force_oracle(self):
        for conv in (B1_MINUS_HALF, B1_PLUS_HALF):
            for k in range(1, 5):
                for m in range(1, 7):
                    assert digamma_series_coeff(k, m, conv) == \
                        oracle_series_coeff(k, m, conv)

    def test_rhs_single_term_at_m1(self, ctx30):
        # m=1: rhs = ln(1) + coeff(1,2) * (-1) * delta
        for conv, sign in ((B1_MINUS_HALF, 1), (B1_PLUS_HALF, -1)):
            point = digamma_series_rhs(Fraction(1), 1, conv, ctx30)
            with mp.workprec(600):
                want = sign * mpf(delta_reference(ctx30)) / 2
            assert absdiff(point.rhs, want) < mpf(10) ** -25
            assert point.residual > 0

    def test_log_term_vanishes_at_u1(self, ctx30):
        point = digamma_series_rhs(Fraction(1), 3, B1_MINUS_HALF, ctx30)
        assert absdiff(point.psi, digamma(1, ctx30)) == 0

    def test_conventions_differ(self, ctx30):
        a = digamma_series_rhs(Fraction(2), 5, B1_MINUS_HALF, ctx30)
        b = digamma_series_rhs(Fraction(2), 5, B1_PLUS_HALF, ctx30)
        assert a.residual != b.residual

    def test_scan_order_is_canonical(self, ctx30):
        points = digamma_series_scan(Fraction(1), (1, 2),
                                     (B1_MINUS_HALF, B1_PLUS_HALF), ctx30)
        assert [(p.convention, p.m) for p in points] == [
            (B1_MINUS_HALF, 1), (B1_MINUS_HALF, 2),
            (B1_PLUS_HALF, 1), (B1_PLUS_HALF, 2)]

    def test_calibration_regression(self, ctx30):
        # frozen from the calibration run at (u=1, m=20)
        assert calibrate_bernoulli_convention(ctx30) == B1_PLUS_HALF

    def test_domain(self, ctx30):
        with pytest.raises(DomainError):
            digamma_series_rhs(Fraction(0), 3, B1_MINUS_HALF, ctx30)
        with pytest.raises(ValueError):
            digamma_series_rhs(Fraction(1), 3, "B1_zero", ctx30)
        with pytest.raises(DomainError):
            digamma_series_coeff(0, 3)
