import math
from decimal import Decimal, getcontext

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from pi_forge.elliptic import (
    EllipticPoint,
    agm,
    agm_pi,
    alpha_numeric,
    alpha_quadruple,
    ellint_E,
    ellint_K,
    elliptic_point,
    lambda_quadruple,
    lambda_star_numeric,
    modular_residual,
)
from pi_forge.mpcore import DomainError, PrecisionContext, sqrt
from pi_forge.series import chudnovsky_params, eval_to_precision


def decimal_agm_5_steps(a: str, b: str) -> Decimal:
    getcontext().prec = 30
    a, b = Decimal(a), Decimal(b)
    for _ in range(5):
        a, b = (a + b) / 2, (a * b).sqrt()
    return a


def quad_K(k: float) -> float:
    return quad(lambda t: (1 - k * k * math.sin(t) ** 2) ** -0.5, 0, math.pi / 2, epsabs=1e-14)[0]


def quad_E(k: float) -> float:
    return quad(lambda t: (1 - k * k * math.sin(t) ** 2) ** 0.5, 0, math.pi / 2, epsabs=1e-14)[0]


def small(ctx, shift):
    return ctx.mpf(10) ** (-ctx.working_digits + shift)


class TestAgm:
    def test_fixed_points(self, ctx100):
        assert agm(1, 1, ctx100) == 1
        x = ctx100.mpf("2.75")
        assert agm(x, x, ctx100) == x

    def test_against_decimal_iteration(self, ctx100):
        getcontext().prec = 30
        oracle = decimal_agm_5_steps("1", str(1 / Decimal(2).sqrt()))
        got = agm(1, 1 / sqrt(2, ctx100), ctx100)
        assert abs(got - ctx100.mpf(str(oracle))) < ctx100.mpf("1e-20")
        assert str(got).startswith("0.8472130847939790")

    def test_domain(self, ctx100):
        with pytest.raises(DomainError):
            agm(0, 1, ctx100)
        with pytest.raises(DomainError):
            agm(1, -2, ctx100)


_c60 = PrecisionContext(60)
_pos = st.floats(min_value=1e-6, max_value=1e6)


@settings(max_examples=40, deadline=None)
@given(_pos, _pos, st.floats(min_value=1e-3, max_value=1e3))
def test_agm_properties(a, b, c):
    ctx = _c60
    a, b, c = ctx.mpf(a), ctx.mpf(b), ctx.mpf(c)
    m = agm(a, b, ctx)
    tol = small(ctx, 3) * max(a, b)
    assert abs(m - agm(b, a, ctx)) <= tol
    assert abs(agm(c * a, c * b, ctx) - c * m) <= tol * c
    assert min(a, b) - tol <= m <= max(a, b) + tol


class TestIntegrals:
    def test_K_zero(self, ctx100):
        assert abs(ellint_K(0, ctx100) - agm_pi(ctx100) / 2) < small(ctx100, 1)

    def test_E_endpoints(self, ctx100):
        assert abs(ellint_E(0, ctx100) - agm_pi(ctx100) / 2) < small(ctx100, 1)
        assert ellint_E(1, ctx100) == 1

    def test_K_quadrature(self, ctx100):
        k = 1 / sqrt(2, ctx100)
        got = ellint_K(k, ctx100)
        assert abs(float(got) - quad_K(2**-0.5)) < 1e-12
        assert str(got).startswith("1.854074677")
        assert abs(got - ctx100.mp.ellipk(k * k)) < small(ctx100, 3)

    def test_E_quadrature(self, ctx100):
        k = 1 / sqrt(2, ctx100)
        got = ellint_E(k, ctx100)
        assert abs(float(got) - quad_E(2**-0.5)) < 1e-12
        assert str(got).startswith("1.350643881")
        assert abs(got - ctx100.mp.ellipe(k * k)) < small(ctx100, 3)

    @pytest.mark.parametrize("k", ["0.05", "0.3", "0.6", "0.95", "0.999"])
    def test_against_quadrature_grid(self, ctx100, k):
        kv = ctx100.mpf(k)
        assert abs(float(ellint_K(kv, ctx100)) - quad_K(float(k))) < 1e-11
        assert abs(float(ellint_E(kv, ctx100)) - quad_E(float(k))) < 1e-11

    def test_K_monotone(self, ctx100):
        assert ellint_K(ctx100.mpf("0.5"), ctx100) < ellint_K(ctx100.mpf("0.9"), ctx100)

    def test_domain(self, ctx100):
        for bad in (1, -0.1, 1.5):
            with pytest.raises(DomainError):
                ellint_K(bad, ctx100)
        for bad in (-0.1, 1.5):
            with pytest.raises(DomainError):
                ellint_E(bad, ctx100)

    @pytest.mark.parametrize("k", ["0.1", "0.3", "sqrt", "0.9"])
    def test_legendre_relation(self, ctx100, k):
        ctx = ctx100
        kv = 1 / sqrt(2, ctx) if k == "sqrt" else ctx.mpf(k)
        kp = sqrt(1 - kv * kv, ctx)
        K, Kp = ellint_K(kv, ctx), ellint_K(kp, ctx)
        E, Ep = ellint_E(kv, ctx), ellint_E(kp, ctx)
        assert abs(E * Kp + Ep * K - K * Kp - agm_pi(ctx) / 2) < small(ctx, 5)


class TestPi:
    def test_prefix(self, ctx100):
        assert str(agm_pi(ctx100)).startswith("3.14159265358979")
        assert str(1 / agm_pi(ctx100)).startswith("0.31830988618379067")

    def test_against_mpmath_pi(self, ctx500):
        assert abs(agm_pi(ctx500) - ctx500.mp.pi) < small(ctx500, 2)

    @pytest.mark.slow
    def test_against_chudnovsky_1000(self):
        ctx = PrecisionContext(1000)
        chud = 1 / eval_to_precision(chudnovsky_params(ctx), ctx).value
        assert abs(agm_pi(ctx) - chud) < ctx.mpf(10) ** -998


class TestLambdaStar:
    def test_r1(self, ctx100):
        assert abs(lambda_star_numeric(1, ctx100) - 1 / sqrt(2, ctx100)) < small(ctx100, 3)

    def test_r4(self, ctx100):
        got = lambda_star_numeric(4, ctx100)
        assert abs(got - (3 - 2 * sqrt(2, ctx100))) < small(ctx100, 3)
        assert str(got).startswith("0.171572875")

    def test_r_below_one(self, ctx100):
        # lambda*(1/r) is the complementary modulus of lambda*(r)
        lam4 = lambda_star_numeric(4, ctx100)
        lam_q = lambda_star_numeric(ctx100.mpf(1) / 4, ctx100)
        assert abs(lam_q**2 + lam4**2 - 1) < small(ctx100, 4)

    @pytest.mark.parametrize("r", [1, 2, 3, 4, 3315, 13260])
    def test_solver_residual(self, ctx100, r):
        lam = lambda_star_numeric(r, ctx100)
        assert 0 < lam < 1
        assert modular_residual(lam, r, ctx100) < small(ctx100, 5)

    def test_large_r_asymptotic(self, ctx100):
        # k ~ 4 exp(-pi sqrt(r) / 2) for large r
        lam = lambda_star_numeric(13260, ctx100)
        approx = 4 * ctx100.mp.exp(-agm_pi(ctx100) * sqrt(13260, ctx100) / 2)
        assert abs(lam / approx - 1) < 1e-70

    def test_domain(self, ctx100):
        with pytest.raises(DomainError):
            lambda_star_numeric(0, ctx100)


class TestAlpha:
    def test_alpha_1(self, ctx100):
        assert abs(alpha_numeric(1, ctx100) - ctx100.mpf(1) / 2) < small(ctx100, 5)

    def test_alpha_1_from_legendre(self, ctx100):
        # at k = k' Legendre reads 2EK - K^2 = pi/2, which eliminates E
        ctx = ctx100
        K = ellint_K(1 / sqrt(2, ctx), ctx)
        pi = agm_pi(ctx)
        e_over_k = (pi / 2 + K * K) / (2 * K * K)
        oracle = pi / (4 * K * K) - (e_over_k - 1)
        assert abs(oracle - ctx.mpf(1) / 2) < small(ctx, 5)
        assert abs(alpha_numeric(1, ctx) - oracle) < small(ctx, 5)

    def test_alpha_4(self, ctx100):
        got = alpha_numeric(4, ctx100)
        assert abs(got - (6 - 4 * sqrt(2, ctx100))) < small(ctx100, 5)
        assert str(got).startswith("0.343145750")

    def test_alpha_tends_to_inverse_pi(self, ctx100):
        assert abs(alpha_numeric(13260, ctx100) - 1 / agm_pi(ctx100)) < 1e-150


class TestQuadrupling:
    def test_lambda_hand_value(self, ctx100):
        got = lambda_quadruple(1 / sqrt(2, ctx100))
        assert abs(got - (3 - 2 * sqrt(2, ctx100))) < small(ctx100, 2)

    def test_alpha_hand_value(self, ctx100):
        half = ctx100.mpf(1) / 2
        got = alpha_quadruple(half, 1 / sqrt(2, ctx100), 1)
        assert abs(got - (6 - 4 * sqrt(2, ctx100))) < small(ctx100, 2)

    def test_lambda_matches_literal_form(self, ctx100):
        for text in ("0.9", "0.5", "0.01"):
            lam = ctx100.mpf(text)
            comp = sqrt(1 - lam * lam, ctx100)
            assert abs(lambda_quadruple(lam) - (1 - comp) / (1 + comp)) < small(ctx100, 2)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=1e-300, max_value=1 - 1e-12, exclude_min=True))
    def test_lambda_contracts(self, lam):
        lam = _c60.mpf(lam)
        out = lambda_quadruple(lam)
        assert 0 < out < lam

    def test_domain(self, ctx100):
        for bad in ("0", "1", "-0.5"):
            with pytest.raises(DomainError):
                lambda_quadruple(ctx100.mpf(bad))
        with pytest.raises(DomainError):
            alpha_quadruple(ctx100.mpf(1), ctx100.mpf(2), 1)
        with pytest.raises(DomainError):
            alpha_quadruple(ctx100.mpf(1), ctx100.mpf("0.5"), -1)

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_coherence(self, ctx100, n):
        lam_4n = lambda_star_numeric(4 * n, ctx100)
        assert abs(lambda_quadruple(lambda_star_numeric(n, ctx100)) - lam_4n) < small(ctx100, 10)
        alpha_4n = alpha_quadruple(alpha_numeric(n, ctx100), lambda_star_numeric(n, ctx100), n)
        assert abs(alpha_4n - alpha_numeric(4 * n, ctx100)) < small(ctx100, 10)

    def test_coherence_3315(self, ctx100):
        got = lambda_quadruple(lambda_star_numeric(3315, ctx100))
        assert abs(got - lambda_star_numeric(13260, ctx100)) < small(ctx100, 10)


def test_elliptic_point(ctx100):
    p = elliptic_point(4, ctx100)
    assert p.r == 4 and 0 < p.lambda_star < 1 and p.alpha > 0
    with pytest.raises(DomainError):
        EllipticPoint(1, ctx100.mpf(1), ctx100.mpf(1))
