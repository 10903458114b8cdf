"""AGM-based elliptic integrals, singular-value solvers and the AGM pi.

These routines form the numeric oracle that the closed-form constant
pipeline is checked against, so they never call into :mod:`pi_forge.constants`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from pi_forge.mpcore import BigReal, DomainError, Number, PrecisionContext, sqrt

_MAX_AGM_STEPS = 200
# below this modulus the lambda solver bisects on log(k)
_LOG_SWITCH = "1e-3"


@dataclass(frozen=True)
class EllipticPoint:
    r: Number
    lambda_star: BigReal
    alpha: BigReal

    def __post_init__(self) -> None:
        if not 0 < self.lambda_star < 1:
            raise DomainError("lambda_star must lie in (0, 1)")


def _agm_steps(a: BigReal, b: BigReal, ctx: PrecisionContext):
    """Yield (a_n, b_n, c_n) with c_0 = 0 placeholder handled by callers."""
    eps = ctx.eps
    mp = ctx.mp
    for _ in range(_MAX_AGM_STEPS):
        if abs(a - b) <= eps * a:
            return
        a, b, c = (a + b) / 2, mp.sqrt(a * b), (a - b) / 2
        yield a, b, c
    raise ArithmeticError("AGM failed to converge")


def agm(a: Number, b: Number, ctx: PrecisionContext) -> BigReal:
    a, b = ctx.mpf(a), ctx.mpf(b)
    if a <= 0 or b <= 0:
        raise DomainError("agm requires positive arguments")
    for a, b, _ in _agm_steps(a, b, ctx):
        pass
    return (a + b) / 2


@lru_cache(maxsize=32)
def agm_pi(ctx: PrecisionContext) -> BigReal:
    """Pi by the Gauss-Salamin-Brent iteration.

    pi = 4 M(1, 1/sqrt2)^2 / (1 - sum_{n>=1} 2^(n+1) c_n^2).
    """
    mp = ctx.mp
    one = mp.mpf(1)
    a, b = one, one / mp.sqrt(2)
    acc = one
    weight = mp.mpf(4)  # 2^(n+1) at n = 1
    for a, b, c in _agm_steps(a, b, ctx):
        acc -= weight * c * c
        weight *= 2
    return (a + b) ** 2 / acc


def _check_modulus(k: BigReal, *, closed: bool) -> None:
    if k < 0 or k > 1 or (k == 1 and not closed):
        raise DomainError(f"modulus out of range: {k}")


def ellint_K(k: Number, ctx: PrecisionContext) -> BigReal:
    k = ctx.mpf(k)
    _check_modulus(k, closed=False)
    return agm_pi(ctx) / (2 * agm(1, sqrt(1 - k * k, ctx), ctx))


def ellint_E(k: Number, ctx: PrecisionContext) -> BigReal:
    """E(k) = K(k) (1 - sum_{n>=0} 2^(n-1) c_n^2), c_0 = k."""
    k = ctx.mpf(k)
    _check_modulus(k, closed=True)
    if k == 1:
        return ctx.mpf(1)
    mp = ctx.mp
    kp = sqrt(1 - k * k, ctx)
    defect = k * k / 2
    weight = mp.mpf(1)  # 2^(n-1) at n = 1
    a, b = mp.mpf(1), kp
    for a, b, c in _agm_steps(a, b, ctx):
        defect += weight * c * c
        weight *= 2
    K = agm_pi(ctx) / (a + b)
    return K * (1 - defect)


def _modular_ratio(k: BigReal, ctx: PrecisionContext) -> BigReal:
    """K(k')/K(k); the pi factors cancel."""
    return agm(1, sqrt(1 - k * k, ctx), ctx) / agm(1, k, ctx)


@lru_cache(maxsize=64)
def _lambda_star_cached(r: Number, ctx: PrecisionContext) -> BigReal:
    mp = ctx.mp
    target = sqrt(r, ctx)
    eps = ctx.eps
    switch = mp.mpf(_LOG_SWITCH)
    # K'/K decreases in k: ratio > sqrt(r) means the root lies to the right
    if _modular_ratio(switch, ctx) > target:
        lo, hi = switch, 1 - eps
        while hi - lo > eps * lo:
            mid = (lo + hi) / 2
            if _modular_ratio(mid, ctx) > target:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2
    lo, hi = mp.log(eps), mp.log(switch)
    # a relative step of eps in k is an absolute step of eps in log k
    while hi - lo > eps:
        mid = (lo + hi) / 2
        if _modular_ratio(mp.exp(mid), ctx) > target:
            lo = mid
        else:
            hi = mid
    return mp.exp((lo + hi) / 2)


def lambda_star_numeric(r: Number, ctx: PrecisionContext) -> BigReal:
    """Solve K(k')/K(k) = sqrt(r) for k in (0, 1) by bisection."""
    if ctx.mpf(r) <= 0:
        raise DomainError(f"lambda_star requires r > 0, got {r}")
    return _lambda_star_cached(r, ctx)


def modular_residual(k: BigReal, r: Number, ctx: PrecisionContext) -> BigReal:
    """|K(k')/K(k) - sqrt(r)|."""
    return abs(_modular_ratio(ctx.mpf(k), ctx) - sqrt(r, ctx))


def alpha_from_lambda(k: BigReal, r: Number, ctx: PrecisionContext) -> BigReal:
    K = ellint_K(k, ctx)
    E = ellint_E(k, ctx)
    return agm_pi(ctx) / (4 * K * K) - sqrt(r, ctx) * (E / K - 1)


def alpha_numeric(r: Number, ctx: PrecisionContext) -> BigReal:
    return alpha_from_lambda(lambda_star_numeric(r, ctx), r, ctx)


def elliptic_point(r: Number, ctx: PrecisionContext) -> EllipticPoint:
    lam = lambda_star_numeric(r, ctx)
    return EllipticPoint(r, lam, alpha_from_lambda(lam, r, ctx))


def _check_open_unit(lam: BigReal) -> None:
    if not 0 < lam < 1:
        raise DomainError(f"lambda must lie in (0, 1), got {lam}")


def lambda_quadruple(lam: BigReal) -> BigReal:
    """lambda*(4N) from lambda*(N).

    Evaluated as lam^2 / (1 + lam')^2, equal to (1 - lam')/(1 + lam') but free
    of the cancellation in 1 - lam' when lam is tiny.
    """
    _check_open_unit(lam)
    mp = lam.context
    comp = mp.sqrt(1 - lam * lam)
    return (lam / (1 + comp)) ** 2


def alpha_quadruple(alpha_n: BigReal, lam_n: BigReal, n: Number) -> BigReal:
    """alpha(4N) from alpha(N) and lambda*(N)."""
    _check_open_unit(lam_n)
    mp = lam_n.context
    n = mp.mpf(n)
    if n <= 0:
        raise DomainError("N must be positive")
    comp = mp.sqrt(1 - lam_n * lam_n)
    return (4 * alpha_n - 2 * mp.sqrt(n) * lam_n * lam_n) / (1 + comp) ** 2
