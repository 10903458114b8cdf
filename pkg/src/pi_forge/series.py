"""Ramanujan-type series for 1/pi of level 1 shape.

    1/pi = sum_n (1/2)_n (1/s)_n (1-1/s)_n / (1)_n^3 * z^n * (a + b n)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from pi_forge.elliptic import EllipticPoint
from pi_forge.mpcore import BigReal, DomainError, PrecisionContext, log10_abs, sqrt

ALLOWED_S = (2, 3, 4, 6)

CHUDNOVSKY_Z = Fraction(-1, 53360**3)
CHUDNOVSKY_A_NUM = Fraction(13591409, 6)
CHUDNOVSKY_B_NUM = 90856689
CHUDNOVSKY_SCALE = 711822400
CHUDNOVSKY_RADICAND = 10005


class ConvergenceError(ArithmeticError):
    """Raised when series terms stop shrinking."""


@dataclass(frozen=True)
class SeriesParams:
    s: int
    z: BigReal
    a: BigReal
    b: BigReal
    label: str

    def __post_init__(self) -> None:
        if self.s not in ALLOWED_S:
            raise DomainError(f"s must be one of {ALLOWED_S}, got {self.s}")
        if not abs(self.z) < 1:
            raise DomainError(f"{self.label}: |z| = {float(abs(self.z)):.4g} >= 1, series diverges")


@dataclass(frozen=True)
class SeriesEvaluation:
    value: BigReal
    terms_used: int
    last_term_magnitude: BigReal


def term_ratio(n: int, s: int) -> Fraction:
    """T_{n+1}/T_n for the Pochhammer quotient T_n."""
    if s not in ALLOWED_S:
        raise DomainError(f"s must be one of {ALLOWED_S}, got {s}")
    inv = Fraction(1, s)
    return (n + Fraction(1, 2)) * (n + inv) * (n + 1 - inv) / Fraction(n + 1) ** 3


def _terms(p: SeriesParams, ctx: PrecisionContext):
    """Yield (T_n z^n, summand) pairs."""
    z, a, b = ctx.mpf(p.z), ctx.mpf(p.a), ctx.mpf(p.b)
    weight = ctx.mpf(1)  # T_n z^n
    n = 0
    while True:
        yield weight, weight * (a + b * n)
        r = term_ratio(n, p.s)
        weight = weight * z * r.numerator / r.denominator
        n += 1


def partial_sum(p: SeriesParams, n_terms: int, ctx: PrecisionContext) -> SeriesEvaluation:
    if n_terms < 0:
        raise DomainError("number of terms must be nonnegative")
    total = ctx.mpf(0)
    last = ctx.mpf(0)
    for _, (_, term) in zip(range(n_terms), _terms(p, ctx)):
        total += term
        last = abs(term)
    return SeriesEvaluation(total, n_terms, last)


def eval_to_precision(p: SeriesParams, ctx: PrecisionContext) -> SeriesEvaluation:
    """Sum until the remaining tail is provably below 10^-working.

    The stopping test bounds |T_n z^n| (|a + b n| + |b|) rather than the summand
    itself, so a vanishing summand (a = 0 at n = 0) cannot end the sum early.
    """
    eps = ctx.eps
    abs_b = abs(ctx.mpf(p.b))
    az = abs(ctx.mpf(p.z))
    # with |z| >= 1 there is no tail bound; only the stall guard can stop the loop
    tail_factor = 2 / (1 - az) if az < 1 else None
    total = ctx.mpf(0)
    last = None
    stalls = 0
    used = 0
    for weight, term in _terms(p, ctx):
        mag = abs(term)
        if tail_factor is not None and (mag + abs(weight) * abs_b) * tail_factor < eps:
            break
        if last is not None and mag >= last:
            stalls += 1
            if stalls >= 3:
                raise ConvergenceError(f"{p.label}: terms stopped decreasing after {used} terms")
        else:
            stalls = 0
        total += term
        last = mag
        used += 1
    return SeriesEvaluation(total, used, last if last is not None else ctx.mpf(0))


def digits_per_term(z: BigReal, ctx: PrecisionContext | None = None) -> BigReal:
    """log10(1/|z|)."""
    az = abs(z)
    if not 0 < az < 1:
        raise DomainError("digits_per_term needs 0 < |z| < 1")
    return -log10_abs(z, ctx)


def chudnovsky_params(ctx: PrecisionContext) -> SeriesParams:
    scale = sqrt(CHUDNOVSKY_RADICAND, ctx) / CHUDNOVSKY_SCALE
    return SeriesParams(
        s=6,
        z=ctx.mpf(CHUDNOVSKY_Z),
        a=ctx.mpf(CHUDNOVSKY_A_NUM) * scale,
        b=CHUDNOVSKY_B_NUM * scale,
        label="chudnovsky",
    )


def berndt_chan_3315_params(J: BigReal, t: BigReal, ctx: PrecisionContext) -> SeriesParams:
    J, t = ctx.mpf(J), ctx.mpf(t)
    if J >= 0:
        raise DomainError("J_3315 must be negative")
    b = sqrt(3315, ctx) * sqrt(1 - J, ctx)
    return SeriesParams(s=6, z=J, a=(1 - t) / 6 * b, b=b, label="berndt-chan-3315")


def series_params_for_r(point: EllipticPoint, ctx: PrecisionContext, label: str | None = None) -> SeriesParams:
    """Level-1 series coefficients from a singular value lambda*(r) and alpha(r), r > 1."""
    r = ctx.mpf(point.r)
    if r <= 1:
        raise DomainError("series_params_for_r requires r > 1")
    lam = ctx.mpf(point.lambda_star)
    alpha = ctx.mpf(point.alpha)
    if not 0 < lam < 1:
        raise DomainError("lambda_star must lie in (0, 1)")
    lam2 = lam * lam
    x = 4 * (lam2 - lam2 * lam2)
    if x >= ctx.mpf(1) / 4:
        raise DomainError("x(r) >= 1/4: coefficient prefactor degenerates")
    one_4x = 1 - 4 * x
    root_r = sqrt(r, ctx)
    root_1x = sqrt(1 - x, ctx)
    denom = one_4x * sqrt(one_4x, ctx)
    z = -27 * x / one_4x**3
    b = (8 * x + 1) * root_1x * root_r / denom
    a = (2 * one_4x * alpha + (4 * x - 1 + root_1x) * root_r) / (2 * denom)
    if label is None:
        label = f"level1-r{point.r}"
    return SeriesParams(s=6, z=z, a=a, b=b, label=label)


def new_13260_params(constants, ctx: PrecisionContext) -> SeriesParams:
    """The r = 13260 series from a DerivedConstantSet."""
    point = EllipticPoint(13260, constants.lambda_star_13260, constants.alpha_13260)
    return series_params_for_r(point, ctx, label="new-13260")


def pi_from_series(p: SeriesParams, ctx: PrecisionContext) -> tuple[BigReal, SeriesEvaluation]:
    ev = eval_to_precision(p, ctx)
    return 1 / ev.value, ev


def predicted_terms(p: SeriesParams, ctx: PrecisionContext) -> int:
    return math.ceil(ctx.working_digits / float(digits_per_term(p.z, ctx)))
