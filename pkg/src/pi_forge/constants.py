"""Exact constants behind the r = 13260 series and the pipeline deriving it.

Pipeline: lambda_1105 -> J_3315 -> x_3315 -> lambda*(3315), alpha(3315)
-> (quadrupling) -> lambda*(13260), alpha(13260).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping

from pi_forge.elliptic import alpha_quadruple, lambda_quadruple
from pi_forge.mpcore import BigReal, DomainError, PrecisionContext, log10_abs, nth_root, sqrt

PRIMES = (5, 13, 17)
Basis = tuple[int, int, int]  # exponents (0/1) of sqrt5, sqrt13, sqrt17


class RadicalCombination:
    """Exact element of Q(sqrt5, sqrt13, sqrt17) over the 8 square-root products."""

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients: Mapping[Basis, Fraction | int] | None = None):
        coeffs: dict[Basis, Fraction] = {}
        for key, value in (coefficients or {}).items():
            key = tuple(key)
            if len(key) != 3 or any(e not in (0, 1) for e in key):
                raise ValueError(f"bad basis element {key!r}")
            value = Fraction(value)
            if value:
                coeffs[key] = coeffs.get(key, Fraction(0)) + value
        self._coeffs = {k: v for k, v in coeffs.items() if v}

    @classmethod
    def rational(cls, q: Fraction | int) -> "RadicalCombination":
        return cls({(0, 0, 0): q})

    @classmethod
    def sqrt_of(cls, n: int) -> "RadicalCombination":
        """sqrt(n) for n a product of distinct primes from {5, 13, 17}."""
        key = []
        for p in PRIMES:
            if n % p == 0:
                n //= p
                key.append(1)
            else:
                key.append(0)
        if n != 1:
            raise ValueError("radicand must be a squarefree product of 5, 13, 17")
        return cls({tuple(key): 1})

    def coefficient(self, key: Basis) -> Fraction:
        return self._coeffs.get(tuple(key), Fraction(0))

    @property
    def coefficients(self) -> dict[Basis, Fraction]:
        return dict(self._coeffs)

    @staticmethod
    def _coerce(other) -> "RadicalCombination":
        if isinstance(other, RadicalCombination):
            return other
        if isinstance(other, (int, Fraction)):
            return RadicalCombination.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return RadicalCombination(out)

    __radd__ = __add__

    def __neg__(self):
        return RadicalCombination({k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Basis, Fraction] = {}
        for (k1, v1), (k2, v2) in product(self._coeffs.items(), other._coeffs.items()):
            scale = 1
            for p, e1, e2 in zip(PRIMES, k1, k2):
                if e1 and e2:
                    scale *= p
            key = tuple((e1 + e2) % 2 for e1, e2 in zip(k1, k2))
            out[key] = out.get(key, Fraction(0)) + v1 * v2 * scale
        return RadicalCombination(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self):
        terms = " + ".join(
            f"({v})" + "".join(f"*sqrt({p})" for p, e in zip(PRIMES, k) if e)
            for k, v in sorted(self._coeffs.items())
        )
        return f"RadicalCombination({terms or '0'})"

    def evaluate(self, ctx: PrecisionContext) -> BigReal:
        total = ctx.mpf(0)
        for key, value in self._coeffs.items():
            radicand = math.prod(p for p, e in zip(PRIMES, key) if e)
            term = ctx.mpf(value)
            if radicand > 1:
                term *= sqrt(radicand, ctx)
            total += term
        return total


# (constant, sqrt5*sqrt17, sqrt17, sqrt5, sqrt13, sqrt5*sqrt13*sqrt17, sqrt13*sqrt17, sqrt5*sqrt13)
T_3315_TERMS: tuple[tuple[Basis, int, int], ...] = (
    ((0, 0, 0), 1095255033002752301233099478037584, 2050242335692983321671746996556833),
    ((1, 0, 1), 1006588064225996719872149534306400, 34854119706780716468419698941466161),
    ((0, 0, 1), 692779168175128551453280427070000, 34854119706780716468419698941466161),
    ((1, 0, 0), -136434536163779492503565618457696, 2050242335692983321671746996556833),
    ((0, 1, 0), 400179322879781860521299209248000, 26653150364008783181732710955238829),
    ((1, 1, 1), 1077564413015882021519209726762688, 453103556188149314089456086239060093),
    ((0, 1, 1), 120226784218523863048087030809600, 64729079455449902012779440891294299),
    ((1, 1, 0), 239369594240980944219359445009600, 26653150364008783181732710955238829),
)

# lambda_1105 = prod (rational + sqrt(radicand))^power / divisor
LAMBDA_1105_FACTORS: tuple[tuple[int, int, int], ...] = (
    (1, 5, 12),
    (4, 17, 3),
    (8, 65, 3),
    (15, 221, 3),
)
LAMBDA_1105_DIVISOR = 32768


def t_3315() -> RadicalCombination:
    return RadicalCombination({key: Fraction(n, d) for key, n, d in T_3315_TERMS})


def paper_constants_checksum() -> str:
    """SHA-256 over a canonical rendering of every transcribed literal."""
    lines = [f"t3315 {''.join(map(str, k))} {n}/{d}" for k, n, d in T_3315_TERMS]
    lines += [f"lambda1105 {c}+sqrt({r})^{e}" for c, r, e in LAMBDA_1105_FACTORS]
    lines.append(f"lambda1105 /{LAMBDA_1105_DIVISOR}")
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()


def lambda_1105(ctx: PrecisionContext) -> BigReal:
    value = ctx.mpf(1)
    for c, radicand, power in LAMBDA_1105_FACTORS:
        value *= (c + sqrt(radicand, ctx)) ** power
    return value / LAMBDA_1105_DIVISOR


def lambda_1105_halved(ctx: PrecisionContext) -> BigReal:
    """((1+sqrt5)/2)^12 (4+sqrt17)^3 ((15+sqrt221)/2)^3 (8+sqrt65)^3."""
    s = lambda n: sqrt(n, ctx)  # noqa: E731
    return ((1 + s(5)) / 2) ** 12 * (4 + s(17)) ** 3 * ((15 + s(221)) / 2) ** 3 * (8 + s(65)) ** 3


def j_3315(lambda1105: BigReal, ctx: PrecisionContext) -> BigReal:
    lam = ctx.mpf(lambda1105)
    if lam <= 1:
        raise DomainError("lambda_1105 must exceed 1")
    lam2 = lam * lam
    return -64 * lam2 / ((lam2 - 1) * (9 * lam2 - 1) ** 3)


def _x_extra_digits(J: BigReal) -> int:
    # the two cube-root terms are ~|J|^(-1/2) and cancel down to x ~ |J|
    return math.ceil(1.5 * float(-log10_abs(J))) + 10


def x_3315(J: BigReal, ctx: PrecisionContext) -> BigReal:
    """Invert J = -27x/(1-4x)^3 for the root in (0, 1/4).

    The two cube-root terms cancel catastrophically, so the formula runs with
    enough extra digits to return x at full relative working precision.
    """
    if ctx.mpf(J) >= 0:
        raise DomainError("J must be negative")
    hi = ctx.with_extra(_x_extra_digits(ctx.mpf(J)))
    J = hi.mpf(J)
    q = sqrt((J - 1) / J, hi)
    first = nth_root(-1 / J, 3, hi) ** 2 / nth_root(q - 1, 3, hi)
    second = nth_root((1 - q) / J, 3, hi)
    x = hi.mpf(1) / 4 - hi.mpf(3) / 8 * first + hi.mpf(3) / 8 * second
    x = ctx.mpf(x)
    if not 0 < x < ctx.mpf(1) / 4:
        raise DomainError("x_3315 outside (0, 1/4)")
    return x


def j_from_x(x: BigReal) -> BigReal:
    return -27 * x / (1 - 4 * x) ** 3


def lambda_star_3315_closed(x: BigReal, ctx: PrecisionContext) -> BigReal:
    """sqrt(1 - sqrt(1 - x)) / sqrt2, via 1 - sqrt(1-x) = x / (1 + sqrt(1-x))."""
    x = ctx.mpf(x)
    if not 0 <= x <= 1:
        raise DomainError("x must lie in [0, 1]")
    inner = x / (1 + sqrt(1 - x, ctx))
    return sqrt(inner / 2, ctx)


def alpha_3315_closed(
    x: BigReal, J: BigReal, t: RadicalCombination | BigReal, ctx: PrecisionContext
) -> BigReal:
    x, J = ctx.mpf(x), ctx.mpf(J)
    if not 0 < x < ctx.mpf(1) / 4:
        raise DomainError("x must lie in (0, 1/4)")
    if J >= 0:
        raise DomainError("J must be negative")
    t = t.evaluate(ctx) if isinstance(t, RadicalCombination) else ctx.mpf(t)
    one_4x = 1 - 4 * x
    half = ctx.mpf(1) / 2
    lead = half * sqrt(ctx.mpf(1105) / 3, ctx) * sqrt(1 - J, ctx) * (1 - t) * 2 * one_4x ** ctx.mpf(1.5)
    tail = (4 * x - 1 + sqrt(1 - x, ctx)) * sqrt(3315, ctx)
    return (lead - tail) / (2 * one_4x)


@dataclass(frozen=True)
class DerivedConstantSet:
    J3315: BigReal
    x3315: BigReal
    lambda_star_3315: BigReal
    alpha_3315: BigReal
    lambda_star_13260: BigReal
    alpha_13260: BigReal
    t3315: BigReal
    precision: int

    def check_invariants(self) -> None:
        if not self.J3315 < 0:
            raise DomainError("J3315 must be negative")
        if not 0 < self.x3315 < 0.25:
            raise DomainError("x3315 must lie in (0, 1/4)")
        if not 0 < self.lambda_star_13260 < self.lambda_star_3315 < 1:
            raise DomainError("expected 0 < lambda*(13260) < lambda*(3315) < 1")


def derive_constant_set(
    ctx: PrecisionContext, t: RadicalCombination | None = None
) -> DerivedConstantSet:
    t = t_3315() if t is None else t
    J = j_3315(lambda_1105(ctx), ctx)
    x = x_3315(J, ctx)
    lam = lambda_star_3315_closed(x, ctx)
    alpha = alpha_3315_closed(x, J, t, ctx)
    out = DerivedConstantSet(
        J3315=J,
        x3315=x,
        lambda_star_3315=lam,
        alpha_3315=alpha,
        lambda_star_13260=lambda_quadruple(lam),
        alpha_13260=alpha_quadruple(alpha, lam, 3315),
        t3315=t.evaluate(ctx),
        precision=ctx.working_digits,
    )
    out.check_invariants()
    return out
