"""Precision management and the real-number primitives used everywhere else.

Every :class:`PrecisionContext` owns a private mpmath context, so values
created under one context never depend on global mutable precision state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Union

import mpmath
from mpmath.ctx_mp_python import mpf as _mpf_base

BigReal = _mpf_base
Number = Union[BigReal, int, Fraction, str]

LOG2_10 = math.log2(10)


class DomainError(ValueError):
    """An argument outside the mathematical domain of an operation."""


def default_guard_digits(target_digits: int) -> int:
    return max(50, math.ceil(0.05 * target_digits))


@dataclass(frozen=True)
class PrecisionContext:
    """Target digits plus a guard band; all intermediates use ``working_digits``."""

    target_digits: int
    guard_digits: int = field(default=-1)

    def __post_init__(self) -> None:
        if self.target_digits < 1:
            raise DomainError(f"target_digits must be positive, got {self.target_digits}")
        if self.guard_digits == -1:
            object.__setattr__(self, "guard_digits", default_guard_digits(self.target_digits))
        if self.guard_digits < 50:
            raise DomainError(f"guard_digits must be at least 50, got {self.guard_digits}")

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    @property
    def bits(self) -> int:
        return math.ceil(self.working_digits * LOG2_10) + 16

    @cached_property
    def mp(self) -> mpmath.ctx_mp.MPContext:
        ctx = mpmath.MPContext()
        ctx.prec = self.bits
        return ctx

    @property
    def eps(self) -> BigReal:
        """10^(-working_digits) as a value of this context."""
        return self.mp.mpf(10) ** (-self.working_digits)

    def with_extra(self, digits: int) -> "PrecisionContext":
        """Same target, ``digits`` more guard."""
        return PrecisionContext(self.target_digits, self.guard_digits + digits)

    def mpf(self, x: Number) -> BigReal:
        """Convert ``x`` into this context, rounding to working precision."""
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        if isinstance(x, _mpf_base):
            return self.mp.mpf(x)
        return self.mp.mpf(x)


def sqrt(x: Number, ctx: PrecisionContext) -> BigReal:
    x = ctx.mpf(x)
    if x < 0:
        raise DomainError(f"sqrt of negative value {mpmath.nstr(x, 10)}")
    return ctx.mp.sqrt(x)


def nth_root(x: Number, n: int, ctx: PrecisionContext) -> BigReal:
    """Principal real n-th root of a nonnegative value."""
    if n < 1:
        raise DomainError(f"root index must be >= 1, got {n}")
    x = ctx.mpf(x)
    if x < 0:
        raise DomainError(f"nth_root of negative value {mpmath.nstr(x, 10)}")
    if n == 1 or x == 0:
        return x
    return ctx.mp.root(x, n)


def log10_abs(x: Number, ctx: PrecisionContext | None = None) -> BigReal:
    """log10|x|, evaluated in ``ctx`` or in the context ``x`` already lives in."""
    if ctx is not None:
        x = ctx.mpf(x)
        mp = ctx.mp
    elif isinstance(x, _mpf_base):
        mp = x.context
    else:
        mp = mpmath.mp
        x = mp.mpf(x) if not isinstance(x, Fraction) else mp.mpf(x.numerator) / x.denominator
    if x == 0:
        raise DomainError("log10_abs of zero")
    return mp.log10(abs(x))


def equal_at(a: BigReal, b: BigReal, p: int) -> bool:
    """True iff |a - b| < 10^(-p)."""
    mp = a.context if isinstance(a, _mpf_base) else mpmath.mp
    return bool(abs(a - b) < mp.mpf(10) ** (-p))


def decimal_places(x: BigReal, places: int, *, rounding: str = "truncate") -> str:
    """Fixed-point string of ``x`` with exactly ``places`` digits after the point.

    ``rounding`` is ``"truncate"`` (toward zero) or ``"nearest"``.
    """
    if rounding not in ("truncate", "nearest"):
        raise ValueError(f"unknown rounding mode {rounding!r}")
    mp = x.context
    sign = "-" if x < 0 else ""
    scaled = abs(x) * mp.mpf(10) ** places
    n = int(mp.floor(scaled)) if rounding == "truncate" else int(mp.nint(scaled))
    digits = str(n).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def significant_string(x: BigReal, sig: int) -> str:
    """Plain decimal string with ``sig`` significant digits: no exponent, no grouping."""
    if sig < 1:
        raise ValueError("sig must be positive")
    mp = x.context
    if x == 0:
        return "0." + "0" * (sig - 1) if sig > 1 else "0"
    sign = "-" if x < 0 else ""
    ax = abs(x)
    exp10 = int(mp.floor(mp.log10(ax)))
    m = int(mp.nint(ax * mp.mpf(10) ** (sig - 1 - exp10)))
    if m >= 10**sig:
        m //= 10
        exp10 += 1
    elif m < 10 ** (sig - 1):
        m = m * 10
        exp10 -= 1
    digits = str(m)
    point = exp10 + 1  # digits before the radix point
    if point <= 0:
        body = "0." + "0" * (-point) + digits
    elif point >= sig:
        body = digits + "0" * (point - sig)
    else:
        body = digits[:point] + "." + digits[point:]
    return sign + body
