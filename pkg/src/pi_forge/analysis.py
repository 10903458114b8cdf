"""Residual checks of the closed forms and convergence measurements."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

from pi_forge.constants import DerivedConstantSet, j_from_x
from pi_forge.elliptic import agm_pi, elliptic_point, modular_residual
from pi_forge.mpcore import BigReal, PrecisionContext, log10_abs
from pi_forge.series import SeriesParams, digits_per_term, eval_to_precision, partial_sum


@dataclass(frozen=True)
class Check:
    name: str
    residual_log10: float
    tolerance_log10: float

    @property
    def passed(self) -> bool:
        return self.residual_log10 < self.tolerance_log10


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "residual_log10": c.residual_log10,
                    "tolerance_log10": c.tolerance_log10,
                    "pass": c.passed,
                }
                for c in self.checks
            ],
        }

    def table(self) -> str:
        width = max((len(c.name) for c in self.checks), default=10)
        rows = [f"{'check':<{width}}  {'log10 residual':>14}  {'tolerance':>9}  result"]
        for c in self.checks:
            rows.append(
                f"{c.name:<{width}}  {c.residual_log10:>14.2f}  {c.tolerance_log10:>9.1f}  "
                f"{'PASS' if c.passed else 'FAIL'}"
            )
        return "\n".join(rows)


def residual_log10(value: BigReal, ctx: PrecisionContext) -> float:
    """log10|value|, floored at -working_digits."""
    floor = -float(ctx.working_digits)
    if value == 0:
        return floor
    return max(float(log10_abs(value, ctx)), floor)


def verify_constants(constants: DerivedConstantSet, ctx: PrecisionContext) -> VerificationReport:
    """Every closed-form constant against the AGM/bisection oracles."""
    tol = -float(ctx.target_digits - 10)
    checks: list[Check] = []

    def add(name: str, value: BigReal) -> None:
        checks.append(Check(name, residual_log10(value, ctx), tol))

    add("J3315 round trip from x3315", j_from_x(constants.x3315) - constants.J3315)
    for r, lam, alpha in (
        (3315, constants.lambda_star_3315, constants.alpha_3315),
        (13260, constants.lambda_star_13260, constants.alpha_13260),
    ):
        oracle = elliptic_point(r, ctx)
        add(f"lambda*({r}) relative to numeric solver", lam / oracle.lambda_star - 1)
        add(f"alpha({r}) vs numeric alpha", alpha - oracle.alpha)
        add(f"modular ratio K'/K at lambda*({r})", modular_residual(lam, r, ctx))
    return VerificationReport(checks)


@dataclass
class ConvergenceReport:
    series_label: str
    predicted_digits_per_term: float
    measured_error_after: list[tuple[int, float]]
    terms_for_target: int
    precision: int
    runtime_ms: int

    def slope(self) -> float:
        """Least-squares slope of error_log10 against N."""
        pts = self.measured_error_after
        if len(pts) < 2:
            return float("nan")
        n = len(pts)
        mx = sum(p[0] for p in pts) / n
        my = sum(p[1] for p in pts) / n
        sxx = sum((p[0] - mx) ** 2 for p in pts)
        sxy = sum((p[0] - mx) * (p[1] - my) for p in pts)
        return sxy / sxx

    def to_dict(self) -> dict:
        out = asdict(self)
        out["measured_error_after"] = [
            {"terms": n, "error_log10": e} for n, e in self.measured_error_after
        ]
        return out

    def table(self) -> str:
        rows = [
            f"series {self.series_label}: predicted {self.predicted_digits_per_term:.4f} digits/term, "
            f"{self.terms_for_target} terms for {self.precision} digits",
            f"{'N':>4}  {'log10 |S_N - 1/pi|':>20}",
        ]
        rows += [f"{n:>4}  {e:>20.4f}" for n, e in self.measured_error_after]
        return "\n".join(rows)


def measure_convergence(p: SeriesParams, ns: list[int], ctx: PrecisionContext) -> ConvergenceReport:
    if not ns or list(ns) != sorted(ns):
        raise ValueError("term counts must be nonempty and ascending")
    start = time.perf_counter()
    ref = ctx.with_extra(20)
    inv_pi = 1 / agm_pi(ref)
    errors = [
        (n, residual_log10(ref.mpf(partial_sum(p, n, ctx).value) - inv_pi, ctx)) for n in ns
    ]
    used = eval_to_precision(p, ctx).terms_used
    return ConvergenceReport(
        series_label=p.label,
        predicted_digits_per_term=float(digits_per_term(p.z, ctx)),
        measured_error_after=errors,
        terms_for_target=used,
        precision=ctx.working_digits,
        runtime_ms=int((time.perf_counter() - start) * 1000),
    )
