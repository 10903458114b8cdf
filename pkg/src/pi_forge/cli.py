"""pi-forge command line: compute, derive, verify, converge."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from contextlib import contextmanager

from pi_forge import cache
from pi_forge.analysis import measure_convergence, verify_constants
from pi_forge.constants import derive_constant_set
from pi_forge.elliptic import agm_pi
from pi_forge.mpcore import DomainError, PrecisionContext, decimal_places
from pi_forge.series import (
    ConvergenceError,
    SeriesParams,
    berndt_chan_3315_params,
    chudnovsky_params,
    digits_per_term,
    eval_to_precision,
    new_13260_params,
)

COMMANDS = ("compute", "derive", "verify", "converge")
SERIES = ("chudnovsky", "berndt-chan-3315", "new-13260", "agm")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class PipelineError(Exception):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage} failed: {cause}")
        self.stage = stage


@contextmanager
def stage(name: str):
    try:
        yield
    except PipelineError:
        raise
    except (DomainError, ConvergenceError, ArithmeticError, OSError, ValueError) as exc:
        raise PipelineError(name, exc) from exc


def _err(msg: str) -> None:
    print(f"pi-forge: {msg}", file=sys.stderr)


def load_constants(ctx: PrecisionContext, cache_path: str | None):
    """Constant set as parsed decimal strings, from the cache when it matches ``ctx``.

    Both paths go through the decimal-string form so warm and cold runs see
    identical inputs.
    """
    strings = None
    if cache_path and os.path.exists(cache_path):
        try:
            strings = cache.read_cache(cache_path, ctx)
        except (cache.CacheMismatch, OSError) as exc:
            _err(f"ignoring cache {cache_path}: {exc}; re-deriving")
    if strings is None:
        with stage("constant derivation"):
            derived = derive_constant_set(ctx)
            strings = cache.constant_strings(derived, new_13260_params(derived, ctx), ctx)
        if cache_path:
            with stage("cache"):
                cache.write_cache(cache_path, cache.build_document(strings, ctx))
    return strings, {k: ctx.mpf(v) for k, v in strings.items()}


def series_params(name: str, ctx: PrecisionContext, cache_path: str | None) -> SeriesParams:
    if name == "chudnovsky":
        return chudnovsky_params(ctx)
    _, values = load_constants(ctx, cache_path)
    with stage("constant derivation"):
        if name == "berndt-chan-3315":
            return berndt_chan_3315_params(values["J3315"], values["t3315"], ctx)
        return SeriesParams(6, values["z_13260"], values["a_13260"], values["b_13260"], "new-13260")


def wrap(text: str, width: int) -> str:
    if width <= 0:
        return text
    return "\n".join(text[i : i + width] for i in range(0, len(text), width))


def cmd_compute(args) -> int:
    ctx = PrecisionContext(args.digits)
    start = time.perf_counter()
    terms_used = None
    if args.series == "agm":
        with stage("series evaluation"):
            pi = agm_pi(ctx)
    else:
        params = series_params(args.series, ctx, args.cache)
        with stage("series evaluation"):
            ev = eval_to_precision(params, ctx)
            pi = 1 / ev.value
        terms_used = ev.terms_used
    digits = decimal_places(pi, args.digits)
    runtime_ms = int((time.perf_counter() - start) * 1000)
    verified = None
    if not args.no_verify:
        with stage("verification"):
            if args.series == "agm":
                reference = 1 / eval_to_precision(chudnovsky_params(ctx), ctx).value
            else:
                reference = agm_pi(ctx)
            verified = decimal_places(reference, args.digits) == digits
    if args.json:
        print(json.dumps({
            "digits": digits,
            "places": args.digits,
            "series": args.series,
            "terms_used": terms_used,
            "runtime_ms": runtime_ms,
            "verified": verified,
        }))
    else:
        print(wrap(digits, args.wrap))
    if verified is False:
        _err("verification failed: cross-check disagrees with the computed digits")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_derive(args) -> int:
    ctx = PrecisionContext(args.digits)
    if args.cache:
        # always re-derive so the file is rewritten even when present
        with stage("constant derivation"):
            derived = derive_constant_set(ctx)
            strings = cache.constant_strings(derived, new_13260_params(derived, ctx), ctx)
        document = cache.build_document(strings, ctx)
        with stage("cache"):
            cache.write_cache(args.cache, document)
        _err(f"wrote {len(strings)} constants at {ctx.working_digits} digits to {args.cache}")
    else:
        strings, _ = load_constants(ctx, None)
        document = cache.build_document(strings, ctx)
        print(cache.dumps(document), end="")
    if args.json and args.cache:
        print(cache.dumps(document), end="")
    return EXIT_OK


def cmd_verify(args) -> int:
    ctx = PrecisionContext(args.digits)
    with stage("constant derivation"):
        derived = derive_constant_set(ctx)
    with stage("verification"):
        report = verify_constants(derived, ctx)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.table())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_converge(args) -> int:
    if args.series == "agm":
        _err("converge needs a series; agm is an iteration")
        return EXIT_USAGE
    ctx = PrecisionContext(args.digits)
    params = series_params(args.series, ctx, args.cache)
    if args.terms:
        top = args.terms
    else:
        resolvable = math.floor((ctx.working_digits - 5) / float(digits_per_term(params.z, ctx)))
        top = max(1, min(5, resolvable))
    with stage("series evaluation"):
        report = measure_convergence(params, list(range(1, top + 1)), ctx)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.table())
        print(f"slope {report.slope():.4f}")
    return EXIT_OK


HANDLERS = {
    "compute": cmd_compute,
    "derive": cmd_derive,
    "verify": cmd_verify,
    "converge": cmd_converge,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pi-forge",
        description="Pi to arbitrary precision via a 153-digit-per-term Ramanujan-type series.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--series", choices=SERIES, default="new-13260")
    parser.add_argument("--digits", type=int, default=500, help="decimal places / target digits")
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")
    parser.add_argument("--wrap", type=int, default=0, metavar="W", help="wrap digit output at W columns")
    parser.add_argument("--cache", metavar="PATH", help="constant cache file")
    parser.add_argument("--no-verify", action="store_true", help="skip the cross-check on compute")
    parser.add_argument("--terms", type=int, default=0, metavar="N", help="converge: measure N = 1..N")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.digits < 1:
        parser.error("--digits must be positive")
    if args.wrap < 0:
        parser.error("--wrap must be nonnegative")
    if args.terms < 0:
        parser.error("--terms must be nonnegative")
    try:
        return HANDLERS[args.command](args)
    except PipelineError as exc:
        _err(str(exc))
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
