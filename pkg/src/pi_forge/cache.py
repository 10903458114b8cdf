"""JSON cache of derived constants, keyed by working precision."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from pi_forge import __version__
from pi_forge.constants import DerivedConstantSet, paper_constants_checksum
from pi_forge.mpcore import BigReal, PrecisionContext, significant_string
from pi_forge.series import SeriesParams

CONSTANT_NAMES = (
    "J3315",
    "x3315",
    "t3315",
    "lambda_star_3315",
    "alpha_3315",
    "lambda_star_13260",
    "alpha_13260",
    "z_13260",
    "a_13260",
    "b_13260",
)


class CacheMismatch(Exception):
    """Cache exists but cannot be reused at the requested precision."""


def constant_strings(
    constants: DerivedConstantSet, params: SeriesParams, ctx: PrecisionContext
) -> dict[str, str]:
    values: dict[str, BigReal] = {
        "J3315": constants.J3315,
        "x3315": constants.x3315,
        "t3315": constants.t3315,
        "lambda_star_3315": constants.lambda_star_3315,
        "alpha_3315": constants.alpha_3315,
        "lambda_star_13260": constants.lambda_star_13260,
        "alpha_13260": constants.alpha_13260,
        "z_13260": params.z,
        "a_13260": params.a,
        "b_13260": params.b,
    }
    return {name: significant_string(values[name], ctx.working_digits) for name in CONSTANT_NAMES}


def build_document(strings: dict[str, str], ctx: PrecisionContext) -> dict:
    return {
        "precision_digits": ctx.working_digits,
        "constants": dict(strings),
        "tool_version": __version__,
        "paper_constants_checksum": paper_constants_checksum(),
    }


def dumps(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def write_cache(path: str | os.PathLike, document: dict) -> None:
    """Write via a temporary file in the target directory, then rename over."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(dumps(document))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_cache(path: str | os.PathLike, ctx: PrecisionContext) -> dict[str, str]:
    """Return the constant strings if the file matches ``ctx``, else raise CacheMismatch."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CacheMismatch(f"unreadable cache: {exc}") from exc
    if doc.get("precision_digits") != ctx.working_digits:
        raise CacheMismatch(
            f"cache holds {doc.get('precision_digits')} digits, {ctx.working_digits} requested"
        )
    if doc.get("tool_version") != __version__:
        raise CacheMismatch(f"cache written by version {doc.get('tool_version')}")
    if doc.get("paper_constants_checksum") != paper_constants_checksum():
        raise CacheMismatch("constant checksum differs")
    constants = doc.get("constants", {})
    missing = [n for n in CONSTANT_NAMES if n not in constants]
    if missing:
        raise CacheMismatch(f"cache lacks {', '.join(missing)}")
    return {n: constants[n] for n in CONSTANT_NAMES}
