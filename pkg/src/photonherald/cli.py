"""Command-line front-end: run circuits, sweep parameters, self-verify.

Three subcommands:

* ``run`` — execute one scheme and emit a JSON run manifest (command echo,
  canonical config, config hash, result payload).
* ``sweep`` — evaluate a grid of main-scheme configurations from a JSON spec
  file and emit an RFC-4180 CSV table (or gnuplot-style columns).
* ``verify`` — run the built-in check suites and exit nonzero on failure.

Exit codes: 0 success, 2 usage/parse errors (bad flags, malformed specs),
3 physics errors (cutoff overflow, photon numbers outside the model).

Angles are accepted as ``30deg``, ``0.5236rad``, or bare radians.  Absorber
specifications use the wire format ``generic:alpha=1,beta=0`` or
``jf:M=2,condition=(1,1)`` (``fwm:`` is accepted as an alias for ``jf:``; M
may be a fraction like ``3/2``).  The default per-mode photon cutoff is 4,
overridable per invocation with ``--cutoff`` or globally with the
``FOCK_CUTOFF`` environment variable.
"""

from __future__ import annotations

import datetime
import hashlib
import json
import math
import sys
from collections.abc import Mapping
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .analysis import SWEEP_COLUMNS, SweepSpec, sweep_rows
from .fock import DEFAULT_CUTOFF, FockError
from .schemes import (
    DOUBLED,
    FILTER_SPLIT,
    MAIN,
    PAIR_HERALD,
    SchemeConfig,
    SchemeResult,
    SourceSpec,
    run_scheme,
)
from .elements import BeamSplitterParams
from .tpam import FwmParams, FwmTpamSpec, GenericTpam
from .verify import DEFAULT_SEED, invariant_checks, paper_value_checks

SCHEMA_VERSION = 1

#: CLI scheme tokens -> internal variant names.  The appendix-style aliases
#: are kept for script compatibility.
SCHEME_TOKENS = {
    "main": MAIN,
    "doubled": DOUBLED,
    "pair-herald": PAIR_HERALD,
    "appendix-a": PAIR_HERALD,
    "filter-split": FILTER_SPLIT,
    "appendix-b": FILTER_SPLIT,
}

_CANONICAL_TOKEN = {
    MAIN: "main",
    DOUBLED: "doubled",
    PAIR_HERALD: "pair-herald",
    FILTER_SPLIT: "filter-split",
}

_DEFAULT_TPAM = {
    MAIN: "generic:alpha=1,beta=0",
    DOUBLED: "generic:alpha=1,beta=0",
    PAIR_HERALD: "jf:M=2,condition=(1,1)",
    FILTER_SPLIT: "jf:M=1.5,condition=(0,0)",
}


class PhysicsCliError(click.ClickException):
    """Configuration parsed fine but the physics model rejects it."""

    exit_code = 3


# --------------------------------------------------------------------------
# Wire-format parsing


def parse_angle(text: str) -> float:
    """``30deg`` / ``0.5236rad`` / bare number (radians) -> radians."""
    raw = text.strip().lower()
    factor = 1.0
    if raw.endswith("deg"):
        raw, factor = raw[:-3], math.pi / 180.0
    elif raw.endswith("rad"):
        raw = raw[:-3]
    try:
        return float(raw) * factor
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r} (use e.g. 30deg or 0.5236rad)") from None


def _split_top_level(body: str) -> list[str]:
    """Split on commas that are not nested inside (), [] brackets."""
    parts: list[str] = []
    depth = 0
    current: list[str] = []
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced brackets in {body!r}")
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise ValueError(f"unbalanced brackets in {body!r}")
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def _parse_fields(body: str, allowed: set[str]) -> dict[str, str]:
    fields: dict[str, str] = {}
    for chunk in _split_top_level(body):
        key, eq, value = chunk.partition("=")
        key = key.strip()
        if not eq or not key or not value.strip():
            raise ValueError(f"expected key=value, got {chunk!r}")
        if key not in allowed:
            raise ValueError(f"unknown field {key!r} (allowed: {sorted(allowed)})")
        if key in fields:
            raise ValueError(f"duplicate field {key!r}")
        fields[key] = value.strip()
    return fields


def _parse_length(text: str) -> float:
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def parse_tpam_spec(text: str) -> GenericTpam | FwmTpamSpec:
    """Parse the absorber wire format.

    ``generic:alpha=<complex>,beta=<complex>`` or
    ``jf:M=<length multiple>[,condition=(i,j)]``; ``fwm:`` aliases ``jf:``.
    """
    kind, sep, body = text.partition(":")
    kind = kind.strip().lower()
    if not sep:
        raise ValueError(f"absorber spec {text!r} needs a 'generic:' or 'jf:' prefix")
    if kind == "generic":
        fields = _parse_fields(body, {"alpha", "beta"})
        for required in ("alpha", "beta"):
            if required not in fields:
                raise ValueError(f"generic absorber spec needs {required}=")
        try:
            alpha = complex(fields["alpha"].replace(" ", ""))
            beta = complex(fields["beta"].replace(" ", ""))
        except ValueError:
            raise ValueError(f"cannot parse complex coefficients in {text!r}") from None
        return GenericTpam(alpha, beta)
    if kind in ("jf", "fwm"):
        fields = _parse_fields(body, {"M", "condition"})
        if "M" not in fields:
            raise ValueError("mixer spec needs M= (medium length in cycle units)")
        length = _parse_length(fields["M"])
        condition = (0, 0)
        if "condition" in fields:
            raw = fields["condition"].strip()
            if not (raw.startswith("(") and raw.endswith(")")):
                raise ValueError(f"condition must look like (i,j), got {raw!r}")
            pair = [p.strip() for p in raw[1:-1].split(",")]
            if len(pair) != 2:
                raise ValueError(f"condition must have two entries, got {raw!r}")
            condition = (int(pair[0]), int(pair[1]))
        return FwmTpamSpec(FwmParams(length), condition)
    raise ValueError(f"unknown absorber kind {kind!r} (expected generic, jf, or fwm)")


def _format_complex(z: complex) -> str:
    if z.imag == 0.0:
        return repr(z.real)
    return str(z)  # '(re+imj)' — round-trips through complex()


def format_tpam_spec(tpam: GenericTpam | FwmTpamSpec) -> str:
    """Canonical wire form of an absorber (inverse of :func:`parse_tpam_spec`)."""
    if isinstance(tpam, GenericTpam):
        return f"generic:alpha={_format_complex(tpam.alpha)},beta={_format_complex(tpam.beta)}"
    m = tpam.params.length_multiple
    m_text = repr(int(m)) if m == int(m) else repr(m)
    i, j = tpam.condition
    return f"jf:M={m_text},condition=({i},{j})"


class AngleParam(click.ParamType):
    name = "angle"

    def convert(self, value, param, ctx):
        if isinstance(value, (int, float)):
            return float(value)
        try:
            return parse_angle(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


class TpamParam(click.ParamType):
    name = "tpam"

    def convert(self, value, param, ctx):
        if isinstance(value, (GenericTpam, FwmTpamSpec)):
            return value
        try:
            return parse_tpam_spec(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


ANGLE = AngleParam()
TPAM = TpamParam()


# --------------------------------------------------------------------------
# Config canonicalization and execution


def build_config(
    scheme: str,
    p: float,
    tpam: GenericTpam | FwmTpamSpec | None,
    theta0: float | None,
    theta1: float | None,
    theta2: float | None,
    phi1: float | None,
    phi2: float | None,
    cutoff: int,
) -> dict[str, object]:
    """Canonical config mapping for a run (plain JSON types only).

    For the interferometric schemes, an unspecified second splitter angle
    snaps onto the null-condition manifold (theta2 = pi/2 - theta1), so a
    bare ``--theta1`` stays on the constraint surface.
    """
    variant = SCHEME_TOKENS[scheme]
    if tpam is None:
        tpam = parse_tpam_spec(_DEFAULT_TPAM[variant])
    config: dict[str, object] = {
        "scheme": _CANONICAL_TOKEN[variant],
        "p": float(p),
        "cutoff": int(cutoff),
        "tpam": format_tpam_spec(tpam),
        "theta0": float(theta0) if theta0 is not None else math.pi / 4,
    }
    if variant in (MAIN, DOUBLED):
        t1 = float(theta1) if theta1 is not None else math.pi / 4
        t2 = float(theta2) if theta2 is not None else math.pi / 2 - t1
        config["theta1"] = t1
        config["theta2"] = t2
        config["phi1"] = float(phi1) if phi1 is not None else 0.0
        config["phi2"] = float(phi2) if phi2 is not None else 0.0
    return config


def run_from_config(config: Mapping[str, object]) -> SchemeResult:
    """Execute a canonical config mapping (the manifest round-trip path).

    Raises:
        ValueError: on unknown scheme tokens or incompatible absorber kinds.
        FockError: on physics-level failures (propagated from the simulator).
    """
    token = str(config.get("scheme", "main"))
    variant = SCHEME_TOKENS.get(token)
    if variant is None:
        raise ValueError(f"unknown scheme {token!r} (expected one of {sorted(SCHEME_TOKENS)})")
    tpam_field = config.get("tpam", _DEFAULT_TPAM[variant])
    tpam = tpam_field if isinstance(tpam_field, (GenericTpam, FwmTpamSpec)) else parse_tpam_spec(str(tpam_field))
    if variant in (PAIR_HERALD, FILTER_SPLIT) and not isinstance(tpam, FwmTpamSpec):
        raise ValueError(
            f"scheme {token!r} is defined by a four-wave mixer; use a jf:M=... absorber spec"
        )
    theta1 = float(config.get("theta1", math.pi / 4))
    cfg = SchemeConfig(
        source=SourceSpec(float(config.get("p", 1.0))),
        tpam=tpam,
        bs0=BeamSplitterParams(float(config.get("theta0", math.pi / 4))),
        bs1=BeamSplitterParams(theta1, float(config.get("phi1", 0.0))),
        bs2=BeamSplitterParams(
            float(config.get("theta2", math.pi / 2 - theta1)),
            float(config.get("phi2", 0.0)),
        ),
        variant=variant,
        cutoff=int(config.get("cutoff", DEFAULT_CUTOFF)),
    )
    return run_scheme(cfg)


def config_hash(config: Mapping[str, object]) -> str:
    """sha256 over the canonical (sorted-key, compact) JSON form of a config."""
    payload = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(payload.encode("utf-8")).hexdigest()


def build_manifest(
    command: str, config: Mapping[str, object], result: SchemeResult
) -> dict[str, object]:
    """Run manifest: everything needed to audit and re-run this invocation.

    The timestamp is informational only and excluded from the config hash,
    so repeated runs differ in nothing but that one field.
    """
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "photonherald",
        "tool_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "command": command,
        "config": dict(config),
        "config_hash": config_hash(config),
        "result": result.to_dict(),
    }


def _emit(text: str, output: str | None) -> None:
    if output is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(output).write_text(text, encoding="utf-8")
        click.echo(f"wrote {output}", err=True)


# --------------------------------------------------------------------------
# Commands


@click.group()
@click.version_option(__version__, prog_name="photonherald")
def main() -> None:
    """Few-mode Fock-space simulator for heralded single-photon schemes."""


@main.command("run")
@click.option(
    "--scheme",
    type=click.Choice(sorted(SCHEME_TOKENS)),
    default="main",
    show_default=True,
    help="Circuit to run (appendix-a/appendix-b alias pair-herald/filter-split).",
)
@click.option("--p", type=click.FloatRange(0.0, 1.0), default=1.0, show_default=True, help="Source efficiency.")
@click.option(
    "--tpam",
    type=TPAM,
    default=None,
    help="Absorber spec: generic:alpha=1,beta=0 or jf:M=2,condition=(1,1). "
    "Defaults depend on the scheme.",
)
@click.option("--theta0", type=ANGLE, default=None, help="Front-splitter angle [default: 45deg].")
@click.option(
    "--theta1",
    type=ANGLE,
    default=None,
    help="First interferometer splitter angle [default: 45deg].",
)
@click.option(
    "--theta2",
    type=ANGLE,
    default=None,
    help="Second interferometer splitter angle [default: 90deg - theta1].",
)
@click.option("--phi1", type=ANGLE, default=None, help="First splitter phase [default: 0].")
@click.option("--phi2", type=ANGLE, default=None, help="Second splitter phase [default: 0].")
@click.option(
    "--cutoff",
    type=click.IntRange(2),
    default=DEFAULT_CUTOFF,
    show_default=True,
    envvar="FOCK_CUTOFF",
    help="Per-mode photon cutoff (env: FOCK_CUTOFF).",
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Re-run the config from a previous manifest (or bare config) JSON; "
    "overrides the physics flags.",
)
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write to a file instead of stdout.")
@click.option(
    "--gnuplot",
    "--points",
    "points",
    is_flag=True,
    help="Emit plot-ready columns (p_success, fidelity) instead of JSON.",
)
def cmd_run(scheme, p, tpam, theta0, theta1, theta2, phi1, phi2, cutoff, config_path, output, points) -> None:
    """Run one scheme and emit a JSON run manifest."""
    if config_path is not None:
        try:
            loaded = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise click.UsageError(f"config file is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise click.UsageError("config file must hold a JSON object")
        config = loaded.get("config", loaded)
        if not isinstance(config, dict):
            raise click.UsageError("manifest 'config' field must be an object")
    else:
        config = build_config(scheme, p, tpam, theta0, theta1, theta2, phi1, phi2, cutoff)
    try:
        result = run_from_config(config)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    except FockError as exc:
        raise PhysicsCliError(str(exc))
    if points:
        lines = ["# p_success fidelity", f"{result.p_success!r} {result.fidelity!r}"]
        _emit("\n".join(lines) + "\n", output)
        return
    manifest = build_manifest("run", config, result)
    _emit(json.dumps(manifest, indent=2) + "\n", output)


@main.command("sweep")
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--cutoff",
    type=click.IntRange(2),
    default=DEFAULT_CUTOFF,
    show_default=True,
    envvar="FOCK_CUTOFF",
    help="Per-mode photon cutoff (env: FOCK_CUTOFF).",
)
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write to a file instead of stdout.")
@click.option(
    "--gnuplot",
    "--points",
    "points",
    is_flag=True,
    help="Emit whitespace-separated columns with a # header instead of CSV.",
)
def cmd_sweep(spec_file, cutoff, output, points) -> None:
    """Evaluate a main-scheme parameter grid from a JSON SPEC_FILE.

    The spec maps axis names (theta0, theta1, beta, p, case) to explicit
    value lists or {"start", "stop", "steps", "unit"} ranges.  Output is an
    RFC-4180 CSV with one row per grid point, in deterministic grid order.
    """
    try:
        data = json.loads(Path(spec_file).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError("sweep spec must be a JSON object")
        spec = SweepSpec.from_mapping(data)
    except (json.JSONDecodeError, ValueError, TypeError) as exc:
        raise click.UsageError(f"malformed sweep spec: {exc}")
    try:
        rows = sweep_rows(spec, cutoff=cutoff)
    except ValueError as exc:
        raise click.UsageError(f"invalid sweep values: {exc}")
    except FockError as exc:
        raise PhysicsCliError(str(exc))
    if points:
        lines = ["# " + " ".join(SWEEP_COLUMNS)]
        lines.extend(" ".join(repr(row[col]) for col in SWEEP_COLUMNS) for row in rows)
        _emit("\n".join(lines) + "\n", output)
        return
    # RFC 4180: CRLF line endings, header row first.
    out_lines = [",".join(SWEEP_COLUMNS)]
    out_lines.extend(",".join(repr(row[col]) for col in SWEEP_COLUMNS) for row in rows)
    _emit("\r\n".join(out_lines) + "\r\n", output)


@main.command("verify")
@click.option(
    "--suite",
    type=click.Choice(["paper-values", "invariants"]),
    required=True,
    help="Which check suite to run.",
)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True, help="RNG seed for randomized checks.")
@click.option(
    "--cutoff",
    type=click.IntRange(2),
    default=DEFAULT_CUTOFF,
    show_default=True,
    envvar="FOCK_CUTOFF",
)
def cmd_verify(suite, seed, cutoff) -> None:
    """Run a verification suite; exit 0 iff every check passes."""
    if suite == "paper-values":
        checks = paper_value_checks(cutoff=cutoff, seed=seed)
    else:
        checks = invariant_checks(seed=seed, cutoff=cutoff)
    for check in checks:
        click.echo(check.format_line())
    failed = sum(1 for c in checks if not c.passed)
    click.echo(f"{len(checks)} checks: {len(checks) - failed} passed, {failed} failed")
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
