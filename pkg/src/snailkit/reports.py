"""JSON report envelope shared by every CLI subcommand.

A report records what was asked (``inputs``), what came out (``results``),
the unit conventions used on the wire, and paths to any side-car artifacts
(CSV tables, SVG plots).  Every report is validated against the bundled
schema before it touches disk, so a malformed envelope is a programming
error caught at write time rather than a surprise for downstream readers.
"""

from __future__ import annotations

import json
import sys
from importlib import resources
from typing import Any, Mapping

import jsonschema

from . import __version__
from .errors import IoError

#: Wire units used in every report.  Frequencies are cyclic (not angular).
WIRE_UNITS = {
    "frequency": "GHz",
    "shift": "MHz",
    "linewidth": "kHz",
    "rate": "Hz",
    "time": "us",
    "flux": "Phi0",
    "phase": "rad",
    "inductance": "pH",
    "impedance": "Ohm",
    "temperature": "mK",
}


def _schema() -> dict:
    text = (
        resources.files("snailkit.schemas")
        .joinpath("report.schema.json")
        .read_text(encoding="utf-8")
    )
    return json.loads(text)


def build_report(
    command: str,
    inputs: Mapping[str, Any],
    results: Mapping[str, Any],
    artifacts: Mapping[str, str] | None = None,
) -> dict:
    """Assemble and validate a report envelope.

    Raises ``jsonschema.ValidationError`` if the envelope does not conform;
    callers are expected to treat that as a bug, not user error.
    """
    report: dict[str, Any] = {
        "tool": "snailkit",
        "version": __version__,
        "command": command,
        "units": dict(WIRE_UNITS),
        "inputs": dict(inputs),
        "results": dict(results),
    }
    if artifacts:
        report["artifacts"] = {k: str(v) for k, v in artifacts.items()}
    jsonschema.validate(report, _schema())
    return report


def write_report(path: str, report: Mapping[str, Any]) -> None:
    """Serialize a validated report to ``path`` (or stdout for ``"-"``)."""
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write report to {path!r}: {exc}") from exc


def validate_report(report: Mapping[str, Any]) -> None:
    """Check an already-built envelope against the bundled schema."""
    jsonschema.validate(dict(report), _schema())
