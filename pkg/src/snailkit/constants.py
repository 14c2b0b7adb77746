"""Physical constants used throughout the toolkit.

All internal computation is in SI and angular frequency (rad/s).  The default
table holds the 2019 SI exact values to at least nine significant figures.  For
testing, the ``SNAILKIT_CONSTANTS`` environment variable may point at a JSON
file overriding any subset of the fields; every accessor resolves the table
per call so a monkeypatched environment takes effect immediately.
"""

from __future__ import annotations

import functools
import json
import os
from dataclasses import dataclass

from .errors import BadInput

_ENV_VAR = "SNAILKIT_CONSTANTS"


@dataclass(frozen=True)
class PhysicalConstants:
    """Immutable table of the constants the physics layer needs.

    Attributes:
        hbar: reduced Planck constant, J*s.
        e: elementary charge, C.
        k_b: Boltzmann constant, J/K.
        phi0: magnetic flux quantum h/2e, Wb.
    """

    hbar: float = 1.054571817e-34
    e: float = 1.602176634e-19
    k_b: float = 1.380649e-23
    phi0: float = 2.067833848e-15

    @property
    def reduced_flux_quantum(self) -> float:
        """hbar/2e, the phase-slip scale relating phase to flux (Wb/rad * rad = Wb)."""
        return self.hbar / (2.0 * self.e)


_FIELDS = ("hbar", "e", "k_b", "phi0")


@functools.lru_cache(maxsize=8)
def _load_table(path: str) -> PhysicalConstants:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise BadInput(f"cannot read constants table {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BadInput(f"constants table {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise BadInput(f"constants table {path!r} must be a JSON object")
    unknown = sorted(set(raw) - set(_FIELDS))
    if unknown:
        raise BadInput(f"constants table {path!r} has unknown keys: {unknown}")
    values = {}
    for key in _FIELDS:
        if key in raw:
            val = raw[key]
            if not isinstance(val, (int, float)) or not val > 0:
                raise BadInput(f"constants table key {key!r} must be a positive number")
            values[key] = float(val)
    return PhysicalConstants(**values)


def physical_constants() -> PhysicalConstants:
    """Return the active constants table (default, or the env-var override)."""
    path = os.environ.get(_ENV_VAR)
    if not path:
        return PhysicalConstants()
    return _load_table(path)
