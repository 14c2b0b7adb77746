"""CSV datasets: the tabular wire format for curves going in and out.

Files are a plain RFC-4180 subset: UTF-8, comma separator, '.' decimal
point, one mandatory header row naming the columns.  Every cell below the
header must parse as a 64-bit float.  Each dataset ``kind`` pins the columns
a file must provide (extra numeric columns ride along); the optional
``sigma`` column carries per-point uncertainties in the units of the kind's
dependent column.

All on-disk values are in CLI units (cyclic GHz/MHz, microseconds, flux
quanta); conversion to internal angular/SI units happens in the callers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import BadInput, IoError, ParseError, SchemaError

REQUIRED_COLUMNS: dict[str, tuple[str, ...]] = {
    "flux_sweep": ("phi_ext_phi0", "freq_ghz"),
    "spectrum": ("freq_ghz", "amp"),
    "decay_trace": ("tau_us", "pop"),
    "tls_points": ("n_bar", "t1_us"),
    "calibration": ("drive_amp", "alpha_abs"),
}


@dataclass(frozen=True)
class Dataset:
    """One validated table: its kind and equal-length numeric columns."""

    kind: str
    columns: dict[str, np.ndarray]

    def __post_init__(self):
        if self.kind not in REQUIRED_COLUMNS:
            raise BadInput(
                f"unknown dataset kind {self.kind!r}; "
                f"expected one of {sorted(REQUIRED_COLUMNS)}"
            )
        missing = tuple(c for c in REQUIRED_COLUMNS[self.kind] if c not in self.columns)
        if missing:
            raise SchemaError(
                f"dataset kind {self.kind!r} is missing columns: {', '.join(missing)}",
                fields=missing,
            )
        lengths = {c: len(v) for c, v in self.columns.items()}
        if len(set(lengths.values())) > 1:
            raise SchemaError(f"column lengths differ: {lengths}")
        if next(iter(lengths.values()), 0) == 0:
            raise SchemaError("dataset has no rows")
        object.__setattr__(
            self,
            "columns",
            {c: np.asarray(v, dtype=float) for c, v in self.columns.items()},
        )

    def __len__(self) -> int:
        return len(next(iter(self.columns.values())))

    @property
    def sigma(self) -> np.ndarray | None:
        """Per-point uncertainty column, if the file carried one."""
        return self.columns.get("sigma")

    def col(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise SchemaError(f"dataset has no column {name!r}", fields=(name,)) from None


def load_dataset(path: str, kind: str) -> Dataset:
    """Read and validate a CSV file as a dataset of the given kind.

    Raises
    ------
    IoError : unreadable file.
    ParseError : malformed CSV or non-numeric cell (carries the 1-based
        data row and the column name).
    SchemaError : readable table missing the kind's required columns.
    """
    if kind not in REQUIRED_COLUMNS:
        raise BadInput(f"unknown dataset kind {kind!r}")
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ParseError(f"{path}: empty file (header row required)", row=1) from None
            header = [h.strip() for h in header]
            if any(not h for h in header) or len(set(header)) != len(header):
                raise ParseError(f"{path}: header has empty or duplicate names", row=1)
            data: list[list[float]] = [[] for _ in header]
            for rownum, row in enumerate(reader, start=1):
                if not row:  # tolerate a trailing blank line
                    continue
                if len(row) != len(header):
                    raise ParseError(
                        f"{path}: row {rownum} has {len(row)} cells, expected {len(header)}",
                        row=rownum,
                    )
                for colname, cell, store in zip(header, row, data):
                    try:
                        store.append(float(cell))
                    except ValueError:
                        raise ParseError(
                            f"{path}: row {rownum}, column {colname!r}: "
                            f"{cell!r} is not a number",
                            row=rownum,
                            column=colname,
                        ) from None
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return Dataset(kind=kind, columns=dict(zip(header, data)))


def save_dataset(dataset: Dataset, path: str) -> None:
    """Write a dataset back to CSV, value-identical under a later load.

    Floats are written with ``repr`` (shortest round-trip form).
    """
    names = list(dataset.columns)
    cols = [dataset.columns[c] for c in names]
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(names)
            for i in range(len(dataset)):
                writer.writerow([repr(float(c[i])) for c in cols])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
