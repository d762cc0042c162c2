"""CSV import/export for chains and data matrices.

Values are written with 17 significant digits so a write/read round trip
reproduces every binary64 value bit-for-bit.
"""

from __future__ import annotations

import csv

import numpy as np

from .core import Chain

__all__ = ["write_chain_csv", "read_csv_matrix"]


def write_chain_csv(chain: Chain, path) -> None:
    """Write parameter names as a header row, then one row per draw."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(chain.names)
        for row in chain.draws:
            writer.writerow([f"{v:.17g}" for v in row])


def read_csv_matrix(path) -> tuple[list[str], np.ndarray]:
    """Parse a rectangular numeric CSV with a header row.

    Returns ``(column_names, values)``.  Raises ValueError naming the
    offending data row (1-based, header excluded) and column for ragged
    or non-numeric input.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        names = [c.strip() for c in header]
        n_cols = len(names)
        rows = []
        for i, record in enumerate(reader, start=1):
            if len(record) != n_cols:
                raise ValueError(
                    f"{path}: row {i} has {len(record)} cells, expected {n_cols}"
                )
            values = np.empty(n_cols)
            for j, cell in enumerate(record):
                try:
                    values[j] = float(cell)
                except ValueError:
                    raise ValueError(
                        f"{path}: row {i}, column {names[j] or j + 1}: "
                        f"non-numeric value {cell!r}"
                    ) from None
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: no data rows after the header")
    return names, np.vstack(rows)
