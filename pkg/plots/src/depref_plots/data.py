"""CSV loading with schema validation for the depref output files."""
import csv

import numpy as np


class SchemaError(ValueError):
    """The input CSV is missing a column the plot kind needs."""


def load_csv(path):
    """Read a depref CSV into {column: float array}; empty data rows give
    empty arrays (the header still defines the columns)."""
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            return {}
        rows = [r for r in reader if r and any(c.strip() for c in r)]
    cols = {}
    for j, name in enumerate(header):
        cols[name.strip()] = np.array([float(r[j]) for r in rows])
    return cols


def require_columns(cols, names, path):
    for name in names:
        if name not in cols:
            raise SchemaError(f"{path}: missing column {name!r} (has {sorted(cols)})")
    return cols


def group_curves(cols, x_col, y_col, by_col):
    """Split (x, y) into one curve per distinct value of by_col, each
    sorted by x.  Returns {by_value: (x array, y array)}."""
    out = {}
    for val in np.unique(cols[by_col]):
        mask = cols[by_col] == val
        order = np.argsort(cols[x_col][mask], kind="stable")
        out[float(val)] = (cols[x_col][mask][order], cols[y_col][mask][order])
    return out
