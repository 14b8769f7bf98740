"""Attribute type inference and numeric encoding.

The paper-level type vocabulary is {quantitative, nominal, ordinal,
temporal}; the concrete rule table is ours:

* all cells numeric -> quantitative, unless integer-valued with
  cardinality <= 10 and minimum >= 0 -> ordinal
* all cells parse as ISO-8601 dates/datetimes, or are 10/13-digit
  epoch-like strings -> temporal
* anything else -> nominal

Missing cells (JSON null / NaN) are ignored for inference; a column of
only missing cells is an error.
"""

from __future__ import annotations

import math
from datetime import date, datetime, timezone

import numpy as np

from ..errors import ValidationError
from .types import AttributeColumn

ORDINAL_MAX_CARDINALITY = 10

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def is_missing(cell) -> bool:
    if cell is None:
        return True
    if isinstance(cell, float) and math.isnan(cell):
        return True
    return False


def _is_number(cell) -> bool:
    return isinstance(cell, (int, float)) and not isinstance(cell, bool)


def _parse_temporal(cell) -> float | None:
    """Epoch seconds for an ISO-8601 or epoch-like string, else None."""
    if not isinstance(cell, str):
        return None
    text = cell.strip()
    if text.isdigit() and len(text) in (10, 13):
        val = float(text)
        return val / 1000.0 if len(text) == 13 else val
    for parser in (datetime.fromisoformat, lambda t: datetime.combine(
            date.fromisoformat(t), datetime.min.time())):
        try:
            dt = parser(text)
        except ValueError:
            continue
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return (dt - _EPOCH).total_seconds()
    return None


def infer_attribute_type(column: AttributeColumn) -> str:
    cells = [c for c in column.values if not is_missing(c)]
    if not cells:
        raise ValidationError(
            f"attribute {column.name!r} (dataset {column.dataset_id}) is entirely missing; "
            "cannot infer a type")
    if all(_is_number(c) for c in cells):
        vals = [float(c) for c in cells]
        integral = all(v == int(v) for v in vals)
        if integral and len(set(vals)) <= ORDINAL_MAX_CARDINALITY and min(vals) >= 0:
            return "ordinal"
        return "quantitative"
    if all(_parse_temporal(c) is not None for c in cells):
        return "temporal"
    return "nominal"


def encode_numeric(column: AttributeColumn) -> np.ndarray:
    """Numeric view of a column (NaN where missing), per its inferred type.

    quantitative/ordinal -> float cell; temporal -> epoch seconds;
    nominal -> frequency count of the cell's value within the column.
    """
    kind = column.inferred_type or infer_attribute_type(column)
    out = np.full(len(column.values), np.nan, dtype=np.float64)
    if kind in ("quantitative", "ordinal"):
        for i, c in enumerate(column.values):
            if not is_missing(c):
                out[i] = float(c)
    elif kind == "temporal":
        for i, c in enumerate(column.values):
            if not is_missing(c):
                parsed = _parse_temporal(c)
                if parsed is None:
                    raise ValidationError(
                        f"attribute {column.name!r}: cell {c!r} is not temporal")
                out[i] = parsed
    else:
        counts: dict = {}
        for c in column.values:
            if not is_missing(c):
                counts[c] = counts.get(c, 0) + 1
        for i, c in enumerate(column.values):
            if not is_missing(c):
                out[i] = float(counts[c])
    return out
