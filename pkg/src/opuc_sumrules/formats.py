"""File formats: coefficient/moment JSON, weight and report CSV, residual JSON.

Floats are always written with 17 significant digits so that a value read
back is the same double.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BadParameter
from .opuc import MomentSeq, VerblunskySeq, WeightGrid
from .residual import ResidualPolynomial


def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def format_rows(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    return buf.getvalue()


def _pairs(z: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in z]


def _complex_list(items, what: str) -> np.ndarray:
    out = []
    for item in items:
        if isinstance(item, (int, float)):
            out.append(complex(item))
        elif isinstance(item, (list, tuple)) and len(item) == 2:
            out.append(complex(float(item[0]), float(item[1])))
        else:
            raise BadParameter(f"{what}: expected [re, im] pairs, got {item!r}")
    return np.array(out, dtype=np.complex128)


def _dump(obj) -> str:
    # repr-exact floats; json uses repr for floats already
    return json.dumps(obj, separators=(", ", ": ")) + "\n"


def alpha_to_json(alpha) -> str:
    a = alpha.values if isinstance(alpha, VerblunskySeq) else np.asarray(alpha, complex)
    return _dump({"alpha": _pairs(a)})


def alpha_from_json(text: str) -> VerblunskySeq:
    data = _load(text)
    if not isinstance(data, dict) or "alpha" not in data:
        raise BadParameter('coefficient file must be {"alpha": [[re, im], ...]}')
    return VerblunskySeq(_complex_list(data["alpha"], "alpha"))


def moments_to_json(c: MomentSeq) -> str:
    return _dump({"c": _pairs(c.c)})


def moments_from_json(text: str) -> MomentSeq:
    data = _load(text)
    if not isinstance(data, dict) or "c" not in data:
        raise BadParameter('moment file must be {"c": [[re, im], ...]}')
    return MomentSeq(_complex_list(data["c"], "c"))


def weight_to_csv(w: WeightGrid) -> str:
    rows = [{"theta": t, "w": v} for t, v in zip(w.theta, w.w)]
    return format_rows(rows, ("theta", "w"))


def weight_from_csv(text: str) -> WeightGrid:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["theta", "w"]:
        raise BadParameter('weight CSV must start with the header "theta,w"')
    try:
        values = [float(row[1]) for row in reader if row]
    except (IndexError, ValueError) as exc:
        raise BadParameter(f"malformed weight CSV row: {exc}") from exc
    return WeightGrid.from_values(values)


def residual_from_json(text: str) -> ResidualPolynomial:
    data = _load(text)
    if not isinstance(data, dict) or "c" not in data:
        raise BadParameter('residual file must be {"c": ["p/q", ...], "order": l}')
    return ResidualPolynomial(tuple(Fraction(str(x)) for x in data["c"]),
                              int(data.get("order", 2)))


def residual_to_json(poly: ResidualPolynomial) -> str:
    return _dump({"c": [str(x) for x in poly.c], "order": poly.required_order})


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadParameter(f"invalid JSON: {exc}") from exc
