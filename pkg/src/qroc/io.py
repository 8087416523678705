"""Reading and writing state files, distributions, CSV tables and result JSON.

A state file is ``{"dim": d, "matrix": [[[re, im], ...], ...]}`` in row-major
order; a distribution file is a JSON array of reals.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .classical import Distribution
from .errors import ValidationError
from .linalg import DensityOperator, validate_density


class ParseError(ValidationError):
    """Malformed input file; the message names the file and the offending field."""


def _load_json(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and np.isfinite(x)


def state_from_obj(obj, where: str = "<state>") -> DensityOperator:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object with 'dim' and 'matrix'")
    for key in ("dim", "matrix"):
        if key not in obj:
            raise ParseError(f"{where}: missing field '{key}'")
    d = obj["dim"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ParseError(f"{where}: field 'dim' must be a positive integer, got {d!r}")
    rows = obj["matrix"]
    if not isinstance(rows, list) or len(rows) != d:
        raise ParseError(f"{where}: field 'matrix' must have {d} rows")
    m = np.empty((d, d), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise ParseError(f"{where}: matrix[{i}] must have {d} entries")
        for j, entry in enumerate(row):
            if not (isinstance(entry, list) and len(entry) == 2 and all(map(_is_real, entry))):
                raise ParseError(f"{where}: matrix[{i}][{j}] must be a [re, im] pair of finite reals")
            m[i, j] = complex(entry[0], entry[1])
    try:
        return validate_density(m)
    except ValidationError as exc:
        raise type(exc)(f"{where}: {exc}") from exc


def state_to_obj(rho) -> dict:
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    return {"dim": int(m.shape[0]),
            "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in m]}


def read_state(path) -> DensityOperator:
    return state_from_obj(_load_json(path), str(path))


def write_state(path, rho) -> None:
    Path(path).write_text(json.dumps(state_to_obj(rho), indent=1) + "\n")


def read_distribution(path) -> Distribution:
    obj = _load_json(path)
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"{path}: expected a non-empty JSON array of probabilities")
    for i, x in enumerate(obj):
        if not _is_real(x):
            raise ParseError(f"{path}: entry [{i}] is not a finite real ({x!r})")
    try:
        return Distribution(obj)
    except ValidationError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def write_csv(path, header, rows) -> Path:
    """Write rows under a header; floats use ``repr`` so output is exact and reproducible."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")
    return path
