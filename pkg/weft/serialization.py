"""State and field files.

State file (JSON)::

    {"schema_version": "1",
     "grid": {"n": 256, "dx": 0.1, "x_min": -12.8, "hbar": 1.0},
     "re": [...n floats...], "im": [...n floats...], "label": "optional"}

Field file (JSON) carries the same grid block, the field lattice and ``n²``
rows of ``[x, p, re, im]`` in row-major x-then-p order. The CSV dump has the
header ``x,p,re,im`` and the same rows.

Floats are written with ``repr`` in JSON and ``.17g`` in CSV, both of which
round-trip doubles exactly.
"""
import csv
import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .errors import GridError, PreconditionError, StateFileError
from .grid import Grid, PhaseSpaceField, Representation, SampledState

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
CSV_HEADER = ["x", "p", "re", "im"]

PathLike = Union[str, Path]


class FieldFormat(Enum):
    JSON = "json"
    CSV = "csv"

    @classmethod
    def from_path(cls, path: PathLike) -> "FieldFormat":
        return cls.CSV if Path(path).suffix.lower() == ".csv" else cls.JSON


def _read_json(path: PathLike) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            document = json.load(f)
    except FileNotFoundError:
        raise StateFileError("file not found", path=str(path))
    except json.JSONDecodeError as e:
        raise StateFileError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", path=str(path))
    except OSError as e:
        raise StateFileError(f"cannot read file: {e}", path=str(path))
    if not isinstance(document, dict):
        raise StateFileError("top level must be a JSON object", path=str(path))
    return document


def _write_json(document: Dict[str, Any], path: PathLike):
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(document, f, indent=1)
    except OSError as e:
        raise StateFileError(f"cannot write file: {e}", path=str(path))


def _check_version(document: Dict[str, Any], path: PathLike):
    version = document.get("schema_version")
    if version is None:
        raise StateFileError("missing schema_version", field="schema_version", path=str(path))
    if str(version) != SCHEMA_VERSION:
        raise StateFileError(f"unsupported schema_version {version!r}; this reader understands {SCHEMA_VERSION!r}",
                             field="schema_version", path=str(path))


def _float(value: Any, field: str, path: PathLike) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StateFileError(f"expected a number, got {value!r}", field=field, path=str(path))
    value = float(value)
    if not math.isfinite(value):
        raise StateFileError("non-finite number", field=field, path=str(path))
    return value


def _grid_from_json(block: Any, path: PathLike) -> Grid:
    if not isinstance(block, dict):
        raise StateFileError("missing or malformed grid block", field="grid", path=str(path))
    for key in ("n", "dx", "x_min"):
        if key not in block:
            raise StateFileError("missing key", field=f"grid.{key}", path=str(path))
    n = block["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise StateFileError(f"expected an integer, got {n!r}", field="grid.n", path=str(path))
    try:
        return Grid(x_min=_float(block["x_min"], "grid.x_min", path), dx=_float(block["dx"], "grid.dx", path),
                    n=n, hbar=_float(block.get("hbar", 1.0), "grid.hbar", path))
    except GridError as e:
        raise StateFileError(str(e), field="grid", path=str(path))


def _float_array(values: Any, length: int, field: str, path: PathLike) -> np.ndarray:
    if not isinstance(values, list):
        raise StateFileError("expected an array", field=field, path=str(path))
    if len(values) != length:
        raise StateFileError(f"length {len(values)} does not match n = {length}", field=field, path=str(path))
    return np.array([_float(v, f"{field}[{i}]", path) for i, v in enumerate(values)])


def state_to_json(state: SampledState) -> Dict[str, Any]:
    if state.representation is not Representation.POSITION:
        raise PreconditionError("Only position-space states are written to state files")
    document = {
        "schema_version": SCHEMA_VERSION,
        "grid": state.grid.to_json(),
        "re": [float(v) for v in state.values.real],
        "im": [float(v) for v in state.values.imag],
    }
    if state.label is not None:
        document["label"] = state.label
    return document


def save_state(state: SampledState, path: PathLike):
    _write_json(state_to_json(state), path)
    logger.info(f"State saved to {path}")


def load_state(path: PathLike) -> SampledState:
    document = _read_json(path)
    _check_version(document, path)
    grid = _grid_from_json(document.get("grid"), path)
    re = _float_array(document.get("re"), grid.n, "re", path)
    im = _float_array(document.get("im"), grid.n, "im", path)
    label = document.get("label")
    if label is not None and not isinstance(label, str):
        raise StateFileError("label must be text", field="label", path=str(path))
    logger.debug(f"Loaded state from {path} on n={grid.n}")
    return SampledState(grid, re + 1j * im, label=label)


def _field_rows(field: PhaseSpaceField) -> np.ndarray:
    n = field.grid.n
    x = np.repeat(field.x, n)
    p = np.tile(field.p, n)
    values = field.values.reshape(-1)
    return np.column_stack([x, p, values.real, values.imag])


def field_to_json(field: PhaseSpaceField) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": field.kind,
        "grid": field.grid.to_json(),
        "lattice": field.lattice(),
        "rows": _field_rows(field).tolist(),
    }


def save_field(field: PhaseSpaceField, path: PathLike):
    _write_json(field_to_json(field), path)
    logger.info(f"{field.kind} field saved to {path}")


def load_field(path: PathLike) -> PhaseSpaceField:
    document = _read_json(path)
    _check_version(document, path)
    grid = _grid_from_json(document.get("grid"), path)
    lattice = document.get("lattice")
    if not isinstance(lattice, dict):
        raise StateFileError("missing or malformed lattice block", field="lattice", path=str(path))
    spacing = {key: _float(lattice.get(key), f"lattice.{key}", path) for key in ("x_min", "dx", "p_min", "dp")}
    rows = document.get("rows")
    n = grid.n
    if not isinstance(rows, list) or len(rows) != n * n:
        count = len(rows) if isinstance(rows, list) else None
        raise StateFileError(f"expected {n * n} rows, got {count}", field="rows", path=str(path))
    table = np.empty((n * n, 4))
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 4:
            raise StateFileError("each row must be [x, p, re, im]", field=f"rows[{i}]", path=str(path))
        table[i] = [_float(v, f"rows[{i}]", path) for v in row]
    try:
        field = PhaseSpaceField(grid, (table[:, 2] + 1j * table[:, 3]).reshape(n, n),
                                kind=str(document.get("kind", "field")), **spacing)
    except GridError as e:
        raise StateFileError(str(e), field="lattice", path=str(path))
    expected = _field_rows(field)[:, :2]
    scale = max(1.0, float(np.max(np.abs(expected))))
    if not np.allclose(table[:, :2], expected, rtol=0.0, atol=1e-9 * scale):
        raise StateFileError("row coordinates disagree with the lattice block", field="rows", path=str(path))
    logger.debug(f"Loaded {field.kind} field from {path} on n={n}")
    return field


def dump_field(field: PhaseSpaceField, path: PathLike, format: Optional[Union[FieldFormat, str]] = None,
               precision: int = 17):
    """Write ``field`` as CSV (``x,p,re,im``) or as a JSON field file; format defaults from the suffix."""
    fmt = FieldFormat(format) if format is not None else FieldFormat.from_path(path)
    if fmt is FieldFormat.JSON:
        save_field(field, path)
        return
    rows: List[List[str]] = [[f"{v:.{precision}g}" for v in row] for row in _field_rows(field)]
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f)
            writer.writerow(CSV_HEADER)
            writer.writerows(rows)
    except OSError as e:
        raise StateFileError(f"cannot write file: {e}", path=str(path))
    logger.info(f"{field.kind} field dumped to {path} ({len(rows)} rows)")
