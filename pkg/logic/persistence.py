"""
Instance and report files.

Instances are JSON documents:

    {
      "schema_version": "1",
      "field": "complex",
      "measure": {"weights": [...], "block_dims": [...]},
      "families": {"Lambda": {"domain_dim": n, "blocks": [matrix, ...]}},
      "operators": {"K": matrix},
      "checks": [{"name": "...", "kind": "...", "params": {...}}]
    }

A matrix is a list of rows; a complex entry is [re, im] and a real entry may
be a bare number. Floats are written with repr, which round-trips doubles
exactly.
"""

import json
import logging
import os
from typing import Any, Dict, List, Optional

import numpy as np

from logic import defaults
from logic.block_space import MeasurePoints
from logic.errors import DimensionMismatchError, ParseError, SchemaError, ShapeError
from logic.frames.models import OperatorFamily
from logic.verification.models import CheckRequest, Instance

logger = logging.getLogger(__name__)

TOP_LEVEL_FIELDS = ("schema_version", "field", "measure", "families", "operators", "checks")


# --- Scalars and matrices ---

def _encode_entry(value: complex) -> List[float]:
    return [float(value.real), float(value.imag)]


def encode_matrix(matrix) -> List[List[List[float]]]:
    return [[_encode_entry(complex(x)) for x in row] for row in np.asarray(matrix, dtype=complex)]


def _decode_entry(value: Any, where: str) -> complex:
    if isinstance(value, bool):
        raise SchemaError(where, "booleans are not numbers")
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        return complex(float(value[0]), float(value[1]))
    raise SchemaError(where, f"expected a number or [re, im], got {value!r}")


def decode_matrix(data: Any, where: str, shape: Optional[tuple] = None) -> np.ndarray:
    if not isinstance(data, list) or not data or not all(isinstance(row, list) for row in data):
        raise SchemaError(where, "expected a non-empty list of rows")
    widths = {len(row) for row in data}
    if len(widths) != 1:
        raise ShapeError(where, (len(data), max(widths)), (len(data), min(widths)))
    matrix = np.array(
        [[_decode_entry(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(data)],
        dtype=complex,
    )
    if not np.all(np.isfinite(matrix)):
        raise SchemaError(where, "entries must be finite")
    if shape is not None and matrix.shape != tuple(shape):
        raise ShapeError(where, tuple(shape), matrix.shape)
    return matrix


# --- Instances ---

def _require(mapping: Dict[str, Any], key: str, kind: type, where: str):
    if key not in mapping:
        raise SchemaError(f"{where}.{key}" if where else key, "missing")
    value = mapping[key]
    if not isinstance(value, kind) or (isinstance(value, bool) and kind is not bool):
        raise SchemaError(f"{where}.{key}" if where else key, f"expected {kind.__name__}")
    return value


def instance_from_dict(data: Any) -> Instance:
    """Validate a decoded JSON document and build the instance."""
    if not isinstance(data, dict):
        raise SchemaError("instance", "top level must be an object")
    unknown = sorted(set(data) - set(TOP_LEVEL_FIELDS))
    if unknown:
        raise SchemaError(unknown[0], "unknown field")

    version = _require(data, "schema_version", str, "")
    if version != defaults.SCHEMA_VERSION:
        raise SchemaError("schema_version", f"unsupported version {version!r}")
    if data.get("field", defaults.SCALAR_FIELD) != defaults.SCALAR_FIELD:
        raise SchemaError("field", f"only {defaults.SCALAR_FIELD!r} is supported")

    measure = _require(data, "measure", dict, "")
    weights = _require(measure, "weights", list, "measure")
    dims = _require(measure, "block_dims", list, "measure")
    for i, w in enumerate(weights):
        if isinstance(w, bool) or not isinstance(w, (int, float)):
            raise SchemaError(f"measure.weights[{i}]", "expected a real number")
    for i, d in enumerate(dims):
        if isinstance(d, bool) or not isinstance(d, int):
            raise SchemaError(f"measure.block_dims[{i}]", "expected an integer")
    if len(weights) != len(dims):
        raise ShapeError("measure", (len(weights),), (len(dims),))
    try:
        space = MeasurePoints(np.array(weights, dtype=float), tuple(dims))
    except DimensionMismatchError as exc:
        raise SchemaError("measure", str(exc)) from exc

    families: Dict[str, OperatorFamily] = {}
    for name, entry in _require(data, "families", dict, "").items():
        where = f"families.{name}"
        if not isinstance(entry, dict):
            raise SchemaError(where, "expected an object")
        n = _require(entry, "domain_dim", int, where)
        if n < 1:
            raise SchemaError(f"{where}.domain_dim", "must be at least 1")
        blocks = _require(entry, "blocks", list, where)
        if len(blocks) != space.count:
            raise ShapeError(f"{where}.blocks", (space.count,), (len(blocks),))
        decoded = tuple(
            decode_matrix(block, f"{where}.blocks[{i}]", (space.block_dims[i], n)) for i, block in enumerate(blocks)
        )
        families[name] = OperatorFamily(space, n, decoded)

    operators: Dict[str, np.ndarray] = {}
    for name, entry in _require(data, "operators", dict, "").items():
        operators[name] = decode_matrix(entry, f"operators.{name}")

    checks: List[CheckRequest] = []
    seen = set()
    for i, entry in enumerate(data.get("checks", [])):
        where = f"checks[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(where, "expected an object")
        name = _require(entry, "name", str, where)
        kind = _require(entry, "kind", str, where)
        params = entry.get("params", {})
        if not isinstance(params, dict):
            raise SchemaError(f"{where}.params", "expected an object")
        if name in seen:
            raise SchemaError(f"{where}.name", f"duplicate check name {name!r}")
        seen.add(name)
        checks.append(CheckRequest(name=name, kind=kind, params=dict(params)))

    return Instance(space=space, families=families, operators=operators, checks=checks, schema_version=version)


def _reject_duplicate_keys(pairs):
    result = {}
    for key, value in pairs:
        if key in result:
            raise SchemaError(key, "duplicate name")
        result[key] = value
    return result


def parse_instance_text(text: str) -> Instance:
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    return instance_from_dict(data)


def parse_instance(path: str) -> Instance:
    """Read and validate an instance file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    instance = parse_instance_text(text)
    logger.debug("parsed %s: %d families, %d operators, %d checks",
                 path, len(instance.families), len(instance.operators), len(instance.checks))
    return instance


def instance_to_dict(instance: Instance) -> Dict[str, Any]:
    return {
        "schema_version": instance.schema_version,
        "field": defaults.SCALAR_FIELD,
        "measure": {
            "weights": [float(w) for w in instance.space.weights],
            "block_dims": list(instance.space.block_dims),
        },
        "families": {
            name: {"domain_dim": family.domain_dim, "blocks": [encode_matrix(b) for b in family.blocks]}
            for name, family in instance.families.items()
        },
        "operators": {name: encode_matrix(op) for name, op in instance.operators.items()},
        "checks": [{"name": c.name, "kind": c.kind, "params": c.params} for c in instance.checks],
    }


def to_json(data: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def emit_instance(instance: Instance) -> str:
    return to_json(instance_to_dict(instance))


def write_text(text: str, path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def save_instance(instance: Instance, path: str) -> None:
    write_text(emit_instance(instance), path)
    logger.info("wrote instance to %s", path)


def write_report(report: Dict[str, Any], path: Optional[str] = None) -> str:
    """Serialize a report; write it to path when given. Returns the text."""
    text = to_json(report)
    if path:
        write_text(text, path)
        logger.info("wrote report to %s", path)
    return text
