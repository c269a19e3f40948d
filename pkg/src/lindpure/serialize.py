"""Model-document JSON: strict schema, lossless numbers.

Complex entries are [re, im] pairs; matrices are nested row-major
lists. schema_version "1" is checked strictly and unknown fields are
rejected everywhere, so stored fixtures cannot drift silently. Numbers
round-trip exactly (shortest-exact decimal, at most 17 significant
digits).

A document carries lindblad_ops, a gks block, or both; when both are
present lindblad_ops wins and the gks block is provenance only.
"""

from __future__ import annotations

import json

import numpy as np

from .gks import GKSModel, LindbladModel, ModelMetadata, diagonalize_gks

SCHEMA_VERSION = "1"

_TOP_FIELDS = {"schema_version", "dim", "hamiltonian", "lindblad_ops", "gks", "metadata"}
_GKS_FIELDS = {"coupling_ops", "coeff_matrix"}
_META_FIELDS = {"name", "trace_preserving", "guard_level"}


class SchemaError(ValueError):
    """Document violates the model schema; message names the field."""


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m, dtype=np.complex128)]


def matrix_from_json(obj, rows: int, cols: int, where: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != rows:
        raise SchemaError(f"{where}: expected {rows} rows")
    out = np.empty((rows, cols), dtype=np.complex128)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"{where}[{i}]: expected {cols} entries")
        for j, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
            ):
                raise SchemaError(f"{where}[{i}][{j}]: expected an [re, im] number pair")
            out[i, j] = complex(pair[0], pair[1])
    if not np.isfinite(out).all():
        raise SchemaError(f"{where}: entries must be finite")
    return out


def encode_model(m: LindbladModel, gks: GKSModel | None = None) -> dict:
    """Serialize a model (optionally with its coefficient-form provenance)."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "dim": m.dim,
        "hamiltonian": matrix_to_json(m.hamiltonian),
        "lindblad_ops": [matrix_to_json(f) for f in m.lindblad_ops],
    }
    if gks is not None:
        doc["gks"] = {
            "coupling_ops": [matrix_to_json(g) for g in gks.coupling_ops],
            "coeff_matrix": matrix_to_json(gks.coeff_matrix),
        }
    meta = m.metadata
    if meta.name is not None or not meta.trace_preserving or meta.guard_level is not None:
        entry: dict = {}
        if meta.name is not None:
            entry["name"] = meta.name
        entry["trace_preserving"] = meta.trace_preserving
        if meta.guard_level is not None:
            entry["guard_level"] = meta.guard_level
        doc["metadata"] = entry
    return doc


def _decode_metadata(obj, where: str) -> ModelMetadata:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    unknown = set(obj) - _META_FIELDS
    if unknown:
        raise SchemaError(f"{where}: unknown field(s) {sorted(unknown)}")
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaError(f"{where}.name: expected a string")
    tp = obj.get("trace_preserving", True)
    if not isinstance(tp, bool):
        raise SchemaError(f"{where}.trace_preserving: expected a boolean")
    guard = obj.get("guard_level")
    if guard is not None and (not isinstance(guard, int) or isinstance(guard, bool)):
        raise SchemaError(f"{where}.guard_level: expected an integer")
    return ModelMetadata(name=name, trace_preserving=tp, guard_level=guard)


def decode_document(doc) -> LindbladModel:
    """Parse and validate a model document into a LindbladModel.

    gks-only documents are diagonalized on load; documents carrying both
    forms use lindblad_ops.
    """
    if not isinstance(doc, dict):
        raise SchemaError("document root: expected an object")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise SchemaError(f"document root: unknown field(s) {sorted(unknown)}")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"schema_version: expected {SCHEMA_VERSION!r}, got {version!r}"
        )
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SchemaError(f"dim: expected a positive integer, got {dim!r}")
    if "hamiltonian" not in doc:
        raise SchemaError("hamiltonian: required")
    ham = matrix_from_json(doc["hamiltonian"], dim, dim, "hamiltonian")

    has_lind = "lindblad_ops" in doc
    has_gks = "gks" in doc
    if not has_lind and not has_gks:
        raise SchemaError("document must carry lindblad_ops or a gks block")

    metadata = (
        _decode_metadata(doc["metadata"], "metadata") if "metadata" in doc else ModelMetadata()
    )

    if has_lind:
        raw = doc["lindblad_ops"]
        if not isinstance(raw, list):
            raise SchemaError("lindblad_ops: expected a list of matrices")
        ops = [
            matrix_from_json(entry, dim, dim, f"lindblad_ops[{i}]")
            for i, entry in enumerate(raw)
        ]
        if has_gks:
            _decode_gks(doc["gks"], ham, dim)  # validated for provenance even when unused
        return LindbladModel(ham, ops, metadata)

    gm = _decode_gks(doc["gks"], ham, dim)
    lm = diagonalize_gks(gm)
    return LindbladModel(lm.hamiltonian, lm.lindblad_ops, metadata)


def _decode_gks(obj, ham: np.ndarray, dim: int) -> GKSModel:
    if not isinstance(obj, dict):
        raise SchemaError("gks: expected an object")
    unknown = set(obj) - _GKS_FIELDS
    if unknown:
        raise SchemaError(f"gks: unknown field(s) {sorted(unknown)}")
    if "coupling_ops" not in obj or "coeff_matrix" not in obj:
        raise SchemaError("gks: coupling_ops and coeff_matrix are both required")
    raw_ops = obj["coupling_ops"]
    if not isinstance(raw_ops, list):
        raise SchemaError("gks.coupling_ops: expected a list of matrices")
    ops = [
        matrix_from_json(entry, dim, dim, f"gks.coupling_ops[{i}]")
        for i, entry in enumerate(raw_ops)
    ]
    k = len(ops)
    coeff = matrix_from_json(obj["coeff_matrix"], k, k, "gks.coeff_matrix")
    return GKSModel(ham, ops, coeff)


def dump_document(doc: dict, fileobj) -> None:
    json.dump(doc, fileobj, indent=2)
    fileobj.write("\n")


def load_model(path: str) -> LindbladModel:
    """Read, schema-check, and construct; raises SchemaError,
    json.JSONDecodeError (with line/column), or the model invariant
    errors."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return decode_document(doc)
