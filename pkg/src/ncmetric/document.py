"""Parse and serialize triple description documents.

A document is JSON with top-level keys ``algebra``, ``slots``, ``dirac``,
optional ``grading`` and ``real_form``, and named ``states``.  Complex
numbers are written as [re, im] pairs (bare numbers are accepted and read
as real).  All triple invariants are re-checked after parsing.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .triple import (
    AlgebraBlock,
    BlockKind,
    FiniteAlgebra,
    PureState,
    RepresentationSlot,
    SlotMode,
    SpectralTriple,
    TripleError,
    validate_state,
)


class DocumentError(ValueError):
    """Document parse/validation failure, with a dotted location path."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


_KIND_NAMES = {
    "real_line": BlockKind.REAL_LINE,
    "complex_line": BlockKind.COMPLEX_LINE,
    "quaternions": BlockKind.QUATERNIONS,
    "matrix": BlockKind.MATRIX,
}


def _complex_entry(value: Any, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        try:
            return complex(float(value[0]), float(value[1]))
        except (TypeError, ValueError):
            pass
    raise DocumentError(where, "complex entries are numbers or [re, im] pairs")


def _complex_matrix(rows: Any, where: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise DocumentError(where, "expected a nonempty list of rows")
    out = []
    width = None
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise DocumentError(f"{where}[{i}]", "expected a list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DocumentError(f"{where}[{i}]", "ragged rows")
        out.append([_complex_entry(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)])
    return np.array(out, dtype=complex)


def parse_triple_document(doc: dict) -> tuple[SpectralTriple, dict[str, PureState]]:
    if not isinstance(doc, dict):
        raise DocumentError("$", "document must be a JSON object")
    blocks_raw = doc.get("algebra")
    if not isinstance(blocks_raw, list) or not blocks_raw:
        raise DocumentError("algebra", "expected a nonempty list of blocks")
    blocks = []
    for i, b in enumerate(blocks_raw):
        where = f"algebra[{i}]"
        if not isinstance(b, dict) or "kind" not in b:
            raise DocumentError(where, "each block needs a 'kind'")
        kind = _KIND_NAMES.get(b["kind"])
        if kind is None:
            raise DocumentError(f"{where}.kind", f"unknown kind {b['kind']!r}")
        size = int(b.get("size", 1))
        try:
            if kind is BlockKind.MATRIX:
                blocks.append(AlgebraBlock(kind, size=size))
            elif kind is BlockKind.REAL_LINE:
                blocks.append(AlgebraBlock(kind, field_kind="real"))
            elif kind is BlockKind.QUATERNIONS:
                blocks.append(AlgebraBlock(kind, field_kind="quaternion"))
            else:
                blocks.append(AlgebraBlock(kind))
        except TripleError as exc:
            raise DocumentError(where, str(exc)) from exc

    slots_raw = doc.get("slots")
    if not isinstance(slots_raw, list) or not slots_raw:
        raise DocumentError("slots", "expected a nonempty list of slots")
    slots = []
    for i, s in enumerate(slots_raw):
        where = f"slots[{i}]"
        if not isinstance(s, dict) or "block" not in s or "mode" not in s:
            raise DocumentError(where, "each slot needs 'block' and 'mode'")
        try:
            mode = SlotMode(s["mode"])
        except ValueError as exc:
            raise DocumentError(f"{where}.mode", f"unknown mode {s['mode']!r}") from exc
        try:
            slots.append(RepresentationSlot(int(s["block"]), mode, int(s.get("multiplicity", 1))))
        except (TripleError, ValueError) as exc:
            raise DocumentError(where, str(exc)) from exc

    if "dirac" not in doc:
        raise DocumentError("dirac", "missing Dirac matrix")
    dirac = _complex_matrix(doc["dirac"], "dirac")
    grading = None
    if doc.get("grading") is not None:
        try:
            grading = np.asarray([float(v) for v in doc["grading"]])
        except (TypeError, ValueError) as exc:
            raise DocumentError("grading", "expected a list of +/-1 entries") from exc

    try:
        triple = SpectralTriple(
            FiniteAlgebra(blocks), slots, dirac,
            grading=grading, real_form=doc.get("real_form"),
        )
    except (TripleError, ValueError) as exc:
        raise DocumentError("$", str(exc)) from exc

    states: dict[str, PureState] = {}
    for name, s in (doc.get("states") or {}).items():
        where = f"states.{name}"
        if not isinstance(s, dict) or "block" not in s:
            raise DocumentError(where, "each state needs a 'block'")
        vector = None
        if s.get("vector") is not None:
            raw = s["vector"]
            if not isinstance(raw, list) or not raw:
                raise DocumentError(f"{where}.vector", "expected a nonempty list")
            vector = np.array(
                [_complex_entry(v, f"{where}.vector[{k}]") for k, v in enumerate(raw)]
            )
        try:
            state = PureState(int(s["block"]), vector=vector)
            validate_state(triple, state)
        except (TripleError, ValueError) as exc:
            raise DocumentError(where, str(exc)) from exc
        states[name] = state
    return triple, states


def load_triple_document(path: str) -> tuple[SpectralTriple, dict[str, PureState]]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc
    return parse_triple_document(doc)


def _encode_complex(z: complex) -> Any:
    z = complex(z)
    if z.imag == 0.0:
        return z.real
    return [z.real, z.imag]


def triple_to_document(
    triple: SpectralTriple, states: dict[str, PureState] | None = None
) -> dict:
    blocks = []
    for b in triple.algebra.blocks:
        entry: dict[str, Any] = {"kind": b.kind.value}
        if b.kind is BlockKind.MATRIX:
            entry["size"] = b.size
        blocks.append(entry)
    doc: dict[str, Any] = {
        "algebra": blocks,
        "slots": [
            {"block": s.block_index, "mode": s.mode.value, "multiplicity": s.multiplicity}
            for s in triple.slots
        ],
        "dirac": [[_encode_complex(v) for v in row] for row in np.asarray(triple.dirac)],
    }
    if triple.grading is not None:
        doc["grading"] = [float(v) for v in np.diagonal(triple.grading)]
    if triple.real_form:
        doc["real_form"] = True
    if states:
        doc["states"] = {}
        for name, s in states.items():
            entry = {"block": s.block_index}
            if s.vector is not None:
                entry["vector"] = [_encode_complex(v) for v in s.vector]
            doc["states"][name] = entry
    return doc
