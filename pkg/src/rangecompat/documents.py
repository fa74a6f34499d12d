"""JSON document formats for spaces, maps and reports.

These are the CLI's wire formats; everything is decimal integers,
matrices are flat row-major arrays, and writing is always canonical
(echelon basis, reduced offset, sorted keys), so export -> load ->
export is byte-stable.
"""

from __future__ import annotations

import json

import numpy as np

from .algebra import FieldSpec
from .errors import DomainError
from .opspace import Direction, OperatorSpace
from .solver import MapClass, OperatorMap


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def field_to_doc(field):
    doc = {"p": field.p, "k": field.k}
    if field.k > 1:
        doc["modulus"] = list(field.modulus)
    return doc


def field_from_doc(doc):
    try:
        return FieldSpec(int(doc["p"]), int(doc.get("k", 1)),
                         tuple(doc["modulus"]) if "modulus" in doc else None)
    except KeyError as exc:
        raise DomainError(f"field document misses {exc}") from None


def space_to_doc(space, direction=None):
    doc = {
        "field": field_to_doc(space.field),
        "n": space.n,
        "p_cols": space.p,
        "basis": [[int(v) for v in row] for row in space.translation.basis],
    }
    if not space.is_linear:
        doc["offset"] = [int(v) for v in space.flat.offset]
    if direction is not None:
        doc["direction"] = [int(v) for v in direction.vector]
    return doc


def space_from_doc(doc):
    try:
        field = field_from_doc(doc["field"])
        n, p = int(doc["n"]), int(doc["p_cols"])
        basis = doc["basis"]
    except KeyError as exc:
        raise DomainError(f"space document misses {exc}") from None
    mats = [np.asarray(row, dtype=np.uint8).reshape(n, p) for row in basis]
    if not mats:
        mats = [np.zeros((n, p), dtype=np.uint8)]
    offset = None
    if doc.get("offset") is not None:
        offset = np.asarray(doc["offset"], dtype=np.uint8).reshape(n, p)
    space = OperatorSpace.from_matrices(field, n, p, mats, offset=offset)
    direction = None
    if doc.get("direction") is not None:
        direction = Direction(field, np.asarray(doc["direction"], dtype=np.uint8))
    return space, direction


def map_to_doc(F):
    return {
        "class": F.map_class.value,
        "base": [int(v) for v in F.base_value],
        "generators": [[int(v) for v in row] for row in F.gen_values],
    }


def map_from_doc(space, doc):
    return OperatorMap(space, MapClass.parse(doc["class"]),
                       np.asarray(doc["base"], dtype=np.uint8),
                       np.asarray(doc["generators"], dtype=np.uint8).reshape(-1, space.n))
