"""JSON encodings for complexes, supports, opens, and ring maps.

Rings and their elements serialize through the descriptor's own methods;
this module layers the composite schemas used by the command line: a
complex is {"ring", "lo", "hi", "ranks", "differentials"} with matrices as
nested row-major arrays of element encodings, and an open set names its
finitary closed complement (plus an optional principal witness).
"""

from __future__ import annotations

from typing import Any

from .complexes import Complex
from .errors import MalformedInput
from .linalg import Matrix
from .presheaf import BasicOpen, open_from_complement
from .rings import Ring, ring_from_json
from .supports import Support, support_from_json


def matrix_to_json(m: Matrix) -> list:
    return [[m.ring.element_to_json(x) for x in row] for row in m.entries]


def matrix_from_json(ring: Ring, data: Any, rows: int, cols: int) -> Matrix:
    if not isinstance(data, list) or len(data) != rows:
        raise MalformedInput(f"matrix needs {rows} rows")
    entries = []
    for row in data:
        if not isinstance(row, list) or len(row) != cols:
            raise MalformedInput(f"matrix rows need {cols} entries")
        entries.append(tuple(ring.element_from_json(x) for x in row))
    return Matrix(ring, rows, cols, tuple(entries))


def complex_to_json(p: Complex) -> dict:
    return {
        "ring": p.ring.to_json(),
        "lo": p.lo,
        "hi": p.hi,
        "ranks": list(p.ranks),
        "differentials": [matrix_to_json(d) for d in p.differentials],
    }


def complex_from_json(data: Any) -> Complex:
    if not isinstance(data, dict):
        raise MalformedInput("a complex is a JSON object")
    try:
        ring = ring_from_json(data["ring"])
        lo = int(data["lo"])
        ranks = [int(r) for r in data["ranks"]]
        if any(r < 0 for r in ranks):
            raise MalformedInput("ranks must be nonnegative")
        if "hi" in data and ranks and int(data["hi"]) - lo + 1 != len(ranks):
            raise MalformedInput("degree window does not match the rank list")
        diffs_json = data.get("differentials", [])
        if len(diffs_json) != max(len(ranks) - 1, 0):
            raise MalformedInput("need one differential per adjacent degree pair")
        diffs = [
            matrix_from_json(ring, dj, ranks[j], ranks[j + 1])
            for j, dj in enumerate(diffs_json)
        ]
        return Complex(ring, lo, tuple(ranks), tuple(diffs))
    except MalformedInput:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad complex encoding: {exc}") from exc


def open_to_json(v: BasicOpen) -> dict:
    return {
        "complement": v.complement.to_json(),
        "witness": v.ring.element_to_json(v.witness),
    }


def open_from_json(ring: Ring, data: Any) -> BasicOpen:
    if not isinstance(data, dict) or "complement" not in data:
        raise MalformedInput("an open set is encoded by its complement support")
    complement = support_from_json(ring, data["complement"])
    if "witness" in data:
        witness = ring.element_from_json(data["witness"])
        try:
            return BasicOpen(ring, complement, witness)
        except ValueError as exc:
            raise MalformedInput(str(exc)) from exc
    return open_from_complement(ring, complement)
