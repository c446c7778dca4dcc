"""Lossless JSON text documents for sets.

A document is a JSON object with a ``kind`` of ``cellset``, ``boxunion`` or
``shape`` (rational balls).  All rationals are exact strings like ``"3/2"``
(integers may drop the denominator); floats are rejected to keep every value
exact.  Printing is canonical — sorted cells, reduced fractions, fixed key
order — so parse/print round-trips are the identity on canonical text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from ._util import frac_str
from .lattice import BoxUnion, CellSet, RatBox
from .pixellation import L1Ball

KINDS = ("cellset", "boxunion", "shape")


class ParseError(ValueError):
    """A malformed document; the message names the offending field."""


@dataclass(frozen=True)
class SetDocument:
    """Parsed form of a set document; exactly one payload group is set."""

    kind: str
    dimension: int
    resolution: Fraction | None = None
    cells: tuple[tuple[int, ...], ...] | None = None
    boxes: tuple[tuple[tuple[Fraction, ...], tuple[Fraction, ...]], ...] | None = None
    center: tuple[Fraction, ...] | None = None
    radius: Fraction | None = None


def _fail(where: str, message: str) -> ParseError:
    return ParseError(f"{where}: {message}")


def _parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise _fail(where, f"expected an exact rational string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise _fail(where, f"malformed rational {value!r}") from None
    raise _fail(where, f"expected an exact rational string, got {type(value).__name__}")


def _parse_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(where, f"expected an integer, got {value!r}")
    return value


def _parse_vector(value, dimension: int, where: str) -> tuple[Fraction, ...]:
    if not isinstance(value, list) or len(value) != dimension:
        raise _fail(where, f"expected a list of {dimension} rationals")
    return tuple(_parse_rational(v, f"{where}[{i}]") for i, v in enumerate(value))


def _require_fields(obj: dict, allowed: tuple[str, ...], where: str) -> None:
    for key in obj:
        if key not in allowed:
            raise _fail(where, f"unexpected field {key!r}")
    for key in allowed:
        if key not in obj:
            raise _fail(where, f"missing field {key!r}")


def parse_set(text: str) -> SetDocument:
    """Parse a document, rejecting duplicates, floats and malformed fields."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise _fail("document", "top level must be a JSON object")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise _fail("kind", f"must be one of {', '.join(KINDS)}; got {kind!r}")
    n = _parse_int(obj.get("dimension"), "dimension")
    if n < 0:
        raise _fail("dimension", "must be >= 0")

    if kind == "cellset":
        _require_fields(obj, ("kind", "dimension", "resolution", "cells"), "document")
        resolution = _parse_rational(obj["resolution"], "resolution")
        if resolution <= 0:
            raise _fail("resolution", "must be positive")
        raw = obj["cells"]
        if not isinstance(raw, list):
            raise _fail("cells", "expected a list of cells")
        cells = []
        for i, item in enumerate(raw):
            where = f"cells[{i}]"
            if not isinstance(item, list) or len(item) != n:
                raise _fail(where, f"expected a list of {n} integers")
            cells.append(tuple(_parse_int(v, f"{where}[{j}]") for j, v in enumerate(item)))
        if len(set(cells)) != len(cells):
            dup = next(c for i, c in enumerate(cells) if c in cells[:i])
            raise _fail("cells", f"duplicate cell {list(dup)}")
        return SetDocument(
            kind="cellset",
            dimension=n,
            resolution=resolution,
            cells=tuple(sorted(cells)),
        )

    if kind == "boxunion":
        _require_fields(obj, ("kind", "dimension", "boxes"), "document")
        raw = obj["boxes"]
        if not isinstance(raw, list):
            raise _fail("boxes", "expected a list of boxes")
        boxes = []
        for i, item in enumerate(raw):
            where = f"boxes[{i}]"
            if not isinstance(item, dict):
                raise _fail(where, "expected an object with 'min' and 'max'")
            _require_fields(item, ("min", "max"), where)
            mins = _parse_vector(item["min"], n, f"{where}.min")
            maxs = _parse_vector(item["max"], n, f"{where}.max")
            for j in range(n):
                if mins[j] > maxs[j]:
                    raise _fail(f"{where}.min[{j}]", "exceeds the matching max")
            boxes.append((mins, maxs))
        return SetDocument(kind="boxunion", dimension=n, boxes=tuple(sorted(boxes)))

    _require_fields(obj, ("kind", "dimension", "shape"), "document")
    shape = obj["shape"]
    if not isinstance(shape, dict):
        raise _fail("shape", "expected an object")
    if shape.get("type") != "ball":
        raise _fail("shape.type", f"must be 'ball'; got {shape.get('type')!r}")
    _require_fields(shape, ("type", "center", "radius"), "shape")
    center = _parse_vector(shape["center"], n, "shape.center")
    radius = _parse_rational(shape["radius"], "shape.radius")
    if radius <= 0:
        raise _fail("shape.radius", "must be positive")
    return SetDocument(kind="shape", dimension=n, center=center, radius=radius)


def print_set(doc: SetDocument) -> str:
    """Canonical text for a document: fixed key order, sorted payload."""
    obj: dict = {"kind": doc.kind, "dimension": doc.dimension}
    if doc.kind == "cellset":
        obj["resolution"] = frac_str(doc.resolution)
        obj["cells"] = [list(c) for c in sorted(doc.cells)]
    elif doc.kind == "boxunion":
        obj["boxes"] = [
            {"min": [frac_str(v) for v in mins], "max": [frac_str(v) for v in maxs]}
            for mins, maxs in sorted(doc.boxes)
        ]
    elif doc.kind == "shape":
        obj["shape"] = {
            "type": "ball",
            "center": [frac_str(v) for v in doc.center],
            "radius": frac_str(doc.radius),
        }
    else:
        raise ValueError(f"unknown kind {doc.kind!r}")
    return json.dumps(obj, indent=2) + "\n"


def to_object(doc: SetDocument) -> CellSet | BoxUnion | L1Ball:
    """Build the geometric object a document describes."""
    if doc.kind == "cellset":
        return CellSet(doc.dimension, doc.cells, doc.resolution)
    if doc.kind == "boxunion":
        return BoxUnion(doc.dimension, [RatBox(m, M) for m, M in doc.boxes])
    return L1Ball(doc.center, doc.radius)


def from_object(obj: CellSet | BoxUnion | L1Ball) -> SetDocument:
    """Describe a geometric object as a canonical document."""
    if isinstance(obj, CellSet):
        return SetDocument(
            kind="cellset",
            dimension=obj.dimension,
            resolution=obj.resolution,
            cells=obj.sorted_cells(),
        )
    if isinstance(obj, BoxUnion):
        return SetDocument(
            kind="boxunion",
            dimension=obj.dimension,
            boxes=tuple(sorted((b.mins, b.maxs) for b in obj.boxes)),
        )
    if isinstance(obj, L1Ball):
        return SetDocument(
            kind="shape", dimension=obj.dimension, center=obj.center, radius=obj.radius
        )
    raise TypeError(f"cannot serialize {type(obj).__name__}")
