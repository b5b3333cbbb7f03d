"""JSON interchange and DOT export for lattices and partial lattices."""

from __future__ import annotations

import json
import os

from latforge.catalog import catalog
from latforge.errors import LatForgeError, ParseError
from latforge.lattice import FiniteLattice
from latforge.partial import PartialLattice


def to_json(obj) -> dict:
    """``{"n", "covers", "names"}``, plus ``"joins"``/``"meets"`` for partial lattices."""
    return obj.to_spec()


def from_json(spec):
    """Build a lattice, or a partial lattice when constraints are present."""
    if not isinstance(spec, dict) or "n" not in spec or "covers" not in spec:
        raise ParseError('expected an object with "n" and "covers"')
    try:
        if "joins" in spec or "meets" in spec:
            return PartialLattice.from_spec(spec)
        return FiniteLattice.from_spec(spec)
    except LatForgeError:
        raise
    except (TypeError, ValueError, KeyError, IndexError) as exc:
        raise ParseError(f"malformed lattice JSON: {exc}") from exc


def dumps(obj, indent=None) -> str:
    return json.dumps(to_json(obj), indent=indent)


def loads(text):
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return from_json(spec)


def load(source):
    """A catalog name such as ``M33`` or ``P_4``, a JSON file path, or JSON text."""
    source = str(source)
    if source.lstrip().startswith("{"):
        return loads(source)
    if os.path.exists(source):
        with open(source) as fh:
            return loads(fh.read())
    return catalog(source)


def _heights(obj):
    if isinstance(obj, FiniteLattice):
        return list(obj.heights)
    # longest chain from a minimal element, by relaxation over the covers
    h = [0] * obj.n
    covers = obj.covers()
    changed = True
    while changed:
        changed = False
        for lo, hi in covers:
            if h[hi] < h[lo] + 1:
                h[hi] = h[lo] + 1
                changed = True
    return h


def _quote(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(obj, name="hasse") -> str:
    """Hasse diagram: one edge per cover, nodes of equal height on one rank."""
    heights = _heights(obj)
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for x in range(obj.n):
        lines.append(f"  n{x} [label={_quote(obj.names[x])}];")
    for h in sorted(set(heights)):
        members = " ".join(f"n{x};" for x in range(obj.n) if heights[x] == h)
        lines.append(f"  {{ rank=same; {members} }}")
    for lo, hi in obj.covers():
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def map_to_json(source, target, f) -> dict:
    """A map between finite structures as element name -> element name."""
    return {source.names[x]: target.names[int(v)] for x, v in enumerate(f)}
