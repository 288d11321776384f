"""JSON persistence for buildings and subcomplexes, plus DOT export."""

from __future__ import annotations

import hashlib
import json

from .building import Building, assemble
from .convexity import ConvexChamberSubcomplex, subcomplex
from .coxeter import build_weyl, parse_diagram
from .errors import HashMismatch, ParseError
from .geometries import FlagGeometry
from .gf import Flag

FORMAT = "crbuild-building/1"


def canonical_hash(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def building_to_json(b: Building, spec: str | None = None) -> dict:
    geom = b.geometry
    header = {
        "format": FORMAT,
        "diagram": str(b.weyl.diagram),
        "chamber_count": b.n,
        "geometry": spec or b.spec or (geom.spec if geom else None),
    }
    if geom is not None:
        header["labels"] = [f.serialize() for f in geom.flags]
    elif b.labels is not None:
        header["labels"] = list(b.labels)
    panels = {str(i): [list(block) for block in b.panels[i]] for i in b.types}
    payload = {"header": header, "panels": panels}
    payload["hash"] = canonical_hash(payload)
    return payload


def building_from_json(data: dict, validate: bool = True) -> Building:
    try:
        header, panels_raw, stored = data["header"], data["panels"], data["hash"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"building file lacks {exc}") from exc
    if canonical_hash({"header": header, "panels": panels_raw}) != stored:
        raise HashMismatch("building file content does not match its hash")
    if header.get("format") != FORMAT:
        raise ParseError(f"unknown building format {header.get('format')!r}")
    weyl = build_weyl(parse_diagram(header["diagram"]))
    panels = {int(i): [tuple(block) for block in blocks] for i, blocks in panels_raw.items()}
    spec = header.get("geometry") or ""
    geometry = None
    labels = header.get("labels")
    if spec and not spec.startswith("thin:"):
        kind = "C2" if spec.startswith("C2") else "A"
        p = int(spec.split("p=")[1])
        rank = weyl.diagram.rank
        dim = 4 if kind == "C2" else rank + 1
        flags = [Flag.deserialize(f, p, dim) for f in labels]
        geometry = FlagGeometry(kind, rank, p, flags)
        labels = flags
    b = assemble(weyl, panels, labels=labels, geometry=geometry, validate=validate)
    b.spec = spec or None
    b.hash = stored
    return b


def building_hash(b: Building) -> str:
    if b.hash is None:
        b.hash = building_to_json(b, b.spec)["hash"]
    return b.hash


def save_building(b: Building, path, spec: str | None = None) -> str:
    payload = building_to_json(b, spec)
    with open(path, "w") as fh:
        fh.write(dumps(payload))
    return payload["hash"]


def load_building(path, validate: bool = True) -> Building:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
    return building_from_json(data, validate=validate)


def subcomplex_to_json(omega: ConvexChamberSubcomplex, building_hash: str, generator: str = "") -> dict:
    return {"building_hash": building_hash, "generator": generator,
            "chambers": omega.sorted_chambers}


def load_subcomplex(path, b: Building) -> ConvexChamberSubcomplex:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
    if data.get("building_hash") != building_hash(b):
        raise HashMismatch("subcomplex was derived from a different building")
    return subcomplex(b, data["chambers"])


def to_dot(b: Building, marked=()) -> str:
    marked = set(marked)
    lines = ["graph chambers {", "  node [shape=circle];"]
    for c in b.chambers:
        style = ' style=filled fillcolor="#f4a460"' if c in marked else ""
        lines.append(f'  c{c} [label="{c}"{style}];')
    for c, d, i in b.edges():
        lines.append(f'  c{c} -- c{d} [label="{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
