"""Reading and writing quivers: JSON, the ``name: from -> to`` edge list, and DOT."""

from __future__ import annotations

import json
import re
from pathlib import Path as FsPath

from .errors import ParseError
from .quiver import Arrow, Quiver

_EDGE = re.compile(r"^\s*([^:\s]+)\s*:\s*(\S+)\s*->\s*(\S+)\s*$")
_VERTEX = re.compile(r"^\s*vertex\s+(\S+)\s*$")


def parse_quiver_json(text: str, source: str | None = None) -> Quiver:
    """Parse ``{"vertices": [...], "arrows": [{"name", "from", "to"}, ...]}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, source) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", 1, 1, source)
    vertices = data.get("vertices", [])
    arrows = data.get("arrows", [])
    if not isinstance(vertices, list) or not isinstance(arrows, list):
        raise ParseError("'vertices' and 'arrows' must be lists", source=source)
    seen_v: set[str] = set()
    for k, v in enumerate(vertices):
        if str(v) in seen_v:
            raise ParseError(f"duplicate vertex {v!r} at vertices[{k}]", source=source)
        seen_v.add(str(v))
    seen_a: set[str] = set()
    parsed = []
    for k, a in enumerate(arrows):
        if not isinstance(a, dict) or not {"name", "from", "to"} <= a.keys():
            raise ParseError(f"arrows[{k}] needs 'name', 'from' and 'to'", source=source)
        name = str(a["name"])
        if name in seen_a:
            raise ParseError(f"duplicate arrow name {name!r} at arrows[{k}]", source=source)
        seen_a.add(name)
        for end in ("from", "to"):
            if str(a[end]) not in seen_v:
                raise ParseError(f"arrows[{k}] refers to undeclared vertex {a[end]!r}",
                                 source=source)
        parsed.append(Arrow(name, str(a["from"]), str(a["to"])))
    return Quiver(tuple(str(v) for v in vertices), tuple(parsed))


def parse_edge_list(text: str, source: str | None = None) -> Quiver:
    """Parse one arrow per line (``name: from -> to``) plus optional ``vertex v`` lines.

    Blank lines and ``#`` comments are ignored; vertices are ordered by first
    appearance.
    """
    vertices: list[str] = []
    arrows: list[Arrow] = []
    names: dict[str, int] = {}
    seen_vertex_lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if m := _VERTEX.match(line):
            v = m.group(1)
            if v in seen_vertex_lines:
                raise ParseError(f"duplicate vertex line for {v!r} "
                                 f"(first on line {seen_vertex_lines[v]})",
                                 lineno, m.start(1) + 1, source)
            seen_vertex_lines[v] = lineno
            if v not in vertices:
                vertices.append(v)
            continue
        m = _EDGE.match(line)
        if not m:
            raise ParseError(f"expected 'name: from -> to', got {raw.strip()!r}",
                             lineno, 1, source)
        name, frm, to = m.groups()
        if name in names:
            raise ParseError(f"duplicate arrow name {name!r} (first on line {names[name]})",
                             lineno, m.start(1) + 1, source)
        names[name] = lineno
        for v in (frm, to):
            if v not in vertices:
                vertices.append(v)
        arrows.append(Arrow(name, frm, to))
    return Quiver(tuple(vertices), tuple(arrows))


def parse_quiver(text: str, source: str | None = None) -> Quiver:
    """JSON if the text looks like an object, otherwise the edge-list format."""
    if text.lstrip().startswith("{"):
        return parse_quiver_json(text, source)
    return parse_edge_list(text, source)


def load_quiver(path: str | FsPath) -> Quiver:
    path = FsPath(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", source=str(path)) from None
    return parse_quiver(text, str(path))


def quiver_to_json(q: Quiver) -> dict:
    return {
        "vertices": list(q.vertices),
        "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in q.arrows],
    }


def quiver_to_edge_list(q: Quiver) -> str:
    lines = [f"{a.name}: {a.source} -> {a.target}" for a in q.arrows]
    used = {v for a in q.arrows for v in (a.source, a.target)}
    lines += [f"vertex {v}" for v in q.vertices if v not in used]
    return "\n".join(lines) + ("\n" if lines else "")


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def quiver_to_dot(q: Quiver, name: str = "Q") -> str:
    out = [f"digraph {_dot_id(name)} {{"]
    for v in q.vertices:
        out.append(f"  {_dot_id(v)};")
    for a in q.arrows:
        out.append(f"  {_dot_id(a.source)} -> {_dot_id(a.target)} [label={_dot_id(a.name)}];")
    out.append("}")
    return "\n".join(out) + "\n"
