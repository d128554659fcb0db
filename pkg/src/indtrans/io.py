"""JSON files for graphs, transversals and reduction inputs."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

from .errors import InputError
from .generators import GraphFamilyInstance, ListColoringInstance
from .graph import MultipartiteGraph, Transversal


def _read(path) -> Any:
    """Parse a JSON file (``-`` reads stdin), reporting line and column on syntax errors."""
    name = str(path)
    try:
        text = sys.stdin.read() if name == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{name}: cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{name}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{where}: expected an integer, got {json.dumps(x)}")
    return x


def _list(x, where: str) -> list:
    if not isinstance(x, list):
        raise InputError(f"{where}: expected a list, got {type(x).__name__}")
    return x


def _field(doc, key: str, name: str):
    if not isinstance(doc, dict):
        raise InputError(f"{name}: top level must be an object")
    if key not in doc:
        raise InputError(f"{name}: missing field {key!r}")
    return doc[key]


def _pairs(raw, where: str) -> list[tuple[int, int]]:
    out = []
    for i, e in enumerate(_list(raw, where)):
        e = _list(e, f"{where}[{i}]")
        if len(e) != 2:
            raise InputError(f"{where}[{i}]: an edge needs exactly two endpoints")
        out.append((_int(e[0], f"{where}[{i}][0]"), _int(e[1], f"{where}[{i}][1]")))
    return out


def graph_from_json(doc, name: str = "graph") -> MultipartiteGraph:
    parts = [
        [_int(v, f"{name}: parts[{k}][{i}]") for i, v in enumerate(_list(p, f"{name}: parts[{k}]"))]
        for k, p in enumerate(_list(_field(doc, "parts", name), f"{name}: parts"))
    ]
    edges = _pairs(_field(doc, "edges", name), f"{name}: edges")
    try:
        return MultipartiteGraph(parts, edges)
    except InputError as exc:
        raise InputError(f"{name}: {exc}") from exc


def graph_to_json(g: MultipartiteGraph) -> dict:
    return {"parts": [p.tolist() for p in g.parts], "edges": g.edges.tolist()}


def load_graph(path) -> MultipartiteGraph:
    return graph_from_json(_read(path), str(path))


def write_json(obj, path) -> None:
    text = json.dumps(obj, indent=None, separators=(",", ":")) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def save_graph(g: MultipartiteGraph, path) -> None:
    write_json(graph_to_json(g), path)


def load_transversal(path) -> Transversal:
    doc = _read(path)
    if isinstance(doc, dict) and "transversal" in doc:
        doc = doc["transversal"]
    if not isinstance(doc, dict):
        raise InputError(f"{path}: a transversal is an object mapping part index to vertex id")
    try:
        return Transversal.from_json(doc)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def save_transversal(t: Transversal, path) -> None:
    write_json(t.to_json(), path)


def list_coloring_from_json(doc, name: str = "instance") -> ListColoringInstance:
    edges = _pairs(_field(doc, "edges", name), f"{name}: edges")
    raw = _field(doc, "lists", name)
    if not isinstance(raw, dict):
        raise InputError(f"{name}: lists must be an object keyed by vertex id")
    lists = {}
    for key, cs in raw.items():
        try:
            v = int(key)
        except ValueError:
            raise InputError(f"{name}: lists key {key!r} is not an integer") from None
        lists[v] = [_int(c, f"{name}: lists[{key}][{i}]") for i, c in enumerate(_list(cs, f"{name}: lists[{key}]"))]
    return ListColoringInstance(edges, lists)


def list_coloring_to_json(inst: ListColoringInstance) -> dict:
    return {
        "edges": [list(e) for e in inst.edges],
        "lists": {str(v): sorted(inst.lists[v]) for v in inst.vertices},
    }


def graph_family_from_json(doc, name: str = "instance") -> GraphFamilyInstance:
    n = _int(_field(doc, "vertices", name), f"{name}: vertices")
    graphs = [
        _pairs(h, f"{name}: graphs[{i}]")
        for i, h in enumerate(_list(_field(doc, "graphs", name), f"{name}: graphs"))
    ]
    return GraphFamilyInstance(n, graphs)


def load_list_coloring(path) -> ListColoringInstance:
    return list_coloring_from_json(_read(path), str(path))


def load_graph_family(path) -> GraphFamilyInstance:
    return graph_family_from_json(_read(path), str(path))
