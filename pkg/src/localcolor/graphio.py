"""Reading and writing graphs and colorings as JSON or edge-list text."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping

from localcolor.errors import InputError
from localcolor.graph import Graph


def graph_to_dict(g: Graph) -> dict:
    if g.vertices and g.vertices != tuple(range(1, g.n + 1)):
        raise InputError("JSON graph format needs vertex ids 1..n")
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def graph_from_dict(data) -> Graph:
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise InputError('graph JSON must be an object with "n" and "edges"')
    n = data["n"]
    if not isinstance(n, int) or n < 0:
        raise InputError(f"bad vertex count {n!r}")
    edges = []
    for e in data["edges"]:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise InputError(f"bad edge entry {e!r}")
        u, v = e
        if not all(isinstance(x, int) and 1 <= x <= n for x in (u, v)):
            raise InputError(f"edge {e!r} has an id outside 1..{n}")
        edges.append((u, v))
    g = Graph.from_edges(edges, vertices=range(1, n + 1))
    if g.m != len(edges):
        raise InputError("duplicate edges in input")
    return g


def to_json(g: Graph) -> str:
    return json.dumps(graph_to_dict(g))


def from_json(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    return graph_from_dict(data)


def to_edgelist(g: Graph) -> str:
    lines = [f"# n {g.n}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def from_edgelist(text: str) -> Graph:
    n = None
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "n":
                n = int(parts[1])
            continue
        parts = line.split()
        try:
            u, v = int(parts[0]), int(parts[1])
        except (ValueError, IndexError):
            raise InputError(f"line {lineno}: expected 'u v', got {line!r}") from None
        if len(parts) != 2:
            raise InputError(f"line {lineno}: expected 'u v', got {line!r}")
        edges.append((u, v))
    if n is None:
        n = max((max(e) for e in edges), default=0)
    return graph_from_dict({"n": n, "edges": edges})


def load_graph(path) -> Graph:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if text.lstrip().startswith("{"):
        return from_json(text)
    return from_edgelist(text)


def save_graph(g: Graph, path) -> None:
    path = Path(path)
    if path.suffix in (".txt", ".edges"):
        path.write_text(to_edgelist(g))
    else:
        path.write_text(to_json(g) + "\n")


def colors_to_json(colors: Mapping[int, int], palette: int) -> str:
    return json.dumps(
        {"palette": palette, "colors": {str(v): colors[v] for v in sorted(colors)}}, indent=None
    )


def load_colors(path) -> tuple[int, dict[int, int]]:
    try:
        data = json.loads(Path(path).read_text())
        palette = int(data["palette"])
        colors = {int(k): int(c) for k, c in data["colors"].items()}
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"cannot parse coloring {path}: {exc}") from None
    return palette, colors
