"""Line-based text format for graphs with subset families.

    # comment
    e <u> <v> <half-units>
    subset <name> <v1> <v2> ...

Tokens that look like integers are read as ``int`` vertices.
"""
from __future__ import annotations

from typing import Iterable

from .metric_graph import MetricGraph, SubsetFamily, vertex_key


def _token(tok: str):
    if tok.lstrip("-").isdigit():
        return int(tok)
    return tok


def _fmt(v) -> str:
    s = str(v)
    if not s or any(c.isspace() for c in s):
        raise ValueError(f"vertex {v!r} has no single-token text form")
    return s


def parse_graph_lines(lines: Iterable[str]) -> tuple[list, list, dict]:
    edges, verts, subsets = [], [], {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "e":
            if len(parts) != 4:
                raise ValueError(f"line {lineno}: expected 'e <u> <v> <half-units>'")
            edges.append((_token(parts[1]), _token(parts[2]), int(parts[3])))
        elif parts[0] == "v":
            verts.extend(_token(p) for p in parts[1:])
        elif parts[0] == "subset":
            if len(parts) < 3:
                raise ValueError(f"line {lineno}: subset needs a name and members")
            subsets[parts[1]] = [_token(p) for p in parts[2:]]
        else:
            raise ValueError(f"line {lineno}: unknown record {parts[0]!r}")
    return edges, verts, subsets


def parse_graph(text: str) -> tuple[MetricGraph, SubsetFamily]:
    edges, verts, subsets = parse_graph_lines(text.splitlines())
    g = MetricGraph.from_edge_list(edges, verts)
    fam = SubsetFamily(subsets)
    fam.validate(g)
    return g, fam


def dump_graph_lines(g: MetricGraph, fam: SubsetFamily | None = None) -> list[str]:
    out = []
    if len(g) == 1:
        out.append(f"v {_fmt(g.vertices[0])}")
    for u, v, w in sorted(g.edges(), key=lambda e: (vertex_key(e[0]), vertex_key(e[1]))):
        out.append(f"e {_fmt(u)} {_fmt(v)} {w}")
    if fam is not None:
        for name, s in fam.items():
            members = " ".join(_fmt(x) for x in sorted(s, key=vertex_key))
            out.append(f"subset {name} {members}")
    return out


def dump_graph(g: MetricGraph, fam: SubsetFamily | None = None) -> str:
    return "\n".join(dump_graph_lines(g, fam)) + "\n"
