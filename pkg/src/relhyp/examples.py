"""Deterministic instance generators for the acceptance suites."""
from __future__ import annotations

from typing import Callable

from .errors import ParamOutOfRange, UnknownName
from .metric_graph import MetricGraph, SubsetFamily
from .tree_of_spaces import TreeOfSpaces


def _need(cond: bool, msg: str):
    if not cond:
        raise ParamOutOfRange(msg)


def tree(depth: int, valence: int):
    """Rooted tree in which every internal vertex has ``valence`` children."""
    _need(depth >= 0 and valence >= 1, "tree needs depth >= 0, valence >= 1")
    edges, frontier, nxt = [], [0], 1
    for _ in range(depth):
        new = []
        for p in frontier:
            for _ in range(valence):
                edges.append((p, nxt, 2))
                new.append(nxt)
                nxt += 1
        frontier = new
    return MetricGraph.from_edge_list(edges, [0]), SubsetFamily({})


def cycle(n: int):
    _need(n >= 3, "cycle needs n >= 3")
    return MetricGraph.from_edge_list([(i, (i + 1) % n, 2) for i in range(n)]), SubsetFamily({})


def grid(w: int, h: int):
    """w x h grid; vertex y*w + x."""
    _need(w >= 1 and h >= 1 and w * h >= 2, "grid needs at least two vertices")
    edges = []
    for y in range(h):
        for x in range(w):
            v = y * w + x
            if x + 1 < w:
                edges.append((v, v + 1, 2))
            if y + 1 < h:
                edges.append((v, v + w, 2))
    return MetricGraph.from_edge_list(edges), SubsetFamily({})


def free_ball(rank: int, radius: int):
    """Ball of the given radius in the Cayley graph of the free group of given rank."""
    _need(rank >= 1 and radius >= 0, "free_ball needs rank >= 1, radius >= 0")
    letters = [(g, s) for g in range(rank) for s in (1, -1)]
    words = {(): 0}
    frontier = [()]
    edges = []
    for _ in range(radius):
        new = []
        for w in frontier:
            for g, s in letters:
                if w and w[-1] == (g, -s):
                    continue
                u = w + ((g, s),)
                words[u] = len(words)
                edges.append((words[w], words[u], 2))
                new.append(u)
        frontier = new
    return MetricGraph.from_edge_list(edges, [0]), SubsetFamily({})


def horoball(base_n: int, depth: int, count: int = 2, gap: int = 2, cone: str = "tower"):
    """``count`` combinatorial horoball towers over n-cycles, hung off a hub by paths.

    Level k of a tower repeats the base cycle and joins vertices at most 2^k
    base-steps apart by unit edges; consecutive levels are joined vertically.  Each tower
    meets the rest of the graph only through its base vertex 0, so a whole
    tower is convex; ``cone="tower"`` marks whole towers (coning a horoball is
    coarsely the same as coning its horosphere), ``cone="base"`` marks level 0.
    """
    _need(base_n >= 3 and depth >= 0 and count >= 1 and gap >= 1, "horoball parameters out of range")
    _need(cone in ("tower", "base"), "cone must be 'tower' or 'base'")
    edges = []
    subsets = {}
    hub = 0
    nxt = 1
    for t in range(count):
        ids = {}
        for k in range(depth + 1):
            for v in range(base_n):
                ids[v, k] = nxt
                nxt += 1
        for k in range(depth + 1):
            reach = min(2 ** k, base_n // 2)
            for v in range(base_n):
                for s in range(1, reach + 1):
                    edges.append((ids[v, k], ids[(v + s) % base_n, k], 2))
            if k < depth:
                edges.extend((ids[v, k], ids[v, k + 1], 2) for v in range(base_n))
        prev = hub
        for _ in range(gap - 1):
            edges.append((prev, nxt, 2))
            prev = nxt
            nxt += 1
        edges.append((prev, ids[0, 0], 2))
        if cone == "tower":
            subsets[f"H{t}"] = list(ids.values())
        else:
            subsets[f"H{t}"] = [ids[v, 0] for v in range(base_n)]
    return MetricGraph.from_edge_list(edges), SubsetFamily(subsets)


def _line(spaces: list, families: list, edge_space, edge_family, map0: Callable, map1: Callable,
          vname: str = "t", ename: str = "s") -> TreeOfSpaces:
    L = len(spaces)
    tv = [f"{vname}{i}" for i in range(L)]
    te = {f"{ename}{i}": (tv[i], tv[i + 1]) for i in range(L - 1)}
    maps = {}
    for i, e in enumerate(te):
        maps[(e, 0)] = {x: map0(i, x) for x in edge_space.vertices}
        maps[(e, 1)] = {x: map1(i, x) for x in edge_space.vertices}
    return TreeOfSpaces(
        tv, te,
        dict(zip(tv, spaces)), dict(zip(tv, families)),
        {e: edge_space for e in te}, {e: edge_family for e in te},
        maps,
    )


def parallel_cones(N: int, D0: int, height: int = 2) -> TreeOfSpaces:
    """Line of N+1 ladder spaces, horosphere columns at distance D0, identity gluings.

    Each vertex space is the (D0+1) x height grid with columns 0 and D0
    marked; the cone locus is two disjoint paths of N tree edges.
    """
    _need(N >= 1 and D0 >= 1 and height >= 1, "parallel_cones needs N >= 1, D0 >= 1, height >= 1")
    g, _ = grid(D0 + 1, height)
    w = D0 + 1
    fam = SubsetFamily({
        "left": [y * w for y in range(height)],
        "right": [y * w + D0 for y in range(height)],
    })
    ident = lambda i, x: x  # noqa: E731
    return _line([g] * (N + 1), [fam] * (N + 1), g, fam, ident, ident)


def marked_cycle(n: int = 8):
    """n-cycle with two antipodal arcs {0, 1} and {n/2, n/2 + 1} marked."""
    _need(n >= 8 and n % 2 == 0, "marked_cycle needs even n >= 8")
    g, _ = cycle(n)
    return g, SubsetFamily({"a": [0, 1], "b": [n // 2, n // 2 + 1]})


def line_of_spaces(base=None, L: int = 4, map="identity") -> TreeOfSpaces:
    """Line of L copies of ``base`` (graph, family); edge maps identity then ``map``.

    ``map`` is "identity", "rotate:<k>" (vertex i -> i + k mod n, for cycles)
    or a dict on vertices.
    """
    _need(L >= 1, "line_of_spaces needs L >= 1")
    g, fam = base if base is not None else marked_cycle(8)
    if map == "identity":
        phi = {x: x for x in g.vertices}
    elif isinstance(map, str) and map.startswith("rotate:"):
        k = int(map.split(":", 1)[1])
        n = len(g)
        phi = {x: (x + k) % n for x in g.vertices}
    else:
        phi = dict(map)
    return _line([g] * L, [fam] * L, g, fam, lambda i, x: x, lambda i, x: phi[x])


GENERATORS = {
    "tree": tree,
    "cycle": cycle,
    "grid": grid,
    "free_ball": free_ball,
    "horoball": horoball,
    "parallel_cones": parallel_cones,
    "line_of_spaces": line_of_spaces,
}


def generate(name: str, *args, **params):
    try:
        fn = GENERATORS[name]
    except KeyError:
        raise UnknownName(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}") from None
    return fn(*args, **params)
