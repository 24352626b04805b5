"""Finite weighted graphs as exact geodesic metric spaces.

Lengths are integer *half-units*: an edge of weight 2 has length 1 and an
edge of weight 1 has length 1/2.  Every distance in the package is an exact
integer in these units.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .errors import (
    DisconnectedGraph,
    DisconnectedSubset,
    InvalidWeight,
    UnknownVertex,
)

Vertex = Hashable


def vertex_key(v):
    """Global vertex order: integers first (numerically), then strings, then tuples."""
    if isinstance(v, bool):
        return (0, int(v))
    if isinstance(v, (int, np.integer)):
        return (0, int(v))
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(vertex_key(x) for x in v))
    return (3, repr(v))


class MetricGraph:
    """Immutable connected weighted graph with a cached all-pairs distance table.

    Vertices are stored in the global order given by :func:`vertex_key`, so
    integer indices and vertex order agree.
    """

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[tuple[Vertex, Vertex, int]]):
        verts = sorted(set(vertices), key=vertex_key)
        self.vertices: tuple = tuple(verts)
        self.index: dict = {v: i for i, v in enumerate(verts)}
        n = len(verts)
        adj: list[dict[int, int]] = [dict() for _ in range(n)]
        for u, v, w in edges:
            if not isinstance(w, (int, np.integer)) or w < 1:
                raise InvalidWeight(f"edge ({u!r}, {v!r}) has weight {w!r}; weights are positive integers")
            if u == v:
                raise InvalidWeight(f"edge ({u!r}, {v!r}) is a loop")
            i, j = self.index[u], self.index[v]
            w = int(w)
            # parallel edges collapse to the lightest
            if j not in adj[i] or adj[i][j] > w:
                adj[i][j] = w
                adj[j][i] = w
        self._adj = tuple(tuple(sorted(a.items())) for a in adj)
        self._dist: np.ndarray | None = None
        self._check_connected()

    # construction -----------------------------------------------------------

    @classmethod
    def from_edge_list(cls, edges: Sequence[tuple[Vertex, Vertex, int]], vertices: Iterable[Vertex] = ()):
        edges = list(edges)
        extra = list(vertices)
        if not edges and len(set(extra)) != 1:
            raise DisconnectedGraph("empty edge list")
        verts = {u for u, _, _ in edges} | {v for _, v, _ in edges} | set(extra)
        return cls(verts, edges)

    def _check_connected(self):
        n = len(self.vertices)
        if n == 0:
            raise DisconnectedGraph("graph has no vertices")
        ncomp, labels = connected_components(self._csr(), directed=False)
        if ncomp > 1:
            a = self.vertices[int(np.flatnonzero(labels == labels[0])[0])]
            b = self.vertices[int(np.flatnonzero(labels != labels[0])[0])]
            raise DisconnectedGraph(f"graph has {ncomp} components, e.g. one containing {a!r} and one containing {b!r}")

    def _csr(self) -> csr_matrix:
        n = len(self.vertices)
        rows, cols, data = [], [], []
        for i, nbrs in enumerate(self._adj):
            for j, w in nbrs:
                rows.append(i)
                cols.append(j)
                data.append(w)
        return csr_matrix((np.array(data, dtype=np.float64), (rows, cols)), shape=(n, n))

    # basic accessors --------------------------------------------------------

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.index

    def __repr__(self):
        return f"MetricGraph(n={len(self.vertices)}, m={self.num_edges})"

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def idx(self, v) -> int:
        try:
            return self.index[v]
        except (KeyError, TypeError):
            raise UnknownVertex(f"vertex {v!r} not in graph") from None

    def neighbors(self, v) -> list[tuple[Vertex, int]]:
        return [(self.vertices[j], w) for j, w in self._adj[self.idx(v)]]

    def adjacency(self, i: int) -> tuple[tuple[int, int], ...]:
        return self._adj[i]

    def edges(self) -> list[tuple[Vertex, Vertex, int]]:
        out = []
        for i, nbrs in enumerate(self._adj):
            for j, w in nbrs:
                if i < j:
                    out.append((self.vertices[i], self.vertices[j], w))
        return out

    def weight(self, u, v) -> int | None:
        j = self.idx(v)
        for k, w in self._adj[self.idx(u)]:
            if k == j:
                return w
        return None

    # metric -----------------------------------------------------------------

    @property
    def dist(self) -> np.ndarray:
        """All-pairs distances in half-units (int64), computed once."""
        if self._dist is None:
            d = dijkstra(self._csr(), directed=False)
            table = d.astype(np.int64)
            table.setflags(write=False)
            self._dist = table
        return self._dist

    def distance(self, u, v) -> int:
        return int(self.dist[self.idx(u), self.idx(v)])

    def set_distance(self, S: Iterable[Vertex]) -> np.ndarray:
        """Vector of d(x, S) over all vertices x."""
        ids = [self.idx(s) for s in S]
        if not ids:
            raise ValueError("empty vertex set")
        return self.dist[ids].min(axis=0)

    def diameter(self) -> int:
        return int(self.dist.max())

    def geodesic(self, u, v) -> list:
        """Lexicographically least shortest path from u to v."""
        return [self.vertices[i] for i in self.geodesic_idx(self.idx(u), self.idx(v))]

    def geodesic_idx(self, i: int, j: int) -> list[int]:
        d = self.dist
        path = [i]
        cur = i
        while cur != j:
            rem = d[cur, j]
            for k, w in self._adj[cur]:
                if w + d[k, j] == rem:
                    cur = k
                    break
            path.append(cur)
        return path

    def path_length(self, path: Sequence[Vertex]) -> int:
        total = 0
        for a, b in zip(path, path[1:]):
            w = self.weight(a, b)
            if w is None:
                raise ValueError(f"({a!r}, {b!r}) is not an edge")
            total += w
        return total

    def neighborhood(self, S: Iterable[Vertex], R: int) -> set:
        dS = self.set_distance(S)
        return {self.vertices[i] for i in np.flatnonzero(dS <= R)}

    def induced_path_metric(self, S: Iterable[Vertex]) -> "MetricGraph":
        """Subgraph on S with inherited weights and its own intrinsic metric."""
        S = set(S)
        for s in S:
            self.idx(s)
        if len(S) == 1:
            return MetricGraph(S, [])
        edges = [(u, v, w) for u, v, w in self.edges() if u in S and v in S]
        try:
            return MetricGraph(S, edges)
        except DisconnectedGraph as exc:
            raise DisconnectedSubset(str(exc)) from None

    def sssp(self, source: int) -> list[int]:
        """Single-source distances by a plain binary-heap Dijkstra (no cache)."""
        n = len(self.vertices)
        inf = float("inf")
        dist = [inf] * n
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > dist[x]:
                continue
            for y, w in self._adj[x]:
                nd = d + w
                if nd < dist[y]:
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        return dist


def from_edge_list(edges, vertices=()) -> MetricGraph:
    return MetricGraph.from_edge_list(edges, vertices)


def distance(g: MetricGraph, u, v) -> int:
    return g.distance(u, v)


def geodesic(g: MetricGraph, u, v) -> list:
    return g.geodesic(u, v)


def neighborhood(g: MetricGraph, S, R: int) -> set:
    return g.neighborhood(S, R)


def induced_path_metric(g: MetricGraph, S) -> MetricGraph:
    return g.induced_path_metric(S)


@dataclass
class SubsetFamily:
    """Named, pairwise disjoint vertex subsets (horosphere-like sets)."""

    subsets: dict[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        self.subsets = {str(k): frozenset(v) for k, v in self.subsets.items()}
        seen: dict = {}
        for name, s in self.subsets.items():
            if not s:
                raise ValueError(f"subset {name!r} is empty")
            for x in s:
                if x in seen:
                    raise ValueError(f"subsets {seen[x]!r} and {name!r} share vertex {x!r}")
                seen[x] = name

    def __len__(self):
        return len(self.subsets)

    def __iter__(self):
        return iter(self.names())

    def __getitem__(self, name):
        return self.subsets[name]

    def names(self) -> list[str]:
        return sorted(self.subsets)

    def items(self):
        return [(k, self.subsets[k]) for k in self.names()]

    def owner(self) -> dict:
        return {x: name for name, s in self.subsets.items() for x in s}

    def separation(self, g: MetricGraph) -> int | None:
        """Minimum distance between distinct members (None for fewer than two)."""
        names = self.names()
        if len(names) < 2:
            return None
        best = None
        rows = {k: g.set_distance(self.subsets[k]) for k in names}
        for a_pos, a in enumerate(names):
            for b in names[a_pos + 1:]:
                d = int(min(rows[a][g.idx(x)] for x in self.subsets[b]))
                best = d if best is None else min(best, d)
        return best

    def validate(self, g: MetricGraph, eps: int | None = None, proper_radius: int | None = None) -> None:
        for name, s in self.subsets.items():
            for x in s:
                if x not in g:
                    raise UnknownVertex(f"subset {name!r} contains unknown vertex {x!r}")
        if eps is not None:
            sep = self.separation(g)
            if sep is not None and sep < eps:
                raise ValueError(f"measured separation {sep} below declared {eps}")
        if proper_radius is not None:
            for name, s in self.subsets.items():
                if len(g.neighborhood(s, proper_radius)) == len(g):
                    raise ValueError(f"subset {name!r}: {proper_radius}-neighborhood covers the graph")
