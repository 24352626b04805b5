"""Independent brute-force oracles and shared strategies."""
from __future__ import annotations

import itertools

import pytest
from hypothesis import strategies as st

from relhyp.metric_graph import MetricGraph


def simple_paths(adj: dict, u, v):
    """All simple paths u -> v by exhaustive DFS."""
    stack = [(u, [u])]
    while stack:
        x, path = stack.pop()
        if x == v:
            yield path
            continue
        for y in adj[x]:
            if y not in path:
                stack.append((y, path + [y]))


def adjacency(edges) -> dict:
    adj = {}
    for a, b, w in edges:
        adj.setdefault(a, {})
        adj.setdefault(b, {})
        w = min(w, adj[a].get(b, w))
        adj[a][b] = adj[b][a] = w
    return adj


def brute_distance(edges, u, v) -> int:
    adj = adjacency(edges)
    if u == v:
        return 0
    return min(sum(adj[p[i]][p[i + 1]] for i in range(len(p) - 1)) for p in simple_paths(adj, u, v))


def brute_shortest_paths(edges, u, v) -> list:
    adj = adjacency(edges)
    if u == v:
        return [[u]]
    paths = list(simple_paths(adj, u, v))
    lens = [sum(adj[p[i]][p[i + 1]] for i in range(len(p) - 1)) for p in paths]
    best = min(lens)
    return [p for p, n in zip(paths, lens) if n == best]


def brute_delta_qu(d) -> int:
    """Four-point delta by enumerating every quadruple (quarter-units = half-unit defect)."""
    n = len(d)
    best = 0
    for a, b, c, e in itertools.combinations(range(n), 4):
        s = sorted([d[a][b] + d[c][e], d[a][c] + d[b][e], d[a][e] + d[b][c]])
        best = max(best, s[2] - s[1])
    return int(best)


@st.composite
def connected_graphs(draw, min_n=2, max_n=9, max_w=4):
    """Random connected weighted graph: a random spanning tree plus extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = []
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges.append((u, v, draw(st.integers(1, max_w))))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(1, max_w)),
                          max_size=n))
    edges += [(a, b, w) for a, b, w in extra if a != b]
    return edges


def cycle_graph(n: int) -> MetricGraph:
    return MetricGraph.from_edge_list([(i, (i + 1) % n, 2) for i in range(n)])


@pytest.fixture
def c8() -> MetricGraph:
    return cycle_graph(8)


# acceptance summary ---------------------------------------------------------------

ACCEPTANCE: dict = {}


def record(criterion: int, ok: bool, detail: str) -> bool:
    ACCEPTANCE[criterion] = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}"
    print(ACCEPTANCE[criterion])
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
