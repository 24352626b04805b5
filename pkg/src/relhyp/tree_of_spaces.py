"""Trees of relatively hyperbolic graphs: validation, assembly, cone locus.

Assembled vertex names: ``<v>@<x>`` for the copy of x in vertex space v,
``<e>~<x>`` for the copy of x in the slab over tree edge e.  Crossing a
slab costs exactly one unit (two connectors of length 1/2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx
import numpy as np

from .electric import cone_off
from .errors import NotAForest, TypePreservationViolation, UnknownVertex
from .hyperbolicity import DEFAULT_CAP, DeltaReport, delta_four_point
from .metric_graph import MetricGraph, SubsetFamily, vertex_key
from .textio import dump_graph_lines, parse_graph_lines


@dataclass
class TreeOfSpaces:
    tree_vertices: list
    tree_edges: dict            # e -> (v1, v2)
    spaces: dict                # v -> MetricGraph
    families: dict              # v -> SubsetFamily
    edge_spaces: dict           # e -> MetricGraph
    edge_families: dict         # e -> SubsetFamily
    maps: dict                  # (e, 0|1) -> {edge-space vertex: target vertex}
    report: "ValidationReport | None" = field(default=None, repr=False)

    def __post_init__(self):
        T = nx.Graph()
        T.add_nodes_from(self.tree_vertices)
        for e, (a, b) in self.tree_edges.items():
            if a not in T or b not in T:
                raise UnknownVertex(f"tree edge {e!r} has an unknown endpoint")
            T.add_edge(a, b, name=e)
        if T.number_of_edges() != len(self.tree_edges) or not nx.is_tree(T):
            raise ValueError("underlying graph is not a tree")
        self.tree = T
        for v in self.tree_vertices:
            self.families.setdefault(v, SubsetFamily({}))
        for e in self.tree_edges:
            self.edge_families.setdefault(e, SubsetFamily({}))
            for side in (0, 1):
                target = self.spaces[self.tree_edges[e][side]]
                fmap = self.maps[(e, side)]
                for x in self.edge_spaces[e].vertices:
                    if x not in fmap:
                        raise UnknownVertex(f"map ({e}, {side}) misses edge-space vertex {x!r}")
                    if fmap[x] not in target:
                        raise UnknownVertex(f"map ({e}, {side}) sends {x!r} to unknown {fmap[x]!r}")

    def tree_distance(self, a, b) -> int:
        return nx.shortest_path_length(self.tree, a, b)

    def tree_path(self, a, b) -> list:
        return nx.shortest_path(self.tree, a, b)

    def edge_between(self, a, b):
        return self.tree.edges[a, b]["name"]

    def side_of(self, e, v) -> int:
        return self.tree_edges[e].index(v)

    def incidences(self, e, side) -> dict:
        """Edge-space subset -> containing vertex-space subset (by image containment)."""
        fmap = self.maps[(e, side)]
        owner = self.families[self.tree_edges[e][side]].owner()
        out = {}
        for name, H in self.edge_families[e].items():
            targets = {owner.get(fmap[x]) for x in H}
            if len(targets) == 1 and None not in targets:
                out[name] = targets.pop()
        return out


# validation -----------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    edge: object
    side: int
    subset: str
    preimage: frozenset


@dataclass
class ValidationReport:
    edge_qi: dict
    coned_qi: dict
    type_violations: list
    dangling: list
    coned_delta: dict

    @property
    def type_preserving(self) -> bool:
        return not self.type_violations

    @property
    def max_edge_qi(self) -> float:
        return max(self.edge_qi.values(), default=1.0)

    @property
    def max_coned_qi(self) -> float:
        return max(self.coned_qi.values(), default=1.0)

    @property
    def max_coned_delta(self) -> int:
        return max((r.delta_qu for r in self.coned_delta.values()), default=0)

    def lines(self) -> list[str]:
        out = [f"type_preserving={int(self.type_preserving)} violations={len(self.type_violations)}",
               f"edge_qi_max={self.max_edge_qi:.4f} coned_qi_max={self.max_coned_qi:.4f}",
               f"coned_delta_qu_max={self.max_coned_delta} dangling={len(self.dangling)}"]
        for v in self.type_violations:
            out.append(f"violation edge={v.edge} side={v.side} subset={v.subset} "
                       f"preimage={','.join(sorted(map(str, v.preimage)))}")
        return out


def qi_constant(src: MetricGraph, dst: MetricGraph, fmap: dict) -> float:
    """Smallest K >= 1 with d/K - K <= d' <= K d + K over all pairs (edge-length units)."""
    verts = list(src.vertices)
    if len(verts) < 2:
        return 1.0
    A = src.dist / 2.0
    img = np.array([dst.idx(fmap[x]) for x in verts])
    B = dst.dist[np.ix_(img, img)] / 2.0
    upper = (B / (A + 1.0)).max()
    lower = ((-B + np.sqrt(B * B + 4.0 * A)) / 2.0).max()
    return float(max(1.0, upper, lower))


def _space_delta(g: MetricGraph, cap: int, samples: int, seed: int) -> DeltaReport:
    if len(g) <= cap:
        return delta_four_point(g, "exhaustive", cap=cap)
    return delta_four_point(g, "sampled", count=samples, seed=seed)


def validate(tos: TreeOfSpaces, cap: int = DEFAULT_CAP, samples: int = 200_000, seed: int = 0,
             measure_delta: bool = True) -> ValidationReport:
    edge_qi, coned_qi, violations, dangling = {}, {}, [], []
    coned = {}
    for e, (v1, v2) in sorted(tos.tree_edges.items(), key=lambda kv: vertex_key(kv[0])):
        Xe = tos.edge_spaces[e]
        He = tos.edge_families[e]
        members = {frozenset(s): name for name, s in He.items()}
        for side, v in ((0, v1), (1, v2)):
            fmap = tos.maps[(e, side)]
            Xv = tos.spaces[v]
            edge_qi[(e, side)] = qi_constant(Xe, Xv, fmap)
            for name, H in tos.families[v].items():
                pre = frozenset(x for x in Xe.vertices if fmap[x] in H)
                if pre and pre not in members:
                    violations.append(Violation(e, side, name, pre))
            inc = tos.incidences(e, side)
            dangling.extend((e, side, name) for name in He.names() if name not in inc)
            ce = coned.setdefault(("e", e), cone_off(Xe, He))
            cv = coned.setdefault(("v", v), cone_off(Xv, tos.families[v]))
            cmap = dict(fmap)
            for a, b in inc.items():
                cmap[f"cone:{a}"] = f"cone:{b}"
            dom = [x for x in ce.graph.vertices if x in cmap]
            sub = ce.graph if len(dom) == len(ce.graph) else ce.graph.induced_path_metric(dom)
            coned_qi[(e, side)] = qi_constant(sub, cv.graph, cmap)
    for v in tos.tree_vertices:
        coned.setdefault(("v", v), cone_off(tos.spaces[v], tos.families[v]))
    deltas = {}
    if measure_delta:
        for key in sorted(coned, key=vertex_key):
            deltas[key] = _space_delta(coned[key].graph, cap, samples, seed)
    report = ValidationReport(edge_qi, coned_qi, violations, dangling, deltas)
    tos.report = report
    return report


# assembly -------------------------------------------------------------------

@dataclass
class Assembled:
    graph: MetricGraph
    tos: TreeOfSpaces
    owner: dict          # assembled vertex -> ("v", v) or ("e", e)
    local: dict          # assembled vertex -> local vertex in its space
    cone_points: dict    # assembled cone vertex -> (kind, space, subset)
    coned: bool = False

    def copy(self, kind: str, space, x) -> str:
        return vcopy(space, x) if kind == "v" else ecopy(space, x)

    def original_vertices(self) -> list:
        return [x for x in self.graph.vertices if x not in self.cone_points]


def vcopy(v, x) -> str:
    return f"{v}@{x}"


def ecopy(e, x) -> str:
    return f"{e}~{x}"


def _assemble(tos: TreeOfSpaces, coned: bool) -> Assembled:
    verts, edges = [], []
    owner, local, cones = {}, {}, {}

    def space_graph(g, fam):
        if coned and len(fam):
            cs = cone_off(g, fam)
            return cs.graph, {c: name for name, (c,) in cs.cones.items()}
        return g, {}

    for v in tos.tree_vertices:
        g, cmap = space_graph(tos.spaces[v], tos.families[v])
        for x in g.vertices:
            name = vcopy(v, x)
            verts.append(name)
            owner[name], local[name] = ("v", v), x
            if x in cmap:
                cones[name] = ("v", v, cmap[x])
        edges.extend((vcopy(v, a), vcopy(v, b), w) for a, b, w in g.edges())
    for e, (v1, v2) in tos.tree_edges.items():
        g, cmap = space_graph(tos.edge_spaces[e], tos.edge_families[e])
        for x in g.vertices:
            name = ecopy(e, x)
            verts.append(name)
            owner[name], local[name] = ("e", e), x
            if x in cmap:
                cones[name] = ("e", e, cmap[x])
        edges.extend((ecopy(e, a), ecopy(e, b), w) for a, b, w in g.edges())
        for side, v in ((0, v1), (1, v2)):
            fmap = tos.maps[(e, side)]
            edges.extend((ecopy(e, x), vcopy(v, fmap[x]), 1) for x in tos.edge_spaces[e].vertices)
            if coned:
                for a, b in tos.incidences(e, side).items():
                    edges.append((ecopy(e, f"cone:{a}"), vcopy(v, f"cone:{b}"), 1))
    return Assembled(MetricGraph(verts, edges), tos, owner, local, cones, coned)


def assemble_total(tos: TreeOfSpaces) -> Assembled:
    """The total space X: vertex spaces plus one slab per tree edge."""
    return _assemble(tos, coned=False)


def assemble_coned(tos: TreeOfSpaces) -> Assembled:
    """The induced tree of coned-off spaces; refuses without strict type preservation."""
    report = tos.report or validate(tos, measure_delta=False)
    if report.type_violations:
        raise TypePreservationViolation(report.type_violations)
    return _assemble(tos, coned=True)


# cone locus -------------------------------------------------------------------

@dataclass
class ConeSubtree:
    name: str
    nodes: frozenset            # cone points of X-hat in this component
    tree_vertices: frozenset
    tree_edges: frozenset
    horosphere_vertices: frozenset   # C_alpha: original vertices of the strung-together sets
    locus: nx.Graph


@dataclass
class ConeLocusReport:
    graph: nx.Graph
    components: list

    def by_name(self) -> dict:
        return {c.name: c for c in self.components}

    def node_sets(self) -> dict:
        return {c.name: c.nodes for c in self.components}

    def horosphere_sets(self) -> dict:
        return {c.name: c.horosphere_vertices for c in self.components}


def cone_locus(tos: TreeOfSpaces, coned: Assembled) -> ConeLocusReport:
    G = nx.Graph()
    G.add_nodes_from(coned.cone_points)
    for c, (kind, space, subset) in coned.cone_points.items():
        if kind != "e":
            continue
        for side in (0, 1):
            inc = tos.incidences(space, side)
            if subset in inc:
                G.add_edge(c, vcopy(tos.tree_edges[space][side], f"cone:{inc[subset]}"))
    if not nx.is_forest(G):
        raise NotAForest("cone locus contains a cycle")
    comps = sorted((sorted(c, key=vertex_key) for c in nx.connected_components(G)),
                   key=lambda c: vertex_key(c[0]))
    out = []
    for k, nodes in enumerate(comps):
        tv, te, horo = set(), set(), set()
        for c in nodes:
            kind, space, subset = coned.cone_points[c]
            (tv if kind == "v" else te).add(space)
            fam = tos.families[space] if kind == "v" else tos.edge_families[space]
            horo |= {coned.copy(kind, space, x) for x in fam[subset]}
        if len(tv) + len(te) != len(nodes):
            raise NotAForest(f"cone-locus component {k} meets one space twice; it does not embed in T")
        out.append(ConeSubtree(f"T{k}", frozenset(nodes), frozenset(tv), frozenset(te),
                               frozenset(horo), G.subgraph(nodes).copy()))
    return ConeLocusReport(G, out)


def embeds_in_tree(tos: TreeOfSpaces, comp: ConeSubtree) -> bool:
    """P' restricted to the component is an isomorphism onto a subtree of T."""
    sub = tos.tree.subgraph(comp.tree_vertices)
    names = {sub.edges[a, b]["name"] for a, b in sub.edges}
    return nx.is_tree(sub) and names == set(comp.tree_edges) if comp.tree_vertices else len(comp.nodes) == 1


# tree projection ------------------------------------------------------------------

def tree_positions(tos: TreeOfSpaces, asm: Assembled) -> tuple[MetricGraph, list]:
    """Subdivided tree (half-unit edges) and the P' position of each assembled vertex."""
    edges = []
    for e, (a, b) in tos.tree_edges.items():
        mid = f"mid:{e}"
        edges.extend([(f"tv:{a}", mid, 1), (mid, f"tv:{b}", 1)])
    verts = [f"tv:{v}" for v in tos.tree_vertices]
    sub = MetricGraph(verts + [f"mid:{e}" for e in tos.tree_edges], edges)
    pos = []
    for x in asm.graph.vertices:
        kind, space = asm.owner[x]
        pos.append(sub.idx(f"tv:{space}" if kind == "v" else f"mid:{space}"))
    return sub, pos


def tree_projection_nonincreasing(tos: TreeOfSpaces, asm: Assembled) -> bool:
    sub, pos = tree_positions(tos, asm)
    p = np.array(pos)
    dT = sub.dist[np.ix_(p, p)]
    return bool((dT <= asm.graph.dist).all())


def properness(tos: TreeOfSpaces, asm: Assembled, radii: Iterable[int]) -> dict:
    """N(M): largest intrinsic d_v(x, y) over pairs with d_X(x, y) <= M (half-units)."""
    out = {}
    D = asm.graph.dist
    for M in radii:
        worst = 0
        for v in tos.tree_vertices:
            Xv = tos.spaces[v]
            ids = np.array([asm.graph.idx(vcopy(v, x)) for x in Xv.vertices])
            close = D[np.ix_(ids, ids)] <= M
            if close.any():
                worst = max(worst, int(Xv.dist[close].max()))
        out[M] = worst
    return out


# text format --------------------------------------------------------------------

def parse_tos(text: str) -> TreeOfSpaces:
    blocks: list[tuple[list[str], list[str]]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()
        if head[0] in ("tree", "space", "map"):
            blocks.append((head, []))
        elif not blocks:
            raise ValueError(f"record outside any block: {line!r}")
        else:
            blocks[-1][1].append(line)
    tv, te = [], {}
    graphs, fams, maps = {}, {}, {}
    for head, body in blocks:
        if head[0] == "tree":
            for line in body:
                p = line.split()
                if p[0] == "tv":
                    tv.append(p[1])
                elif p[0] == "te":
                    te[p[1]] = (p[2], p[3])
                else:
                    raise ValueError(f"bad tree record {line!r}")
        elif head[0] == "space":
            edges, verts, subsets = parse_graph_lines(body)
            graphs[head[1]] = MetricGraph.from_edge_list(edges, verts)
            fams[head[1]] = SubsetFamily(subsets)
        else:
            m = {}
            for line in body:
                p = line.split()
                if p[0] != "m":
                    raise ValueError(f"bad map record {line!r}")
                m[_tok(p[1])] = _tok(p[2])
            maps[(head[1], int(head[2]))] = m
    return TreeOfSpaces(
        tv, te,
        {v: graphs[v] for v in tv}, {v: fams[v] for v in tv},
        {e: graphs[e] for e in te}, {e: fams[e] for e in te},
        maps,
    )


def _tok(t: str):
    return int(t) if t.lstrip("-").isdigit() else t


def dump_tos(tos: TreeOfSpaces) -> str:
    out = ["tree"]
    out += [f"tv {v}" for v in tos.tree_vertices]
    out += [f"te {e} {a} {b}" for e, (a, b) in tos.tree_edges.items()]
    for v in tos.tree_vertices:
        out.append(f"space {v}")
        out += dump_graph_lines(tos.spaces[v], tos.families[v])
    for e in tos.tree_edges:
        out.append(f"space {e}")
        out += dump_graph_lines(tos.edge_spaces[e], tos.edge_families[e])
    for e in tos.tree_edges:
        for side in (0, 1):
            out.append(f"map {e} {side}")
            m = tos.maps[(e, side)]
            out += [f"m {x} {m[x]}" for x in sorted(m, key=vertex_key)]
    return "\n".join(out) + "\n"
