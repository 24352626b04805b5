"""Electric (coned-off) spaces, partial electrocution, and penetration patterns."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import EndpointMismatch, EpsilonMismatch, NotOnto, UnknownVertex
from .hyperbolicity import quasigeodesic_constant
from .metric_graph import MetricGraph, SubsetFamily

DEFAULT_EPS = 2


def cone_name(subset: str, point=None) -> str:
    return f"cone:{subset}" if point is None else f"cone:{subset}:{point}"


@dataclass
class ConedSpace:
    """An augmented graph over ``base``; ``graph`` realizes d_e or d_pel."""

    graph: MetricGraph
    base: MetricGraph
    family: SubsetFamily
    cones: dict[str, tuple] = field(default_factory=dict)
    collapse: dict[str, dict] = field(default_factory=dict)
    empty: bool = False
    lipschitz: dict[str, Fraction] = field(default_factory=dict)
    _nbhd: dict = field(default_factory=dict, repr=False)
    _intrinsic: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.cone_owner = {c: name for name, cs in self.cones.items() for c in cs}

    def is_original(self, v) -> bool:
        return v in self.base and v not in self.cone_owner

    def neighborhood(self, name: str, eps: int) -> frozenset:
        key = (name, eps)
        if key not in self._nbhd:
            self._nbhd[key] = frozenset(self.base.neighborhood(self.family[name], eps))
        return self._nbhd[key]

    def intrinsic(self, name: str, eps: int) -> MetricGraph:
        key = (name, eps)
        if key not in self._intrinsic:
            self._intrinsic[key] = self.base.induced_path_metric(self.neighborhood(name, eps))
        return self._intrinsic[key]


def cone_off(g: MetricGraph, fam: SubsetFamily) -> ConedSpace:
    """Add one cone vertex per subset, joined to each member by a length-1/2 edge."""
    if len(fam) == 0:
        return ConedSpace(g, g, fam, empty=True)
    fam.validate(g)
    edges = list(g.edges())
    cones = {}
    for name, s in fam.items():
        c = cone_name(name)
        cones[name] = (c,)
        edges.extend((c, x, 1) for x in s)
    return ConedSpace(MetricGraph(list(g.vertices) + [c for (c,) in cones.values()], edges), g, fam, cones)


def partially_electrocute(g: MetricGraph, fam: SubsetFamily, targets: Mapping[str, MetricGraph],
                          collapse: Mapping[str, Mapping]) -> ConedSpace:
    """Glue the mapping cylinder of each collapse map H -> L into g.

    L-vertices are named ``cone:<subset>`` when L is a point and
    ``cone:<subset>:<v>`` otherwise, so point targets reproduce :func:`cone_off`.
    """
    if len(fam) == 0:
        return ConedSpace(g, g, fam, empty=True)
    fam.validate(g)
    edges = list(g.edges())
    verts = list(g.vertices)
    cones, maps, lip = {}, {}, {}
    for name, H in fam.items():
        L = targets[name]
        gmap = dict(collapse[name])
        for x in H:
            if x not in gmap:
                raise UnknownVertex(f"collapse map for {name!r} misses {x!r}")
        image = {gmap[x] for x in H}
        for y in image:
            if y not in L:
                raise UnknownVertex(f"collapse map for {name!r} hits unknown target {y!r}")
        if image != set(L.vertices):
            raise NotOnto(f"collapse map for {name!r} misses {sorted(map(str, set(L.vertices) - image))}")
        point = len(L) == 1
        ren = {y: cone_name(name) if point else cone_name(name, y) for y in L.vertices}
        verts.extend(ren.values())
        edges.extend((ren[a], ren[b], w) for a, b, w in L.edges())
        edges.extend((x, ren[gmap[x]], 1) for x in H)
        cones[name] = tuple(sorted(ren.values()))
        maps[name] = {x: ren[gmap[x]] for x in H}
        lip[name] = _lipschitz(g, L, H, gmap)
    return ConedSpace(MetricGraph(verts, edges), g, fam, cones, collapse=maps, lipschitz=lip)


def _lipschitz(g: MetricGraph, L: MetricGraph, H, gmap) -> Fraction:
    """Smallest K with d_L(gx, gy) <= K d(x, y) + K on H (edge-length units)."""
    pts = sorted(H, key=g.idx)
    best = Fraction(0)
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            dl = L.distance(gmap[x], gmap[y])
            dh = g.distance(x, y)
            best = max(best, Fraction(dl, dh + 2))
    return best


def electric_geodesic(cs: ConedSpace, u, v) -> list:
    for x in (u, v):
        if not cs.is_original(x):
            raise UnknownVertex(f"{x!r} is not an original vertex")
    return cs.graph.geodesic(u, v)


@dataclass(frozen=True)
class Visit:
    subset: str
    entry: object
    exit: object
    entry_pos: int
    exit_pos: int
    backtrack: bool = False

    def line(self) -> str:
        return f"visit {self.subset} {self.entry} {self.exit} backtrack:{int(self.backtrack)}"


@dataclass
class PenetrationPattern:
    visits: list[Visit]
    violations: list[tuple[str, int, int]]
    eps: int
    endpoints: tuple

    def subsets(self) -> set[str]:
        return {v.subset for v in self.visits}

    def span(self, name: str) -> tuple:
        """First entry and last exit for one subset."""
        vs = [v for v in self.visits if v.subset == name]
        return vs[0].entry, vs[-1].exit


def penetration_pattern(cs: ConedSpace, path: Sequence, eps: int = DEFAULT_EPS) -> PenetrationPattern:
    """Record each run of the path inside N_eps(H) (cone points count as inside)."""
    visits = []
    violations = []
    for name in cs.family.names():
        inside = cs.neighborhood(name, eps) | set(cs.cones.get(name, ()))
        runs = []
        start = None
        for pos, v in enumerate(path):
            if v in inside:
                if start is None:
                    start = pos
            elif start is not None:
                runs.append((start, pos - 1))
                start = None
        if start is not None:
            runs.append((start, len(path) - 1))
        for k, (a, b) in enumerate(runs):
            orig = [p for p in range(a, b + 1) if cs.is_original(path[p])]
            if not orig:
                continue
            visits.append(Visit(name, path[orig[0]], path[orig[-1]], orig[0], orig[-1], backtrack=k > 0))
            if k > 0:
                violations.append((name, runs[k - 1][1] + 1, a))
    visits.sort(key=lambda v: (v.entry_pos, v.subset))
    return PenetrationPattern(visits, violations, eps, (path[0], path[-1]) if len(path) else ())


def compare_patterns(cs: ConedSpace, p1: PenetrationPattern, p2: PenetrationPattern) -> int:
    """Largest intrinsic discrepancy between two penetration patterns (half-units)."""
    if p1.eps != p2.eps:
        raise EpsilonMismatch(f"patterns use eps {p1.eps} and {p2.eps}")
    if p1.endpoints != p2.endpoints:
        raise EndpointMismatch(f"paths join {p1.endpoints} and {p2.endpoints}")
    eps = p1.eps
    s1, s2 = p1.subsets(), p2.subsets()
    worst = 0
    for name in sorted(s1 | s2):
        m = cs.intrinsic(name, eps)
        if name in s1 and name in s2:
            (a1, b1), (a2, b2) = p1.span(name), p2.span(name)
            worst = max(worst, m.distance(a1, a2), m.distance(b1, b2))
        else:
            a, b = (p1 if name in s1 else p2).span(name)
            worst = max(worst, m.distance(a, b))
    return worst


def remove_backtracking(cs: ConedSpace, path: Sequence, eps: int = DEFAULT_EPS,
                        max_rounds: int = 1000) -> tuple[list, Fraction]:
    """Excise returns to N_eps(H) and reconnect inside N_eps(H) by an intrinsic geodesic.

    Returns the surgered path and its measured quasigeodesic constant in ``cs.graph``.
    """
    path = list(path)
    for _ in range(max_rounds):
        pat = penetration_pattern(cs, path, eps)
        if not pat.violations:
            break
        name = pat.violations[0][0]
        vs = [v for v in pat.visits if v.subset == name]
        a, b = vs[0].exit_pos, vs[-1].entry_pos
        bridge = cs.intrinsic(name, eps).geodesic(path[a], path[b])
        path = path[:a] + bridge + path[b + 1:]
    else:
        raise RuntimeError("backtracking surgery did not terminate")
    return path, quasigeodesic_constant(cs.graph, path)


@dataclass(frozen=True)
class TrackingReport:
    electric: int
    hyperbolic: int

    @property
    def K(self) -> int:
        return max(self.electric, self.hyperbolic)


def tracking_constant(g: MetricGraph, cs: ConedSpace, pairs: Sequence[tuple]) -> TrackingReport:
    """Measured tracking between electric geodesics and g-geodesics.

    electric: max over pairs of sup_{p in beta} d_e(p, gamma);
    hyperbolic: max over pairs of sup_{p in gamma} d(p, N_0(beta)), where
    N_0(beta) is beta's original vertices plus every subset whose cone beta uses.
    """
    de = cs.graph.dist
    dg = g.dist
    e_best = h_best = 0
    for u, v in pairs:
        beta = electric_geodesic(cs, u, v)
        gamma = g.geodesic(u, v)
        b_ids = [cs.graph.idx(p) for p in beta]
        gam_e = [cs.graph.idx(p) for p in gamma]
        e_best = max(e_best, int(de[np.ix_(b_ids, gam_e)].min(axis=1).max()))
        zero = {p for p in beta if cs.is_original(p)}
        for p in beta:
            if p in cs.cone_owner:
                zero |= cs.family[cs.cone_owner[p]]
        z_ids = [g.idx(p) for p in zero]
        gam_g = [g.idx(p) for p in gamma]
        h_best = max(h_best, int(dg[np.ix_(gam_g, z_ids)].min(axis=1).max()))
    return TrackingReport(e_best, h_best)
