"""Hallways over the induced tree of coned-off spaces, flare estimates, and the
explicit pair of paths that breaks bounded penetration on parallel cones.

Hallway sampling is an estimator: the flare conditions quantify over all
hallways, a sample can only support or refute them.  "Girth" is read as the
length of the middle column.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .electric import DEFAULT_EPS, compare_patterns, cone_off, penetration_pattern
from .errors import EmptySample, ExhaustedBudget, InstanceShapeMismatch
from .hyperbolicity import quasigeodesic_constant
from .metric_graph import SubsetFamily, vertex_key
from .tree_of_spaces import Assembled, TreeOfSpaces, cone_locus, ecopy, vcopy


@dataclass
class Hallway:
    tree_path: list
    columns: list          # local vertex paths, one per tree vertex
    lengths: list          # column lengths, half-units
    thin: int
    essential: bool
    cone_bounded: bool

    @property
    def m(self) -> int:
        return (len(self.tree_path) - 1) // 2

    @property
    def girth(self) -> int:
        return self.lengths[self.m]

    def global_columns(self) -> list:
        return [[vcopy(v, x) for x in col] for v, col in zip(self.tree_path, self.columns)]

    def reversed(self) -> "Hallway":
        return Hallway(self.tree_path[::-1], self.columns[::-1], self.lengths[::-1],
                       self.thin, self.essential, self.cone_bounded)

    def line(self) -> str:
        lam = lambda_of(self)
        lam_s = "inf" if lam == math.inf else f"{lam.numerator}/{lam.denominator}"
        return f"lambda={lam_s} girth={self.girth} thin={self.thin} cb={int(self.cone_bounded)}"


def lambda_of(h: Hallway):
    """max(end column lengths) / middle column length; ``math.inf`` for a point middle."""
    mid = h.lengths[h.m]
    if mid == 0:
        return math.inf
    return Fraction(max(h.lengths[0], h.lengths[-1]), mid)


class HallwayBuilder:
    """Per-instance caches for building hallways in the induced tree of coned-off spaces."""

    def __init__(self, tos: TreeOfSpaces, asm: Assembled):
        self.tos = tos
        self.asm = asm
        self.local = {v: cone_off(tos.spaces[v], tos.families[v]).graph for v in tos.tree_vertices}
        self._push: dict = {}

    def cones(self, v) -> list:
        g = self.local[v]
        return [x for x in g.vertices if isinstance(x, str) and x.startswith("cone:")]

    def originals(self, v) -> list:
        g = self.local[v]
        return [x for x in g.vertices if not (isinstance(x, str) and x.startswith("cone:"))]

    def push(self, a, b, x):
        """Carry vertex x of X-hat_a across the tree edge a-b to X-hat_b."""
        key = (a, b)
        if key not in self._push:
            e = self.tos.edge_between(a, b)
            sa, sb = self.tos.side_of(e, a), self.tos.side_of(e, b)
            fa = dict(self.tos.maps[(e, sa)])
            fb = dict(self.tos.maps[(e, sb)])
            for al, be in self.tos.incidences(e, sa).items():
                fa[f"cone:{al}"] = f"cone:{be}"
            for al, be in self.tos.incidences(e, sb).items():
                fb[f"cone:{al}"] = f"cone:{be}"
            dom = [y for y in sorted(fa, key=vertex_key) if y in fb]
            ga = self.local[a]
            img = np.array([ga.idx(fa[y]) for y in dom])
            nearest = np.argmin(ga.dist[img], axis=0)
            self._push[key] = {ga.vertices[p]: fb[dom[k]] for p, k in enumerate(nearest)}
        return self._push[key][x]

    def build(self, path: Sequence, p, q) -> Hallway:
        m = (len(path) - 1) // 2
        ends = {m: (p, q)}
        for i in range(m, 0, -1):
            a, b = ends[i]
            ends[i - 1] = (self.push(path[i], path[i - 1], a), self.push(path[i], path[i - 1], b))
        for i in range(m, 2 * m):
            a, b = ends[i]
            ends[i + 1] = (self.push(path[i], path[i + 1], a), self.push(path[i], path[i + 1], b))
        cols, lens = [], []
        for i, v in enumerate(path):
            a, b = ends[i]
            g = self.local[v]
            cols.append(g.geodesic(a, b))
            lens.append(g.distance(a, b))
        cb = all(isinstance(x, str) and x.startswith("cone:") for i in range(len(path)) for x in ends[i])
        h = Hallway(list(path), cols, lens, 0, self.essential(path), cb)
        h.thin = self.thinness(h)
        return h

    def essential(self, path) -> bool:
        return len(set(path)) == len(path) and self.tos.tree_distance(path[0], path[-1]) == len(path) - 1

    def thinness(self, h: Hallway) -> int:
        D = self.asm.graph.dist
        idx = self.asm.graph.idx
        worst = 0
        gcols = h.global_columns()
        for i in range(len(gcols) - 1):
            A = self._samples(h.tree_path[i], h.columns[i])
            B = self._samples(h.tree_path[i + 1], h.columns[i + 1])
            K = max(len(A), len(B)) - 1
            for t in range(K + 1):
                a = A[(t * (len(A) - 1)) // K] if K else A[0]
                b = B[(t * (len(B) - 1)) // K] if K else B[0]
                worst = max(worst, int(D[idx(vcopy(h.tree_path[i], a)), idx(vcopy(h.tree_path[i + 1], b))]))
        return worst

    def _samples(self, v, col) -> list:
        """Column vertex at each half-unit of arc length."""
        g = self.local[v]
        out = [col[0]]
        for a, b in zip(col, col[1:]):
            w = g.weight(a, b)
            out.extend([a] * (w - 1) + [b])
        return out


def tree_geodesics(tos: TreeOfSpaces, length: int) -> list:
    out = []
    for a in tos.tree_vertices:
        for b in tos.tree_vertices:
            if a != b and tos.tree_distance(a, b) == length:
                out.append(tos.tree_path(a, b))
    return out


def sample_hallways(tos: TreeOfSpaces, asm: Assembled, m: int, rho: int, count: int, seed: int = 0,
                    cone_bounded_only: bool = False, budget: int | None = None,
                    builder: HallwayBuilder | None = None) -> list:
    """Random essential hallways of length 2m with measured thinness <= rho.

    Raises ExhaustedBudget (carrying what was found) if fewer than ``count`` survive.
    """
    if m < 1:
        raise ValueError("hallways of length 0 have no flare; need m >= 1")
    paths = tree_geodesics(tos, 2 * m)
    if not paths:
        raise ValueError(f"tree has no geodesic of length {2 * m}")
    builder = builder or HallwayBuilder(tos, asm)
    rng = np.random.default_rng(seed)
    budget = budget if budget is not None else 50 * count
    found = []
    for _ in range(budget):
        if len(found) >= count:
            break
        path = paths[int(rng.integers(len(paths)))]
        mid = path[m]
        pool = builder.cones(mid) if cone_bounded_only else builder.originals(mid)
        if not pool:
            continue
        if len(pool) >= 2:
            i, j = rng.choice(len(pool), size=2, replace=False)
        else:
            i = j = 0
        try:
            h = builder.build(path, pool[int(i)], pool[int(j)])
        except KeyError:
            continue
        if cone_bounded_only and not h.cone_bounded:
            continue
        if h.thin <= rho:
            found.append(h)
    if len(found) < count:
        raise ExhaustedBudget(f"{len(found)} of {count} hallways survived within budget {budget}", found)
    return found


@dataclass
class FlareReport:
    m: int
    rho: int
    H: float                       # girth threshold; math.inf when none found
    lambdas: list
    girths: list
    cone_bounded: list
    lambda_min: object             # over hallways with girth >= H
    cb_lambda_min: object          # over cone-bounded hallways
    flare: bool
    strict_flare: bool
    seed: int | None = None

    @property
    def size(self) -> int:
        return len(self.lambdas)

    def summary(self) -> str:
        def fmt(x):
            if x is None:
                return "-"
            if x == math.inf:
                return "inf"
            return f"{x.numerator}/{x.denominator}" if isinstance(x, Fraction) else str(x)
        H = "inf" if self.H == math.inf else str(int(self.H))
        return (f"summary m={self.m} rho={self.rho} samples={self.size} girth=middle-column "
                f"H={H} lambda_min={fmt(self.lambda_min)} flare={int(self.flare)} "
                f"cb_samples={sum(self.cone_bounded)} cb_lambda_min={fmt(self.cb_lambda_min)} "
                f"strict_flare={int(self.strict_flare)} seed={self.seed}")


def flare_report(samples: Sequence[Hallway], m: int, rho: int, seed: int | None = None) -> FlareReport:
    if not samples:
        raise EmptySample("no hallways to aggregate")
    lams = [lambda_of(h) for h in samples]
    girths = [h.girth for h in samples]
    cbs = [h.cone_bounded for h in samples]
    bad = [g for g, lam in zip(girths, lams) if lam <= 1]
    if not bad:
        H = 0
    elif max(girths) > max(bad):
        H = max(bad) + 1
    else:
        H = math.inf
    above = [lam for g, lam in zip(girths, lams) if g >= H]
    lam_min = min(above) if above else None
    flare = H != math.inf and lam_min is not None and lam_min > 1
    cb = [lam for lam, c in zip(lams, cbs) if c]
    cb_min = min(cb) if cb else None
    strict = cb_min is not None and cb_min > 1
    return FlareReport(m, rho, H, lams, girths, cbs, lam_min, cb_min, flare, strict, seed)


# converse witness -----------------------------------------------------------------

@dataclass
class ConverseWitness:
    sigma1: list           # in the doubly coned space
    sigma2: list
    sigma1_hat: list       # the same routes inside X-hat, along the cone locus
    sigma2_hat: list
    discrepancy: int
    K1: Fraction
    K2: Fraction
    length1: int
    length2: int


def converse_witness(tos: TreeOfSpaces, N: int, D0: int, eps: int = DEFAULT_EPS,
                     asm: Assembled | None = None) -> ConverseWitness:
    """The two paths of the converse argument on a parallel-cones instance."""
    from .tree_of_spaces import assemble_coned

    path = [f"t{i}" for i in range(N + 1)]
    if list(tos.tree_vertices) != path or any(set(tos.families[v].names()) != {"left", "right"} for v in path):
        raise InstanceShapeMismatch("expected examples.parallel_cones(N, D0)")
    asm = asm or assemble_coned(tos)
    locus = cone_locus(tos, asm)
    by_cone = {}
    for comp in locus.components:
        sides = {asm.cone_points[c][2] for c in comp.nodes}
        if len(sides) != 1 or len(comp.tree_vertices) != N + 1:
            raise InstanceShapeMismatch("cone locus is not two parallel paths")
        by_cone[sides.pop()] = comp
    if set(by_cone) != {"left", "right"}:
        raise InstanceShapeMismatch("cone locus is not two parallel paths")
    X0 = tos.spaces["t0"]
    left = sorted(tos.families["t0"]["left"], key=X0.idx)
    right = tos.families["t0"]["right"]
    a = left[0]
    b = min(right, key=lambda y: (X0.distance(a, y), X0.idx(y)))
    if X0.distance(a, b) > 2 * D0:
        raise InstanceShapeMismatch(f"horosphere columns are farther apart than D0 = {D0}")
    a0, aN = vcopy("t0", a), vcopy(path[-1], a)
    b0, bN = vcopy("t0", b), vcopy(path[-1], b)

    def along(side):
        out = []
        for i, v in enumerate(path):
            out.append(vcopy(v, f"cone:{side}"))
            if i < N:
                out.append(ecopy(f"s{i}", f"cone:{side}"))
        return out

    G = asm.graph
    sigma1_hat = [a0] + along("left") + [aN]
    sigma2_hat = G.geodesic(a0, b0) + along("right") + G.geodesic(bN, aN)

    hat2 = cone_off(G, SubsetFamily({"TL": by_cone["left"].nodes, "TR": by_cone["right"].nodes}))
    l0, lN = vcopy("t0", "cone:left"), vcopy(path[-1], "cone:left")
    r0, rN = vcopy("t0", "cone:right"), vcopy(path[-1], "cone:right")
    sigma1 = [a0, l0, "cone:TL", lN, aN]
    sigma2 = G.geodesic(a0, b0) + [r0, "cone:TR", rN] + G.geodesic(bN, aN)

    horo = cone_off(G, SubsetFamily({"C1": by_cone["left"].horosphere_vertices,
                                     "C2": by_cone["right"].horosphere_vertices}))
    p1 = penetration_pattern(horo, sigma1_hat, eps)
    p2 = penetration_pattern(horo, sigma2_hat, eps)
    disc = compare_patterns(horo, p1, p2)
    H2 = hat2.graph
    return ConverseWitness(
        sigma1, sigma2, sigma1_hat, sigma2_hat, disc,
        quasigeodesic_constant(H2, sigma1), quasigeodesic_constant(H2, sigma2),
        H2.path_length(sigma1), H2.path_length(sigma2),
    )
