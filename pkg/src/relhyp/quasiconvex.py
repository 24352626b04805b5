"""Nearest-point projections, quasiconvexity, separation and mutual coboundedness."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import CapExceeded, EmptySubset, Inapplicable
from .hyperbolicity import quasigeodesic_constant
from .metric_graph import MetricGraph, SubsetFamily

ALL_GEODESICS_CAP = 12


def _ids(g: MetricGraph, Y) -> np.ndarray:
    ids = np.array(sorted(g.idx(y) for y in Y), dtype=np.int64)
    if ids.size == 0:
        raise EmptySubset("projection target is empty")
    return ids


def project(g: MetricGraph, Y: Iterable, x) -> set:
    """The full nearest-point set {y in Y : d(x, y) = d(x, Y)}."""
    ids = _ids(g, Y)
    row = g.dist[g.idx(x), ids]
    return {g.vertices[i] for i in ids[row == row.min()]}


def _project_ids(g: MetricGraph, ids: np.ndarray, sources: np.ndarray) -> np.ndarray:
    """Boolean matrix: row k marks the projection of sources[k] onto ids."""
    block = g.dist[np.ix_(sources, ids)]
    return block == block.min(axis=1, keepdims=True)


def quasiconvexity_constant(g: MetricGraph, Y: Iterable, all_geodesics: bool = False) -> int:
    """Max distance from Y of a point on a geodesic joining two points of Y (half-units)."""
    ids = _ids(g, Y)
    dY = g.dist[ids].min(axis=0)
    best = 0
    if all_geodesics:
        if len(g) > ALL_GEODESICS_CAP:
            raise CapExceeded(f"all-geodesics mode capped at n={ALL_GEODESICS_CAP}")
        d = g.dist
        for a, b in combinations(ids, 2):
            # every vertex on some geodesic from a to b
            on = np.flatnonzero(d[a] + d[b] == d[a, b])
            best = max(best, int(dY[on].max()))
        return best
    for a, b in combinations(ids, 2):
        path = g.geodesic_idx(int(a), int(b))
        best = max(best, int(dY[path].max()))
    return best


@dataclass(frozen=True)
class CoboundednessReport:
    eps: int | None
    D: int
    pair: tuple | None
    applicable: bool

    def line(self) -> str:
        pair = ",".join(self.pair) if self.pair else "-"
        eps = "-" if self.eps is None else self.eps
        return f"eps={eps} D={self.D} pair={pair}"


def projection_diameter(g: MetricGraph, onto: Iterable, source: Iterable) -> int:
    on = _ids(g, onto)
    src = _ids(g, source)
    mask = _project_ids(g, on, src).any(axis=0)
    hit = on[mask]
    return int(g.dist[np.ix_(hit, hit)].max())


def separation_and_coboundedness(g: MetricGraph, fam: SubsetFamily) -> CoboundednessReport:
    names = fam.names()
    if len(names) < 2:
        return CoboundednessReport(None, 0, None, applicable=False)
    eps = fam.separation(g)
    D, pair = -1, None
    for i in names:
        for j in names:
            if i == j:
                continue
            diam = projection_diameter(g, fam[i], fam[j])
            if diam > D:
                D, pair = diam, (i, j)
    return CoboundednessReport(eps, D, pair, applicable=True)


def projected_path(g: MetricGraph, Y, x, y) -> list:
    px = min(project(g, Y, x), key=g.idx)
    py = min(project(g, Y, y), key=g.idx)
    a = g.geodesic(x, px)
    b = g.geodesic(px, py)
    c = g.geodesic(py, y)
    return a + b[1:] + c[1:]


def projected_path_check(g: MetricGraph, Y, x, y, D: int) -> tuple[bool, Fraction]:
    """Quasigeodesic constant of [x, pi x] + [pi x, pi y] + [pi y, y].

    ``D`` is the minimal projection separation (half-units) for the check to apply.
    """
    px = min(project(g, Y, x), key=g.idx)
    py = min(project(g, Y, y), key=g.idx)
    if g.distance(px, py) < D or g.distance(px, py) == 0:
        raise Inapplicable(f"d(pi x, pi y) = {g.distance(px, py)} < {max(D, 1)}")
    K = quasigeodesic_constant(g, projected_path(g, Y, x, y))
    return True, K


def large_projection_radius(g: MetricGraph, Y, Z, D: int) -> int | None:
    """If pi_Y(Z) has diameter > D, the radius M with pi_Y(Z) in N_M(Z); else None."""
    onto = _ids(g, Y)
    src = _ids(g, Z)
    hit = onto[_project_ids(g, onto, src).any(axis=0)]
    if int(g.dist[np.ix_(hit, hit)].max()) <= D:
        return None
    return int(g.dist[np.ix_(hit, src)].min(axis=1).max())
