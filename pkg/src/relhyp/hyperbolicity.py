"""Gromov hyperbolicity and quasigeodesic constants of metric graphs.

Hyperbolicity constants are reported in quarter-units so that halving a
half-unit sum stays integral.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numba
import numpy as np

from .errors import CapExceeded, NotAPath
from .metric_graph import MetricGraph

DEFAULT_CAP = 150


@dataclass(frozen=True)
class DeltaReport:
    delta_qu: int
    method: str
    witness: tuple = ()
    samples: int | None = None
    seed: int | None = None

    @property
    def tag(self) -> str:
        if self.method == "exhaustive":
            return "exhaustive"
        return f"sampled({self.samples},{self.seed})"

    def line(self) -> str:
        wit = ",".join(str(v) for v in self.witness)
        return f"delta_qu={self.delta_qu} method={self.tag} witness={wit}"


def gromov_product(g: MetricGraph, x, y, w) -> int:
    """Gromov product (x . y)_w in quarter-units."""
    d = g.dist
    i, j, k = g.idx(x), g.idx(y), g.idx(w)
    return int(d[i, k] + d[j, k] - d[i, j])


def four_point_defect(d, a, b, c, e) -> int:
    """Largest minus second-largest of the three pair sums (half-units)."""
    s = sorted((d[a, b] + d[c, e], d[a, c] + d[b, e], d[a, e] + d[b, c]))
    return int(s[2] - s[1])


@numba.njit(cache=True)
def _four_point_kernel(d, pa, pb):
    # pairs arrive sorted by distance, largest first; a quadruple's defect is
    # at most the smaller distance of its max-sum split, so the scan can stop
    # once the current pair distance drops below the best defect found
    best = -1
    w0 = w1 = w2 = w3 = -1
    npairs = pa.shape[0]
    for p in range(npairs):
        x = pa[p]
        y = pb[p]
        dxy = d[x, y]
        if dxy < best:
            break
        for q in range(p):
            z = pa[q]
            w = pb[q]
            if z == x or z == y or w == x or w == y:
                continue
            s1 = dxy + d[z, w]
            s2 = d[x, z] + d[y, w]
            s3 = d[x, w] + d[y, z]
            if s1 >= s2:
                if s2 >= s3:
                    defect = s1 - s2
                elif s1 >= s3:
                    defect = s1 - s3
                else:
                    defect = s3 - s1
            else:
                if s1 >= s3:
                    defect = s2 - s1
                elif s2 >= s3:
                    defect = s2 - s3
                else:
                    defect = s3 - s2
            if defect < best:
                continue
            # sort the quadruple for the lexicographic tie-break
            a0, a1, a2, a3 = x, y, z, w
            if a0 > a1:
                a0, a1 = a1, a0
            if a2 > a3:
                a2, a3 = a3, a2
            if a0 > a2:
                a0, a2 = a2, a0
            if a1 > a3:
                a1, a3 = a3, a1
            if a1 > a2:
                a1, a2 = a2, a1
            if defect > best or (a0, a1, a2, a3) < (w0, w1, w2, w3):
                best = defect
                w0, w1, w2, w3 = a0, a1, a2, a3
    return best, w0, w1, w2, w3


def _sorted_pairs(d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = d.shape[0]
    pa, pb = np.triu_indices(n, k=1)
    order = np.lexsort((pb, pa, -d[pa, pb]))
    return pa[order].astype(np.int64), pb[order].astype(np.int64)


def delta_four_point(g: MetricGraph, mode: str = "exhaustive", count: int = 100_000,
                     seed: int = 0, cap: int = DEFAULT_CAP) -> DeltaReport:
    """Four-point delta: minimal delta with d(x,y)+d(z,w) <= max(other sums) + 2 delta."""
    n = len(g)
    if mode == "exhaustive":
        if n > cap:
            raise CapExceeded(f"exhaustive delta capped at n={cap} (graph has {n}); use sampled mode")
        if n < 4:
            return DeltaReport(0, "exhaustive", ())
        d = np.ascontiguousarray(g.dist)
        pa, pb = _sorted_pairs(d)
        best, *wit = _four_point_kernel(d, pa, pb)
        witness = tuple(g.vertices[i] for i in wit) if best > 0 else ()
        return DeltaReport(max(int(best), 0), "exhaustive", witness)
    if mode == "sampled":
        return _delta_sampled(g, count, seed)
    raise ValueError(f"unknown mode {mode!r}")


def _delta_sampled(g: MetricGraph, count: int, seed: int, chunk: int = 250_000) -> DeltaReport:
    d = g.dist
    n = len(g)
    rng = np.random.default_rng(seed)
    best = 0
    wit = None
    done = 0
    while done < count:
        k = min(chunk, count - done)
        q = rng.integers(0, n, size=(k, 4))
        a, b, c, e = q.T
        s = np.stack([d[a, b] + d[c, e], d[a, c] + d[b, e], d[a, e] + d[b, c]])
        s.sort(axis=0)
        defect = s[2] - s[1]
        m = int(defect.max())
        if m > best:
            best = m
            wit = q[int(np.argmax(defect))]
        done += k
    witness = tuple(g.vertices[i] for i in sorted(wit)) if wit is not None else ()
    return DeltaReport(best, "sampled", witness, samples=count, seed=seed)


def delta_slim(g: MetricGraph, mode: str = "exhaustive", count: int = 10_000,
               seed: int = 0, cap: int = DEFAULT_CAP) -> DeltaReport:
    """Slim-triangle delta over canonical geodesic triangles, in quarter-units."""
    n = len(g)
    if mode == "exhaustive":
        if n > cap:
            raise CapExceeded(f"exhaustive delta capped at n={cap} (graph has {n}); use sampled mode")
        triples = combinations(range(n), 3)
        method = "exhaustive"
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        triples = (tuple(sorted(t)) for t in rng.integers(0, n, size=(count, 3)))
        method = "sampled"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    d = g.dist
    best, wit = 0, ()
    cache: dict = {}

    def side(i, j):
        if (i, j) not in cache:
            cache[(i, j)] = np.array(g.geodesic_idx(i, j))
        return cache[(i, j)]

    for x, y, z in triples:
        sides = (side(x, y), side(y, z), side(x, z))
        for k in range(3):
            others = np.concatenate([sides[m] for m in range(3) if m != k])
            gap = int(d[np.ix_(sides[k], others)].min(axis=1).max())
            if gap > best:
                best, wit = gap, (x, y, z)
    witness = tuple(g.vertices[i] for i in wit)
    if method == "exhaustive":
        return DeltaReport(2 * best, method, witness)
    return DeltaReport(2 * best, method, witness, samples=count, seed=seed)


def check_path(g: MetricGraph, path: Sequence) -> list[int]:
    if not path:
        raise NotAPath("empty path")
    ids = [g.idx(v) for v in path]
    for a, b in zip(ids, ids[1:]):
        if not any(k == b for k, _ in g.adjacency(a)):
            raise NotAPath(f"({g.vertices[a]!r}, {g.vertices[b]!r}) is not an edge")
    return ids


def quasigeodesic_constant(g: MetricGraph, path: Sequence) -> Fraction:
    """Minimal K with length(sub) <= K * d(ends) + K over all subsegments.

    Lengths are taken in edge-length units (a half-unit is 1/2), so that the
    additive constant is unit-consistent with the paper-style inequality.
    """
    ids = check_path(g, path)
    if len(ids) < 2:
        return Fraction(0)
    d = g.dist
    steps = np.array([g.weight(g.vertices[a], g.vertices[b]) for a, b in zip(ids, ids[1:])])
    arc = np.concatenate([[0], np.cumsum(steps)])
    idx = np.array(ids)
    best = Fraction(0)
    for i in range(len(ids) - 1):
        lengths = arc[i + 1:] - arc[i]
        chords = d[idx[i], idx[i + 1:]]
        # in half-units: L/2 <= K (c/2 + 1)  <=>  K >= L / (c + 2)
        ratios = lengths / (chords + 2)
        j = int(np.argmax(ratios))
        cand = Fraction(int(lengths[j]), int(chords[j]) + 2)
        if cand > best:
            best = cand
    return best
