"""Linear pseudo-Anosov stretch model and a discrete mapping-torus line.

A segment of an electric geodesic on the blown-up surface is summarized by
the lengths of its projections to the two invariant directions.  The
segment length is their sum (l1), which makes ``max >= length / 2`` exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import ResolutionTooCoarse, SharedAxes
from .examples import _line
from .metric_graph import MetricGraph, SubsetFamily
from .tree_of_spaces import TreeOfSpaces

AXIS_TOL = 1e-9


@dataclass(frozen=True)
class LinearPA:
    matrix: tuple

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if a * d - b * c != 1:
            raise ValueError(f"determinant of {self.matrix} is {a * d - b * c}, not 1")
        if a + d <= 2:
            raise ValueError(f"trace of {self.matrix} is {a + d}; need > 2")

    @classmethod
    def from_entries(cls, a, b, c, d) -> "LinearPA":
        return cls(((int(a), int(b)), (int(c), int(d))))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)

    @property
    def trace(self) -> int:
        return self.matrix[0][0] + self.matrix[1][1]

    @property
    def mu(self) -> float:
        t = self.trace
        return (t + math.sqrt(t * t - 4)) / 2

    def _eigvec(self, lam: float) -> np.ndarray:
        (a, b), (c, d) = self.matrix
        # (A - lam) v = 0; pick the better-conditioned row
        v = np.array([b, lam - a]) if abs(b) >= abs(c) else np.array([lam - d, c])
        return v / np.linalg.norm(v)

    @property
    def unstable(self) -> np.ndarray:
        return self._eigvec(self.mu)

    @property
    def stable(self) -> np.ndarray:
        return self._eigvec(1 / self.mu)

    def power(self, n: int) -> np.ndarray:
        M = self.array.astype(float)
        if n < 0:
            (a, b), (c, d) = self.matrix
            M = np.array([[d, -b], [-c, a]], dtype=float)
            n = -n
        return np.linalg.matrix_power(M, n)


@dataclass(frozen=True)
class FlatSegment:
    lam_us: float
    lam_uu: float

    def __post_init__(self):
        if self.lam_us < 0 or self.lam_uu < 0:
            raise ValueError("projection lengths are non-negative")

    @property
    def lam_eu(self) -> float:
        return self.lam_us + self.lam_uu


def stretch_components(pa: LinearPA, seg: FlatSegment, n: int) -> FlatSegment:
    mu = pa.mu
    return FlatSegment(mu ** n * seg.lam_us, mu ** (-n) * seg.lam_uu)


def segment_of(pa: LinearPA, v) -> FlatSegment:
    """Projection lengths of a plane vector along pa's unstable/stable directions."""
    basis = np.column_stack([pa.unstable, pa.stable])
    a, b = np.linalg.solve(basis, np.asarray(v, dtype=float))
    return FlatSegment(abs(a), abs(b))


@dataclass
class StretchVerdict:
    verdicts: list
    min_n: int

    @property
    def all_pass(self) -> bool:
        return all(self.verdicts)


def stretches(pa: LinearPA, n: int, k: float, seg: FlatSegment) -> bool:
    fwd = stretch_components(pa, seg, n).lam_us
    back = stretch_components(pa, seg, -n).lam_uu
    return max(fwd, back) >= k * seg.lam_eu


def minimal_n(pa: LinearPA, k: float, seg: FlatSegment) -> int:
    top = max(seg.lam_us, seg.lam_uu)
    if seg.lam_eu == 0:
        return 0
    n = max(0, math.ceil(math.log(k * seg.lam_eu / top) / math.log(pa.mu) - 1e-12))
    while not stretches(pa, n, k, seg):
        n += 1
    return n


def check_stretch(pa: LinearPA, n: int, k: float, segments: Sequence[FlatSegment]) -> StretchVerdict:
    if k <= 1:
        raise ValueError("stretch factor k must exceed 1")
    verdicts = [stretches(pa, n, k, s) for s in segments]
    return StretchVerdict(verdicts, max((minimal_n(pa, k, s) for s in segments), default=0))


def _parallel(u: np.ndarray, v: np.ndarray) -> bool:
    return abs(u[0] * v[1] - u[1] * v[0]) < AXIS_TOL


def check_axes(pas: Sequence[LinearPA]) -> None:
    for p, q in combinations(pas, 2):
        for u in (p.unstable, p.stable):
            for v in (q.unstable, q.stable):
                if _parallel(u, v):
                    raise SharedAxes(f"{p.matrix} and {q.matrix} share an invariant direction")


def stretch_count(p: LinearPA, q: LinearPA, n: int, k: float, v: np.ndarray) -> int:
    """How many of p^n, p^-n, q^n, q^-n stretch v by at least k (Euclidean length)."""
    norm = np.linalg.norm(v)
    return sum(np.linalg.norm(M @ v) >= k * norm for M in (p.power(n), p.power(-n), q.power(n), q.power(-n)))


@dataclass
class ThreeOfFourReport:
    n: int
    k: float
    counts: np.ndarray          # (pairs, segments)
    min_n: int

    @property
    def all_pass(self) -> bool:
        return bool((self.counts >= 3).all())


def _counts(pas, n, k, V) -> np.ndarray:
    rows = []
    norms = np.linalg.norm(V, axis=1)
    for p, q in combinations(pas, 2):
        c = np.zeros(len(V), dtype=int)
        for M in (p.power(n), p.power(-n), q.power(n), q.power(-n)):
            c += np.linalg.norm(V @ M.T, axis=1) >= k * norms
        rows.append(c)
    return np.array(rows)


def three_of_four(pas: Sequence[LinearPA], n: int, k: float, segments, max_n: int = 64) -> ThreeOfFourReport:
    """Per pair of maps and segment (plane vector), how many of the four iterates stretch by k."""
    check_axes(pas)
    V = np.atleast_2d(np.asarray(segments, dtype=float))
    counts = _counts(pas, n, k, V)
    min_n = None
    for m in range(1, max_n + 1):
        if (_counts(pas, m, k, V) >= 3).all():
            min_n = m
            break
    return ThreeOfFourReport(n, k, counts, min_n if min_n is not None else -1)


# discrete surrogate ---------------------------------------------------------------

def torus_grid(r: int) -> MetricGraph:
    """r x r square grid on the torus; vertex y*r + x, unit edges."""
    edges = []
    for y in range(r):
        for x in range(r):
            v = y * r + x
            edges.append((v, y * r + (x + 1) % r, 2))
            edges.append((v, ((y + 1) % r) * r + x, 2))
    return MetricGraph.from_edge_list(edges)


def torus_map(matrix, r: int) -> dict:
    (a, b), (c, d) = matrix
    out = {}
    for y in range(r):
        for x in range(r):
            out[y * r + x] = ((c * x + d * y) % r) * r + (a * x + b * y) % r
    return out


def punctures(r: int, spacing: int) -> SubsetFamily:
    """Singleton marks at the lattice (spacing Z)^2 mod r; invariant under SL(2, Z)."""
    if spacing < 1 or r % spacing:
        raise ValueError(f"spacing {spacing} must divide r = {r}")
    return SubsetFamily({f"p{x}_{y}": [y * r + x]
                         for y in range(0, r, spacing) for x in range(0, r, spacing)})


def mapping_torus_line(pa, r: int, L: int, spacing: int | None = None) -> TreeOfSpaces:
    """Line of L torus grids glued by identity then the matrix action mod r.

    ``pa`` is a LinearPA or any integer 2x2 matrix of determinant 1 (the
    identity gives the product line).  ``spacing`` (default r, only the fixed
    puncture at the origin) sets the lattice of marked punctures.
    """
    if r < 4 or L < 2:
        raise ValueError("mapping_torus_line needs r >= 4 and L >= 2")
    matrix = pa.matrix if isinstance(pa, LinearPA) else tuple(tuple(int(x) for x in row) for row in pa)
    (a, b), (c, d) = matrix
    if a * d - b * c != 1:
        raise ValueError(f"determinant of {matrix} is not 1")
    g = torus_grid(r)
    phi = torus_map(matrix, r)
    if len(set(phi.values())) != r * r:
        raise ResolutionTooCoarse(f"matrix action is not onto the {r}x{r} grid")
    fam = punctures(r, spacing or r)
    return _line([g] * L, [fam] * L, g, fam, lambda i, x: x, lambda i, x: phi[x])
