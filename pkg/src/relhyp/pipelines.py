"""Composite check pipelines: forward combination and converse.

Each pipeline returns a ``PipelineResult`` of flat key=value lines plus the
measured values, so the CLI and the acceptance tests share one code path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .electric import DEFAULT_EPS, compare_patterns, cone_off, electric_geodesic, penetration_pattern, \
    remove_backtracking
from .errors import ExhaustedBudget, RelHypError
from .examples import parallel_cones
from .flare import HallwayBuilder, converse_witness, flare_report, sample_hallways
from .hyperbolicity import DEFAULT_CAP, delta_four_point
from .metric_graph import SubsetFamily
from .quasiconvex import separation_and_coboundedness
from .tree_of_spaces import TreeOfSpaces, assemble_coned, cone_locus, validate


@dataclass
class PipelineResult:
    lines: list = field(default_factory=list)
    values: dict = field(default_factory=dict)
    failed_stage: str | None = None

    @property
    def ok(self) -> bool:
        return self.failed_stage is None

    def emit(self, **kv):
        self.values.update(kv)
        self.lines.append(" ".join(f"{k}={_fmt(v)}" for k, v in kv.items()))


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return "inf" if v == math.inf else f"{v:.4f}"
    if v is None:
        return "-"
    return str(v)


def _tree_diameter(tos: TreeOfSpaces) -> int:
    return max(tos.tree_distance(a, b) for a in tos.tree_vertices for b in tos.tree_vertices)


def combination(tos: TreeOfSpaces, eps: int = DEFAULT_EPS, cap: int = DEFAULT_CAP, seed: int = 0,
                rho: int = 8, count: int = 100, max_m: int = 8, delta_samples: int = 200_000,
                pairs: int = 20) -> PipelineResult:
    """validate -> assemble_coned -> cone_locus -> flare -> coboundedness -> delta -> penetration."""
    res = PipelineResult()
    stage = "validate"
    try:
        rep = validate(tos, cap=cap, seed=seed)
        res.emit(stage=stage, h1_qi_embedded=rep.max_edge_qi, h2_type_preserving=rep.type_preserving,
                 h3_qi_preserving_electrocution=rep.max_coned_qi, coned_delta_qu_max=rep.max_coned_delta)
        if not rep.type_preserving:
            res.failed_stage = stage
            return res

        stage = "assemble_coned"
        asm = assemble_coned(tos)
        res.emit(stage=stage, vertices=len(asm.graph), edges=asm.graph.num_edges)

        stage = "cone_locus"
        locus = cone_locus(tos, asm)
        res.emit(stage=stage, components=len(locus.components))

        stage = "flare"
        builder = HallwayBuilder(tos, asm)
        top = min(max_m, _tree_diameter(tos) // 2)
        flare_m = strict_m = None
        flare_rep = strict_rep = None
        for m in range(1, top + 1):
            if strict_m is None:
                cb = _sample(tos, asm, m, rho, count, seed, True, builder)
                if cb:
                    r = flare_report(cb, m, rho, seed)
                    if strict_rep is None or r.strict_flare:
                        strict_rep = r
                    if r.strict_flare:
                        strict_m = m
            if flare_m is None:
                hs = _sample(tos, asm, m, rho, count, seed, False, builder)
                if hs:
                    r = flare_report(hs, m, rho, seed)
                    if flare_rep is None or r.flare:
                        flare_rep = r
                    if r.flare:
                        flare_m = m
            if flare_m is not None and strict_m is not None:
                break
        res.emit(stage=stage, rho=rho, count=count, seed=seed,
                 h4_hallways_flare=flare_m is not None, flare_m=flare_m,
                 flare_H=None if flare_rep is None else flare_rep.H,
                 flare_lambda_min=None if flare_rep is None else flare_rep.lambda_min,
                 h5_cone_bounded_strict_flare=strict_m is not None, strict_m=strict_m,
                 cb_lambda_min=None if strict_rep is None else strict_rep.cb_lambda_min)
        if flare_m is None or strict_m is None:
            res.failed_stage = stage

        stage = "cobounded"
        T = SubsetFamily(locus.node_sets())
        cob = separation_and_coboundedness(asm.graph, T)
        res.emit(stage=stage, cobounded_D=cob.D if cob.applicable else None,
                 cobounded_eps=cob.eps, pair=",".join(cob.pair) if cob.pair else None)

        stage = "delta"
        G = asm.graph
        if len(G) <= cap:
            d = delta_four_point(G, "exhaustive", cap=cap)
        else:
            d = delta_four_point(G, "sampled", count=delta_samples, seed=seed)
        res.emit(stage=stage, delta_qu=d.delta_qu, method=d.tag)

        stage = "penetration"
        horo = cone_off(G, SubsetFamily(locus.horosphere_sets()))
        orig = asm.original_vertices()
        rng = np.random.default_rng(seed)
        worst = 0
        for _ in range(pairs):
            i, j = rng.choice(len(orig), size=2, replace=False)
            u, v = orig[int(i)], orig[int(j)]
            p1 = penetration_pattern(horo, G.geodesic(u, v), eps)
            q, _K = remove_backtracking(horo, electric_geodesic(horo, u, v), eps)
            p2 = penetration_pattern(horo, q, eps)
            worst = max(worst, compare_patterns(horo, p1, p2))
        res.emit(stage=stage, pairs=pairs, penetration_discrepancy=worst)

        hyps = (rep.type_preserving and strict_m is not None and flare_m is not None)
        res.emit(conclusion_strongly_hyperbolic=hyps and cob.applicable, delta_qu=d.delta_qu,
                 cobounded_D=cob.D if cob.applicable else None)
    except RelHypError as exc:
        res.failed_stage = res.failed_stage or stage
        res.emit(failed_stage=stage, error=type(exc).__name__)
    return res


def _sample(tos, asm, m, rho, count, seed, cb, builder) -> list:
    try:
        return sample_hallways(tos, asm, m, rho, count, seed, cone_bounded_only=cb, builder=builder)
    except ExhaustedBudget as exc:
        return exc.found


def converse(N: int, D0: int, eps: int = DEFAULT_EPS) -> PipelineResult:
    """Parallel-cones witness; fails if the discrepancy is below N/2 half-units."""
    res = PipelineResult()
    w = converse_witness(parallel_cones(N, D0), N, D0, eps)
    res.emit(N=N, D0=D0, K1=w.K1, K2=w.K2, length1=w.length1, length2=w.length2,
             discrepancy=w.discrepancy, required=Fraction(N, 2))
    res.values["witness"] = w
    if w.discrepancy < Fraction(N, 2):
        res.failed_stage = "discrepancy"
    return res
