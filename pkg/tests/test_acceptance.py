"""Acceptance criteria 1-8.  Each test records one PASS/FAIL line, then asserts it."""
import math
import time

import numpy as np

from relhyp.electric import compare_patterns, cone_off, electric_geodesic, penetration_pattern, \
    remove_backtracking, tracking_constant
from relhyp.examples import cycle, free_ball, grid, horoball, line_of_spaces, marked_cycle, tree
from relhyp.hyperbolicity import delta_four_point
from relhyp.metric_graph import MetricGraph, SubsetFamily
from relhyp.pipelines import combination, converse
from relhyp.pseudo_anosov import FlatSegment, LinearPA, check_stretch, mapping_torus_line, stretch_components, \
    three_of_four
from relhyp.quasiconvex import quasiconvexity_constant, separation_and_coboundedness
from relhyp.tree_of_spaces import assemble_coned, cone_locus

from conftest import brute_delta_qu, brute_distance, record


def small_instances():
    out = [cycle(n)[0] for n in range(3, 11)]
    out += [grid(w, h)[0] for w, h in ((2, 2), (3, 2), (3, 3), (2, 5))]
    out += [tree(2, 2)[0], tree(1, 3)[0], free_ball(1, 4)[0], free_ball(2, 1)[0], marked_cycle(10)[0]]
    rng = np.random.default_rng(2024)
    for _ in range(60):
        n = int(rng.integers(4, 11))
        edges = [(int(rng.integers(0, v)), v, int(rng.integers(1, 5))) for v in range(1, n)]
        for _ in range(int(rng.integers(0, 5))):
            a, b = (int(x) for x in rng.choice(n, 2, replace=False))
            edges.append((a, b, int(rng.integers(1, 5))))
        out.append(MetricGraph.from_edge_list(edges))
    return out


def test_criterion_1_oracle_equivalence():
    t0 = time.perf_counter()
    graphs = small_instances()
    mismatches = 0
    for g in graphs:
        assert len(g) <= 10
        edges = g.edges()
        for i, u in enumerate(g.vertices):
            for v in g.vertices[i:]:
                mismatches += g.distance(u, v) != brute_distance(edges, u, v)
        mismatches += delta_four_point(g).delta_qu != brute_delta_qu(g.dist.tolist())
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and dt < 10
    assert record(1, ok, f"instances={len(graphs)} mismatches={mismatches} seconds={dt:.2f} (limit 10)")


def test_criterion_2_kernel_scale():
    rng = np.random.default_rng(7)
    n = 120
    edges = [(int(rng.integers(0, v)), v, 2) for v in range(1, n)]
    edges += [(int(a), int(b), 2) for a, b in rng.integers(0, n, size=(60, 2)) if a != b]
    overlap = [MetricGraph.from_edge_list(edges), grid(12, 10)[0]]
    worst_ex = 0.0
    sampled_ok = True
    for g in overlap:
        t0 = time.perf_counter()
        ex = delta_four_point(g, cap=n)
        worst_ex = max(worst_ex, time.perf_counter() - t0)
        sampled_ok &= delta_four_point(g, "sampled", count=200_000, seed=1).delta_qu <= ex.delta_qu
    for g in small_instances()[:20]:
        sampled_ok &= delta_four_point(g, "sampled", count=2000, seed=1).delta_qu <= delta_four_point(g).delta_qu
    big = grid(50, 40)[0]
    t0 = time.perf_counter()
    rep = delta_four_point(big, "sampled", count=1_000_000, seed=0)
    dt = time.perf_counter() - t0
    ok = worst_ex <= 60 and dt <= 30 and sampled_ok and len(big) == 2000
    assert record(2, ok, f"exhaustive_n120_seconds={worst_ex:.2f} (limit 60) sampled_n2000_1e6_seconds={dt:.2f} "
                         f"(limit 30) sampled_delta_qu={rep.delta_qu} sampled_le_exhaustive={int(sampled_ok)}")


def horoball_family(n):
    return horoball(n, max(1, int(math.log2(n)) - 3), count=2)


def test_criterion_3_electrification_and_tracking():
    deltas, Ks = [], []
    for n in (16, 32, 64):
        g, fam = horoball_family(n)
        cs = cone_off(g, fam)
        deltas.append(delta_four_point(cs.graph, cap=len(cs.graph)).delta_qu)
        rng = np.random.default_rng(n)
        V = list(g.vertices)
        pairs = [tuple(V[i] for i in rng.choice(len(V), 2, replace=False)) for _ in range(300)]
        Ks.append(tracking_constant(g, cs, pairs).K)
    ok = max(deltas) - min(deltas) <= 2 and max(Ks) - min(Ks) <= 2
    assert record(3, ok, f"coned_delta_qu={deltas} (spread <= 2) tracking_K={Ks} (spread <= 2)")


def test_criterion_4_bounded_penetration():
    rows = []
    ok = True
    for n in (16, 32, 64):
        g, fam = horoball(n, max(1, int(math.log2(n)) - 3), count=3)
        rep = separation_and_coboundedness(g, fam)
        ok &= rep.applicable
        names = fam.names()
        for perm in (names[::-1], names[1:] + names[:1]):
            again = separation_and_coboundedness(g, SubsetFamily({f"P{k}": fam[x] for k, x in enumerate(perm)}))
            ok &= (again.eps, again.D) == (rep.eps, rep.D)
        cs = cone_off(g, fam)
        rng = np.random.default_rng(n)
        V = list(g.vertices)
        worst = 0
        for _ in range(100):
            u, v = (V[i] for i in rng.choice(len(V), 2, replace=False))
            p1 = penetration_pattern(cs, g.geodesic(u, v))
            q, _ = remove_backtracking(cs, electric_geodesic(cs, u, v))
            worst = max(worst, compare_patterns(cs, p1, penetration_pattern(cs, q)))
        ok &= worst <= rep.D + 4
        rows.append(f"n={n}:D={rep.D},disc={worst}")
    assert record(4, ok, " ".join(rows) + " (disc <= D + 4, D permutation-invariant)")


def test_criterion_5_cone_subtree_quasiconvexity():
    g, _ = grid(6, 3)
    bases = {
        "marked_cycle": (marked_cycle(8), "identity"),
        "marked_cycle_swap": (marked_cycle(8), "rotate:4"),
        "grid": ((g, SubsetFamily({"a": [0, 1, 2], "b": [15, 16, 17]})), "identity"),
    }
    rows, ok = [], True
    for name, (base, mp) in bases.items():
        vals = []
        for L in (4, 8, 16):
            t = line_of_spaces(base=base, L=L, map=mp)
            asm = assemble_coned(t)
            vals.append(max(quasiconvexity_constant(asm.graph, c.nodes) for c in cone_locus(t, asm).components))
        ok &= max(vals) - min(vals) <= 2
        rows.append(f"{name}={vals}")
    assert record(5, ok, " ".join(rows) + " (spread <= 2 across L=4,8,16)")


def test_criterion_6_forward_combination():
    results = {L: combination(mapping_torus_line([[2, 1], [1, 1]], 16, L, spacing=2), seed=0, rho=8)
               for L in (4, 6, 8)}
    vals = {L: r.values for L, r in results.items()}
    tp = all(v["h2_type_preserving"] for v in vals.values())
    qi = {L: (v["h1_qi_embedded"], v["h3_qi_preserving_electrocution"]) for L, v in vals.items()}
    qi_stable = len(set(qi.values())) == 1
    strict = {L: (v["strict_m"], v["cb_lambda_min"]) for L, v in vals.items()}
    flare_ok = all(m is not None and m <= 8 and lam > 1 for m, lam in strict.values())
    D = [vals[L]["cobounded_D"] for L in (4, 6, 8)]
    D_stable = None not in D and max(D) - min(D) <= 2
    deltas = [vals[L]["delta_qu"] for L in (4, 6, 8)]
    delta_stable = max(deltas) - min(deltas) <= 4
    ok = tp and qi_stable and flare_ok and D_stable and delta_stable
    lam = ",".join(f"{s[1]}@m={s[0]}" for s in strict.values())
    assert record(6, ok, f"type_preserving={int(tp)} qi={qi[4]} qi_stable={int(qi_stable)} "
                         f"cb_lambda_min=[{lam}] flare={int(flare_ok)} cobounded_D={D} (spread <= 2) "
                         f"D_stable={int(D_stable)} delta_qu={deltas} (spread <= 4) delta_stable={int(delta_stable)}")


def test_criterion_7_converse():
    rows, Ks, ok = [], set(), True
    for N in (10, 20, 40):
        r = converse(N, 4)
        v = r.values
        Ks.add((v["K1"], v["K2"]))
        ok &= r.ok and v["discrepancy"] >= N / 2
        rows.append(f"N={N}:K=({v['K1']},{v['K2']}),disc={v['discrepancy']}")
    ok &= len(Ks) == 1
    assert record(7, ok, " ".join(rows) + " (K fixed across N, disc >= N/2)")


def test_criterion_8_stretch_numerics():
    p = LinearPA(((2, 1), (1, 1)))
    q = LinearPA(((1, 1), (1, 2)))
    mu_err = abs(p.mu - (3 + math.sqrt(5)) / 2)
    rng = np.random.default_rng(0)
    segs = [FlatSegment(a, b) for a, b in rng.exponential(size=(10_000, 2))]
    stretch_ok = check_stretch(p, 3, 2.0, segs).all_pass and p.mu ** 3 >= 4
    V = rng.normal(size=(10_000, 2))
    first = three_of_four([p, q], 1, 2.0, V)
    at_min = three_of_four([p, q], first.min_n, 2.0, V)
    det_err = 0.0
    for s in segs[:1000]:
        for n in (-4, -1, 2, 5):
            t = stretch_components(p, s, n)
            det_err = max(det_err, abs(t.lam_us * t.lam_uu - s.lam_us * s.lam_uu))
    ok = mu_err < 1e-9 and stretch_ok and at_min.all_pass and det_err < 1e-9
    assert record(8, ok, f"mu_err={mu_err:.1e} mu^3={p.mu ** 3:.2f} check_stretch(k=2,n=3)={int(stretch_ok)} "
                         f"three_of_four_min_n={first.min_n} pass={int(at_min.all_pass)} det_err={det_err:.1e}")
