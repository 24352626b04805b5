import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from relhyp.errors import CapExceeded, NotAPath
from relhyp.examples import grid, tree
from relhyp.hyperbolicity import (
    DeltaReport,
    check_path,
    delta_four_point,
    delta_slim,
    four_point_defect,
    gromov_product,
    quasigeodesic_constant,
)
from relhyp.metric_graph import MetricGraph

from conftest import brute_delta_qu, connected_graphs


def brute_slim_qu(g: MetricGraph) -> int:
    """Slim-triangle delta of canonical triangles, quarter-units."""
    best = 0
    for x, y, z in itertools.combinations(g.vertices, 3):
        sides = [g.geodesic(x, y), g.geodesic(y, z), g.geodesic(x, z)]
        for k, s in enumerate(sides):
            others = set(sides[(k + 1) % 3]) | set(sides[(k + 2) % 3])
            for p in s:
                best = max(best, min(g.distance(p, q) for q in others))
    return 2 * best


def test_cycle8_frozen(c8):
    rep = delta_four_point(c8)
    assert rep.delta_qu == 8
    assert rep.witness == (0, 2, 4, 6)
    assert rep.line() == "delta_qu=8 method=exhaustive witness=0,2,4,6"
    assert delta_slim(c8).delta_qu == 8 == brute_slim_qu(c8)


def test_gromov_product_cycle8(c8):
    # quarter-units: d(0,4) + d(1,4) - d(0,1) = 8 + 6 - 2
    assert gromov_product(c8, 0, 1, 4) == 12
    assert gromov_product(c8, 0, 4, 0) == 0


def test_four_point_defect_matches_definition(c8):
    d = c8.dist
    assert four_point_defect(d, 0, 2, 4, 6) == 8
    assert four_point_defect(d, 0, 1, 2, 3) == 0


@pytest.mark.parametrize("depth,valence", [(2, 2), (3, 3)])
def test_trees_are_zero_hyperbolic(depth, valence):
    g, _ = tree(depth, valence)
    assert delta_four_point(g).delta_qu == 0
    assert delta_slim(g).delta_qu == 0


def test_small_graphs():
    g = MetricGraph.from_edge_list([(0, 1, 2)])
    rep = delta_four_point(g)
    assert rep.delta_qu == 0 and rep.witness == ()


@settings(max_examples=80, deadline=None)
@given(connected_graphs(min_n=4, max_n=10))
def test_exhaustive_matches_quadruple_enumeration(edges):
    g = MetricGraph.from_edge_list(edges)
    rep = delta_four_point(g)
    assert rep.delta_qu == brute_delta_qu(g.dist.tolist())
    if rep.witness:
        assert four_point_defect(g.dist, *(g.idx(v) for v in rep.witness)) == rep.delta_qu


@settings(max_examples=40, deadline=None)
@given(connected_graphs(min_n=4, max_n=10))
def test_sampled_never_exceeds_exhaustive(edges):
    g = MetricGraph.from_edge_list(edges)
    assert delta_four_point(g, "sampled", count=2000, seed=1).delta_qu <= delta_four_point(g).delta_qu


@settings(max_examples=40, deadline=None)
@given(connected_graphs(min_n=3, max_n=8))
def test_slim_matches_oracle(edges):
    g = MetricGraph.from_edge_list(edges)
    assert delta_slim(g).delta_qu == brute_slim_qu(g)


def test_sampled_is_deterministic_and_tagged():
    g, _ = grid(6, 6)
    a = delta_four_point(g, "sampled", count=5000, seed=3)
    b = delta_four_point(g, "sampled", count=5000, seed=3)
    assert a == b
    assert a.tag == "sampled(5000,3)"
    assert a.delta_qu <= delta_four_point(g).delta_qu


def test_cap_and_mode_errors(c8):
    with pytest.raises(CapExceeded):
        delta_four_point(c8, cap=5)
    with pytest.raises(CapExceeded):
        delta_slim(c8, cap=5)
    with pytest.raises(ValueError):
        delta_four_point(c8, mode="bogus")


def test_grid_delta_grows_with_size():
    small = delta_four_point(grid(3, 3)[0]).delta_qu
    big = delta_four_point(grid(6, 6)[0]).delta_qu
    assert big > small > 0


def test_quasigeodesic_constant(c8):
    assert quasigeodesic_constant(c8, [3]) == 0
    assert quasigeodesic_constant(c8, [0, 1, 2, 3, 4]) <= 1
    # long way round: 7 edges between endpoints at distance 1
    assert quasigeodesic_constant(c8, [0, 7, 6, 5, 4, 3, 2, 1]) == Fraction(7, 2)


def test_check_path(c8):
    assert check_path(c8, [0, 1]) == [0, 1]
    with pytest.raises(NotAPath):
        check_path(c8, [0, 2])
    with pytest.raises(NotAPath):
        check_path(c8, [])


def test_report_line_for_sampled():
    rep = DeltaReport(4, "sampled", (1, 2, 3, 4), samples=10, seed=0)
    assert rep.line() == "delta_qu=4 method=sampled(10,0) witness=1,2,3,4"
