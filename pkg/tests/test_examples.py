import pytest

from relhyp.errors import ParamOutOfRange, UnknownName
from relhyp.examples import (
    cycle,
    free_ball,
    generate,
    grid,
    horoball,
    line_of_spaces,
    marked_cycle,
    parallel_cones,
    tree,
)
from relhyp.hyperbolicity import delta_four_point
from relhyp.quasiconvex import quasiconvexity_constant


def test_sizes():
    assert len(tree(3, 2)[0]) == 15
    assert len(cycle(5)[0]) == 5
    assert len(grid(4, 3)[0]) == 12
    # ball of radius r in F_2 has 2 * 3^r - 1 vertices
    assert len(free_ball(2, 3)[0]) == 53
    assert len(free_ball(2, 4)[0]) == 161
    assert len(free_ball(1, 5)[0]) == 11


def test_free_ball_is_a_tree():
    g, _ = free_ball(2, 3)
    assert g.num_edges == len(g) - 1
    assert delta_four_point(g).delta_qu == 0
    assert g.diameter() == 12


def test_horoball_structure():
    g, fam = horoball(16, 2, count=2, gap=2)
    assert len(g) == 1 + 2 * (3 * 16 + 1)
    assert fam.names() == ["H0", "H1"]
    assert len(fam["H0"]) == 48
    for name in fam.names():
        assert quasiconvexity_constant(g, fam[name]) == 0
    # going up a level halves horizontal distance: 0 to 8 on the base is 8 steps, 3 through level 2
    base = min(fam["H0"])
    assert g.distance(base, base + 8) < 16
    _, fb = horoball(16, 2, cone="base")
    assert len(fb["H0"]) == 16


def test_parallel_cones_and_marked_cycle():
    t = parallel_cones(3, 4)
    assert t.tree_vertices == ["t0", "t1", "t2", "t3"]
    assert t.families["t0"]["right"] == frozenset({4, 9})
    g, fam = marked_cycle(10)
    assert fam["b"] == frozenset({5, 6})


def test_line_of_spaces_maps():
    t = line_of_spaces(L=3, map="rotate:2")
    assert t.maps[("s0", 1)][7] == 1
    t = line_of_spaces(L=2, map={x: (8 - x) % 8 for x in range(8)})
    assert t.maps[("s0", 1)][1] == 7


def test_parameter_checks():
    for call in (lambda: cycle(2), lambda: grid(1, 1), lambda: horoball(2, 1),
                 lambda: horoball(8, 1, cone="x"), lambda: parallel_cones(0, 2), lambda: marked_cycle(7)):
        with pytest.raises(ParamOutOfRange):
            call()


def test_generate_registry():
    g, _ = generate("cycle", 6)
    assert len(g) == 6
    with pytest.raises(UnknownName):
        generate("nope")
