import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relhyp.errors import SharedAxes
from relhyp.pseudo_anosov import (
    FlatSegment,
    LinearPA,
    check_axes,
    check_stretch,
    mapping_torus_line,
    minimal_n,
    punctures,
    segment_of,
    stretch_components,
    stretch_count,
    three_of_four,
    torus_grid,
    torus_map,
)
from relhyp.tree_of_spaces import validate

CAT = LinearPA(((2, 1), (1, 1)))
GOLD = (3 + math.sqrt(5)) / 2


def test_mu_and_eigenvectors():
    assert abs(CAT.mu - GOLD) < 1e-12
    A = CAT.array.astype(float)
    assert np.allclose(A @ CAT.unstable, CAT.mu * CAT.unstable)
    assert np.allclose(A @ CAT.stable, CAT.stable / CAT.mu)


@pytest.mark.parametrize("m", [((1, 0), (0, 1)), ((2, 1), (1, 2)), ((1, 1), (0, 1))])
def test_rejects_non_hyperbolic(m):
    with pytest.raises(ValueError):
        LinearPA(m)


def test_power_inverse():
    assert np.allclose(CAT.power(3) @ CAT.power(-3), np.eye(2))


def test_stretch_components_and_determinant_invariant():
    seg = FlatSegment(1.0, 1.0)
    s = stretch_components(CAT, seg, 1)
    assert abs(s.lam_us - GOLD) < 1e-12 and abs(s.lam_uu - 1 / GOLD) < 1e-12
    for n in range(-5, 6):
        t = stretch_components(CAT, FlatSegment(0.3, 2.0), n)
        assert abs(t.lam_us * t.lam_uu - 0.6) < 1e-9


def test_segment_of_axes():
    u = segment_of(CAT, CAT.unstable)
    assert abs(u.lam_us - 1) < 1e-12 and u.lam_uu < 1e-12
    with pytest.raises(ValueError):
        FlatSegment(-1.0, 0.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 10), st.floats(0, 10), st.sampled_from([1.5, 2.0, 5.0]))
def test_check_stretch_passes_once_mu_n_reaches_2k(a, b, k):
    if a + b == 0:
        return
    seg = FlatSegment(a, b)
    n = math.ceil(math.log(2 * k) / math.log(CAT.mu))
    assert check_stretch(CAT, n, k, [seg]).all_pass
    assert minimal_n(CAT, k, seg) <= n


def test_check_stretch_rejects_small_k():
    with pytest.raises(ValueError):
        check_stretch(CAT, 3, 1.0, [FlatSegment(1, 1)])


def test_shared_axes_detected():
    with pytest.raises(SharedAxes):
        check_axes([CAT, LinearPA(((5, 3), (3, 2)))])     # CAT squared
    check_axes([CAT, LinearPA(((1, 1), (1, 2)))])


def test_three_of_four_small_sample():
    q = LinearPA(((1, 1), (1, 2)))
    rng = np.random.default_rng(0)
    V = rng.normal(size=(500, 2))
    rep = three_of_four([CAT, q], 3, 2.0, V)
    assert rep.all_pass and rep.min_n >= 1
    assert stretch_count(CAT, q, 3, 2.0, CAT.stable) >= 3


def test_torus_surrogate():
    g = torus_grid(4)
    assert len(g) == 16 and g.diameter() == 8
    phi = torus_map(((2, 1), (1, 1)), 4)
    assert sorted(phi.values()) == list(range(16)) and phi[0] == 0
    assert len(punctures(8, 2)) == 16
    with pytest.raises(ValueError):
        punctures(8, 3)


def test_mapping_torus_line_is_type_preserving():
    t = mapping_torus_line(CAT, 8, 3, spacing=2)
    assert validate(t, measure_delta=False).type_preserving


def test_mapping_torus_line_errors():
    with pytest.raises(ValueError):
        mapping_torus_line(CAT, 2, 3)
    with pytest.raises(ValueError):
        mapping_torus_line([[2, 0], [0, 1]], 8, 3)

