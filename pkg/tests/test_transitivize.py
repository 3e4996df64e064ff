from fractions import Fraction
from math import sqrt

import pytest
from hypothesis import given, strategies as st

from unavoidable.analysis import count_directed_triangles, transitivity_distance_exact, triangles_through_vertex
from unavoidable.core import Tournament, make_dk, make_layered, random_tournament
from unavoidable.errors import PreconditionError
from unavoidable.rng import make_rng
from unavoidable.transitivize import (
    apply_result,
    balanced_core,
    certified_bound_holds,
    choose_pivot,
    transitivize,
    verify_transitive,
)

from oracles import is_transitive_order


def perturbed_transitive(n, flips, seed):
    rng = make_rng(seed)
    t = Tournament.transitive(n)
    arcs = set()
    for _ in range(flips):
        u, v = sorted(rng.choice(n, size=2, replace=False).tolist())
        arcs.add((u, v))
    return t.with_reversed(arcs)


def test_balanced_core_examples():
    c = balanced_core(Tournament.transitive(12), range(12))
    assert 0 not in c and 11 not in c and {5, 6} <= c and len(c) > 2
    assert balanced_core(make_dk(1), range(3)) == {0, 1, 2}
    assert balanced_core(make_dk(2), range(6)) == set(range(6))
    with pytest.raises(PreconditionError):
        balanced_core(make_dk(1), [0])


def test_choose_pivot_examples():
    t = Tournament.transitive(12)
    v = choose_pivot(t, range(12), balanced_core(t, range(12)))
    assert triangles_through_vertex(t, v) == 0
    assert choose_pivot(make_dk(1), range(3), {0, 1, 2}) == 0
    assert choose_pivot(make_dk(2), range(6), set(range(6))) == 0
    with pytest.raises(PreconditionError):
        choose_pivot(make_dk(1), range(3), set())


def test_transitivize_examples():
    t = Tournament.transitive(10, list(range(9, -1, -1)))
    r = transitivize(t)
    assert r.reversals == 0 and r.order == tuple(range(9, -1, -1))
    r = transitivize(make_dk(1))
    assert r.reversals == 1 and r.reversals <= 27 * sqrt(3)
    t = make_layered(4, 2)
    assert count_directed_triangles(t) == 32
    r = transitivize(t)
    assert verify_transitive(apply_result(t, r), r.order)
    assert 16 <= r.reversals <= 27 * sqrt(24 * 32)


def test_layered_exact_distance_is_sum_of_blocks():
    t = make_layered(4, 2)
    per_block = [transitivity_distance_exact(t.restrict(range(6 * i, 6 * i + 6))).distance for i in range(4)]
    assert per_block == [4, 4, 4, 4]


def test_verify_transitive():
    assert verify_transitive(Tournament.transitive(5), range(5))
    assert not any(verify_transitive(make_dk(1), o) for o in ([0, 1, 2], [1, 2, 0], [2, 1, 0]))
    with pytest.raises(PreconditionError):
        verify_transitive(make_dk(1), [0, 0, 1])


def check_result(t, r, debug=False):
    tri = count_directed_triangles(t)
    assert r.triangles == tri
    assert sorted(r.order) == list(range(t.n))
    assert is_transitive_order(apply_result(t, r), r.order)
    assert certified_bound_holds(r.reversals, t.n, tri)
    if tri == 0:
        assert r.reversals == 0
    for s in r.steps:
        w = len(s.block)
        ins, outs = s.children
        assert set(ins) | {s.pivot} | set(outs) == set(s.block)
        assert len(s.reversed) * w <= 18 * s.triangles
        if w >= 12:
            assert 6 * len(ins) >= w and 6 * len(outs) >= w
    if debug and tri:
        assert r.max_triangle_weight ** 2 * tri <= 324 * t.n


@given(st.integers(1, 120), st.integers(0, 2**32), st.booleans())
def test_transitivize_random(n, seed, debug):
    t = random_tournament(n, seed)
    r = transitivize(t, debug=debug and n <= 40)
    check_result(t, r, debug=debug and n <= 40)


@given(st.integers(12, 150), st.integers(0, 40), st.integers(0, 2**32))
def test_transitivize_perturbed_splits(n, flips, seed):
    t = perturbed_transitive(n, flips, seed)
    r = transitivize(t, debug=n <= 60)
    check_result(t, r, debug=n <= 60)


def test_perturbed_instances_actually_split():
    t = perturbed_transitive(120, 3, 1)
    r = transitivize(t, debug=True)
    assert r.steps and r.max_triangle_weight is not None
    check_result(t, r, debug=True)


@given(st.integers(1, 14), st.integers(0, 2**32))
def test_never_below_exact(n, seed):
    t = random_tournament(n, seed)
    assert transitivize(t).reversals >= transitivity_distance_exact(t).distance


def test_summary_line():
    r = transitivize(make_dk(1))
    assert r.summary() == f"n=3 t=1 reversals=1 bound={27 * sqrt(3):.6f}"
