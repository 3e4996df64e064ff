from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from unavoidable.core import Color, ColoredCompleteGraph, Tournament, make_dk, random_coloring, random_tournament
from unavoidable.errors import BudgetExceeded, PreconditionError
from unavoidable.ramsey import (
    find_mono_clique,
    find_transitive_subtournament,
    is_mono_clique,
    is_transitive_tuple,
    max_mono_clique_exact,
    max_transitive_exact,
)

from oracles import is_transitive_order


def brute_max_clique(g, color):
    for size in range(g.n, 0, -1):
        for vs in combinations(range(g.n), size):
            if all(g.is_red(u, v) == (color is Color.RED) for u, v in combinations(vs, 2)):
                return size
    return 0


def brute_max_transitive(t):
    for size in range(t.n, 0, -1):
        for vs in combinations(range(t.n), size):
            scores = sorted(sum(t.arc(u, v) for v in vs if v != u) for u in vs)
            if scores == list(range(size)):
                return size
    return 0


def test_clique_examples():
    g = ColoredCompleteGraph.from_red_edges(5, combinations(range(5), 2))
    w = find_mono_clique(g, 3)
    assert w.vertices == (0, 1, 2) and w.color is Color.RED
    c5 = ColoredCompleteGraph.from_red_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    w = find_mono_clique(c5, 3)
    assert w is None or is_mono_clique(c5, w.vertices, w.color)
    # the red 5-cycle has no monochromatic triangle (its blue complement is also a 5-cycle)
    assert max_mono_clique_exact(c5)[Color.RED][0] == 2
    assert max_mono_clique_exact(c5)[Color.BLUE][0] == 2
    with pytest.raises(PreconditionError):
        find_mono_clique(g, 0)


def test_clique_guarantee_at_4_to_the_k():
    for s in range(200):
        g = random_coloring(64, s % 2017, s)
        w = find_mono_clique(g, 3)
        assert w is not None and is_mono_clique(g, w.vertices, w.color)


def test_exact_clique_examples():
    g = ColoredCompleteGraph.from_red_edges(6, combinations(range(6), 2))
    r = max_mono_clique_exact(g)
    assert r[Color.RED][0] == 6 and r[Color.BLUE][0] == 1
    m = ColoredCompleteGraph.from_red_edges(4, [(0, 1), (2, 3)])
    r = max_mono_clique_exact(m)
    assert r[Color.RED][0] == 2 and r[Color.BLUE][0] == 2
    one = max_mono_clique_exact(ColoredCompleteGraph.from_red_edges(1, []))
    assert one[Color.RED][0] == 1 and one[Color.BLUE][0] == 1
    with pytest.raises(BudgetExceeded):
        max_mono_clique_exact(random_coloring(33, 10, 0))


@given(st.integers(1, 11), st.integers(0, 2**32), st.integers(1, 5))
def test_clique_greedy_vs_exact(n, seed, k):
    g = random_coloring(n, seed % (n * (n - 1) // 2 + 1), seed)
    exact = max_mono_clique_exact(g)
    for c in Color:
        assert exact[c][0] == brute_max_clique(g, c)
        assert is_mono_clique(g, exact[c][1].vertices, c)
    w = find_mono_clique(g, k)
    if w is not None:
        assert len(w.vertices) == k and is_mono_clique(g, w.vertices, w.color)
        assert k <= exact[w.color][0]
    else:
        assert max(exact[c][0] for c in Color) < k or n < 4 ** k
    assert find_mono_clique(g, k) == w


def test_transitive_examples():
    t = Tournament.transitive(4)
    assert find_transitive_subtournament(t, 4).vertices == (0, 1, 2, 3)
    w = find_transitive_subtournament(make_dk(1), 2)
    assert len(w.vertices) == 2 and is_transitive_tuple(make_dk(1), w.vertices)
    with pytest.raises(PreconditionError):
        find_transitive_subtournament(t, 0)


def test_transitive_guarantee():
    for s in range(1000):
        t = random_tournament(16, s)
        w = find_transitive_subtournament(t, 5)
        assert w is not None and is_transitive_order(t, w.vertices)


def test_exact_transitive_examples():
    assert max_transitive_exact(make_dk(1))[0] == 2
    assert max_transitive_exact(make_dk(2))[0] == 4
    assert max_transitive_exact(Tournament.transitive(7))[0] == 7
    with pytest.raises(BudgetExceeded):
        max_transitive_exact(random_tournament(21, 0))


@given(st.integers(1, 10), st.integers(0, 2**32), st.integers(1, 6))
def test_transitive_greedy_vs_exact(n, seed, k):
    t = random_tournament(n, seed)
    size, w = max_transitive_exact(t)
    assert size == brute_max_transitive(t)
    assert is_transitive_order(t, w.vertices)
    g = find_transitive_subtournament(t, k)
    if g is not None:
        assert len(g.vertices) == k <= size and is_transitive_order(t, g.vertices)
    if n >= 2 ** (k - 1):
        assert g is not None
