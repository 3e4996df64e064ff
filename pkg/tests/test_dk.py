from fractions import Fraction
from itertools import combinations, permutations
from statistics import fmean

import pytest
from hypothesis import given, strategies as st

from unavoidable.analysis import count_directed_triangles
from unavoidable.core import DkWitness, Tournament, make_dk, make_layered, random_tournament, verify_dk_witness
from unavoidable.dk import (
    BipartiteGraph,
    DkConfig,
    best_tripartition,
    bipartite_drc,
    build_h,
    count_positive,
    dk_oracle,
    compare_zar_bound,
    exceeds_zar_bound,
    find_dk,
    oracle_size,
    random_tripartition,
    tripartition_counts,
    tripartition_of,
    zar_bound,
    zarankiewicz_extract,
)
from unavoidable.errors import BudgetExceeded, PreconditionError
from unavoidable.rng import make_rng

from oracles import slow_dk


def brute_positive(t, v0, v1, v2):
    return sum(1 for a in v0 for b in v1 for c in v2 if t.arc(a, b) and t.arc(b, c) and t.arc(c, a))


def canonical(t, k):
    return tripartition_of(t, range(k), range(k, 2 * k), range(2 * k, 3 * k))


def random_bipartite(m, n, p, seed):
    rng = make_rng(seed)
    mat = rng.random((m, n)) < p
    adj = tuple(sum(1 << j for j in range(n) if mat[i, j]) for i in range(m))
    return BipartiteGraph(tuple(range(m)), tuple(range(m, m + n)), adj)


# -- tripartitions ---------------------------------------------------------------------

def test_tripartition_examples():
    t = Tournament.transitive(9)
    assert best_tripartition(t, 20, 0).positively_oriented_count == 0
    assert all(c == 0 for c in tripartition_counts(t, 20, 0))
    c3 = make_dk(1)
    counts = {brute_positive(c3, *([x] for x in p)) for p in permutations(range(3))}
    assert counts == {0, 1}
    assert canonical(c3, 1).positively_oriented_count == 1
    assert canonical(make_dk(4), 4).positively_oriented_count == 64
    with pytest.raises(PreconditionError):
        best_tripartition(Tournament.transitive(2), 5, 0)
    with pytest.raises(PreconditionError):
        best_tripartition(c3, 0, 0)


@given(st.integers(3, 20), st.integers(0, 2**32))
def test_tripartition_partition_and_count(n, seed):
    t = random_tournament(n, seed)
    p = best_tripartition(t, 5, seed)
    assert sorted(p.v0 + p.v1 + p.v2) == list(range(n))
    assert max(map(len, (p.v0, p.v1, p.v2))) - min(map(len, (p.v0, p.v1, p.v2))) <= 1
    assert p.positively_oriented_count == brute_positive(t, p.v0, p.v1, p.v2)
    tri = count_directed_triangles(t)
    assert p.below_ninth == (9 * p.positively_oriented_count < tri)


def test_tripartition_mean_clears_ninth():
    t = make_dk(4)
    counts = tripartition_counts(t, 10000, 123)
    assert fmean(counts) >= 64 / 9


# -- H ----------------------------------------------------------------------------------

def test_build_h_examples():
    t = Tournament.transitive(9)
    p = tripartition_of(t, range(3), range(3, 6), range(6, 9))
    assert build_h(t, p).edges == 0
    for k in range(1, 5):
        t = make_dk(k)
        h = build_h(t, canonical(t, k), Fraction(1, 27))
        assert h.edges == k * k
        assert h.threshold == Fraction(k, 18)
    h = build_h(make_dk(1), canonical(make_dk(1), 1), Fraction(1, 27))
    assert h.graph.edges() == [(1, 2)]
    with pytest.raises(PreconditionError):
        build_h(make_dk(1), canonical(make_dk(1), 1), 0)


@given(st.integers(3, 24), st.integers(0, 2**32))
def test_build_h_definition(n, seed):
    t = random_tournament(n, seed)
    p = best_tripartition(t, 3, seed)
    rep = build_h(t, p)
    tri = count_directed_triangles(t)
    delta = Fraction(tri, n ** 3)
    want = set()
    for b in p.v1:
        for c in p.v2:
            cnt = sum(1 for a in p.v0 if t.arc(a, b) and t.arc(b, c) and t.arc(c, a))
            if t.arc(b, c) and cnt >= 1 and 2 * cnt >= delta * n:
                want.add((b, c))
    assert set(rep.graph.edges()) == want
    assert all(t.arc(b, c) for b, c in rep.graph.edges())


# -- bipartite DRC -----------------------------------------------------------------------

def test_bipartite_drc_examples():
    full = BipartiteGraph(tuple(range(5)), tuple(range(5, 9)), (0b1111,) * 5)
    r = bipartite_drc(full, 2, 4)
    assert r.vertices == set(range(5)) and r.certification == "exhaustive"
    empty = BipartiteGraph(tuple(range(5)), tuple(range(5, 9)), (0,) * 5)
    assert bipartite_drc(empty, 1, 2).vertices == frozenset()
    with pytest.raises(PreconditionError):
        bipartite_drc(BipartiteGraph((), (1,), ()), 1, 1)
    with pytest.raises(PreconditionError):
        bipartite_drc(full, 2, 4, beta=Fraction(9, 10))


def test_bipartite_drc_random_certificate():
    for s in range(20):
        h = random_bipartite(40, 40, 0.6, s)
        r = bipartite_drc(h, 2, 4, None, 16, s)
        need = r.min_common
        assert need * need * 40 >= 40 * 40
        for a, b in combinations(sorted(r.vertices), 2):
            common = [j for j in range(40) if (h.adj[a] >> j) & 1 and (h.adj[b] >> j) & 1]
            assert len(common) >= need


# -- Zarankiewicz ------------------------------------------------------------------------

def test_zarankiewicz_examples():
    k33 = BipartiteGraph((0, 1, 2), (0, 1, 2), (0b111,) * 3)
    assert zarankiewicz_extract(k33, 2, 2) == ((0, 1), (0, 1))
    assert zarankiewicz_extract(BipartiteGraph((0,), (0,), (0,)), 1, 1) is None
    star = BipartiteGraph((0, 1), (10, 11, 12, 13, 14), (0b11111, 0))
    assert zarankiewicz_extract(star, 1, 3) == ((0,), (10, 11, 12))
    with pytest.raises(PreconditionError):
        zarankiewicz_extract(k33, 0, 1)
    big = BipartiteGraph((0,), tuple(range(40)), (0,))
    with pytest.raises(BudgetExceeded):
        zarankiewicz_extract(big, 1, 20, budget=1000)


def test_zar_bound_exact_predicate():
    for m in range(1, 15):
        for n in range(1, 10):
            for s in range(1, 4):
                for tt in range(1, min(n, 3) + 1):
                    b = zar_bound(m, n, s, tt)
                    for e in range(0, m * n + 1):
                        if abs(e - b) > 1e-9:
                            assert exceeds_zar_bound(e, m, n, s, tt) == (e > b)
                            assert compare_zar_bound(e, m, n, s, tt) == (1 if e > b else -1)


def test_zar_bound_equality_is_not_enough():
    # 2 x 3 with left degrees 2, 2: four edges, equal to the bound at s=1, tt=3, and no K_{1,3}
    f = BipartiteGraph((0, 1), (2, 3, 4), (0b011, 0b110))
    assert compare_zar_bound(f.edge_count, 2, 3, 1, 3) == 0
    assert zarankiewicz_extract(f, 1, 3) is None
    with pytest.raises(PreconditionError):
        compare_zar_bound(5, 2, 3, 1, 4)


def test_zarankiewicz_above_bound_always_succeeds():
    rng = make_rng(77)
    tried = 0
    for i in range(3000):
        m = int(rng.integers(2, 16))
        n = int(rng.integers(2, 8))
        s = int(rng.integers(1, 4))
        tt = int(rng.integers(1, min(n, 3) + 1))
        p = float(rng.uniform(0.5, 1.0))
        f = random_bipartite(m, n, p, i)
        if not exceeds_zar_bound(f.edge_count, m, n, s, tt):
            continue
        tried += 1
        got = zarankiewicz_extract(f, s, tt)
        assert got is not None
        lefts, rights = got
        assert len(lefts) == s and len(rights) == tt
        for a in lefts:
            for b in rights:
                assert (f.adj[a] >> (b - m)) & 1
    assert tried >= 1000


# -- the finder ---------------------------------------------------------------------------

def test_find_dk_examples():
    r = find_dk(Tournament.transitive(8), 1)
    assert r.witness is None and r.reason == "no directed triangles"
    r = find_dk(make_dk(1), 1)
    assert r.witness is not None and set(r.witness.u0 + r.witness.u1 + r.witness.u2) == {0, 1, 2}
    r = find_dk(make_dk(5), 2)
    assert r.witness is not None and verify_dk_witness(make_dk(5), r.witness)
    assert dk_oracle(make_dk(5), 2) is not None
    with pytest.raises(PreconditionError):
        find_dk(make_dk(1), 0)


def test_find_dk_on_dk():
    for m in range(1, 5):
        for k in range(1, m + 1):
            r = find_dk(make_dk(m), k)
            assert r.witness is not None and verify_dk_witness(make_dk(m), r.witness)


def test_find_dk_report():
    r = find_dk(make_dk(3), 2)
    text = r.to_csv()
    assert text.splitlines()[0] == "stage,outcome,size,param"
    assert r.d_capped  # ceil(k/delta) = 54 > 8
    r = find_dk(make_dk(3), 2, DkConfig(d=3))
    assert r.d == 3 and not r.d_capped


def test_find_dk_without_fallback_reason():
    # one reversed arc gives 7 triangles but no D_3
    t = Tournament.transitive(9).with_reversed([(0, 8)])
    r = find_dk(t, 3, DkConfig(retries=2, fallback=False))
    assert r.witness is None and r.reason == "hypothesis-too-small"
    r = find_dk(t, 3, DkConfig(retries=2))
    assert r.witness is None and r.reason == "not-found" and dk_oracle(t, 3) is None


def test_oracle_size_counts_disjoint_triples():
    assert oracle_size(12, 4) == 495 * 70 * 1
    assert oracle_size(5, 2) == 0


def test_dk_oracle_examples():
    assert dk_oracle(make_dk(1), 1) is not None
    assert dk_oracle(Tournament.transitive(9), 1) is None
    with pytest.raises(BudgetExceeded):
        dk_oracle(random_tournament(30, 0), 3, budget=10)


def test_dk_oracle_matches_slow():
    for s in range(200):
        t = random_tournament(12, s)
        w = dk_oracle(t, 2)
        slow = slow_dk(t, 2)
        assert (w is None) == (slow is None)
        if w is not None:
            assert verify_dk_witness(t, w)


@given(st.integers(3, 12), st.integers(0, 2**32), st.integers(1, 2))
def test_find_dk_sound_and_agrees(n, seed, k):
    t = random_tournament(n, seed)
    r = find_dk(t, k, DkConfig(seed=seed, retries=4))
    o = dk_oracle(t, k)
    assert (r.witness is None) == (o is None)
    if r.witness is not None:
        assert verify_dk_witness(t, r.witness)


def test_find_dk_soundness_fuzz():
    found = 0
    for s in range(1000):
        n = 6 + s % 19
        t = random_tournament(n, s)
        r = find_dk(t, 1 + s % 2, DkConfig(seed=s, retries=2, fallback=False))
        if r.witness is not None:
            found += 1
            assert verify_dk_witness(t, r.witness)
    assert found > 500
