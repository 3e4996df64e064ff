from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from unavoidable.core import (
    Color, ColoredCompleteGraph, DkWitness, FkWitness, Variant, make_dk, random_coloring, random_tournament,
)
from unavoidable.errors import ParseError
from unavoidable.formats import (
    deserialize, deserialize_coloring, deserialize_result, deserialize_tournament, parse_coloring, serialize,
    serialize_result,
)
from unavoidable.transitivize import transitivize


def test_parse_compact_forms():
    g = parse_coloring("n=3; red: 0 1")
    assert g.red_edges() == [(0, 1)]
    assert parse_coloring("n=2; red: (none)").red_edges() == []


def test_parse_errors_name_line():
    with pytest.raises(ParseError, match="duplicate pair"):
        parse_coloring("n=3; red: 0 1, 0 1")
    with pytest.raises(ParseError, match="line 4"):
        parse_coloring("UNAVOIDABLE-COLORING v1\nn 3\nred:\n0 3\n")
    with pytest.raises(ParseError, match="self-loop"):
        parse_coloring("UNAVOIDABLE-COLORING v1\nn 3\nred:\n1 1\n")


def test_roundtrips():
    t = make_dk(3)
    assert deserialize(serialize(t)) == t
    g = random_coloring(10, 20, 4)
    assert deserialize(serialize(g)) == g
    w = FkWitness((3, 1), (0, 2), Color.BLUE, Variant.TWO_CLIQUES)
    assert deserialize(serialize(w)) == w
    d = DkWitness(((1, 0), (3, 2), (5, 4)))
    assert deserialize(serialize(d)) == d


@given(st.integers(1, 40), st.integers(0, 2**32))
def test_roundtrip_property(n, seed):
    t = random_tournament(n, seed)
    assert deserialize_tournament(serialize(t)) == t
    g = random_coloring(n, seed % (n * (n - 1) // 2 + 1), seed)
    assert deserialize_coloring(serialize(g)) == g


def test_truncated_document():
    text = serialize(make_dk(2))
    with pytest.raises(ParseError, match="missing"):
        deserialize(text.split("\n")[0] + "\n")
    with pytest.raises(ParseError, match="missing|arcs"):
        deserialize("\n".join(text.split("\n")[:4]) + "\n")


def test_version_mismatch():
    with pytest.raises(ParseError, match="version mismatch"):
        deserialize("UNAVOIDABLE-TOURNAMENT v2\nn 1\narcs:\n")


def test_result_roundtrip():
    t = random_tournament(25, 1)
    res = transitivize(t)
    n, tri, bound, order, rev = deserialize_result(serialize_result(res))
    assert (n, tri, order, rev) == (25, res.triangles, list(res.order), res.reversed_edges)
    assert abs(bound - res.certified_bound) < 1e-6
