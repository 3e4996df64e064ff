"""Slow reference implementations written from the definitions alone.

They use only pair predicates (``t.arc``, ``g.is_red``) and itertools, never
the bit-row kernels they are compared against.
"""
from itertools import combinations, permutations

import numpy as np

from unavoidable.core import Color, Variant


def arc_matrix(t):
    return np.array([[t.arc(u, v) if u != v else False for v in range(t.n)] for u in range(t.n)], dtype=bool)


def brute_triangles(t):
    """Cyclic triples by scanning all C(n,3) triples on the arc matrix."""
    n = t.n
    if n < 3:
        return 0
    a = arc_matrix(t)
    tri = np.array(list(combinations(range(n), 3)))
    i, j, k = tri[:, 0], tri[:, 1], tri[:, 2]
    fwd = a[i, j] & a[j, k] & a[k, i]
    bwd = a[j, i] & a[k, j] & a[i, k]
    return int(np.count_nonzero(fwd | bwd))


def brute_distance(t):
    """Fewest backward arcs over all n! orders."""
    best = None
    for order in permutations(range(t.n)):
        back = sum(1 for i in range(t.n) for j in range(i) if t.arc(order[i], order[j]))
        if best is None or back < best:
            best = back
    return best


def brute_triangles_through(t, v):
    return sum(1 for a, b in combinations([u for u in range(t.n) if u != v], 2)
               if (t.arc(v, a) and t.arc(a, b) and t.arc(b, v)) or (t.arc(v, b) and t.arc(b, a) and t.arc(a, v)))


def _mono(g, vs, color):
    return all((g.is_red(u, v)) == (color is Color.RED) for u, v in combinations(vs, 2))


def slow_fk(g, k):
    """Any member of F_k as (a, b, color, variant), from the family definition."""
    n = g.n
    for a in combinations(range(n), k):
        rest = [v for v in range(n) if v not in a]
        for b in combinations(rest, k):
            for color in (Color.RED, Color.BLUE):
                other = color.other
                if not _mono(g, a, color):
                    continue
                cross = all(g.is_red(u, v) == (other is Color.RED) for u in a for v in b)
                if not cross:
                    continue
                if _mono(g, b, other):
                    return a, b, color, Variant.ONE_CLIQUE
                if _mono(g, b, color):
                    return a, b, color, Variant.TWO_CLIQUES
    return None


def _transitive_perm(t, vs):
    for p in permutations(vs):
        if all(t.arc(p[i], p[j]) for i in range(len(p)) for j in range(i + 1, len(p))):
            return p
    return None


def slow_dk(t, k):
    """Three disjoint transitive k-sets U0 => U1 => U2 => U0, from the definition."""
    n = t.n
    for u0 in combinations(range(n), k):
        o0 = _transitive_perm(t, u0)
        if o0 is None:
            continue
        r1 = [v for v in range(n) if v not in u0]
        for u1 in combinations(r1, k):
            if not all(t.arc(a, b) for a in u0 for b in u1):
                continue
            o1 = _transitive_perm(t, u1)
            if o1 is None:
                continue
            r2 = [v for v in r1 if v not in u1]
            for u2 in combinations(r2, k):
                if all(t.arc(b, c) for b in u1 for c in u2) and all(t.arc(c, a) for c in u2 for a in u0):
                    o2 = _transitive_perm(t, u2)
                    if o2 is not None:
                        return o0, o1, o2
    return None


def is_transitive_order(t, order):
    return all(t.arc(order[i], order[j]) for i in range(len(order)) for j in range(i + 1, len(order)))
