"""Exact measurements on tournaments: directed triangles, distance to
transitivity, and the packing / outdegree-sort bounds around it."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .core import Tournament, bits, iter_bits, mask_of
from .errors import BudgetExceeded, CertificateViolation, VertexRangeError
from .rng import make_rng

EXACT_DISTANCE_MAX_N = 20


@dataclass(frozen=True)
class FarnessReport:
    distance: int
    epsilon_far: Fraction
    method: str  # "exact" | "lower-bound" | "upper-bound"
    order: tuple[int, ...] | None = None


def count_triangles_within(t: Tournament, within: int) -> int:
    """Directed triangles with all three vertices in the vertex mask ``within``."""
    m = within.bit_count()
    total = comb(m, 3)
    for v in iter_bits(within):
        total -= comb((t.out[v] & within).bit_count(), 2)
    return total


def count_directed_triangles(t: Tournament, mode: str = "formula") -> int:
    """Number of cyclic triples.

    ``formula`` uses C(n,3) - sum_v C(outdeg v, 2): a transitive triple has
    exactly one vertex beating the other two. ``bitset`` walks every arc u->v
    and counts w with v->w->u; each cycle is seen once per arc.
    """
    if mode == "formula":
        return count_triangles_within(t, t.full)
    if mode == "bitset":
        acc = 0
        for u in range(t.n):
            into_u = t.in_row(u)
            for v in iter_bits(t.out[u]):
                acc += (t.out[v] & into_u).bit_count()
        return acc // 3
    raise ValueError(f"unknown mode {mode!r}")


def triangles_through_vertex(t: Tournament, v: int, within: int | None = None) -> int:
    """Cyclic triples containing v (inside ``within`` if given): the arcs from
    the out-neighbourhood of v to its in-neighbourhood."""
    if not (0 <= v < t.n):
        raise VertexRangeError(f"vertex {v} out of range for n={t.n}")
    w = t.full if within is None else within
    outs = t.out[v] & w
    ins = t.in_row(v) & w
    return sum((t.out[o] & ins).bit_count() for o in iter_bits(outs))


def backward_arcs(t: Tournament, order) -> list[tuple[int, int]]:
    """Arcs pointing from a later to an earlier vertex of ``order``."""
    back = []
    earlier = 0
    for v in order:
        for u in iter_bits(t.out[v] & earlier):
            back.append((v, u))
        earlier |= 1 << v
    return back


def count_backward(t: Tournament, order) -> int:
    earlier = 0
    total = 0
    for v in order:
        total += (t.out[v] & earlier).bit_count()
        earlier |= 1 << v
    return total


_POPCOUNT: dict[int, np.ndarray] = {}


def _popcount_table(n: int) -> np.ndarray:
    if n not in _POPCOUNT:
        pc = np.zeros(1 << n, dtype=np.int32)
        for b in range(n):
            pc[1 << b: 1 << (b + 1)] = pc[: 1 << b] + 1
        _POPCOUNT[n] = pc
    return _POPCOUNT[n]


def min_backward_order(out_rows, n: int) -> tuple[int, list[int]]:
    """Fewest backward arcs over all orders of a tournament given by local rows.

    Subset DP: ``best[S]`` is the minimum cost of an order of S placed as a
    prefix; appending v after S costs the arcs v -> S. Processed layer by
    popcount so each layer is a handful of vectorised gathers. Ties keep the
    lowest v.

    Minimum reversals to transitivity equals this minimum: reversing the
    backward arcs of any order makes it transitive, and a transitive result
    after r reversals has a topological order whose backward arcs in the input
    are among those r arcs.
    """
    if n > EXACT_DISTANCE_MAX_N:
        raise BudgetExceeded(f"exact distance limited to n <= {EXACT_DISTANCE_MAX_N}; use the bound operations")
    if n <= 1:
        return 0, list(range(n))
    size = 1 << n
    pc = _popcount_table(n)
    states = np.arange(size, dtype=np.int64)
    by_layer = np.argsort(pc, kind="stable")
    starts = np.searchsorted(pc[by_layer], np.arange(n + 2))
    big = np.iinfo(np.int32).max // 2
    best = np.full(size, big, dtype=np.int32)
    best[0] = 0
    choice = np.zeros(size, dtype=np.int8)
    outs = [int(r) for r in out_rows]
    for layer in range(1, n + 1):
        layer_states = states[by_layer[starts[layer]: starts[layer + 1]]]
        for v in range(n):
            sel = layer_states[(layer_states >> v) & 1 == 1]
            prev = sel ^ (1 << v)
            cand = best[prev] + pc[prev & outs[v]]
            better = cand < best[sel]
            if better.any():
                tgt = sel[better]
                best[tgt] = cand[better]
                choice[tgt] = v
    order = []
    s = size - 1
    while s:
        v = int(choice[s])
        order.append(v)
        s ^= 1 << v
    order.reverse()
    return int(best[size - 1]), order


def exact_block_order(t: Tournament, block) -> tuple[int, list[int]]:
    """Optimal order of the sub-tournament induced on ``block`` (global labels)."""
    vs = sorted(block)
    idx = {v: i for i, v in enumerate(vs)}
    block_mask = mask_of(vs)
    rows = [mask_of(idx[u] for u in iter_bits(t.out[v] & block_mask)) for v in vs]
    cost, local = min_backward_order(rows, len(vs))
    return cost, [vs[i] for i in local]


def transitivity_distance_exact(t: Tournament) -> FarnessReport:
    if t.n > EXACT_DISTANCE_MAX_N:
        raise BudgetExceeded(
            f"exact distance limited to n <= {EXACT_DISTANCE_MAX_N}; "
            "use packing_lower_bound / upper_bound_distance instead")
    cost, order = min_backward_order(t.out, t.n)
    return FarnessReport(cost, Fraction(cost, t.n * t.n), "exact", tuple(order))


def directed_triangles(t: Tournament) -> list[tuple[int, int, int]]:
    """All cyclic triples as sorted vertex triples, lexicographic."""
    tri = []
    for i in range(t.n):
        into_i = t.in_row(i)
        above_i = t.full >> (i + 1) << (i + 1)
        for j in iter_bits(t.out[i] & above_i):
            for l in iter_bits(t.out[j] & into_i & above_i):
                tri.append(tuple(sorted((i, j, l))))
    tri.sort()
    return tri


def greedy_packing(t: Tournament, seed: int | None = None) -> list[tuple[int, int, int]]:
    """Maximal edge-disjoint family of directed triangles taken greedily.

    Without a seed triples are scanned in lexicographic order using bit rows
    (one candidate search per pair). With a seed the list of all cyclic
    triples is shuffled first.
    """
    n = t.n
    full = t.full
    free = [full ^ (1 << i) for i in range(n)]  # free[i]: partners j with edge ij unused
    packing = []

    def take(a, b, c):
        for x, y in ((a, b), (b, c), (a, c)):
            free[x] &= ~(1 << y)
            free[y] &= ~(1 << x)
        packing.append((a, b, c))

    if seed is not None:
        tri = directed_triangles(t)
        for idx in make_rng(seed).permutation(len(tri)).tolist():
            a, b, c = tri[idx]
            if (free[a] >> b) & 1 and (free[b] >> c) & 1 and (free[a] >> c) & 1:
                take(a, b, c)
        return packing
    for i in range(n):
        into_i = t.in_row(i)
        for j in iter_bits(free[i] >> (i + 1) << (i + 1)):
            if not (free[i] >> j) & 1:
                continue
            if t.arc(i, j):  # need j->l->i
                cand = t.out[j] & into_i
            else:  # need i->l->j
                cand = t.out[i] & t.in_row(j)
            cand = (cand & free[i] & free[j]) >> (j + 1)
            if cand:
                take(i, j, j + 1 + ((cand & -cand).bit_length() - 1))
    return packing


def packing_lower_bound(t: Tournament, seed: int | None = None) -> int:
    """Size of a greedy edge-disjoint triangle packing; every packed triangle
    needs its own reversal, so this is a lower bound on the distance."""
    p = len(greedy_packing(t, seed))
    if t.n >= 4:
        # maximality: each triangle meets one of the 3p packed edges, each in <= n-2 triangles
        tri = count_directed_triangles(t)
        if tri > 3 * p * (t.n - 2):
            raise CertificateViolation(f"packing {p} too small for {tri} triangles")
    return p


def outdegree_order(t: Tournament, within: int | None = None) -> list[int]:
    """Vertices of ``within`` by outdegree inside it, descending, ties by index;
    reversed if that leaves more than half of the pairs backward."""
    w = t.full if within is None else within
    vs = bits(w)
    order = sorted(vs, key=lambda v: (-(t.out[v] & w).bit_count(), v))
    back = _count_backward_within(t, order, w)
    if 2 * back > comb(len(vs), 2):
        order.reverse()
    return order


def _count_backward_within(t, order, w):
    earlier = 0
    total = 0
    for v in order:
        total += (t.out[v] & earlier & w).bit_count()
        earlier |= 1 << v
    return total


def upper_bound_distance(t: Tournament) -> FarnessReport:
    order = outdegree_order(t)
    back = count_backward(t, order)
    if 2 * back > comb(t.n, 2):
        raise CertificateViolation("outdegree order left more than half the pairs backward")
    return FarnessReport(back, Fraction(back, t.n * t.n), "upper-bound", tuple(order))


def lower_bound_distance(t: Tournament, seed: int | None = None) -> FarnessReport:
    p = packing_lower_bound(t, seed)
    return FarnessReport(p, Fraction(p, t.n * t.n), "lower-bound")


SWEEP_HEADER = ["n", "seed", "triangles", "distance_lb", "distance_exact", "distance_ub"]


def sweep_row(t: Tournament, seed) -> list:
    exact = transitivity_distance_exact(t).distance if t.n <= EXACT_DISTANCE_MAX_N else "na"
    return [t.n, seed, count_directed_triangles(t), packing_lower_bound(t),
            exact, upper_bound_distance(t).distance]


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    w.writerows(rows)
    return buf.getvalue()
