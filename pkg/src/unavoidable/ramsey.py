"""Monochromatic cliques and transitive subtournaments.

The greedy searches carry the classical guarantees: a monochromatic K_k
whenever n >= 4^k, and a transitive subtournament on k vertices whenever
n >= 2^(k-1). The exact versions are small-instance oracles.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import Color, ColoredCompleteGraph, Tournament, iter_bits
from .errors import BudgetExceeded, PreconditionError

CLIQUE_EXACT_MAX_N = 32
TRANSITIVE_EXACT_MAX_N = 20


@dataclass(frozen=True)
class CliqueWitness:
    vertices: tuple[int, ...]
    color: Color

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "color", Color(self.color))


@dataclass(frozen=True)
class TransitiveWitness:
    vertices: tuple[int, ...]  # every arc points from earlier to later


def is_mono_clique(g: ColoredCompleteGraph, vertices, color: Color) -> bool:
    vs = list(vertices)
    return all(g.color_of(vs[i], vs[j]) is color for i in range(len(vs)) for j in range(i + 1, len(vs)))


def is_transitive_tuple(t: Tournament, order) -> bool:
    order = list(order)
    return all(t.arc(order[i], order[j]) for i in range(len(order)) for j in range(i + 1, len(order)))


def _descend(g: ColoredCompleteGraph, cand: int, start: int, k: int):
    picks = {Color.RED: [], Color.BLUE: []}
    v = start
    while True:
        cand &= ~(1 << v)
        if not cand:
            # nothing left: v is joined to every earlier pick in that pick's color
            for c in (Color.RED, Color.BLUE):
                if len(picks[c]) + 1 >= k:
                    return CliqueWitness(tuple(picks[c][: k - 1]) + (v,), c)
            return None
        red = g.red[v] & cand
        blue = cand & ~red
        if red.bit_count() >= blue.bit_count():
            c, cand = Color.RED, red
        else:
            c, cand = Color.BLUE, blue
        picks[c].append(v)
        if len(picks[c]) == k:
            return CliqueWitness(tuple(picks[c]), c)
        v = (cand & -cand).bit_length() - 1


def find_mono_clique(g: ColoredCompleteGraph, k: int, within: int | None = None):
    """Greedy majority-color descent for a monochromatic k-clique inside ``within``.

    Each step keeps the larger color class of the current vertex's remaining
    neighbourhood (red on ties) and moves to its lowest vertex. Picks of one
    color are pairwise joined in that color. Starts from every vertex in turn
    before giving up, so the result is deterministic.
    """
    if k < 1:
        raise PreconditionError("k must be at least 1")
    cand = g.full if within is None else within & g.full
    for start in iter_bits(cand):
        w = _descend(g, cand, start, k)
        if w is not None:
            return w
    return None


def greedy_color_clique(g: ColoredCompleteGraph, k: int, color: Color, start: int,
                        within: int | None = None):
    """Grow a ``color`` clique from ``start``, always adding the candidate with the
    most ``color`` neighbours among the remaining candidates (lowest index on ties)."""
    color = Color(color)
    cand = (g.full if within is None else within) & g.row(start, color)
    chosen = [start]
    while len(chosen) < k and cand:
        best_v, best_deg = -1, -1
        for v in iter_bits(cand):
            d = (g.row(v, color) & cand).bit_count()
            if d > best_deg:
                best_v, best_deg = v, d
        chosen.append(best_v)
        cand &= g.row(best_v, color)
    if len(chosen) < k:
        return None
    return CliqueWitness(tuple(chosen), color)


def _max_clique(rows, cand: int) -> tuple[int, ...]:
    best: list[int] = []

    def expand(chosen, p):
        nonlocal best
        if not p:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        while p:
            if len(chosen) + p.bit_count() <= len(best):
                return
            v = (p & -p).bit_length() - 1
            p &= ~(1 << v)
            chosen.append(v)
            expand(chosen, p & rows[v])
            chosen.pop()
        if len(chosen) > len(best):
            best = list(chosen)

    expand([], cand)
    return tuple(best)


def max_mono_clique_exact(g: ColoredCompleteGraph) -> dict:
    """Largest clique of each color: ``{Color.RED: (size, witness), Color.BLUE: ...}``."""
    if g.n > CLIQUE_EXACT_MAX_N:
        raise BudgetExceeded(f"exact clique search limited to n <= {CLIQUE_EXACT_MAX_N}")
    out = {}
    for c in (Color.RED, Color.BLUE):
        rows = [g.row(v, c) for v in range(g.n)]
        vs = _max_clique(rows, g.full)
        out[c] = (len(vs), CliqueWitness(vs, c))
    return out


def _em_descent(t: Tournament, cand: int, start: int) -> list[int]:
    front, back = [], []
    v = start
    while True:
        cand &= ~(1 << v)
        outs = t.out[v] & cand
        ins = cand & ~outs
        if outs.bit_count() >= ins.bit_count():
            front.append(v)  # v beats everything still in play
            cand = outs
        else:
            back.append(v)
            cand = ins
        if not cand:
            return front + back[::-1]
        v = (cand & -cand).bit_length() - 1


def find_transitive_subtournament(t: Tournament, k: int, within: int | None = None):
    """Erdős–Moser descent: keep the larger of the out/in neighbourhood of the
    current vertex (out on ties). Succeeds whenever |within| >= 2^(k-1)."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    cand = t.full if within is None else within & t.full
    for start in iter_bits(cand):
        order = _em_descent(t, cand, start)
        if len(order) >= k:
            return TransitiveWitness(tuple(order[:k]))
    return None


def best_transitive(t: Tournament, cand: int, need: int | None = None) -> tuple[int, ...]:
    """Largest transitive subtournament inside ``cand`` as an ordered tuple.
    Stops early once ``need`` vertices are found."""
    out = t.out

    @lru_cache(maxsize=None)
    def longest(p: int) -> tuple[int, ...]:
        # a transitive set has a unique source; recurse into the source's out-neighbourhood
        best: tuple[int, ...] = ()
        rest = p
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= ~(1 << v)
            sub = p & out[v]
            if sub.bit_count() + 1 <= len(best):
                continue
            cand_order = (v,) + longest(sub)
            if len(cand_order) > len(best):
                best = cand_order
                if need is not None and len(best) >= need:
                    break
        return best

    return longest(cand)


def max_transitive_exact(t: Tournament):
    """Exact maximum transitive subtournament, ``(size, TransitiveWitness)``."""
    if t.n > TRANSITIVE_EXACT_MAX_N:
        raise BudgetExceeded(f"exact transitive search limited to n <= {TRANSITIVE_EXACT_MAX_N}")
    order = best_transitive(t, t.full)
    return len(order), TransitiveWitness(order)
