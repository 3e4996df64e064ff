"""Colored complete graphs, tournaments, witnesses and their generators.

Adjacency is stored as one Python int per vertex used as a bit row, so
neighborhood intersections and degree counts are word-parallel ``&`` and
``int.bit_count`` operations.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParseError, PreconditionError, VertexRangeError
from .rng import make_rng


# -- bit helpers -------------------------------------------------------------

def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> list[int]:
    return list(iter_bits(mask))


def rows_from_matrix(mat: np.ndarray) -> tuple[int, ...]:
    """Pack a boolean n x n matrix into little-endian int rows."""
    packed = np.packbits(np.asarray(mat, dtype=bool), axis=1, bitorder="little")
    return tuple(int.from_bytes(r.tobytes(), "little") for r in packed)


def ceil_root_threshold(total: int, base: int, num: int, den: int) -> int:
    """Smallest integer c with c >= total * base^(-num/den), i.e. c^den * base^num >= total^den."""
    if base <= 1:
        return total
    c = max(0, int(total * base ** (-num / den)) - 2)
    while c ** den * base ** num < total ** den:
        c += 1
    while c > 0 and (c - 1) ** den * base ** num >= total ** den:
        c -= 1
    return c


class Color(str, enum.Enum):
    RED = "red"
    BLUE = "blue"

    @property
    def other(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


class Variant(str, enum.Enum):
    ONE_CLIQUE = "one-clique"
    TWO_CLIQUES = "two-cliques"


def _check_vertex(v: int, n: int) -> None:
    if not (0 <= v < n):
        raise VertexRangeError(f"vertex {v} out of range for n={n}")


# -- colored complete graphs -------------------------------------------------

@dataclass(frozen=True)
class ColoredCompleteGraph:
    """2-edge-coloring of K_n. ``red[v]`` is the bit row of red neighbours of v;
    every other pair is blue."""

    n: int
    red: tuple[int, ...]

    @classmethod
    def from_rows(cls, n: int, red_rows: Sequence[int], check: bool = True):
        if n < 1:
            raise PreconditionError("n must be at least 1")
        red_rows = tuple(int(r) for r in red_rows)
        if check:
            if len(red_rows) != n:
                raise PreconditionError("need one row per vertex")
            full = (1 << n) - 1
            for v, r in enumerate(red_rows):
                if r & ~full or (r >> v) & 1:
                    raise PreconditionError(f"row {v} has out-of-range bits or a self-pair")
                for u in iter_bits(r):
                    if not (red_rows[u] >> v) & 1:
                        raise PreconditionError(f"red rows not symmetric at {{{u},{v}}}")
        return cls(n, red_rows)

    @classmethod
    def from_red_edges(cls, n: int, edges: Iterable[tuple[int, int]]):
        rows = [0] * n
        for u, v in edges:
            _check_vertex(u, n)
            _check_vertex(v, n)
            if u == v:
                raise PreconditionError("self-pair")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def is_red(self, u: int, v: int) -> bool:
        return bool((self.red[u] >> v) & 1)

    def color_of(self, u: int, v: int) -> Color:
        if u == v:
            raise PreconditionError("no color on a self-pair")
        return Color.RED if self.is_red(u, v) else Color.BLUE

    def row(self, v: int, color: Color) -> int:
        if color is Color.RED:
            return self.red[v]
        return self.full ^ self.red[v] ^ (1 << v)

    def color_count(self, color: Color) -> int:
        reds = sum(r.bit_count() for r in self.red) // 2
        return reds if color is Color.RED else comb(self.n, 2) - reds

    def degree(self, v: int, color: Color) -> int:
        return self.row(v, color).bit_count()

    def red_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.red[u] >> (u + 1) << (u + 1))]

    def restrict(self, vertices: Iterable[int]) -> "ColoredCompleteGraph":
        """Induced coloring on ``vertices``, relabelled 0..m-1 in ascending order."""
        vs = sorted(set(vertices))
        idx = {v: i for i, v in enumerate(vs)}
        rows = []
        for v in vs:
            rows.append(mask_of(idx[u] for u in iter_bits(self.red[v]) if u in idx))
        return ColoredCompleteGraph(len(vs), tuple(rows))


def color_density(g: ColoredCompleteGraph, color: Color) -> Fraction:
    """Exact fraction of the C(n,2) pairs that carry ``color``."""
    if g.n < 2:
        raise PreconditionError("density is undefined for n < 2")
    return Fraction(g.color_count(Color(color)), comb(g.n, 2))


def neighborhood_mask(g: ColoredCompleteGraph, v: int, color: Color) -> int:
    _check_vertex(v, g.n)
    return g.row(v, Color(color))


def common_neighborhood_mask(g: ColoredCompleteGraph, vertices: Iterable[int], color: Color) -> int:
    color = Color(color)
    m = g.full
    for v in vertices:
        _check_vertex(v, g.n)
        m &= g.row(v, color)
    return m


def neighborhood(g: ColoredCompleteGraph, v: int, color: Color) -> frozenset[int]:
    return frozenset(iter_bits(neighborhood_mask(g, v, color)))


def common_neighborhood(g: ColoredCompleteGraph, vertices: Iterable[int], color: Color) -> frozenset[int]:
    """Vertices joined in ``color`` to every vertex of ``vertices``; all vertices for an empty set."""
    return frozenset(iter_bits(common_neighborhood_mask(g, vertices, color)))


_PAIR_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _pair_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _PAIR_CACHE:
        iu, ju = np.triu_indices(n, k=1)
        _PAIR_CACHE[n] = (iu, ju)
    return _PAIR_CACHE[n]


def sample_pair_indices(total: int, m: int, rng: np.random.Generator) -> list[int]:
    """First ``m`` slots of a partial Fisher-Yates shuffle of range(total)."""
    if not (0 <= m <= total):
        raise PreconditionError(f"m={m} outside [0, {total}]")
    if m == 0:
        return []
    perm = list(range(total))
    picks = rng.integers(np.arange(m), total).tolist()
    for i, j in enumerate(picks):
        perm[i], perm[j] = perm[j], perm[i]
    return perm[:m]


def random_coloring(n: int, m: int, seed: int) -> ColoredCompleteGraph:
    """Exactly ``m`` red pairs, uniform over all C(C(n,2), m) choices."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    total = comb(n, 2)
    chosen = sample_pair_indices(total, m, make_rng(seed))
    iu, ju = _pair_index(n)
    mat = np.zeros((n, n), dtype=bool)
    if chosen:
        idx = np.asarray(chosen)
        mat[iu[idx], ju[idx]] = True
        mat |= mat.T
    return ColoredCompleteGraph(n, rows_from_matrix(mat))


# -- tournaments ---------------------------------------------------------------

@dataclass(frozen=True)
class Tournament:
    """Orientation of K_n. ``out[v]`` is the bit row of out-neighbours of v."""

    n: int
    out: tuple[int, ...]

    @classmethod
    def from_rows(cls, n: int, out_rows: Sequence[int], check: bool = True):
        if n < 1:
            raise PreconditionError("n must be at least 1")
        out_rows = tuple(int(r) for r in out_rows)
        if check:
            if len(out_rows) != n:
                raise PreconditionError("need one row per vertex")
            full = (1 << n) - 1
            for v, r in enumerate(out_rows):
                if r & ~full or (r >> v) & 1:
                    raise PreconditionError(f"row {v} has out-of-range bits or a loop")
            for u in range(n):
                for v in range(u + 1, n):
                    if ((out_rows[u] >> v) & 1) == ((out_rows[v] >> u) & 1):
                        raise PreconditionError(f"pair {{{u},{v}}} needs exactly one orientation")
        return cls(n, out_rows)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]):
        rows = [0] * n
        for u, v in arcs:
            _check_vertex(u, n)
            _check_vertex(v, n)
            rows[u] |= 1 << v
        return cls.from_rows(n, rows)

    @classmethod
    def transitive(cls, n: int, order: Sequence[int] | None = None):
        """All arcs point forward in ``order`` (default 0..n-1)."""
        order = list(range(n)) if order is None else list(order)
        rows = [0] * n
        later = 0
        for v in reversed(order):
            rows[v] = later
            later |= 1 << v
        return cls(n, tuple(rows))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def arc(self, u: int, v: int) -> bool:
        """True iff u -> v."""
        return bool((self.out[u] >> v) & 1)

    def in_row(self, v: int) -> int:
        return self.full ^ self.out[v] ^ (1 << v)

    def outdeg(self, v: int, within: int | None = None) -> int:
        r = self.out[v]
        return (r if within is None else r & within).bit_count()

    def outdegrees(self) -> list[int]:
        return [r.bit_count() for r in self.out]

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.out[u])]

    def with_reversed(self, arcs: Iterable[tuple[int, int]]) -> "Tournament":
        rows = list(self.out)
        for u, v in arcs:
            if not (rows[u] >> v) & 1:
                raise PreconditionError(f"arc {u}->{v} not present")
            rows[u] ^= 1 << v
            rows[v] |= 1 << u
        return Tournament(self.n, tuple(rows))

    def restrict(self, vertices: Iterable[int]) -> "Tournament":
        vs = sorted(set(vertices))
        idx = {v: i for i, v in enumerate(vs)}
        rows = [mask_of(idx[u] for u in iter_bits(self.out[v]) if u in idx) for v in vs]
        return Tournament(len(vs), tuple(rows))


def make_dk(k: int) -> Tournament:
    """D_k on 3k vertices: blocks {0..k-1}, {k..2k-1}, {2k..3k-1}, each transitive in
    index order, all arcs from block i to block i+1 (mod 3)."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    return make_layered(1, k)


def make_layered(d: int, k: int) -> Tournament:
    """d copies of D_k stacked block-major, every arc between copies pointing forward."""
    if k < 1 or d < 1:
        raise PreconditionError("need d >= 1 and k >= 1")
    n = 3 * d * k
    rows = [0] * n
    block = (1 << k) - 1
    for c in range(d):
        base = 3 * k * c
        later_copies = ((1 << n) - 1) ^ ((1 << (base + 3 * k)) - 1)
        for part in range(3):
            nxt = base + ((part + 1) % 3) * k
            for i in range(k):
                v = base + part * k + i
                within = block ^ ((1 << (i + 1)) - 1)  # higher indices in the same block
                rows[v] = (within << (base + part * k)) | (block << nxt) | later_copies
    return Tournament(n, tuple(rows))


def random_tournament(n: int, seed: int) -> Tournament:
    """Each pair {i<j} oriented i->j by an independent fair coin."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    rng = make_rng(seed)
    iu, ju = _pair_index(n)
    coins = rng.integers(0, 2, size=iu.size).astype(bool)
    mat = np.zeros((n, n), dtype=bool)
    mat[iu[coins], ju[coins]] = True
    mat[ju[~coins], iu[~coins]] = True
    return Tournament(n, rows_from_matrix(mat))


# -- witnesses -----------------------------------------------------------------

@dataclass(frozen=True)
class FkWitness:
    a_set: tuple[int, ...]
    b_set: tuple[int, ...]
    color: Color
    variant: Variant

    def __post_init__(self):
        object.__setattr__(self, "a_set", tuple(sorted(self.a_set)))
        object.__setattr__(self, "b_set", tuple(sorted(self.b_set)))
        object.__setattr__(self, "color", Color(self.color))
        object.__setattr__(self, "variant", Variant(self.variant))

    @property
    def k(self) -> int:
        return len(self.a_set)


@dataclass(frozen=True)
class DkWitness:
    """Three blocks, each given in its transitive order; ``u0``..``u2`` are the sorted sets."""

    orders: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    u0: tuple[int, ...] = field(init=False)
    u1: tuple[int, ...] = field(init=False)
    u2: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        orders = tuple(tuple(int(x) for x in o) for o in self.orders)
        if len(orders) != 3:
            raise PreconditionError("a D_k witness has exactly three blocks")
        object.__setattr__(self, "orders", orders)
        for name, o in zip(("u0", "u1", "u2"), orders):
            object.__setattr__(self, name, tuple(sorted(o)))

    @property
    def k(self) -> int:
        return len(self.orders[0])

    @property
    def blocks(self):
        return (self.u0, self.u1, self.u2)


def verify_fk_witness(g: ColoredCompleteGraph, w: FkWitness) -> bool:
    for v in w.a_set + w.b_set:
        _check_vertex(v, g.n)
    k = len(w.a_set)
    if k < 1 or len(w.b_set) != k or len(set(w.a_set)) != k or len(set(w.b_set)) != k:
        return False
    if set(w.a_set) & set(w.b_set):
        return False
    inner_b = w.color if w.variant is Variant.TWO_CLIQUES else w.color.other
    cross = w.color.other
    for u, v in combinations(w.a_set, 2):
        if g.color_of(u, v) is not w.color:
            return False
    for u, v in combinations(w.b_set, 2):
        if g.color_of(u, v) is not inner_b:
            return False
    for u in w.a_set:
        for v in w.b_set:
            if g.color_of(u, v) is not cross:
                return False
    return True


def verify_dk_witness(t: Tournament, w: DkWitness) -> bool:
    seen: set[int] = set()
    for o in w.orders:
        for v in o:
            _check_vertex(v, t.n)
        if len(set(o)) != len(o) or seen & set(o):
            raise PreconditionError("D_k witness blocks overlap")
        seen |= set(o)
    k = len(w.orders[0])
    if k < 1 or any(len(o) != k for o in w.orders):
        return False
    for o in w.orders:
        for i, j in combinations(range(k), 2):
            if not t.arc(o[i], o[j]):
                return False
    for i in range(3):
        src, dst = w.orders[i], w.orders[(i + 1) % 3]
        for u in src:
            for v in dst:
                if not t.arc(u, v):
                    return False
    return True


__all__ = [
    "Color", "Variant", "ColoredCompleteGraph", "Tournament", "FkWitness", "DkWitness",
    "color_density", "neighborhood", "common_neighborhood", "neighborhood_mask",
    "common_neighborhood_mask", "random_coloring", "random_tournament", "make_dk",
    "make_layered", "verify_fk_witness", "verify_dk_witness", "iter_bits", "bits",
    "mask_of", "rows_from_matrix", "ceil_root_threshold", "sample_pair_indices", "ParseError",
]
