"""Edge-reversal transitivization with a certified 27*sqrt(n*t) reversal count.

The root block is split recursively around a low-triangle pivot v: its
in-neighbours I go before v, its out-neighbours O after, and every arc O->I
is reversed. Blocks no larger than max(36*sqrt(t/n), 11) are finished
directly. Here t is the triangle count of the whole input, fixed once.
Arcs inside I and inside O are never touched by a split, so recursing on the
original induced subtournaments is the same as recursing on the modified one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt

from .analysis import (
    EXACT_DISTANCE_MAX_N,
    count_triangles_within,
    exact_block_order,
    outdegree_order,
    triangles_through_vertex,
)
from .core import Tournament, bits, iter_bits, mask_of
from .errors import CertificateViolation, PreconditionError

BASE_FLOOR = 12  # the splitting lemma needs blocks of at least 12 vertices


@dataclass(frozen=True)
class SplitStep:
    block: tuple[int, ...]
    pivot: int
    reversed: tuple[tuple[int, int], ...]
    children: tuple[tuple[int, ...], tuple[int, ...]]  # (I, O)
    triangles: int  # t(W)


@dataclass(frozen=True)
class LeafBlock:
    block: tuple[int, ...]
    method: str  # "acyclic" | "exact" | "outdegree"
    reversals: int


@dataclass
class TransitivizationResult:
    order: tuple[int, ...]
    reversed_edges: list[tuple[int, int]]
    certified_bound: float
    triangles: int
    steps: list[SplitStep] = field(default_factory=list)
    leaves: list[LeafBlock] = field(default_factory=list)
    max_triangle_weight: Fraction | None = None

    @property
    def reversals(self) -> int:
        return len(self.reversed_edges)

    def summary(self) -> str:
        return (f"n={len(self.order)} t={self.triangles} reversals={self.reversals} "
                f"bound={self.certified_bound:.6f}")


def _as_mask(vertices) -> int:
    return mask_of(vertices)


def _core_mask(t: Tournament, w: int) -> int:
    size = w.bit_count()
    core = 0
    for v in iter_bits(w):
        out = (t.out[v] & w).bit_count()
        if 6 * out >= size and 6 * (size - 1 - out) >= size:
            core |= 1 << v
    if 3 * core.bit_count() <= size - 6:
        raise CertificateViolation(f"balanced core of size {core.bit_count()} on a block of {size}")
    return core


def balanced_core(t: Tournament, block) -> frozenset[int]:
    """Vertices of ``block`` whose out- and in-degree inside it are both >= |block|/6.
    There are always more than |block|/3 - 2 of them."""
    w = _as_mask(block)
    if w.bit_count() < 2:
        raise PreconditionError("balanced core needs a block of at least 2 vertices")
    return frozenset(iter_bits(_core_mask(t, w)))


def _pivot(t: Tournament, w: int, core: int, t_w: int) -> tuple[int, int]:
    best_v, best = -1, -1
    for v in iter_bits(core):
        c = triangles_through_vertex(t, v, w)
        if best < 0 or c < best:
            best_v, best = v, c
    if best * core.bit_count() > 3 * t_w:
        raise CertificateViolation("pivot lies in more than 3t(W)/|C| triangles")
    return best_v, best


def choose_pivot(t: Tournament, block, core) -> int:
    """Vertex of ``core`` in the fewest triangles inside ``block`` (lowest index on ties)."""
    c = _as_mask(core)
    if not c:
        raise PreconditionError("empty core")
    w = _as_mask(block)
    return _pivot(t, w, c, count_triangles_within(t, w))[0]


def _should_split(size: int, n: int, tri: int) -> bool:
    # size > 36 * sqrt(tri / n)  <=>  size^2 * n > 1296 * tri
    return size >= BASE_FLOOR and size * size * n > 1296 * tri


def _finish(t: Tournament, w: int, t_w: int) -> tuple[list[int], str]:
    if t_w == 0:
        return sorted(iter_bits(w), key=lambda v: -(t.out[v] & w).bit_count()), "acyclic"
    if w.bit_count() <= EXACT_DISTANCE_MAX_N:
        return exact_block_order(t, bits(w))[1], "exact"
    return outdegree_order(t, w), "outdegree"


def transitivize(t: Tournament, debug: bool = False) -> TransitivizationResult:
    """Make ``t`` transitive by reversing arcs, at most 27*sqrt(n*t) of them.

    With ``debug`` the per-triangle weight sum(18/|W|) over tree blocks W
    containing the triangle is computed and checked against 18*sqrt(n/t).
    """
    n = t.n
    tri = count_triangles_within(t, t.full)
    steps: list[SplitStep] = []
    leaves: list[LeafBlock] = []
    reversed_edges: list[tuple[int, int]] = []
    tree_blocks: list[int] = []

    def process(w: int) -> list[int]:
        size = w.bit_count()
        tree_blocks.append(w)
        t_w = count_triangles_within(t, w)
        if t_w and _should_split(size, n, tri):
            core = _core_mask(t, w)
            v, through = _pivot(t, w, core, t_w)
            ins = t.in_row(v) & w
            outs = t.out[v] & w
            flips = tuple((o, i) for o in iter_bits(outs) for i in iter_bits(t.out[o] & ins))
            if len(flips) != through:
                raise CertificateViolation("O->I arcs differ from triangles through the pivot")
            if len(flips) * size > 18 * t_w:
                raise CertificateViolation("split reversed more than 18 t(W)/|W| arcs")
            if 6 * ins.bit_count() < size or 6 * outs.bit_count() < size:
                raise CertificateViolation("unbalanced split")
            steps.append(SplitStep(tuple(bits(w)), v, flips, (tuple(bits(ins)), tuple(bits(outs))), t_w))
            reversed_edges.extend(flips)
            return process(ins) + [v] + process(outs)
        order, method = _finish(t, w, t_w)
        back = []
        earlier = 0
        for u in order:
            back.extend((u, x) for x in iter_bits(t.out[u] & earlier))
            earlier |= 1 << u
        if 2 * len(back) > size * (size - 1) // 2:
            raise CertificateViolation("finisher left more than half of a block backward")
        leaves.append(LeafBlock(tuple(bits(w)), method, len(back)))
        reversed_edges.extend(back)
        return order

    order = process(t.full) if n else []
    res = TransitivizationResult(tuple(order), reversed_edges, 27 * sqrt(n * tri), tri, steps, leaves)
    r = len(reversed_edges)
    if tri == 0 and r:
        raise CertificateViolation("reversals on an already transitive tournament")
    if r * r > 729 * n * tri:  # r > 27 sqrt(n t)
        raise CertificateViolation(f"{r} reversals exceed 27*sqrt({n}*{tri})")
    if debug and tri:
        res.max_triangle_weight = _max_weight(t, tree_blocks)
        if res.max_triangle_weight ** 2 * tri > 324 * n:
            raise CertificateViolation("triangle weight above 18*sqrt(n/t)")
    return res


def _max_weight(t: Tournament, blocks: list[int]) -> Fraction:
    best = Fraction(0)
    for a in range(t.n):
        into_a = t.in_row(a)
        for b in iter_bits(t.out[a] >> (a + 1) << (a + 1)):
            for c in iter_bits(t.out[b] & into_a & (t.full >> (a + 1) << (a + 1))):
                m = (1 << a) | (1 << b) | (1 << c)
                wgt = sum((Fraction(18, w.bit_count()) for w in blocks if w & m == m), Fraction(0))
                best = max(best, wgt)
    return best


def verify_transitive(t: Tournament, order) -> bool:
    """Every arc of ``t`` points forward in ``order``."""
    order = list(order)
    if sorted(order) != list(range(t.n)):
        raise PreconditionError("order is not a permutation of the vertices")
    earlier = 0
    for v in order:
        if t.out[v] & earlier:
            return False
        earlier |= 1 << v
    return True


def apply_result(t: Tournament, res: TransitivizationResult) -> Tournament:
    return t.with_reversed(res.reversed_edges)


def certified_bound_holds(reversals: int, n: int, tri: int) -> bool:
    """reversals <= 27 sqrt(n t), exactly."""
    return reversals * reversals <= 729 * n * tri


__all__ = ["SplitStep", "LeafBlock", "TransitivizationResult", "balanced_core", "choose_pivot",
           "transitivize", "verify_transitive", "apply_result", "certified_bound_holds"]
