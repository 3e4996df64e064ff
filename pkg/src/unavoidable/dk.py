"""Finding D_k in a tournament with many directed triangles.

A balanced tripartition V0, V1, V2 is chosen to maximise the positively
oriented triangles a->b->c->a with a in V0, b in V1, c in V2. Pairs (b,c)
completed by many a form a bipartite graph H on V1 x V2. Dependent random
choice in H gives W1 whose d-tuples have large common neighbourhoods; a
transitive X1 in W1 and a transitive X2 in the common neighbourhood of X1
are matched index by index. A second bipartite graph F joins a in V0 to i
when (a, x_i, y_i) is positively oriented, and a K_{s,k} in F finishes the
pattern once a transitive k-subset of its left side is chosen.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, comb, log

from .analysis import count_triangles_within
from .core import DkWitness, Tournament, bits, ceil_root_threshold, iter_bits, mask_of, verify_dk_witness
from .errors import BudgetExceeded, CertificateViolation, PreconditionError
from .fk import EXHAUSTIVE_CERT_LIMIT, as_fraction, oracle_budget
from .ramsey import TRANSITIVE_EXACT_MAX_N, best_transitive, find_transitive_subtournament
from .rng import derive_seed, make_rng

CLEAN_TUPLE_LIMIT = 10**6


@dataclass(frozen=True)
class Tripartition:
    v0: tuple[int, ...]
    v1: tuple[int, ...]
    v2: tuple[int, ...]
    positively_oriented_count: int
    below_ninth: bool = False  # count fell short of ceil(t/9)

    @property
    def masks(self) -> tuple[int, int, int]:
        return mask_of(self.v0), mask_of(self.v1), mask_of(self.v2)


@dataclass(frozen=True)
class BipartiteGraph:
    """``adj[i]`` is the mask of right positions joined to ``left[i]``.

    Left and right labels live in separate namespaces, so F can use the
    index set 0..d-1 on its right side.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]
    adj: tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != len(self.left):
            raise PreconditionError("one adjacency row per left vertex")
        full = (1 << len(self.right)) - 1
        if any(r & ~full for r in self.adj):
            raise PreconditionError("adjacency row outside the right part")

    @classmethod
    def from_edges(cls, left, right, edges):
        left, right = tuple(left), tuple(right)
        li = {v: i for i, v in enumerate(left)}
        ri = {v: i for i, v in enumerate(right)}
        adj = [0] * len(left)
        for a, b in edges:
            if a not in li or b not in ri:
                raise PreconditionError(f"edge {(a, b)} is not in left x right")
            adj[li[a]] |= 1 << ri[b]
        return cls(left, right, tuple(adj))

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.adj)

    def edges(self) -> list[tuple[int, int]]:
        return [(self.left[i], self.right[j]) for i, r in enumerate(self.adj) for j in iter_bits(r)]

    def right_rows(self) -> list[int]:
        """Transpose: for each right position, the mask of left positions joined to it."""
        cols = [0] * len(self.right)
        for i, r in enumerate(self.adj):
            for j in iter_bits(r):
                cols[j] |= 1 << i
        return cols


# -- tripartitions ---------------------------------------------------------------------------

def count_positive(t: Tournament, v0: int, v1: int, v2: int) -> int:
    """Triples (a,b,c) in V0 x V1 x V2 with a->b, b->c, c->a (vertex masks)."""
    total = 0
    for b in iter_bits(v1):
        ins = t.in_row(b) & v0
        for c in iter_bits(t.out[b] & v2):
            total += (t.out[c] & ins).bit_count()
    return total


def random_tripartition(n: int, rng) -> tuple[int, int, int]:
    """Shuffle, then deal vertices round-robin into three parts."""
    parts = [0, 0, 0]
    for i, v in enumerate(rng.permutation(n).tolist()):
        parts[i % 3] |= 1 << v
    return parts[0], parts[1], parts[2]


def tripartition_counts(t: Tournament, trials: int, seed: int) -> list[int]:
    if t.n < 3:
        raise PreconditionError("a tripartition needs n >= 3")
    rng = make_rng(seed, 11)
    return [count_positive(t, *random_tripartition(t.n, rng)) for _ in range(trials)]


def best_tripartition(t: Tournament, trials: int, seed: int) -> Tripartition:
    """Most positively oriented triangles over ``trials`` uniform balanced tripartitions.

    Each cyclic triangle is positively oriented with probability 1/9 up to
    the balance correction, so the best sample usually clears t/9;
    ``below_ninth`` flags the cases where it does not.
    """
    if t.n < 3:
        raise PreconditionError("a tripartition needs n >= 3")
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    rng = make_rng(seed, 11)
    best = None
    for _ in range(trials):
        parts = random_tripartition(t.n, rng)
        c = count_positive(t, *parts)
        if best is None or c > best[0]:
            best = (c, parts)
    tri = count_triangles_within(t, t.full)
    c, (a, b, d) = best
    return Tripartition(tuple(bits(a)), tuple(bits(b)), tuple(bits(d)), c, 9 * c < tri)


def tripartition_of(t: Tournament, v0, v1, v2) -> Tripartition:
    """Tripartition with given parts, count filled in."""
    parts = [tuple(sorted(p)) for p in (v0, v1, v2)]
    seen = set()
    for p in parts:
        if seen & set(p):
            raise PreconditionError("tripartition parts overlap")
        seen |= set(p)
    if seen != set(range(t.n)):
        raise PreconditionError("tripartition parts must cover every vertex")
    c = count_positive(t, *(mask_of(p) for p in parts))
    tri = count_triangles_within(t, t.full)
    return Tripartition(*parts, c, 9 * c < tri)


# -- the graph H -------------------------------------------------------------------------------

@dataclass(frozen=True)
class HReport:
    graph: BipartiteGraph
    edges: int
    threshold: Fraction  # delta*n/2
    proof_bound: Fraction  # delta*n^2/6
    meets_proof_bound: bool | None  # None when the tripartition did not clear t/9


def build_h(t: Tournament, p: Tripartition, delta=None) -> HReport:
    """Pairs (b,c) in V1 x V2 with b->c completed by at least delta*n/2 vertices a
    in V0 (and at least one), delta = t/n^3 exactly unless given."""
    n = t.n
    tri = count_triangles_within(t, t.full)
    delta = Fraction(tri, n ** 3) if delta is None else as_fraction(delta)
    if delta <= 0 and tri > 0:
        raise PreconditionError("delta must be positive when the tournament has directed triangles")
    v0 = mask_of(p.v0)
    right_pos = {v: j for j, v in enumerate(p.v2)}
    v2 = mask_of(p.v2)
    adj = []
    for b in p.v1:
        ins = t.in_row(b) & v0
        row = 0
        for c in iter_bits(t.out[b] & v2):
            cnt = (t.out[c] & ins).bit_count()
            if cnt >= 1 and 2 * cnt >= delta * n:
                row |= 1 << right_pos[c]
        adj.append(row)
    h = BipartiteGraph(p.v1, p.v2, tuple(adj))
    for b, c in h.edges():
        if not t.arc(b, c):
            raise CertificateViolation(f"H edge ({b},{c}) without the arc b->c")
    e = h.edge_count
    bound = delta * n * n / 6
    meets = None if p.below_ninth else e >= bound
    return HReport(h, e, delta * n / 2, bound, meets)


# -- dependent random choice in a bipartite graph ------------------------------------------------

@dataclass
class BipartiteDrcResult:
    vertices: frozenset[int]  # labels from the left part
    min_common: int
    certification: str  # "exhaustive" | "sampled" | "vacuous"
    trials_used: int
    best_u1: int
    truncated: bool = False  # a sample set was cut down to keep tuple cleaning affordable


def _truncate_for_cleaning(members: list[int], d: int) -> tuple[list[int], bool]:
    m = len(members)
    if comb(m, d) <= CLEAN_TUPLE_LIMIT:
        return members, False
    while m > d and comb(m, d) > CLEAN_TUPLE_LIMIT:
        m -= 1
    return members[:m], True


def bipartite_drc(h: BipartiteGraph, d: int, hh: int, beta=None, trials: int = 64,
                  seed: int = 0) -> BipartiteDrcResult:
    """Left vertices whose d-tuples all have at least beta*|right| common neighbours.

    Each trial draws hh right vertices uniformly with repetition, takes their
    common left neighbourhood and deletes one vertex from every bad d-tuple.
    ``beta`` defaults to |left|^(-d/hh), the largest value the guarantee allows.
    """
    if d < 1 or hh < 1 or trials < 1:
        raise PreconditionError("d, hh and trials must be at least 1")
    L, R = len(h.left), len(h.right)
    if L == 0 or R == 0:
        raise PreconditionError("bipartite parts must be nonempty")
    if beta is None:
        need = ceil_root_threshold(R, L, d, hh)
    else:
        beta = as_fraction(beta)
        # beta <= L^(-d/hh)  <=>  beta^hh * L^d <= 1
        if beta ** hh * L ** d > 1:
            raise PreconditionError("beta exceeds |left|^(-d/hh)")
        b = beta * R
        need = ceil(b)
    cols = h.right_rows()
    adj = h.adj
    full_left = (1 << L) - 1

    def good(tup):
        m = (1 << R) - 1
        for i in tup:
            m &= adj[i]
        return m.bit_count() >= need

    rng = make_rng(seed, 13)
    best: list[int] | None = None
    best_u1 = 0
    truncated = False
    for _ in range(trials):
        u1 = full_left
        for j in rng.integers(0, R, size=hh).tolist():
            u1 &= cols[j]
        members = bits(u1)
        best_u1 = max(best_u1, len(members))
        if best is not None and len(members) <= len(best):
            continue
        members, cut = _truncate_for_cleaning(members, d)
        truncated |= cut
        cleaned = _clean(members, d, good)
        if best is None or len(cleaned) > len(best):
            best = cleaned
    cert = _certify(best, d, good, seed)
    return BipartiteDrcResult(frozenset(h.left[i] for i in best), need, cert, trials, best_u1, truncated)


def _clean(members, d, good):
    alive = set(members)
    for tup in combinations(members, d):
        if tup[-1] in alive and alive.issuperset(tup) and not good(tup):
            alive.discard(tup[-1])
    return sorted(alive)


def _certify(members, d, good, seed, samples=20000):
    if len(members) < d:
        return "vacuous"
    if comb(len(members), d) <= EXHAUSTIVE_CERT_LIMIT:
        for tup in combinations(members, d):
            if not good(tup):
                raise CertificateViolation(f"left tuple {tup} lacks common neighbours")
        return "exhaustive"
    rng = make_rng(seed, 17)
    for _ in range(samples):
        tup = tuple(sorted(rng.choice(members, size=d, replace=False).tolist()))
        if not good(tup):
            raise CertificateViolation(f"left tuple {tup} lacks common neighbours")
    return "sampled"


# -- Zarankiewicz completion --------------------------------------------------------------------

def zar_bound(m: int, n: int, s: int, tt: int) -> float:
    """(s-1)^(1/tt) (n-tt+1) m^(1-1/tt) + (tt-1) m: a bipartite graph with parts of
    sizes m and n and this many edges has s vertices of the first part with tt
    common neighbours. Use ``exceeds_zar_bound`` for an exact comparison."""
    return (s - 1) ** (1 / tt) * (n - tt + 1) * m ** (1 - 1 / tt) + (tt - 1) * m


def compare_zar_bound(edges: int, m: int, n: int, s: int, tt: int) -> int:
    """Sign of edges - zar_bound(m, n, s, tt), decided in integer arithmetic."""
    if s < 1 or tt < 1 or tt > n:
        raise PreconditionError("need s >= 1 and 1 <= tt <= n")
    rest = edges - (tt - 1) * m
    if rest < 0:
        return -1
    # compare rest with (n-tt+1) * ((s-1) m^(tt-1))^(1/tt) via tt-th powers
    lhs = rest ** tt
    rhs = (n - tt + 1) ** tt * (s - 1) * m ** (tt - 1)
    return (lhs > rhs) - (lhs < rhs)


def exceeds_zar_bound(edges: int, m: int, n: int, s: int, tt: int) -> bool:
    """edges > zar_bound(m, n, s, tt); such a graph always contains K_{s,tt}.

    Equality is not enough: with s = 1 a graph whose left degrees are all
    tt - 1 has exactly (tt-1) m edges and no K_{1,tt}.
    """
    return compare_zar_bound(edges, m, n, s, tt) > 0


def zarankiewicz_extract(f: BipartiteGraph, s: int, tt: int, budget: int | None = None):
    """First K_{s,tt} (s left, tt right) found by scanning right tt-subsets in
    lexicographic order; returns (left s-set, right tt-set) as label tuples or None."""
    if s < 1 or tt < 1:
        raise PreconditionError("s and tt must be at least 1")
    budget = oracle_budget() if budget is None else budget
    R = len(f.right)
    if comb(R, tt) > budget:
        raise BudgetExceeded(f"C({R},{tt}) right subsets exceed budget {budget}")
    cols = f.right_rows()
    full_left = (1 << len(f.left)) - 1
    for rset in combinations(range(R), tt):
        common = full_left
        for j in rset:
            common &= cols[j]
        if common.bit_count() >= s:
            lefts = bits(common)[:s]
            return tuple(f.left[i] for i in lefts), tuple(f.right[j] for j in rset)
    return None


# -- the pipeline ----------------------------------------------------------------------------------

@dataclass
class DkConfig:
    d: int | None = None  # None: min(ceil(k/delta), d_cap)
    d_cap: int = 8
    x0_size: int | None = None  # None: k
    tripartition_trials: int = 64
    drc_trials: int = 64
    retries: int = 16
    seed: int = 0
    fallback: bool = True
    budget: int | None = None


STAGE_HEADER = ["stage", "outcome", "size", "param"]


@dataclass
class DkSearchReport:
    witness: DkWitness | None
    reason: str  # found | no directed triangles | not-found | stage-failed | hypothesis-too-small
    rows: list = field(default_factory=list)
    found_by: str | None = None  # pipeline | oracle
    d: int = 0
    d_capped: bool = False

    def log(self, stage, outcome, size, param=""):
        self.rows.append([stage, outcome, size, param])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(STAGE_HEADER)
        w.writerows(self.rows)
        return buf.getvalue()


def theorem_threshold_reached(n: int, k: int, delta: Fraction) -> bool:
    """n >= delta^(-4k/delta), compared through logarithms."""
    if delta <= 0:
        return False
    if delta >= 1:
        return True
    return log(n) >= (4 * k / float(delta)) * log(1 / float(delta))


def _transitive_in(t: Tournament, cand: int, need: int) -> tuple[int, ...]:
    """A transitive order inside ``cand`` with up to ``need`` vertices (exact when small)."""
    if cand.bit_count() <= TRANSITIVE_EXACT_MAX_N:
        return best_transitive(t, cand, need)[:need]
    w = find_transitive_subtournament(t, need, within=cand)
    if w is not None:
        return w.vertices
    size = need - 1
    while size >= 1:
        w = find_transitive_subtournament(t, size, within=cand)
        if w is not None:
            return w.vertices
        size -= 1
    return ()


def _match(t: Tournament, h: BipartiteGraph, x1: tuple[int, ...], k: int):
    """Longest prefix pairing of X1 with a transitive X2 in the common H-neighbourhood."""
    pos = {v: i for i, v in enumerate(h.left)}
    best = ((), ())
    for L in range(len(x1), k - 1, -1):
        common = (1 << len(h.right)) - 1
        for x in x1[:L]:
            common &= h.adj[pos[x]]
        cand = mask_of(h.right[j] for j in iter_bits(common))
        x2 = _transitive_in(t, cand, L)
        m = min(L, len(x2))
        if m > len(best[0]):
            best = (x1[:m], x2[:m])
        if m == L:
            break
    return best


def _attempt(t, k, p, hrep, d, s, drc_trials, seed, report, tag):
    h = hrep.graph
    report.log("H", "ok" if hrep.edges else "empty", hrep.edges, f"{tag};threshold={float(hrep.threshold):.6f}")
    if not hrep.edges:
        return None
    # d-tuples only exist inside the left part
    d = max(k, min(d, len(h.left)))
    drc = bipartite_drc(h, d, 2 * d, None, drc_trials, derive_seed(seed, 1))
    report.log("drc", "ok" if drc.vertices else "empty", len(drc.vertices),
               f"{tag};d={d};need={drc.min_common};cert={drc.certification}")
    w1 = mask_of(drc.vertices)
    x1 = _transitive_in(t, w1, d)
    report.log("X1", "ok" if len(x1) >= k else "small", len(x1), tag)
    if len(x1) < k:
        return None
    xs, ys = _match(t, h, x1, k)
    report.log("X2", "ok" if len(ys) >= k else "small", len(ys), tag)
    if len(ys) < k:
        return None
    v0 = mask_of(p.v0)
    adj = []
    for a in p.v0:
        row = 0
        for i, (x, y) in enumerate(zip(xs, ys)):
            if t.arc(a, x) and t.arc(y, a):
                row |= 1 << i
        adj.append(row)
    f = BipartiteGraph(p.v0, tuple(range(len(xs))), tuple(adj))
    report.log("F", "ok", f.edge_count, f"{tag};m={len(p.v0)};n={len(xs)}")
    cols = f.right_rows()
    found_any = False
    for rset in combinations(range(len(xs)), k):
        common = (1 << len(p.v0)) - 1
        for j in rset:
            common &= cols[j]
        if common.bit_count() < s:
            continue
        found_any = True
        x0 = mask_of(p.v0[i] for i in iter_bits(common))
        u0 = _transitive_in(t, x0, k)
        if len(u0) >= k:
            report.log("X0", "ok", x0.bit_count(), f"{tag};s={s};R={'-'.join(map(str, rset))}")
            report.log("U0", "ok", k, tag)
            return DkWitness((u0[:k], tuple(xs[i] for i in rset), tuple(ys[i] for i in rset)))
    report.log("X0", "ok" if found_any else "none", 0, f"{tag};s={s}")
    report.log("U0", "none", 0, tag)
    return None


def find_dk(t: Tournament, k: int, cfg: DkConfig | None = None) -> DkSearchReport:
    """Search for D_k; every returned witness is verified."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    cfg = cfg or DkConfig()
    n = t.n
    report = DkSearchReport(None, "not-found")
    tri = count_triangles_within(t, t.full)
    report.log("triangles", "ok" if tri else "none", tri, f"n={n}")
    if tri == 0:
        report.reason = "no directed triangles"
        return report
    delta = Fraction(tri, n ** 3)
    if cfg.d is None:
        d_full = ceil(k / delta)
        d = min(d_full, cfg.d_cap)
        report.d_capped = d < d_full
    else:
        d = cfg.d
    d = max(d, k)
    report.d = d
    s = k if cfg.x0_size is None else cfg.x0_size
    report.log("params", "capped" if report.d_capped else "ok", d, f"delta={float(delta):.6f};s={s}")

    def finish(w, stage):
        if not verify_dk_witness(t, w):
            raise CertificateViolation(f"{stage} produced an invalid D_k witness")
        report.witness, report.reason, report.found_by = w, "found", stage
        return report

    if n >= 3 * k:
        for attempt in range(cfg.retries):
            sd = derive_seed(cfg.seed, attempt)
            p = best_tripartition(t, cfg.tripartition_trials, sd)
            tag = f"attempt={attempt}"
            report.log("tripartition", "below-ninth" if p.below_ninth else "ok",
                       p.positively_oriented_count, tag)
            w = _attempt(t, k, p, build_h(t, p, delta), d, s, cfg.drc_trials, sd, report, tag)
            if w is not None:
                return finish(w, "pipeline")

    budget = oracle_budget() if cfg.budget is None else cfg.budget
    if cfg.fallback and oracle_size(n, k) <= budget:
        w = dk_oracle(t, k, budget)
        report.log("oracle", "found" if w else "none", oracle_size(n, k), f"budget={budget}")
        if w is not None:
            return finish(w, "oracle")
        report.reason = "not-found"
        return report
    report.reason = "stage-failed" if theorem_threshold_reached(n, k, delta) else "hypothesis-too-small"
    return report


# -- exhaustive oracle --------------------------------------------------------------------------------

def _transitive_order(t: Tournament, vs) -> tuple[int, ...] | None:
    m = mask_of(vs)
    order = sorted(vs, key=lambda v: -(t.out[v] & m).bit_count())
    scores = [(t.out[v] & m).bit_count() for v in order]
    if scores != list(range(len(vs) - 1, -1, -1)):
        return None
    return tuple(order)


def oracle_size(n: int, k: int) -> int:
    """Ordered triples of disjoint k-sets, the oracle's worst-case enumeration."""
    return comb(n, k) * comb(max(n - k, 0), k) * comb(max(n - 2 * k, 0), k)


def dk_oracle(t: Tournament, k: int, budget: int | None = None) -> DkWitness | None:
    """First (U0, U1, U2) in lexicographic order of sorted blocks with each block
    transitive and U0 => U1 => U2 => U0, or None."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    budget = oracle_budget() if budget is None else budget
    if oracle_size(t.n, k) > budget:
        raise BudgetExceeded(f"{oracle_size(t.n, k)} disjoint block triples exceed budget {budget}")
    full = t.full
    for u0 in combinations(range(t.n), k):
        o0 = _transitive_order(t, u0)
        if o0 is None:
            continue
        beaten = full
        beats = full
        for v in u0:
            beaten &= t.out[v]
            beats &= t.in_row(v)
        for u1 in combinations(bits(beaten), k):
            o1 = _transitive_order(t, u1)
            if o1 is None:
                continue
            c2 = beats
            for v in u1:
                c2 &= t.out[v]
            for u2 in combinations(bits(c2), k):
                o2 = _transitive_order(t, u2)
                if o2 is not None:
                    return DkWitness((o0, o1, o2))
    return None


__all__ = ["Tripartition", "BipartiteGraph", "HReport", "BipartiteDrcResult", "DkConfig", "DkSearchReport",
           "count_positive", "random_tripartition", "tripartition_counts", "best_tripartition",
           "tripartition_of", "build_h", "bipartite_drc", "zar_bound", "compare_zar_bound", "exceeds_zar_bound", "oracle_size",
           "zarankiewicz_extract", "theorem_threshold_reached", "find_dk", "dk_oracle", "STAGE_HEADER"]
