"""Finding a member of F_k in a 2-edge-coloring dense in both colors.

Pipeline: the bidegree core S, then dependent random choice inside S to get
a set T whose small tuples have many common neighbours in both colors. A
monochromatic clique D is taken in T and a second monochromatic clique in
the opposite-color common neighbourhood of D. Below the size where this is
guaranteed, a direct greedy search and then the exhaustive oracle take over.
"""
from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .core import (
    Color,
    ColoredCompleteGraph,
    FkWitness,
    Variant,
    ceil_root_threshold,
    color_density,
    iter_bits,
    mask_of,
    random_coloring,
    verify_fk_witness,
)
from .errors import BudgetExceeded, CertificateViolation, HypothesisViolated, PreconditionError
from .ramsey import find_mono_clique, greedy_color_clique
from .rng import derive_seed, make_rng

DEFAULT_ORACLE_BUDGET = 10**8
EXHAUSTIVE_CERT_LIMIT = 10**6


def oracle_budget(default: int = DEFAULT_ORACLE_BUDGET) -> int:
    """Enumeration budget; the ``UNAVOIDABLE_BUDGET`` environment variable overrides it."""
    env = os.environ.get("UNAVOIDABLE_BUDGET")
    return int(env) if env else default


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float (via its repr)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass
class DrcConfig:
    alpha: Fraction
    h: int
    k: int
    beta: Fraction | None = None  # None: the largest allowed value |S|^(-k/h)
    trials: int = 64
    seed: int = 0

    def __post_init__(self):
        self.alpha = as_fraction(self.alpha)
        if self.beta is not None:
            self.beta = as_fraction(self.beta)


@dataclass
class DrcResult:
    vertices: frozenset[int]
    min_common: int  # every k-tuple has at least this many common neighbours per color
    certification: str  # "exhaustive" | "sampled" | "vacuous"
    trials_used: int
    best_w: int
    lemma_bound: float  # the expectation bound alpha^h (1-alpha)^h |S| / 2 - 2


@dataclass
class FkSearchReport:
    witness: FkWitness | None
    stage_log: dict = field(default_factory=dict)
    exhausted: bool = False  # True when the oracle ran, so a missing witness is definitive


# -- bidegree core ---------------------------------------------------------------------

def _check_epsilon(eps: Fraction) -> None:
    if not (0 < eps <= Fraction(1, 2)):
        raise PreconditionError(f"epsilon must lie in (0, 1/2], got {eps}")


def bidegree_core(g: ColoredCompleteGraph, epsilon) -> frozenset[int]:
    """Vertices with degree >= epsilon*n/4 in both colors. When both colors
    have density >= epsilon there are at least epsilon*n/2 of them."""
    eps = as_fraction(epsilon)
    _check_epsilon(eps)
    if g.n < 4:
        raise PreconditionError("bidegree core needs n >= 4")
    core = set()
    for v in range(g.n):
        red = g.degree(v, Color.RED)
        blue = g.n - 1 - red
        if 4 * red >= eps * g.n and 4 * blue >= eps * g.n:
            core.add(v)
    if color_density(g, Color.RED) >= eps and color_density(g, Color.BLUE) >= eps:
        if 2 * len(core) < eps * g.n:
            raise CertificateViolation(f"bidegree core of size {len(core)} below epsilon*n/2")
    return frozenset(core)


# -- dependent random choice -------------------------------------------------------------

def _good_tuple(g, tup, need):
    red = blue = g.full
    for v in tup:
        red &= g.red[v]
        blue &= g.row(v, Color.BLUE)
    return red.bit_count() >= need and blue.bit_count() >= need


def clean_bad_tuples(members: list[int], k: int, good) -> list[int]:
    """Delete the highest vertex of every bad k-tuple, tuples scanned lexicographically."""
    alive = set(members)
    for tup in combinations(sorted(members), k):
        if tup[-1] not in alive or not alive.issuperset(tup):
            continue
        if not good(tup):
            alive.discard(tup[-1])
    return sorted(alive)


def certify_tuples(members, k, good, seed=0, samples=20000) -> str:
    """Check ``good`` on every k-subset, or on random ones above the exhaustive limit."""
    members = sorted(members)
    if len(members) < k:
        return "vacuous"
    if comb(len(members), k) <= EXHAUSTIVE_CERT_LIMIT:
        for tup in combinations(members, k):
            if not good(tup):
                raise CertificateViolation(f"tuple {tup} lacks common neighbours")
        return "exhaustive"
    rng = make_rng(seed, 7)
    for _ in range(samples):
        tup = tuple(sorted(rng.choice(members, size=k, replace=False).tolist()))
        if not good(tup):
            raise CertificateViolation(f"tuple {tup} lacks common neighbours")
    return "sampled"


def dependent_random_choice(g: ColoredCompleteGraph, S, cfg: DrcConfig,
                            min_common: int | None = None) -> DrcResult:
    """Best cleaned set over ``cfg.trials`` draws of two random h-samples U1, U2
    (uniform, with repetition) of W = N_R(U1) & N_B(U2) & S.

    Every k-subset of the result has at least beta*n common neighbours in each
    color. ``min_common`` overrides the integer form of beta*n.
    """
    if cfg.trials < 1:
        raise PreconditionError("trials must be at least 1")
    if cfg.h < 1 or cfg.k < 1:
        raise PreconditionError("h and k must be at least 1")
    S = sorted(S)
    n, s = g.n, len(S)
    for v in S:
        red = g.degree(v, Color.RED)
        if red < cfg.alpha * n or (n - 1 - red) < cfg.alpha * n:
            raise PreconditionError(f"vertex {v} of S has a color degree below alpha*n")
    if cfg.beta is not None:
        # beta <= s^(-k/h)  <=>  beta^h * s^k <= 1
        if s and cfg.beta ** cfg.h * s ** cfg.k > 1:
            raise PreconditionError("beta exceeds |S|^(-k/h)")
        b = cfg.beta * n
        need = int(b) if b.denominator == 1 else int(b) + 1
    else:
        need = ceil_root_threshold(n, max(s, 1), cfg.k, cfg.h)
    if min_common is not None:
        need = min_common
    a = float(cfg.alpha)
    bound = 0.5 * (a * (1 - a)) ** cfg.h * s - 2
    if not S:
        return DrcResult(frozenset(), need, "vacuous", 0, 0, bound)

    s_mask = mask_of(S)
    rng = make_rng(cfg.seed, 5)
    blue_rows = [g.row(v, Color.BLUE) for v in range(n)]
    best: list[int] | None = None
    best_w = 0

    def good(tup):
        return _good_tuple(g, tup, need)

    for _ in range(cfg.trials):
        draw = rng.integers(0, n, size=2 * cfg.h).tolist()
        w = s_mask
        for x in draw[: cfg.h]:
            w &= g.red[x]
        for y in draw[cfg.h:]:
            w &= blue_rows[y]
        members = list(iter_bits(w))
        best_w = max(best_w, len(members))
        if best is not None and len(members) < len(best):
            continue
        cleaned = clean_bad_tuples(members, cfg.k, good)
        if best is None or (len(cleaned), [-x for x in cleaned]) > (len(best), [-x for x in best]):
            best = cleaned
    cert = certify_tuples(best, cfg.k, good, cfg.seed)
    return DrcResult(frozenset(best), need, cert, cfg.trials, best_w, bound)


# -- assembling the pattern -----------------------------------------------------------------

def _witness_from(D, color, X, x_color) -> FkWitness:
    variant = Variant.TWO_CLIQUES if x_color is color else Variant.ONE_CLIQUE
    return FkWitness(tuple(D), tuple(X), color, variant)


def _second_clique(g, clique, k):
    nbhd = g.full
    for v in clique.vertices:
        nbhd &= g.row(v, clique.color.other)
    x = find_mono_clique(g, k, within=nbhd)
    if x is None:
        return None
    return _witness_from(clique.vertices, clique.color, x.vertices, x.color)


def _cliques_from_each_start(g, k, within, both_colors=False):
    seen = set()
    for start in iter_bits(within):
        found = [find_mono_clique(g, k, within=within & ~((1 << start) - 1))]
        if both_colors:
            found += [greedy_color_clique(g, k, c, start, within) for c in (Color.RED, Color.BLUE)]
        for c in found:
            if c is not None and (c.vertices, c.color) not in seen:
                seen.add((c.vertices, c.color))
                yield c


def theorem_threshold_reached(n: int, k: int, eps: Fraction) -> bool:
    # n >= (16/eps)^(2k+1), compared exactly
    return Fraction(n) >= (16 / eps) ** (2 * k + 1)


def find_fk(g: ColoredCompleteGraph, k: int, epsilon, cfg: DrcConfig | None = None,
            fallback: bool = True, budget: int | None = None) -> FkSearchReport:
    """Search for a member of F_k; every returned witness is verified."""
    eps = as_fraction(epsilon)
    _check_epsilon(eps)
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if g.n < 2 or color_density(g, Color.RED) < eps or color_density(g, Color.BLUE) < eps:
        raise HypothesisViolated("hypothesis violated: a color has density below epsilon")
    n = g.n
    log_ = {}
    report = FkSearchReport(None, log_)
    seed = 0 if cfg is None else cfg.seed
    trials = 64 if cfg is None else cfg.trials

    def done(w, stage):
        if w is not None:
            if not verify_fk_witness(g, w):
                raise CertificateViolation(f"stage {stage} produced an invalid witness")
            report.witness = w
            log_["found_by"] = stage
        return report

    S = bidegree_core(g, eps) if n >= 4 else frozenset(range(n))
    log_["S"] = len(S)
    alpha = eps / 4
    h = 2 * k
    drc_cfg = DrcConfig(alpha, h, k, None, trials, seed)
    # beta*n = min(4^k, n * |S|^(-k/h))
    root_need = ceil_root_threshold(n, max(len(S), 1), k, h)
    need = min(4 ** k, root_need)
    if n >= 4:
        drc = dependent_random_choice(g, S, drc_cfg, min_common=need)
        T = mask_of(drc.vertices)
        log_.update(T=len(drc.vertices), trials=drc.trials_used, beta_n=need,
                    certification=drc.certification)
        for clique in _cliques_from_each_start(g, k, T):
            w = _second_clique(g, clique, k)
            if w is not None:
                log_["fallback"] = "none"
                return done(w, "pipeline")
    else:
        log_.update(T=0, trials=0, beta_n=need, certification="vacuous")

    if theorem_threshold_reached(n, k, eps):
        raise CertificateViolation("pipeline failed above the guaranteed size")

    log_["fallback"] = "direct"
    for clique in _cliques_from_each_start(g, k, g.full, both_colors=True):
        w = _second_clique(g, clique, k)
        if w is not None:
            return done(w, "direct")

    budget = oracle_budget() if budget is None else budget
    if fallback and comb(n, k) * comb(n - k, k) <= budget:
        log_["fallback"] = "oracle"
        report.exhausted = True
        return done(fk_oracle(g, k, budget), "oracle")
    log_["fallback"] = "direct-only"
    return report


# -- exhaustive oracle -------------------------------------------------------------------------

def _is_clique(g, vs, color):
    m = mask_of(vs)
    return all((g.row(v, color) | (1 << v)) & m == m for v in vs)


def fk_oracle(g: ColoredCompleteGraph, k: int, budget: int | None = None) -> FkWitness | None:
    """First F_k witness scanning a_set, then color, then b_set, then variant, or None.

    a_set must be a clique of some color c and b_set must lie in the common
    opposite-color neighbourhood of a_set, which prunes the enumeration.
    """
    if k < 1:
        raise PreconditionError("k must be at least 1")
    budget = oracle_budget() if budget is None else budget
    if comb(g.n, k) * comb(max(g.n - k, 0), k) > budget:
        raise BudgetExceeded(f"C({g.n},{k})*C({g.n - k},{k}) pair-set checks exceed budget {budget}")
    for a in combinations(range(g.n), k):
        for color in (Color.RED, Color.BLUE):
            if not _is_clique(g, a, color):
                continue
            cross = g.full & ~mask_of(a)
            for v in a:
                cross &= g.row(v, color.other)
            cand = list(iter_bits(cross))
            for b in combinations(cand, k):
                for variant, inner in ((Variant.ONE_CLIQUE, color.other), (Variant.TWO_CLIQUES, color)):
                    if _is_clique(g, b, inner):
                        return FkWitness(a, b, color, variant)
    return None


# -- random lower-bound experiment ----------------------------------------------------------------

LOWER_BOUND_HEADER = ["trial", "seed", "red_kk", "red_kkk_bipartite", "fk_free"]


def has_red_clique(g: ColoredCompleteGraph, k: int) -> bool:
    def grow(chosen_len, cand):
        if chosen_len == k:
            return True
        while cand:
            if chosen_len + cand.bit_count() < k:
                return False
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            if grow(chosen_len + 1, cand & g.red[v]):
                return True
        return False

    return grow(0, g.full)


def has_red_bipartite(g: ColoredCompleteGraph, k: int) -> bool:
    """Two disjoint k-sets with every cross pair red (inside pairs arbitrary)."""
    for a in combinations(range(g.n), k):
        common = g.full
        for v in a:
            common &= g.red[v]
        if common.bit_count() >= k:
            return True
    return False


@dataclass
class LowerBoundReport:
    k: int
    epsilon: Fraction
    n: int
    m: int
    trials: int
    rows: list = field(default_factory=list)

    def frequency(self, column: str) -> float:
        idx = LOWER_BOUND_HEADER.index(column)
        vals = [r[idx] for r in self.rows if r[idx] != "na"]
        return sum(vals) / len(vals) if vals else float("nan")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(LOWER_BOUND_HEADER)
        w.writerows(self.rows)
        return buf.getvalue()


def proposition_size(k: int, epsilon) -> float:
    """The size eps^(-(k-1)/2) at which random colorings still avoid F_k."""
    eps = as_fraction(epsilon)
    return float(eps) ** (-(k - 1) / 2)


def lower_bound_trial(k, eps, n, m, seed, budget):
    g = random_coloring(n, m, seed)
    red_kk = has_red_clique(g, k)
    red_bip = has_red_bipartite(g, k)
    if comb(n, k) * comb(max(n - k, 0), k) <= budget:
        fk_free = int(fk_oracle(g, k, budget) is None)
    else:
        fk_free = "na"
    return [int(red_kk), int(red_bip), fk_free]


def lower_bound_experiment(k: int, epsilon, n: int, trials: int, seed: int,
                           budget: int | None = None, jobs: int = 1) -> LowerBoundReport:
    """Sample random colorings with m = ceil(eps*C(n,2)) red pairs and record
    whether a red K_k, a red K_{k,k}, or no F_k member occurs."""
    eps = as_fraction(epsilon)
    if not (0 < eps <= Fraction(1, 2)):
        raise PreconditionError("epsilon must lie in (0, 1/2]")
    if k < 2:
        raise PreconditionError("k must be at least 2")
    if n < 2 or trials < 1:
        raise PreconditionError("need n >= 2 and trials >= 1")
    total = comb(n, 2)
    prod = eps * total
    m = int(prod) if prod.denominator == 1 else int(prod) + 1
    budget = oracle_budget() if budget is None else budget
    seeds = [derive_seed(seed, i) for i in range(trials)]
    args = [(k, eps, n, m, s, budget) for s in seeds]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_lower_bound_star, args, chunksize=max(1, trials // (4 * jobs))))
    else:
        results = [lower_bound_trial(*a) for a in args]
    rep = LowerBoundReport(k, eps, n, m, trials)
    rep.rows = [[i, s, *r] for i, (s, r) in enumerate(zip(seeds, results))]
    return rep


def _lower_bound_star(a):
    return lower_bound_trial(*a)
