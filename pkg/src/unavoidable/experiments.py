"""Seeded experiment sweeps producing CSV tables.

Trials are independent and seeded by ``derive_seed(seed, n, trial)``, so
running them in a process pool and writing rows in trial order gives the
same bytes as a serial run.
"""
from __future__ import annotations

import csv
import io
from math import sqrt
from statistics import fmean, pstdev

from .analysis import count_directed_triangles, transitivity_distance_exact
from .core import Tournament, random_tournament
from .dk import tripartition_counts
from .errors import CertificateViolation, PreconditionError
from .rng import derive_seed
from .transitivize import certified_bound_holds, transitivize, verify_transitive

FNT_HEADER = ["n", "seed", "t", "reversals", "bound_27sqrt", "exact_or_na", "ratio"]
TRIPARTITION_HEADER = ["trial", "count"]
FNT_EXACT_MAX_N = 14


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def fnt_row(t: Tournament, seed, exact_max_n: int = FNT_EXACT_MAX_N) -> tuple[list, float]:
    """One sweep row for ``t`` and its reversals / sqrt(n t) ratio (0 when t = 0)."""
    res = transitivize(t)
    if not verify_transitive(t.with_reversed(res.reversed_edges), res.order):
        raise CertificateViolation("transitivize output is not transitive")
    tri, r = res.triangles, res.reversals
    if not certified_bound_holds(r, t.n, tri):
        raise CertificateViolation(f"{r} reversals above 27*sqrt(n*t) at n={t.n}")
    exact = "na"
    if t.n <= exact_max_n:
        exact = transitivity_distance_exact(t).distance
        if r < exact:
            raise CertificateViolation("fewer reversals than the exact distance")
    ratio = r / sqrt(t.n * tri) if tri else 0.0
    return [t.n, seed, tri, r, f"{res.certified_bound:.6f}", exact, f"{ratio:.6f}"], ratio


def _fnt_trial(args):
    n, s, exact_max_n = args
    return fnt_row(random_tournament(n, s), s, exact_max_n)


def fnt_sweep(n_list, trials: int, seed: int, jobs: int = 1, exact_max_n: int = FNT_EXACT_MAX_N) -> str:
    """Transitivize random tournaments for each n; CSV ending in a ``max`` row."""
    n_list = list(n_list)
    if not n_list:
        raise PreconditionError("need at least one n")
    if trials < 1 or any(n < 1 for n in n_list):
        raise PreconditionError("need trials >= 1 and every n >= 1")
    tasks = [(n, derive_seed(seed, n, i), exact_max_n) for n in n_list for i in range(trials)]
    results = _run(_fnt_trial, tasks, jobs)
    return fnt_csv(results)


def fnt_csv(results) -> str:
    rows = [row for row, _ in results]
    best = max((ratio for _, ratio in results), default=0.0)
    rows.append(["max", "", "", "", "", "", f"{best:.6f}"])
    return _csv(FNT_HEADER, rows)


def tripartition_stats(t: Tournament, trials: int, seed: int) -> tuple[str, dict]:
    """Positively oriented counts over random balanced tripartitions; CSV plus summary."""
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    counts = tripartition_counts(t, trials, seed)
    tri = count_directed_triangles(t)
    summary = {
        "n": t.n,
        "t": tri,
        "trials": trials,
        "mean": fmean(counts),
        "sd": pstdev(counts),
        "t_over_9": tri / 9,
        "max": max(counts),
    }
    rows = [[i, c] for i, c in enumerate(counts)]
    rows.append(["mean", f"{summary['mean']:.6f}"])
    rows.append(["sd", f"{summary['sd']:.6f}"])
    rows.append(["t_over_9", f"{summary['t_over_9']:.6f}"])
    return _csv(TRIPARTITION_HEADER, rows), summary


def _run(fn, tasks, jobs):
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            return list(ex.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [fn(a) for a in tasks]
