"""Versioned text formats for graphs, tournaments and witnesses.

All formats are ASCII, 0-indexed, newline-terminated, and start with a
``NAME v1`` header line. Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

import re
from math import comb

from .core import (
    Color,
    ColoredCompleteGraph,
    DkWitness,
    FkWitness,
    Tournament,
    Variant,
)
from .errors import ParseError

COLORING_HEADER = "UNAVOIDABLE-COLORING"
TOURNAMENT_HEADER = "UNAVOIDABLE-TOURNAMENT"
FK_HEADER = "FK-WITNESS"
DK_HEADER = "DK-WITNESS"
RESULT_HEADER = "TRANSITIVIZATION"
VERSION = "v1"


def _lines(text):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _ints(tokens, no):
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", no) from None


def _pair(tokens, no, n):
    vals = _ints(tokens, no)
    if len(vals) != 2:
        raise ParseError("expected a pair 'u v'", no)
    u, v = vals
    if u == v:
        raise ParseError(f"self-loop {u} {v}", no)
    if not (0 <= u < n and 0 <= v < n):
        raise ParseError(f"index out of range in {u} {v} (n={n})", no)
    return u, v


def _split_header(text, expected):
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty document")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != expected:
        raise ParseError(f"expected header '{expected} {VERSION}', got {head!r}", no)
    if parts[1] != VERSION:
        raise ParseError(f"version mismatch: {parts[1]} (supported: {VERSION})", no)
    return lines[1:]


def _read_n(lines):
    if not lines:
        raise ParseError("missing section 'n'")
    no, line = lines[0]
    parts = line.split()
    if parts[0] != "n" or len(parts) != 2:
        raise ParseError("missing section 'n'", no)
    (n,) = _ints(parts[1:], no)
    if n < 1:
        raise ParseError("n must be at least 1", no)
    return n, lines[1:]


def _expect_section(lines, name):
    if not lines or lines[0][1] != name:
        where = lines[0][0] if lines else None
        raise ParseError(f"missing section '{name}'", where)
    return lines[1:]


# -- colorings -----------------------------------------------------------------

def serialize_coloring(g: ColoredCompleteGraph) -> str:
    out = [f"{COLORING_HEADER} {VERSION}", f"n {g.n}", "red:"]
    out += [f"{u} {v}" for u, v in g.red_edges()]
    return "\n".join(out) + "\n"


def _build_coloring(n, pairs):
    seen = set()
    for no, (u, v) in pairs:
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate pair {key[0]} {key[1]}", no)
        seen.add(key)
    return ColoredCompleteGraph.from_red_edges(n, seen)


def deserialize_coloring(text: str) -> ColoredCompleteGraph:
    lines = _split_header(text, COLORING_HEADER)
    n, lines = _read_n(lines)
    lines = _expect_section(lines, "red:")
    return _build_coloring(n, [(no, _pair(line.split(), no, n)) for no, line in lines])


_N_RE = re.compile(r"^n\s*[=\s]\s*(\S+)$")


def parse_coloring(text: str) -> ColoredCompleteGraph:
    """Read a red edge list. Accepts the versioned format and a compact form like
    ``"n=5; red: 0 1, 2 3"`` where ``;`` and newlines separate statements and
    commas separate pairs. ``(none)`` marks an empty red list."""
    n = None
    in_red = False
    pairs = []
    first = True
    for no, raw in enumerate(text.splitlines(), start=1):
        for stmt in raw.split("#", 1)[0].split(";"):
            stmt = stmt.strip()
            if not stmt:
                continue
            if first and stmt.startswith(COLORING_HEADER):
                if stmt.split()[1:] != [VERSION]:
                    raise ParseError(f"version mismatch in {stmt!r}", no)
                first = False
                continue
            first = False
            m = _N_RE.match(stmt)
            if m and not in_red:
                (n,) = _ints([m.group(1)], no)
                if n < 1:
                    raise ParseError("n must be at least 1", no)
                continue
            if stmt.startswith("red:"):
                if n is None:
                    raise ParseError("'red:' before n is declared", no)
                in_red = True
                stmt = stmt[4:].strip()
                if not stmt:
                    continue
            if not in_red:
                raise ParseError(f"unexpected content {stmt!r}", no)
            for chunk in stmt.split(","):
                chunk = chunk.strip()
                if not chunk or chunk == "(none)":
                    continue
                pairs.append((no, _pair(chunk.split(), no, n)))
    if n is None:
        raise ParseError("missing section 'n'")
    if not in_red:
        raise ParseError("missing section 'red:'")
    return _build_coloring(n, pairs)


# -- tournaments -----------------------------------------------------------------

def serialize_tournament(t: Tournament) -> str:
    out = [f"{TOURNAMENT_HEADER} {VERSION}", f"n {t.n}", "arcs:"]
    for u in range(t.n):
        for v in range(u + 1, t.n):
            out.append(f"{u} {v}" if t.arc(u, v) else f"{v} {u}")
    return "\n".join(out) + "\n"


def deserialize_tournament(text: str) -> Tournament:
    lines = _split_header(text, TOURNAMENT_HEADER)
    n, lines = _read_n(lines)
    lines = _expect_section(lines, "arcs:")
    rows = [0] * n
    seen = set()
    for no, line in lines:
        u, v = _pair(line.split(), no, n)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate pair {key[0]} {key[1]}", no)
        seen.add(key)
        rows[u] |= 1 << v
    missing = comb(n, 2) - len(seen)
    if missing:
        raise ParseError(f"missing arcs: {missing} pair(s) without an orientation")
    return Tournament(n, tuple(rows))


# -- witnesses -----------------------------------------------------------------

def serialize_fk_witness(w: FkWitness) -> str:
    return "\n".join([
        f"{FK_HEADER} {VERSION}",
        f"k {w.k}",
        f"color {w.color.value}",
        f"variant {w.variant.value}",
        "a " + " ".join(map(str, w.a_set)),
        "b " + " ".join(map(str, w.b_set)),
    ]) + "\n"


def _fields(lines, names):
    got = {}
    for no, line in lines:
        key, _, rest = line.partition(" ")
        if key not in names:
            raise ParseError(f"unknown field {key!r}", no)
        if key in got:
            raise ParseError(f"repeated field {key!r}", no)
        got[key] = (no, rest.split())
    for name in names:
        if name not in got:
            raise ParseError(f"missing section '{name}'")
    return got


def deserialize_fk_witness(text: str) -> FkWitness:
    f = _fields(_split_header(text, FK_HEADER), ("k", "color", "variant", "a", "b"))
    (k,) = _ints(f["k"][1], f["k"][0])
    try:
        color = Color(" ".join(f["color"][1]))
    except ValueError:
        raise ParseError("color must be red or blue", f["color"][0]) from None
    try:
        variant = Variant(" ".join(f["variant"][1]))
    except ValueError:
        raise ParseError("variant must be one-clique or two-cliques", f["variant"][0]) from None
    a = _ints(*reversed(f["a"]))
    b = _ints(*reversed(f["b"]))
    if len(a) != k or len(b) != k:
        raise ParseError(f"sets must have exactly k={k} vertices")
    return FkWitness(tuple(a), tuple(b), color, variant)


def serialize_dk_witness(w: DkWitness) -> str:
    out = [f"{DK_HEADER} {VERSION}", f"k {w.k}"]
    out += [f"u{i} " + " ".join(map(str, o)) for i, o in enumerate(w.orders)]
    return "\n".join(out) + "\n"


def deserialize_dk_witness(text: str) -> DkWitness:
    f = _fields(_split_header(text, DK_HEADER), ("k", "u0", "u1", "u2"))
    (k,) = _ints(f["k"][1], f["k"][0])
    orders = tuple(tuple(_ints(f[name][1], f[name][0])) for name in ("u0", "u1", "u2"))
    if any(len(o) != k for o in orders):
        raise ParseError(f"blocks must have exactly k={k} vertices")
    return DkWitness(orders)


# -- transitivization results ------------------------------------------------------

def serialize_result(res) -> str:
    out = [
        f"{RESULT_HEADER} {VERSION}",
        f"n {len(res.order)}",
        f"triangles {res.triangles}",
        f"bound {res.certified_bound:.6f}",
        "order " + " ".join(map(str, res.order)),
        "reversed:",
    ]
    out += [f"{u} {v}" for u, v in res.reversed_edges]
    return "\n".join(out) + "\n"


def deserialize_result(text: str):
    """Returns ``(n, triangles, bound, order, reversed_edges)``."""
    lines = _split_header(text, RESULT_HEADER)
    n, lines = _read_n(lines)
    head = {}
    while lines and lines[0][1] != "reversed:":
        no, line = lines.pop(0)
        key, _, rest = line.partition(" ")
        head[key] = (no, rest.split())
    for name in ("triangles", "bound", "order"):
        if name not in head:
            raise ParseError(f"missing section '{name}'")
    lines = _expect_section(lines, "reversed:")
    (tri,) = _ints(*reversed(head["triangles"]))
    try:
        bound = float(head["bound"][1][0])
    except (ValueError, IndexError):
        raise ParseError("bad bound", head["bound"][0]) from None
    order = _ints(*reversed(head["order"]))
    if sorted(order) != list(range(n)):
        raise ParseError("order is not a permutation", head["order"][0])
    rev = [_pair(line.split(), no, n) for no, line in lines]
    return n, tri, bound, order, rev


def serialize(obj) -> str:
    if isinstance(obj, ColoredCompleteGraph):
        return serialize_coloring(obj)
    if isinstance(obj, Tournament):
        return serialize_tournament(obj)
    if isinstance(obj, FkWitness):
        return serialize_fk_witness(obj)
    if isinstance(obj, DkWitness):
        return serialize_dk_witness(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


_READERS = {
    COLORING_HEADER: deserialize_coloring,
    TOURNAMENT_HEADER: deserialize_tournament,
    FK_HEADER: deserialize_fk_witness,
    DK_HEADER: deserialize_dk_witness,
}


def deserialize(text: str):
    """Dispatch on the header line."""
    for _, line in _lines(text):
        name = line.split()[0]
        if name not in _READERS:
            raise ParseError(f"unknown document type {name!r}", 1)
        return _READERS[name](text)
    raise ParseError("empty document")


__all__ = [
    "parse_coloring", "serialize", "deserialize", "serialize_coloring", "deserialize_coloring",
    "serialize_tournament", "deserialize_tournament", "serialize_fk_witness",
    "deserialize_fk_witness", "serialize_dk_witness", "deserialize_dk_witness",
    "serialize_result", "deserialize_result",
]
