"""Interval filament representations with exact rational geometry.

A filament is an x-monotone polyline ``(x_0, 0), ..., (x_m, 0)`` with positive
interior heights. All predicates work on ``fractions.Fraction`` so that
adjacency, nesting and envelopes are bit-stable.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from ..errors import DomainError, GenerationError, GeometryError
from ..graph import Graph, is_connected


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(str(v))
    try:
        return Fraction(v)
    except (ValueError, TypeError, ZeroDivisionError):
        raise DomainError(f"cannot parse coordinate {v!r}") from None


@dataclass(frozen=True)
class Filament:
    vertex: int
    points: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def make(cls, vertex: int, points) -> "Filament":
        return cls(int(vertex), tuple((_q(x), _q(y)) for x, y in points))

    @property
    def left(self) -> Fraction:
        return self.points[0][0]

    @property
    def right(self) -> Fraction:
        return self.points[-1][0]

    @cached_property
    def xs(self) -> tuple[Fraction, ...]:
        return tuple(p[0] for p in self.points)

    def __call__(self, x) -> Fraction:
        """Height at ``x`` (0 outside the defining interval)."""
        xs = self.xs
        if x <= xs[0] or x >= xs[-1]:
            return Fraction(0)
        i = bisect.bisect_right(xs, x) - 1
        (x0, y0), (x1, y1) = self.points[i], self.points[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    where: tuple = ()

    def __str__(self):
        return f"{self.kind}: {self.message}"


def _pair_analysis(fu: Filament, fv: Filament):
    """Crossings and degeneracies of two filaments: ``(points, problems)``."""
    lo, hi = max(fu.left, fv.left), min(fu.right, fv.right)
    if lo >= hi:
        return [], []
    xs = sorted({lo, hi, *(x for x in fu.xs if lo < x < hi), *(x for x in fv.xs if lo < x < hi)})
    hs = [fu(x) - fv(x) for x in xs]
    pts, bad = [], []
    for i in range(len(xs) - 1):
        x0, x1, h0, h1 = xs[i], xs[i + 1], hs[i], hs[i + 1]
        if h0 == 0 and h1 == 0:
            bad.append(Violation("overlap", f"filaments {fu.vertex} and {fv.vertex} share a segment on [{x0}, {x1}]", (fu.vertex, fv.vertex, x0, x1)))
        elif h0 * h1 < 0:
            x = x0 + (x1 - x0) * h0 / (h0 - h1)
            pts.append((x, fu(x)))
    for i in range(1, len(xs) - 1):
        if hs[i] == 0 and not (hs[i - 1] == 0 or hs[i + 1] == 0):
            if hs[i - 1] * hs[i + 1] < 0:
                pts.append((xs[i], fu(xs[i])))
            else:
                bad.append(
                    Violation(
                        "touch",
                        f"filaments {fu.vertex} and {fv.vertex} touch without crossing at x={xs[i]}",
                        (fu.vertex, fv.vertex, xs[i], fu(xs[i])),
                    )
                )
    pts.sort()
    return pts, bad


class FilamentRep:
    """One filament per vertex ``0..n-1``; immutable."""

    def __init__(self, filaments):
        fs = sorted(filaments, key=lambda f: f.vertex)
        if [f.vertex for f in fs] != list(range(len(fs))):
            raise DomainError("filament vertices must be exactly 0..n-1")
        self.filaments: tuple[Filament, ...] = tuple(fs)

    @classmethod
    def from_points(cls, points_by_vertex) -> "FilamentRep":
        items = points_by_vertex.items() if isinstance(points_by_vertex, dict) else enumerate(points_by_vertex)
        return cls([Filament.make(v, pts) for v, pts in items])

    @property
    def n(self) -> int:
        return len(self.filaments)

    def __getitem__(self, v) -> Filament:
        return self.filaments[v]

    def interval(self, v) -> tuple[Fraction, Fraction]:
        f = self.filaments[v]
        return f.left, f.right

    @cached_property
    def _pairs(self):
        out = {}
        for i in range(self.n):
            for j in range(i + 1, self.n):
                out[(i, j)] = _pair_analysis(self.filaments[i], self.filaments[j])
        return out

    def crossings(self, u: int, v: int) -> list:
        return self._pairs[(min(u, v), max(u, v))][0]

    @cached_property
    def graph(self) -> Graph:
        return intersection_graph(self)

    def nested(self, u: int, v: int) -> bool:
        """``u`` lies in the bottom region of ``v``."""
        au, bu = self.interval(u)
        av, bv = self.interval(v)
        return av < au and bu < bv and not self.graph.has_edge(u, v)

    def nested_in(self, v: int | None) -> frozenset:
        if v is None:
            return frozenset(range(self.n))
        return frozenset(u for u in range(self.n) if self.nested(u, v))

    def to_dict(self) -> dict:
        return {"filaments": [{"vertex": f.vertex, "points": [[_fmt(x), _fmt(y)] for x, y in f.points]} for f in self.filaments]}

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d) -> "FilamentRep":
        try:
            return cls([Filament.make(f["vertex"], f["points"]) for f in d["filaments"]])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed filament JSON: {exc}") from None

    @classmethod
    def loads(cls, text: str) -> "FilamentRep":
        return cls.from_dict(json.loads(text))


def _fmt(q: Fraction) -> str:
    """Exact decimal when the denominator allows it, else ``p/q``."""
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    places = max(twos, fives)
    if places == 0:
        return str(q.numerator)
    scaled = q * 10**places
    s = str(abs(scaled.numerator)).rjust(places + 1, "0")
    sign = "-" if q < 0 else ""
    return f"{sign}{s[:-places]}.{s[-places:]}"


def load_rep(path) -> FilamentRep:
    with open(path) as fh:
        return FilamentRep.loads(fh.read())


def save_rep(rep: FilamentRep, path) -> None:
    with open(path, "w") as fh:
        fh.write(rep.dumps())
        fh.write("\n")


# -- operations ------------------------------------------------------------------------


def validate(rep: FilamentRep) -> list[Violation]:
    """All violations of the representation invariants (empty list = valid)."""
    out = []
    for f in rep.filaments:
        pts = f.points
        if len(pts) < 3:
            out.append(Violation("shape", f"filament {f.vertex} needs at least 3 points", (f.vertex,)))
            continue
        if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
            out.append(Violation("shape", f"filament {f.vertex}: x must be strictly increasing", (f.vertex,)))
            continue
        if pts[0][1] != 0 or pts[-1][1] != 0:
            out.append(Violation("shape", f"filament {f.vertex}: endpoints must lie on the x-axis", (f.vertex,)))
        if any(y <= 0 for _, y in pts[1:-1]):
            out.append(Violation("shape", f"filament {f.vertex}: interior heights must be positive", (f.vertex,)))
    if out:
        return out
    seen = {}
    for f in rep.filaments:
        for x in (f.left, f.right):
            if x in seen:
                out.append(Violation("endpoint", f"filaments {seen[x]} and {f.vertex} share endpoint x={x}", (seen[x], f.vertex, x)))
            else:
                seen[x] = f.vertex
    if out:
        return out
    owner = {}
    for (u, v), (pts, bad) in rep._pairs.items():
        out.extend(bad)
        for p in pts:
            if p in owner and owner[p] != (u, v):
                a, b = owner[p]
                out.append(Violation("triple", f"filaments {sorted({a, b, u, v})} meet at ({p[0]}, {p[1]})", (a, b, u, v) + p))
            owner.setdefault(p, (u, v))
    return out


def check(rep: FilamentRep) -> FilamentRep:
    bad = validate(rep)
    if bad:
        raise GeometryError("; ".join(str(b) for b in bad[:5]))
    return rep


def intersection_graph(rep: FilamentRep) -> Graph:
    edges = []
    for (u, v), (pts, bad) in rep._pairs.items():
        if bad:
            raise GeometryError(str(bad[0]))
        if pts:
            edges.append((u, v))
    return Graph.from_edges(rep.n, edges)


def nesting(rep: FilamentRep) -> frozenset[tuple[int, int]]:
    """Pairs ``(u, v)`` with ``u`` nested in ``v``."""
    return frozenset((u, v) for u in range(rep.n) for v in range(rep.n) if u != v and rep.nested(u, v))


@dataclass(frozen=True)
class TopEntry:
    vertex: int
    lo: Fraction
    hi: Fraction

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2


def top_sequence(rep: FilamentRep, S) -> tuple[TopEntry, ...]:
    """Upper envelope of the filaments of ``S``, left to right, gaps omitted."""
    S = sorted(set(S))
    if not S:
        raise DomainError("top_sequence needs a non-empty vertex set")
    events = set()
    for v in S:
        events.update(rep.interval(v))
    for i, u in enumerate(S):
        for v in S[i + 1 :]:
            events.update(x for x, _ in rep.crossings(u, v))
    xs = sorted(events)
    entries: list[TopEntry] = []
    for x0, x1 in zip(xs, xs[1:]):
        m = (x0 + x1) / 2
        best, bv = None, Fraction(0)
        for v in S:
            a, b = rep.interval(v)
            if a < m < b:
                y = rep[v](m)
                if best is None or y > bv:
                    best, bv = v, y
        if best is None:
            continue
        if entries and entries[-1].vertex == best and entries[-1].hi == x0:
            entries[-1] = TopEntry(best, entries[-1].lo, x1)
        else:
            entries.append(TopEntry(best, x0, x1))
    return tuple(entries)


def classify_region(rep: FilamentRep, t: int, x_star, u: int, S=None) -> str:
    """Region of ``u`` cut out by ``t`` and the upward ray above ``(x_star, f_t(x_star))``."""
    from ..errors import ContractViolation

    if u == t:
        raise ContractViolation("u must differ from t")
    if rep.graph.has_edge(u, t):
        raise ContractViolation(f"filament {u} crosses {t}; its region is undefined", (u, t))
    x_star = _q(x_star)
    a, b = rep.interval(t)
    if not a < x_star < b:
        raise ContractViolation(f"x*={x_star} is outside the interval of {t}")
    if S is not None:
        yt = rep[t](x_star)
        if any(rep[v](x_star) > yt for v in S):
            raise ContractViolation(f"{t} is not the top filament of S at x*={x_star}")
    if rep.nested(u, t):
        return "bottom"
    if rep.interval(u)[1] < x_star:
        return "left"
    return "right"


# -- random instances ---------------------------------------------------------------------


def _endpoint_pairs(n, rng, layout):
    if layout == "matching":
        ends = rng.permutation(2 * n)
        return [tuple(sorted(int(x) for x in ends[2 * v : 2 * v + 2])) for v in range(n)]
    # bracket layout: sweep slots left to right, opening or closing a random interval
    pairs, open_, left = [], [], n
    for slot in range(2 * n):
        if left and (not open_ or rng.random() < 0.5):
            open_.append(slot)
            left -= 1
        else:
            a = open_.pop(int(rng.integers(len(open_))))
            pairs.append((a, slot))
    order = rng.permutation(n)
    return [pairs[i] for i in order]


def random_rep(
    n: int,
    seed: int,
    max_bends: int = 3,
    max_height: int = 20,
    connected: bool = True,
    layout: str = "mixed",
    max_tries: int = 2000,
) -> FilamentRep:
    """Seeded random valid representation, rejection-sampled.

    Endpoint slots ``0..2n-1`` (scaled by 10) are paired either as a uniform
    matching or by a left-to-right bracket sweep, which yields shorter and
    more deeply nested intervals; ``"mixed"`` picks one per attempt. Each
    filament gets ``1..max_bends`` interior vertices at random integer x with
    heights in ``1..max_height``.
    """
    if n < 1:
        raise DomainError("random_rep needs n >= 1")
    if layout not in ("mixed", "matching", "bracket"):
        raise DomainError(f"unknown layout {layout!r}")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        lay = layout if layout != "mixed" else ("matching" if rng.random() < 0.5 else "bracket")
        fils = []
        for v, (a, b) in enumerate(_endpoint_pairs(n, rng, lay)):
            a, b = 10 * a, 10 * b
            k = min(int(rng.integers(1, max_bends + 1)), b - a - 1)
            bx = sorted(int(x) for x in rng.choice(np.arange(a + 1, b), size=k, replace=False))
            hy = [int(h) for h in rng.integers(1, max_height + 1, size=k)]
            fils.append(Filament.make(v, [(a, 0), *zip(bx, hy), (b, 0)]))
        rep = FilamentRep(fils)
        if validate(rep):
            continue
        if connected and not is_connected(rep.graph):
            continue
        return rep
    raise GenerationError(f"no valid random representation with n={n} within {max_tries} tries (seed={seed})")


def c4_rep() -> FilamentRep:
    """A 4-cycle a-b-c-d: b and d spike through a, c lies low under a and crosses both."""
    return FilamentRep.from_points(
        {
            0: [(0, 0), (10, 10), (20, 0)],
            1: [(1, 0), (Fraction(9, 2), 15), (8, 0)],
            2: [(6, 0), (10, 1), (14, 0)],
            3: [(12, 0), (Fraction(31, 2), 15), (19, 0)],
        }
    )


def clique_rep(n: int) -> FilamentRep:
    """Shifted identical tents on ``[i, n+i]``: every pair crosses exactly once."""
    return FilamentRep.from_points({i: [(2 * i, 0), (n + 2 * i, n), (2 * n + 2 * i, 0)] for i in range(n)})
