"""Combinatorial evaluation of the classical oriented weight systems.

Each family's one-arrow tensor T[alpha, beta, mu, nu] is a sum of delta
products.  A :class:`PatternRule` is one such product: it fixes the sector of
each of the four arcs around the arrow, pairs the arcs into two classes that
share a free value, and constrains the two values.  Evaluating a diagram means
choosing one rule per arrow, merging arcs into classes, and counting the
value assignments that satisfy every constraint.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .diagrams import OrientedChordDiagram, resolve_arcs
from .polycount import OrderSystem, PolynomialQ, count_strict_maps


class Family(enum.Enum):
    GL = "gl"
    SO_EVEN = "so-even"
    SO_ODD = "so-odd"
    SP = "sp"

    @classmethod
    def parse(cls, tag: str) -> "Family":
        try:
            return cls(tag.lower())
        except ValueError:
            raise ValueError(f"unknown family {tag!r}; expected one of {[f.value for f in cls]}") from None

    def rep_dimension(self, n: int) -> int:
        return {Family.GL: n, Family.SO_EVEN: 2 * n, Family.SO_ODD: 2 * n + 1, Family.SP: 2 * n}[self]

    def ambient_dimension(self, n: int) -> int:
        return {
            Family.GL: n * n,
            Family.SO_EVEN: n * (2 * n - 1),
            Family.SO_ODD: n * (2 * n + 1),
            Family.SP: n * (2 * n + 1),
        }[self]


FAMILIES = tuple(Family)

A, B, U = "A", "B", "U"
ALPHA, BETA, MU, NU = range(4)
SLOT_NAMES = ("alpha", "beta", "mu", "nu")

# order constraints between the value of the first join and the second join
LT, GT, LE, GE = "<", ">", "<=", ">="  # LE/GE carry a factor 1/2 at equality

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class PatternRule:
    sectors: tuple[str, str, str, str]
    joins: tuple[tuple[int, int], tuple[int, int]]
    order: str | None
    sign: int
    scalar: Fraction

    def is_cross(self, join: int) -> bool:
        a, b = self.joins[join]
        return self.sectors[a] != self.sectors[b]

    def describe(self) -> str:
        js = ",".join(SLOT_NAMES[a][0] + SLOT_NAMES[b][0] for a, b in self.joins)
        return f"{''.join(self.sectors)} [{js}] {self.order or '-'} {'+' if self.sign > 0 else '-'}{self.scalar}"


def _rule(sectors: str, j1: str, j2: str, order, sign, scalar=HALF) -> PatternRule:
    slot = {"a": ALPHA, "b": BETA, "m": MU, "n": NU}
    return PatternRule(
        tuple(sectors),
        ((slot[j1[0]], slot[j1[1]]), (slot[j2[0]], slot[j2[1]])),
        order,
        sign,
        Fraction(scalar),
    )


# sectors are listed in slot order alpha, beta, mu, nu
_GL_RULES = (_rule("AAAA", "an", "bm", LE, +1, 1),)

_SO_K1 = (
    _rule("AAAA", "an", "bm", LE, +1),
    _rule("AABB", "am", "bn", LE, -1),
    _rule("BBAA", "am", "bn", GE, -1),
    _rule("BBBB", "an", "bm", GE, +1),
)

_SO_EVEN_K2 = (
    _rule("ABBA", "am", "bn", GT, -1),
    _rule("ABBA", "an", "bm", GT, +1),
    _rule("ABBA", "an", "bm", LT, +1),
    _rule("ABBA", "am", "bn", LT, -1),
)

_SP_K2 = (
    _rule("ABBA", "am", "bn", GE, +1),
    _rule("ABBA", "an", "bm", GE, +1),
    _rule("ABBA", "an", "bm", LE, +1),
    _rule("ABBA", "am", "bn", LE, +1),
)

# the special index of so(2N+1) joins only to itself
_SO_ODD_K0 = (
    _rule("AUUA", "an", "bm", None, +1),
    _rule("AUBU", "am", "bn", None, -1),
    _rule("UBUA", "bn", "am", None, -1),
    _rule("UBBU", "bm", "an", None, +1),
)

_RULES = {
    Family.GL: _GL_RULES,
    Family.SO_EVEN: _SO_K1 + _SO_EVEN_K2,
    Family.SP: _SO_K1 + _SP_K2,
    Family.SO_ODD: _SO_ODD_K0 + _SO_K1 + _SO_EVEN_K2,
}


def rep_dimension_poly(f: Family) -> PolynomialQ:
    return PolynomialQ([f.rep_dimension(0), f.rep_dimension(1) - f.rep_dimension(0)])


def pattern_rules(f: Family) -> list[PatternRule]:
    return list(_RULES[f])


def sector_index(f: Family, sector: str, value: int, n: int) -> int:
    """1-based index of the defining representation for a sector and value."""
    if f is Family.SO_ODD:
        return {U: 1, A: value + 1, B: value + n + 1}[sector]
    if sector == U:
        raise ValueError("sector U only exists for so(2N+1)")
    if f is Family.GL and sector == B:
        raise ValueError("gl(N) has no B sector")
    return value if sector == A else value + n


def _order_terms(order: str | None, n: int):
    """(i, j, weight) for the two join values under an order constraint."""
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if order is None:
                yield i, j, Fraction(1)
            elif order == LT and i < j or order == GT and i > j:
                yield i, j, Fraction(1)
            elif order == LE and i <= j or order == GE and i >= j:
                yield i, j, HALF if i == j else Fraction(1)


def rule_tensor(f: Family, n: int) -> dict[tuple[int, int, int, int], Fraction]:
    """Contract the rule table on a single arrow: {(alpha, beta, mu, nu): value}, 1-based."""
    out: dict[tuple[int, int, int, int], Fraction] = {}
    for rule in _RULES[f]:
        if U in rule.sectors:
            terms = [(v, v, Fraction(1)) for v in range(1, n + 1)]
        else:
            terms = _order_terms(rule.order, n)
        for i, j, w in terms:
            values = [0] * 4
            for (a, b), v in zip(rule.joins, (i, j)):
                values[a] = values[b] = v
            key = tuple(sector_index(f, s, v, n) for s, v in zip(rule.sectors, values))
            val = out.get(key, Fraction(0)) + rule.sign * rule.scalar * w
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _count_choice(num_arcs, sectors, choices):
    """Weight polynomial of one rule choice per arrow (sectors already consistent)."""
    uf = _UnionFind(num_arcs)
    for slots, rule in choices:
        for a, b in rule.joins:
            uf.union(slots[a], slots[b])
    roots = {}
    for arc in range(num_arcs):
        r = uf.find(arc)
        kind = sectors[arc] == U
        if roots.setdefault(r, kind) != kind:
            return PolynomialQ()
    free = sorted(r for r, is_u in roots.items() if not is_u)
    index = {r: k for k, r in enumerate(free)}

    strict: list[tuple[int, int]] = []
    weak: list[tuple[int, int]] = []
    scalar = Fraction(1)
    for slots, rule in choices:
        scalar *= rule.sign * rule.scalar
        if rule.order is None:
            continue
        c1 = index[uf.find(slots[rule.joins[0][0]])]
        c2 = index[uf.find(slots[rule.joins[1][0]])]
        if rule.order in (GT, GE):
            c1, c2 = c2, c1
        (strict if rule.order in (LT, GT) else weak).append((c1, c2))

    total = PolynomialQ()
    # each weak edge is either strict or a merge with weight 1/2
    for merge in itertools.product((False, True), repeat=len(weak)):
        sub = _UnionFind(len(free))
        edges = list(strict)
        w = scalar
        for (a, b), m in zip(weak, merge):
            if m:
                sub.union(a, b)
                w *= HALF
            else:
                edges.append((a, b))
        reps = sorted({sub.find(k) for k in range(len(free))})
        ren = {r: k for k, r in enumerate(reps)}
        system = OrderSystem(len(reps), scalar=w)
        for a, b in edges:
            system.add_edge(ren[sub.find(a)], ren[sub.find(b)])
        total = total + count_strict_maps(system)
    return total


def evaluate_weight(d: OrientedChordDiagram, f: Family) -> PolynomialQ:
    """The weight system of family ``f`` on ``d`` as an exact polynomial in N."""
    if d.n == 0:
        return rep_dimension_poly(f)
    slots = [s.as_tuple() for _, s in sorted(resolve_arcs(d).items())]
    rules = _RULES[f]
    num_arcs = 2 * d.n
    total = PolynomialQ()

    sectors: list[str | None] = [None] * num_arcs

    def walk(k: int, chosen: list) -> None:
        nonlocal total
        if k == len(slots):
            total = total + _count_choice(num_arcs, sectors, chosen)
            return
        arrow_slots = slots[k]
        for rule in rules:
            assigned = []
            ok = True
            for arc, sec in zip(arrow_slots, rule.sectors):
                cur = sectors[arc]
                if cur is None:
                    sectors[arc] = sec
                    assigned.append(arc)
                elif cur != sec:
                    ok = False
                    break
            if ok:
                chosen.append((arrow_slots, rule))
                walk(k + 1, chosen)
                chosen.pop()
            for arc in assigned:
                sectors[arc] = None

    walk(0, [])
    return total
