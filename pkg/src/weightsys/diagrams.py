"""Oriented and unoriented chord diagrams on a single circle.

Text format: endpoint tokens in circle order (counterclockwise), separated by
single spaces.  Oriented diagrams use ``t<id>`` / ``h<id>`` for the tail and
head of an arrow, unoriented ones use ``c<id>``.  The empty string is the bare
circle.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

TAIL = "t"
HEAD = "h"
CHORD = "c"

MAX_ARROWS = 6

_TOKEN_RE = re.compile(r"([thc])([0-9]+)\Z")
_ROLE_RANK = {TAIL: 0, HEAD: 1, CHORD: 0}


class DiagramError(ValueError):
    """Raised for malformed diagram text or invalid diagram data."""

    def __init__(self, message: str, token_index: int | None = None):
        if token_index is not None:
            message = f"token {token_index}: {message}"
        super().__init__(message)
        self.token_index = token_index


Token = tuple[str, int]


def _renumber(word: tuple[Token, ...]) -> tuple[Token, ...]:
    ids: dict[int, int] = {}
    out = []
    for role, ident in word:
        if ident not in ids:
            ids[ident] = len(ids) + 1
        out.append((role, ids[ident]))
    return tuple(out)


def _word_key(word: tuple[Token, ...]) -> tuple[tuple[int, int], ...]:
    return tuple((_ROLE_RANK[r], i) for r, i in word)


def _least_rotation(word: tuple[Token, ...]) -> tuple[Token, ...]:
    if not word:
        return word
    best = None
    best_key = None
    for k in range(len(word)):
        cand = _renumber(word[k:] + word[:k])
        key = _word_key(cand)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    return best


def _format(word: tuple[Token, ...]) -> str:
    return " ".join(f"{r}{i}" for r, i in word)


@dataclass(frozen=True)
class OrientedChordDiagram:
    """Arrows on an oriented circle; ``word`` lists (role, arrow id) tokens."""

    word: tuple[Token, ...]

    def __post_init__(self):
        counts: dict[int, list[str]] = {}
        for pos, (role, ident) in enumerate(self.word):
            if role not in (TAIL, HEAD):
                raise DiagramError(f"bad role {role!r}", pos)
            roles = counts.setdefault(ident, [])
            if role in roles:
                raise DiagramError(f"arrow {ident} has two {'tails' if role == TAIL else 'heads'}", pos)
            roles.append(role)
        n = len(counts)
        if sorted(counts) != list(range(1, n + 1)):
            raise DiagramError("arrow ids must be 1..n")
        for ident, roles in counts.items():
            if len(roles) != 2:
                raise DiagramError(f"arrow {ident} is missing an endpoint")

    @property
    def n(self) -> int:
        return len(self.word) // 2

    @classmethod
    def from_text(cls, text: str) -> "OrientedChordDiagram":
        d = parse_diagram(text)
        if not isinstance(d, cls):
            raise DiagramError("expected an oriented diagram")
        return d

    def __str__(self) -> str:
        return _format(self.word)

    def rotate(self, k: int) -> "OrientedChordDiagram":
        if not self.word:
            return self
        k %= len(self.word)
        return OrientedChordDiagram(_renumber(self.word[k:] + self.word[:k]))

    def endpoints(self, arrow: int) -> tuple[int, int]:
        """Positions of the tail and head of ``arrow``."""
        tail = self.word.index((TAIL, arrow))
        head = self.word.index((HEAD, arrow))
        return tail, head

    def forget(self) -> "ChordDiagram":
        return ChordDiagram(tuple((CHORD, i) for _, i in self.word))


@dataclass(frozen=True)
class ChordDiagram:
    """Unoriented chords; every token has role ``c``."""

    word: tuple[Token, ...]

    def __post_init__(self):
        counts: dict[int, int] = {}
        for pos, (role, ident) in enumerate(self.word):
            if role != CHORD:
                raise DiagramError(f"bad role {role!r}", pos)
            counts[ident] = counts.get(ident, 0) + 1
            if counts[ident] > 2:
                raise DiagramError(f"chord {ident} appears three times", pos)
        n = len(counts)
        if sorted(counts) != list(range(1, n + 1)):
            raise DiagramError("chord ids must be 1..n")
        for ident, c in counts.items():
            if c != 2:
                raise DiagramError(f"chord {ident} appears once")

    @property
    def n(self) -> int:
        return len(self.word) // 2

    @classmethod
    def from_text(cls, text: str) -> "ChordDiagram":
        d = parse_diagram(text, oriented=False)
        if not isinstance(d, cls):
            raise DiagramError("expected an unoriented diagram")
        return d

    def __str__(self) -> str:
        return _format(self.word)

    def rotate(self, k: int) -> "ChordDiagram":
        if not self.word:
            return self
        k %= len(self.word)
        return ChordDiagram(_renumber(self.word[k:] + self.word[:k]))

    def endpoints(self, chord: int) -> tuple[int, int]:
        first = self.word.index((CHORD, chord))
        second = self.word.index((CHORD, chord), first + 1)
        return first, second

    def orient(self, flips: tuple[bool, ...]) -> OrientedChordDiagram:
        """Direct chord ``i`` from its first to its second endpoint unless ``flips[i-1]``."""
        seen: set[int] = set()
        word = []
        for _, ident in self.word:
            first = ident not in seen
            seen.add(ident)
            is_tail = first != flips[ident - 1]
            word.append((TAIL if is_tail else HEAD, ident))
        return OrientedChordDiagram(tuple(word))


def format_diagram(d: OrientedChordDiagram | ChordDiagram) -> str:
    return str(d)


def parse_diagram(text: str, oriented: bool | None = None) -> OrientedChordDiagram | ChordDiagram:
    """Parse the space-separated token grammar.

    Ids may be arbitrary non-negative integers; they are renumbered 1..n by
    first occurrence.  An empty string parses as the bare circle, oriented
    unless ``oriented=False``.
    """
    if not text.isascii():
        bad = next(i for i, tok in enumerate(text.split(" ")) if not tok.isascii())
        raise DiagramError("non-ASCII token", bad)
    if text == "":
        return ChordDiagram(()) if oriented is False else OrientedChordDiagram(())
    tokens = text.split(" ")
    word = []
    kinds = set()
    for pos, tok in enumerate(tokens):
        if tok == "":
            raise DiagramError("empty token", pos)
        m = _TOKEN_RE.match(tok)
        if m is None:
            raise DiagramError(f"cannot parse {tok!r}", pos)
        role = m.group(1)
        kinds.add(role == CHORD)
        if len(kinds) > 1:
            raise DiagramError("mixed arrow and chord tokens", pos)
        word.append((role, int(m.group(2))))

    # per-id validation before renumbering so errors name the right token
    seen: dict[int, list[str]] = {}
    for pos, (role, ident) in enumerate(word):
        roles = seen.setdefault(ident, [])
        if role in (TAIL, HEAD) and role in roles:
            raise DiagramError(f"arrow {ident} has two {'tails' if role == TAIL else 'heads'}", pos)
        if len(roles) == 2:
            raise DiagramError(f"id {ident} appears three times", pos)
        roles.append(role)
    for ident, roles in seen.items():
        if len(roles) != 2:
            pos = next(p for p, (_, i) in enumerate(word) if i == ident)
            raise DiagramError(f"id {ident} appears once", pos)

    word_t = _renumber(tuple(word))
    is_chord = word_t[0][0] == CHORD
    if oriented is True and is_chord:
        raise DiagramError("expected arrow tokens", 0)
    if oriented is False and not is_chord:
        raise DiagramError("expected chord tokens", 0)
    return ChordDiagram(word_t) if is_chord else OrientedChordDiagram(word_t)


def canonicalize(d):
    """Least word over all rotations, ids renumbered by first occurrence."""
    return type(d)(_least_rotation(d.word))


def _matchings(points: tuple[int, ...]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    first = points[0]
    for k in range(1, len(points)):
        rest = points[1:k] + points[k + 1:]
        for m in _matchings(rest):
            yield [(first, points[k])] + m


@lru_cache(maxsize=None)
def _enumerate(n: int, oriented: bool) -> tuple:
    found: dict[tuple, object] = {}
    for matching in _matchings(tuple(range(2 * n))):
        orientations = itertools.product((False, True), repeat=n) if oriented else [None]
        for flips in orientations:
            word: list[Token] = [None] * (2 * n)  # type: ignore[list-item]
            for ident, (a, b) in enumerate(matching, start=1):
                if oriented:
                    ta, tb = (b, a) if flips[ident - 1] else (a, b)
                    word[ta] = (TAIL, ident)
                    word[tb] = (HEAD, ident)
                else:
                    word[a] = word[b] = (CHORD, ident)
            canon = _least_rotation(tuple(word))
            if canon not in found:
                found[canon] = canon
    cls = OrientedChordDiagram if oriented else ChordDiagram
    return tuple(cls(w) for w in sorted(found, key=_word_key))


def enumerate_diagrams(n: int, oriented: bool = True) -> list:
    """All canonical diagrams with ``n`` chords, in a fixed sorted order."""
    if not 0 <= n <= MAX_ARROWS:
        raise DiagramError(f"n must be in 0..{MAX_ARROWS}, got {n}")
    return list(_enumerate(n, oriented))


@dataclass(frozen=True)
class ArcSlots:
    """Arc indices around one arrow.

    ``alpha``/``beta`` are the arcs entering/leaving the tail, ``mu``/``nu``
    the arcs entering/leaving the head.  Arc ``k`` runs from endpoint ``k``
    to endpoint ``k+1`` (mod 2n).
    """

    alpha: int
    beta: int
    mu: int
    nu: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.alpha, self.beta, self.mu, self.nu)


def resolve_arcs(d: OrientedChordDiagram) -> dict[int, ArcSlots]:
    m = len(d.word)
    out = {}
    for arrow in range(1, d.n + 1):
        t, h = d.endpoints(arrow)
        out[arrow] = ArcSlots((t - 1) % m, t, (h - 1) % m, h)
    return out


# Vertex diagrams: the skeleton word may also hold the three legs of a single
# trivalent vertex.  ``i<k>`` is a leg pointing into the vertex (the skeleton
# end is a tail), ``o<k>`` a leg pointing out of it; k in 1..3 is the cyclic
# position of the leg at the vertex.

BRACKET = "bracket"
COBRACKET = "cobracket"

_LEG_RE = re.compile(r"([io])([123])\Z")


@dataclass(frozen=True)
class VertexDiagram:
    """Arrows plus one trivalent vertex whose legs end on the circle."""

    word: tuple[Token, ...]

    def __post_init__(self):
        legs = [(pos, r, i) for pos, (r, i) in enumerate(self.word) if r in ("i", "o")]
        if sorted(i for _, _, i in legs) != [1, 2, 3]:
            raise DiagramError("vertex needs exactly the legs 1, 2, 3")
        ins = sum(1 for _, r, _ in legs if r == "i")
        if ins in (0, 3):
            raise DiagramError("vertex is a sink or a source")
        arrows = tuple(t for t in self.word if t[0] not in ("i", "o"))
        OrientedChordDiagram(_renumber(arrows))

    @property
    def kind(self) -> str:
        ins = sum(1 for r, _ in self.word if r == "i")
        return BRACKET if ins == 2 else COBRACKET

    def leg_positions(self) -> list[int]:
        """Skeleton positions of the legs in the normalized cyclic order.

        For a bracket vertex the order is (in, in, out); for a cobracket
        vertex it is (in, out, out).  Both are rotations of the stored cyclic
        order, so orientation is preserved.
        """
        pos = {i: p for p, (r, i) in enumerate(self.word) if r in ("i", "o")}
        role = {i: r for r, i in self.word if r in ("i", "o")}
        order = [1, 2, 3]
        lonely = "o" if self.kind == BRACKET else "i"
        k = next(j for j in order if role[j] == lonely)
        while (order[-1] if self.kind == BRACKET else order[0]) != k:
            order = order[1:] + order[:1]
        return [pos[j] for j in order]

    def __str__(self) -> str:
        return _format(self.word)


def parse_vertex_diagram(text: str) -> VertexDiagram:
    word = []
    for pos, tok in enumerate(text.split(" ")):
        m = _LEG_RE.match(tok) or _TOKEN_RE.match(tok)
        if m is None or m.group(1) == CHORD:
            raise DiagramError(f"cannot parse {tok!r}", pos)
        word.append((m.group(1), int(m.group(2))))
    return VertexDiagram(tuple(word))
