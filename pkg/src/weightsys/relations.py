"""Relation generators (6T, 4T, STU), averaging, and linear checkers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

import numpy as np

from .diagrams import (
    CHORD,
    HEAD,
    TAIL,
    ChordDiagram,
    OrientedChordDiagram,
    VertexDiagram,
    _renumber,
    canonicalize,
)
from .families import Family, evaluate_weight
from .oracle import (
    StructureConstants,
    casimir_eval,
    oracle_eval,
    structure_constants,
    vertex_eval,
)
from .polycount import PolynomialQ, format_rational

Diagram = Union[OrientedChordDiagram, ChordDiagram]


@dataclass(frozen=True)
class RelationInstance:
    name: str
    terms: tuple[tuple[Fraction, Diagram], ...]
    note: str = ""

    def __post_init__(self):
        if len(self.terms) < 2:
            raise ValueError("a relation needs at least two terms")
        if any(c == 0 for c, _ in self.terms):
            raise ValueError("relation coefficients must be nonzero")


class STUInstance(NamedTuple):
    """A one-vertex diagram and the two-arrow difference it must equal."""

    vertex: VertexDiagram
    relation: RelationInstance


@dataclass(frozen=True)
class AveragedSum:
    """The 2^n orientations of one unoriented diagram, coefficient 1 each."""

    source: ChordDiagram
    terms: tuple[OrientedChordDiagram, ...]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


# -- averaging ----------------------------------------------------------------


def average(c: ChordDiagram) -> AveragedSum:
    """All 2^n orientations of ``c``, each canonicalized, in a fixed order."""
    if c.n > 5:
        raise ValueError("averaging is limited to n <= 5")
    terms = tuple(canonicalize(c.orient(flips)) for flips in itertools.product((False, True), repeat=c.n))
    return AveragedSum(c, terms)


# -- generators ----------------------------------------------------------------

_PAIRS = ((0, 1), (0, 2), (1, 2))
# (X, Y, sign): term XY puts X's endpoint first in any shared interval
_CYBE_TERMS = (
    ((0, 1), (0, 2), 1),
    ((0, 2), (0, 1), -1),
    ((0, 1), (1, 2), 1),
    ((1, 2), (0, 1), -1),
    ((0, 2), (1, 2), 1),
    ((1, 2), (0, 2), -1),
)


def _spectator_layouts(spectators: int) -> list[tuple[str, list[list[str]]]]:
    """Placements of spectator endpoints in the three gaps after I1, I2, I3."""
    if spectators == 0:
        return [("no spectator", [[], [], []])]
    if spectators != 1:
        raise ValueError("spectators must be 0 or 1")
    out = []
    for gt in range(3):
        for gh in range(3):
            orders = [("s_t", "s_h"), ("s_h", "s_t")] if gt == gh else [None]
            for order in orders:
                gaps: list[list[str]] = [[], [], []]
                if order is None:
                    gaps[gt].append("s_t")
                    gaps[gh].append("s_h")
                else:
                    gaps[gt].extend(order)
                out.append((f"spectator tail gap {gt + 1}, head gap {gh + 1}"
                            + ("" if order is None else f", {order[0][-1]} first"), gaps))
    return out


def _assemble(intervals: list[list[tuple[str, int]]], gaps: list[list[str]], spec_id: int, oriented: bool):
    word = []
    for k in range(3):
        word.extend(intervals[k])
        for g in gaps[k]:
            role = (TAIL if g == "s_t" else HEAD) if oriented else CHORD
            word.append((role, spec_id))
    word_t = _renumber(tuple(word))
    if oriented:
        return canonicalize(OrientedChordDiagram(word_t))
    return canonicalize(ChordDiagram(word_t))


def _two_pair_term(x, y, oriented: bool) -> list[list[tuple[str, int]]]:
    intervals: list[list[tuple[str, int]]] = [[], [], []]
    for ident, (a, b) in ((1, x), (2, y)):
        intervals[a].append((TAIL if oriented else CHORD, ident))
        intervals[b].append((HEAD if oriented else CHORD, ident))
    return intervals


def six_t_instances(spectators: int = 0) -> list[RelationInstance]:
    """Classical Yang-Baxter expansion on three marked intervals.

    The arrow for the pair (a, b) runs from interval a to interval b.
    """
    out = []
    for note, gaps in _spectator_layouts(spectators):
        terms = tuple(
            (Fraction(sign), _assemble(_two_pair_term(x, y, True), gaps, 3, True))
            for x, y, sign in _CYBE_TERMS
        )
        out.append(RelationInstance("6T", terms, note))
    return out


def four_t_instances(spectators: int = 0) -> list[RelationInstance]:
    """t12 t13 - t13 t12 + t12 t23 - t23 t12 on three marked intervals."""
    out = []
    signed = (((0, 1), (0, 2), 1), ((0, 2), (0, 1), -1), ((0, 1), (1, 2), 1), ((1, 2), (0, 1), -1))
    for note, gaps in _spectator_layouts(spectators):
        terms = tuple(
            (Fraction(sign), _assemble(_two_pair_term(x, y, False), gaps, 3, False))
            for x, y, sign in signed
        )
        out.append(RelationInstance("4T", terms, note))
    return out


def averaged_relation(r: RelationInstance) -> RelationInstance:
    """Apply the averaging map termwise to an unoriented relation (terms are not merged)."""
    terms = tuple((coeff, od) for coeff, d in r.terms for od in average(d))
    return RelationInstance(f"avg({r.name})", terms, r.note)


def _split(vd: VertexDiagram, lonely: int, first_label: int, later_label: int) -> OrientedChordDiagram:
    """Replace the lonely leg by two adjacent endpoints of the other legs' arrows."""
    legs = vd.leg_positions()
    other = [p for p in legs if p != lonely]
    next_id = max((i for r, i in vd.word if r in (TAIL, HEAD)), default=0)
    ids = {other[0]: next_id + 1, other[1]: next_id + 2}
    lonely_role = HEAD if vd.kind == "bracket" else TAIL
    far_role = TAIL if vd.kind == "bracket" else HEAD
    word = []
    for pos, (role, ident) in enumerate(vd.word):
        if pos == lonely:
            word.append((lonely_role, ids[first_label]))
            word.append((lonely_role, ids[later_label]))
        elif pos in ids:
            word.append((far_role, ids[pos]))
        else:
            word.append((role, ident))
    return canonicalize(OrientedChordDiagram(_renumber(tuple(word))))


def stu_pair(vd: VertexDiagram) -> STUInstance:
    """The two-arrow difference D1 - D2 equal to the vertex diagram.

    Bracket (in a, in b, out): D1 lands a's arrow at the later of the two
    adjacent points, so that the later-multiplies-left convention produces
    x_a x_b.  Cobracket (in, out a, out b): D1 starts a's arrow at the later
    point, producing xi^a xi^b.
    """
    legs = vd.leg_positions()
    if vd.kind == "bracket":
        a, b, lonely = legs
    else:
        lonely, a, b = legs
    d1 = _split(vd, lonely, first_label=b, later_label=a)
    d2 = _split(vd, lonely, first_label=a, later_label=b)
    rel = RelationInstance("STU", ((Fraction(1), d1), (Fraction(-1), d2)), f"{vd.kind}: {vd}")
    return STUInstance(vd, rel)


def stu_instances(spectators: int = 1) -> list[STUInstance]:
    """Bracket and cobracket vertices in every circle order, with optional spectator arrows."""
    out = []
    for legs in (("i1", "i2", "o3"), ("i1", "o2", "o3")):
        for perm in itertools.permutations(legs):
            base = [(t[0], int(t[1])) for t in perm]
            layouts = [base]
            if spectators:
                # every choice of two of the five final positions for the spectator's tail and head
                for pt, ph in itertools.permutations(range(5), 2):
                    legs_iter = iter(base)
                    layouts.append([(TAIL, 1) if p == pt else (HEAD, 1) if p == ph else next(legs_iter)
                                    for p in range(5)])
            for w in layouts:
                out.append(stu_pair(VertexDiagram(tuple(w))))
    return out


# -- checkers -------------------------------------------------------------------


@dataclass
class CheckResult:
    check: str
    family: str
    n: str
    status: str
    residual: str
    detail: str = ""

    def to_json(self) -> dict:
        out = {"check": self.check, "family": self.family, "N": self.n, "status": self.status, "residual": self.residual}
        if self.detail:
            out["detail"] = self.detail
        return out

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def check_relation(r: RelationInstance, f: Family, mode: str | int = "poly") -> CheckResult:
    """Sum of coefficient x weight; passes iff exactly zero.

    ``mode`` is ``"poly"`` (fast path, oriented only) or an integer N for a
    numeric check with the oracle (oriented) or Casimir (unoriented).
    """
    if mode == "poly":
        total = PolynomialQ()
        for c, d in r.terms:
            if not isinstance(d, OrientedChordDiagram):
                raise TypeError("polynomial mode needs oriented diagrams")
            total = total + evaluate_weight(d, f) * c
        ok = total.is_zero()
        res = "0" if ok else str(total.to_json()["binomial"])
        return CheckResult(r.name, f.value, "poly", "pass" if ok else "fail", res, r.note)
    n = int(mode)
    total_q = Fraction(0)
    for c, d in r.terms:
        if isinstance(d, OrientedChordDiagram):
            total_q += c * oracle_eval(d, f, n)
        else:
            total_q += c * casimir_eval(d, f, n)
    ok = total_q == 0
    return CheckResult(r.name, f.value, str(n), "pass" if ok else "fail", format_rational(total_q), r.note)


def check_stu(s: STUInstance, f: Family, n: int) -> CheckResult:
    lhs = vertex_eval(s.vertex, f, n)
    rhs = sum((c * oracle_eval(d, f, n) for c, d in s.relation.terms), Fraction(0))
    ok = lhs == rhs
    return CheckResult("STU", f.value, str(n), "pass" if ok else "fail", format_rational(lhs - rhs), s.relation.note)


def check_averaging(c: ChordDiagram, f: Family, n: int) -> CheckResult:
    lhs = sum((oracle_eval(d, f, n) for d in average(c)), Fraction(0))
    rhs = casimir_eval(c, f, n)
    ok = lhs == rhs
    return CheckResult("averaging", f.value, str(n), "pass" if ok else "fail", format_rational(lhs - rhs), str(c))


def _first_nonzero(arr: np.ndarray):
    for idx in zip(*np.nonzero(arr != 0)):
        return tuple(int(i) for i in idx), arr[idx]
    return None, Fraction(0)


def _fraction_einsum(spec: str, *ops: np.ndarray) -> np.ndarray:
    return np.einsum(spec, *ops, optimize=False)


def bialgebra_residuals(sc: StructureConstants) -> dict[str, np.ndarray]:
    """Residual tensors of AS, Jacobi, coJacobi and the cocycle condition (zero when they hold)."""
    c, g = sc.c, sc.gamma
    e = _fraction_einsum
    out = {
        "AS bracket": c + np.transpose(c, (1, 0, 2)),
        "AS cobracket": g + np.transpose(g, (1, 0, 2)),
    }
    # [[e_i, e_j], e_k] cyclic sum
    cc = e("ijl,lkm->ijkm", c, c)
    out["Jacobi"] = cc + np.transpose(cc, (1, 2, 0, 3)) + np.transpose(cc, (2, 0, 1, 3))
    # (id + tau + tau^2)(delta x id) delta(e_i), component (a, b, k)
    gg = e("jki,abj->iabk", g, g)
    out["coJacobi"] = gg + np.transpose(gg, (0, 3, 1, 2)) + np.transpose(gg, (0, 2, 3, 1))
    # delta([e_i, e_j]) - ad_{e_i} delta(e_j) + ad_{e_j} delta(e_i), component (p, q)
    lhs = e("ijl,pql->ijpq", c, g)
    ad = e("aqj,iap->ijpq", g, c) + e("pbj,ibq->ijpq", g, c)
    out["cocycle"] = lhs - ad + np.transpose(ad, (1, 0, 2, 3))
    return out


def check_bialgebra_identities(f: Family, n: int, sc: StructureConstants | None = None) -> list[CheckResult]:
    if sc is None:
        sc = structure_constants(f, n)
    report = []
    for name, res in bialgebra_residuals(sc).items():
        idx, val = _first_nonzero(res)
        ok = idx is None
        report.append(CheckResult(name, f.value, str(n), "pass" if ok else "fail",
                                  "0" if ok else format_rational(val),
                                  "" if ok else f"first failing index {idx}"))
    return report


def with_gamma_fault(sc: StructureConstants, index: tuple[int, int, int], delta=1) -> StructureConstants:
    g = sc.gamma.copy()
    g[index] = g[index] + delta
    return StructureConstants(sc.family, sc.n, sc.c, g)
