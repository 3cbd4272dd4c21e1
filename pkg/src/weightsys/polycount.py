"""Exact polynomials in N, strict order counting, and exact linear expansion."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

Rational = Fraction | int


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def format_rational(q: Rational) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class PolynomialQ:
    """Polynomial in one variable N with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c) -> "PolynomialQ":
        return cls([c])

    @classmethod
    def from_binomial(cls, bcoeffs: Sequence) -> "PolynomialQ":
        out = cls()
        for k, b in enumerate(bcoeffs):
            b = _frac(b)
            if b:
                out = out + binomial_poly(k) * b
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, n) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __add__(self, other) -> "PolynomialQ":
        if not isinstance(other, PolynomialQ):
            other = PolynomialQ.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return PolynomialQ([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "PolynomialQ":
        return PolynomialQ([-c for c in self.coeffs])

    def __sub__(self, other) -> "PolynomialQ":
        return self + (-other if isinstance(other, PolynomialQ) else -_frac(other))

    def __mul__(self, other) -> "PolynomialQ":
        if not isinstance(other, PolynomialQ):
            s = _frac(other)
            return PolynomialQ([c * s for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return PolynomialQ()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolynomialQ(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, PolynomialQ):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == PolynomialQ.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"PolynomialQ({[format_rational(c) for c in self.coeffs]})"

    def binomial(self) -> list[Fraction]:
        return to_binomial_basis(self)

    def to_json(self) -> dict:
        return {
            "monomial": [format_rational(c) for c in self.coeffs],
            "binomial": [format_rational(c) for c in self.binomial()],
            "latex": latex_binomial(self),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "PolynomialQ":
        return cls(obj["monomial"])


@lru_cache(maxsize=None)
def binomial_poly(k: int) -> PolynomialQ:
    """C(N, k) as a polynomial in N."""
    p = PolynomialQ([1])
    for i in range(k):
        p = p * PolynomialQ([Fraction(-i, i + 1), Fraction(1, i + 1)])
    return p


def to_binomial_basis(p: PolynomialQ) -> list[Fraction]:
    """Coefficients b_k with p = sum b_k C(N, k); forward differences at 0."""
    if p.is_zero():
        return []
    values = [p(n) for n in range(p.degree + 1)]
    out = []
    while values:
        out.append(values[0])
        values = [values[i + 1] - values[i] for i in range(len(values) - 1)]
    while out and out[-1] == 0:
        out.pop()
    return out


def latex_binomial(p: PolynomialQ) -> str:
    parts = []
    for k, b in enumerate(p.binomial()):
        if b == 0:
            continue
        term = "1" if k == 0 else ("N" if k == 1 else f"{{N\\choose {k}}}")
        mag = abs(b)
        if k == 0:
            body = format_rational(mag) if mag.denominator == 1 else f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}"
        elif mag == 1:
            body = term
        elif mag.denominator == 1:
            body = f"{mag.numerator}{term}"
        elif k == 1:
            num = "" if mag.numerator == 1 else str(mag.numerator)
            body = f"\\frac{{{num}N}}{{{mag.denominator}}}"
        else:
            body = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}{term}"
        sign = "-" if b < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        s += sign + body
    return s


def poly_from_samples(points: Iterable[tuple[int, Rational]], degree_bound: int) -> PolynomialQ:
    """Interpolate through the first ``degree_bound + 1`` points, check the rest."""
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("sample abscissae must be distinct")
    if len(pts) < degree_bound + 1:
        raise ValueError(f"need at least {degree_bound + 1} points, got {len(pts)}")
    base = pts[: degree_bound + 1]
    # Newton divided differences
    coef = [y for _, y in base]
    for j in range(1, len(base)):
        for i in range(len(base) - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (base[i][0] - base[i - j][0])
    poly = PolynomialQ()
    for i in range(len(base) - 1, -1, -1):
        poly = poly * PolynomialQ([-base[i][0], 1]) + coef[i]
    for x, y in pts[degree_bound + 1:]:
        if poly(x) != y:
            raise ValueError(f"sample at N={x} is inconsistent with degree <= {degree_bound}")
    return poly


@dataclass
class OrderSystem:
    """Classes 0..p-1 taking values in {1..N}, strict edges a < b, a scalar weight."""

    p: int
    edges: set[tuple[int, int]] = field(default_factory=set)
    scalar: Fraction = Fraction(1)
    dead: bool = False

    def add_edge(self, a: int, b: int) -> None:
        if a == b:
            self.dead = True
        self.edges.add((a, b))


def _sources(mask: int, preds: tuple[int, ...]) -> int:
    out = 0
    i = 0
    m = mask
    while m:
        if m & 1 and not preds[i] & mask:
            out |= 1 << i
        m >>= 1
        i += 1
    return out


@lru_cache(maxsize=1 << 16)
def _surjective_chain_counts(p: int, edges: frozenset) -> tuple[int, ...]:
    """e_k = number of surjections onto a k-chain respecting every strict edge."""
    preds = [0] * p
    for a, b in edges:
        preds[b] |= 1 << a
    preds_t = tuple(preds)

    @lru_cache(maxsize=None)
    def levels(mask: int) -> tuple[int, ...]:
        if mask == 0:
            return (1,)
        src = _sources(mask, preds_t)
        acc: list[int] = []
        sub = src
        while sub:
            rest = levels(mask & ~sub)
            for j, c in enumerate(rest):
                while len(acc) <= j + 1:
                    acc.append(0)
                acc[j + 1] += c
            sub = (sub - 1) & src
        return tuple(acc)

    return levels((1 << p) - 1)


def count_strict_maps(s: OrderSystem) -> PolynomialQ:
    """Number of maps classes -> {1..N} satisfying every strict edge, times the scalar."""
    if s.dead or s.scalar == 0:
        return PolynomialQ()
    e = _surjective_chain_counts(s.p, frozenset(s.edges))
    return PolynomialQ.from_binomial(e) * s.scalar


# -- exact linear algebra -------------------------------------------------

SparseMatrix = Mapping[tuple[int, int], Rational]


class ExpansionError(ValueError):
    """Target is not in the span of the basis."""


class BasisExpander:
    """Row-reduced view of a list of sparse matrices for repeated expansion."""

    def __init__(self, basis: Sequence[SparseMatrix]):
        self.size = len(basis)
        # each row: (vector dict, combination dict) kept in echelon form by pivot
        self.pivots: list[tuple[object, dict, dict]] = []
        for idx, mat in enumerate(basis):
            vec = {k: Fraction(v) for k, v in mat.items() if v}
            comb_ = {idx: Fraction(1)}
            vec, comb_ = self._reduce(vec, comb_)
            if not vec:
                raise ValueError(f"basis element {idx} is linearly dependent")
            piv = min(vec)
            scale = vec[piv]
            vec = {k: v / scale for k, v in vec.items()}
            comb_ = {k: v / scale for k, v in comb_.items()}
            # keep earlier rows reduced against the new pivot
            new = []
            for p, v2, c2 in self.pivots:
                f = v2.get(piv, 0)
                if f:
                    v2 = _axpy(v2, vec, -f)
                    c2 = _axpy(c2, comb_, -f)
                new.append((p, v2, c2))
            new.append((piv, vec, comb_))
            self.pivots = new

    def _reduce(self, vec: dict, comb_: dict) -> tuple[dict, dict]:
        for piv, v2, c2 in self.pivots:
            f = vec.get(piv, 0)
            if f:
                vec = _axpy(vec, v2, -f)
                comb_ = _axpy(comb_, c2, -f)
        return vec, comb_

    def expand(self, target: SparseMatrix) -> list[Fraction]:
        vec = {k: Fraction(v) for k, v in target.items() if v}
        out = {}
        for piv, v2, c2 in self.pivots:
            f = vec.get(piv, 0)
            if f:
                vec = _axpy(vec, v2, -f)
                out = _axpy(out, c2, f)
        if vec:
            raise ExpansionError("target lies outside the span of the basis")
        return [out.get(i, Fraction(0)) for i in range(self.size)]


def _axpy(y: dict, x: dict, a: Fraction) -> dict:
    out = dict(y)
    for k, v in x.items():
        s = out.get(k, 0) + a * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def expand_in_basis(target: SparseMatrix, basis: Sequence[SparseMatrix]) -> list[Fraction]:
    return BasisExpander(basis).expand(target)


def solve_inverse(matrix: Sequence[Sequence[Rational]]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        s = a[col][col]
        a[col] = [x / s for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]
