"""Brute-force ground truth from explicit matrix bases.

Every evaluator here is a trace of a product of matrices around the circle,
summed over the basis labels carried by arrows, chords or a trivalent vertex.
The contraction is delegated to ``numpy.einsum`` on integer tensors.  Rational
inputs are scaled to integers first; the contraction runs in uint64 (exact
modulo 2**64) and a float64 contraction of absolute values bounds the true
result, so the wrapped residue determines it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

import numpy as np

from .diagrams import (
    BRACKET,
    HEAD,
    ChordDiagram,
    OrientedChordDiagram,
    VertexDiagram,
)
from .families import Family
from .polycount import BasisExpander, PolynomialQ, poly_from_samples

SparseMatrix = dict[tuple[int, int], Fraction]  # keys are 0-based (row, column)

HALF = Fraction(1, 2)


def _e(i: int, j: int, c=1) -> SparseMatrix:
    """Matrix unit, 1-based indices."""
    return {(i - 1, j - 1): Fraction(c)}


def _add(*mats: SparseMatrix, scale=1) -> SparseMatrix:
    out: SparseMatrix = {}
    for m in mats:
        for k, v in m.items():
            out[k] = out.get(k, 0) + v
    return {k: v * scale for k, v in out.items() if v}


def _neg(m: SparseMatrix) -> SparseMatrix:
    return {k: -v for k, v in m.items()}


@dataclass(frozen=True)
class BasisPair:
    label: tuple[int, ...]
    x: SparseMatrix
    xi: SparseMatrix


@dataclass(frozen=True)
class FamilyBasis:
    family: Family
    n: int
    dim: int
    pairs: tuple[BasisPair, ...]

    @property
    def xs(self) -> list[SparseMatrix]:
        return [p.x for p in self.pairs]

    @property
    def xis(self) -> list[SparseMatrix]:
        return [p.xi for p in self.pairs]


@lru_cache(maxsize=None)
def family_basis(f: Family, n: int) -> FamilyBasis:
    """The (x_a, xi^a) pairs, ordered by k, then i, then j; zero elements dropped."""
    if n < 1:
        raise ValueError("N must be >= 1")
    pairs: list[BasisPair] = []

    def w(i, j):
        # (1/2)^(delta_ij + 1)
        return HALF ** (2 if i == j else 1)

    def push(label, x, xi):
        if x or xi:
            pairs.append(BasisPair(label, x, xi))

    N = n
    if f is Family.GL:
        for i in range(1, N + 1):
            for j in range(i, N + 1):
                push((i, j), _e(i, j), _e(j, i, HALF if i == j else 1))
    elif f in (Family.SO_EVEN, Family.SP):
        s = 1 if f is Family.SP else -1
        for i in range(1, N + 1):
            for j in range(i, N + 1):
                push((1, i, j), _add(_e(i, j), _neg(_e(j + N, i + N))),
                     _add(_e(j, i), _neg(_e(i + N, j + N)), scale=w(i, j)))
        for i in range(1, N + 1):
            for j in range(i, N + 1):
                push((2, i, j), _add(_e(i, j + N), _e(j, i + N, s)),
                     _add(_e(j + N, i), _e(i + N, j, s), scale=w(i, j)))
    elif f is Family.SO_ODD:
        # the k=0 row is used transposed (x and xi exchanged, pairing kept at 1):
        # in the other orientation the x span is not closed under the bracket
        for i in range(1, N + 1):
            push((0, i), _add(_e(i + 1, 1), _neg(_e(1, i + N + 1))),
                 _add(_e(1, i + 1), _neg(_e(i + N + 1, 1)), scale=HALF))
        for i in range(1, N + 1):
            for j in range(i, N + 1):
                push((1, i, j), _add(_e(i + 1, j + 1), _neg(_e(j + N + 1, i + N + 1))),
                     _add(_e(j + 1, i + 1), _neg(_e(i + N + 1, j + N + 1)), scale=w(i, j)))
        for i in range(1, N + 1):
            for j in range(i, N + 1):
                push((2, i, j), _add(_e(i + 1, j + N + 1), _neg(_e(j + 1, i + N + 1))),
                     _add(_e(j + N + 1, i + 1), _neg(_e(i + N + 1, j + 1)), scale=w(i, j)))
    else:  # pragma: no cover
        raise ValueError(f)
    return FamilyBasis(f, n, f.rep_dimension(n), tuple(pairs))


def _trace(m: SparseMatrix) -> Fraction:
    return sum((v for (r, c), v in m.items() if r == c), Fraction(0))


def _matmul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    out: SparseMatrix = {}
    for (i, k), v in a.items():
        for (k2, j), u in b.items():
            if k == k2:
                out[(i, j)] = out.get((i, j), 0) + v * u
    return {k: v for k, v in out.items() if v}


def commutator(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    return _add(_matmul(a, b), _neg(_matmul(b, a)))


def pairing_sum(basis: FamilyBasis) -> Fraction:
    """sum_a tr(x_a xi^a)."""
    return sum((_trace(_matmul(p.x, p.xi)) for p in basis.pairs), Fraction(0))


# -- exact integer contraction ------------------------------------------------


def _to_integer_stack(mats: Sequence[SparseMatrix], d: int) -> tuple[np.ndarray, int]:
    """Stack of matrices as one integer array, plus the common denominator."""
    den = 1
    for m in mats:
        for v in m.values():
            den = lcm(den, Fraction(v).denominator)
    arr = np.zeros((len(mats), d, d), dtype=object)
    for a, m in enumerate(mats):
        for (r, c), v in m.items():
            arr[a, r, c] = int(v * den)
    return arr, den


def _integer_array(values: np.ndarray) -> tuple[np.ndarray, int]:
    flat = [Fraction(v) for v in values.flat]
    den = 1
    for v in flat:
        den = lcm(den, v.denominator)
    out = np.array([int(v * den) for v in flat], dtype=object).reshape(values.shape)
    return out, den


_BOUND = float(2 ** 61)
_MEMORY_LIMIT = 2 ** 26


def exact_contract(operands: list[np.ndarray], sublists: list[list[int]]) -> int:
    """Full contraction of integer tensors (object arrays of Python ints)."""
    if not operands:
        return 1
    args_abs = []
    args_mod = []
    for op, sub in zip(operands, sublists):
        args_abs += [np.abs(op).astype(np.float64), sub]
        args_mod += [np.array([int(v) % (1 << 64) for v in op.flat], dtype=np.uint64).reshape(op.shape), sub]
    path, _ = np.einsum_path(*args_abs, [], optimize=("greedy", _MEMORY_LIMIT))
    bound = float(np.einsum(*args_abs, [], optimize=path))
    if bound < _BOUND:
        r = int(np.einsum(*args_mod, [], optimize=path))
        return r - (1 << 64) if r >= 1 << 63 else r
    args_obj = []
    for op, sub in zip(operands, sublists):
        args_obj += [op, sub]
    return int(np.einsum(*args_obj, [], optimize=path))


class _Network:
    """Operands for a trace around the circle with 2n skeleton endpoints."""

    def __init__(self, n_points: int):
        self.n_points = n_points
        self.next_label = n_points
        self.operands: list[np.ndarray] = []
        self.sublists: list[list[int]] = []
        self.den = 1

    def new_label(self) -> int:
        self.next_label += 1
        return self.next_label - 1

    def arc_in(self, pos: int) -> int:
        return (pos - 1) % self.n_points

    def point(self, pos: int, stack: np.ndarray, label: int) -> None:
        # matrix[out, in]: arc ``pos`` leaves the endpoint, arc ``pos-1`` enters it
        self.operands.append(stack)
        self.sublists.append([label, pos, self.arc_in(pos)])

    def factor(self, arr: np.ndarray, labels: list[int], den: int = 1) -> None:
        self.operands.append(arr)
        self.sublists.append(labels)
        self.den *= den

    def value(self) -> int:
        return exact_contract(self.operands, self.sublists)


@lru_cache(maxsize=None)
def _stacks(f: Family, n: int):
    basis = family_basis(f, n)
    xs, dx = _to_integer_stack(basis.xs, basis.dim)
    xis, dxi = _to_integer_stack(basis.xis, basis.dim)
    return xs, dx, xis, dxi


def oracle_eval(d: OrientedChordDiagram, f: Family, n: int) -> Fraction:
    """Sum over basis labels of the trace of the circle-ordered product.

    The tail of an arrow labelled ``a`` carries xi^a, the head carries x_a.
    Later endpoints multiply on the left.
    """
    dim = f.rep_dimension(n)
    if d.n == 0:
        return Fraction(dim)
    xs, dx, xis, dxi = _stacks(f, n)
    net = _Network(len(d.word))
    labels = {}
    for pos, (role, ident) in enumerate(d.word):
        lab = labels.setdefault(ident, net.new_label())
        if role == HEAD:
            net.point(pos, xs, lab)
        else:
            net.point(pos, xis, lab)
    return Fraction(net.value(), (dx * dxi) ** d.n)


def oracle_poly(d: OrientedChordDiagram, f: Family) -> PolynomialQ:
    """Interpolate oracle values at N = 1..n+2 and check N = n+3."""
    pts = [(k, oracle_eval(d, f, k)) for k in range(1, d.n + 4)]
    return poly_from_samples(pts, d.n + 1)


def arrow_tensor(f: Family, n: int) -> dict[tuple[int, int, int, int], Fraction]:
    """Entries of sum_a xi^a[beta, alpha] x_a[nu, mu], keyed (alpha, beta, mu, nu), 1-based."""
    out: dict[tuple[int, int, int, int], Fraction] = {}
    for p in family_basis(f, n).pairs:
        for (beta, alpha), u in p.xi.items():
            for (nu, mu), v in p.x.items():
                key = (alpha + 1, beta + 1, mu + 1, nu + 1)
                out[key] = out.get(key, 0) + u * v
    return {k: v for k, v in out.items() if v}


# -- structure constants ------------------------------------------------------


@dataclass(frozen=True)
class StructureConstants:
    """``c[i][j][k]`` = c^k_ij on the x side; ``gamma[i][j][k]`` = gamma^ij_k on the xi side."""

    family: Family
    n: int
    c: np.ndarray
    gamma: np.ndarray

    @property
    def size(self) -> int:
        return self.c.shape[0]


@lru_cache(maxsize=None)
def structure_constants(f: Family, n: int) -> StructureConstants:
    basis = family_basis(f, n)
    m = len(basis.pairs)
    c = np.zeros((m, m, m), dtype=object)
    g = np.zeros((m, m, m), dtype=object)
    c[...] = Fraction(0)
    g[...] = Fraction(0)
    ex = BasisExpander(basis.xs)
    exi = BasisExpander(basis.xis)
    for i in range(m):
        for j in range(i + 1, m):
            cx = ex.expand(commutator(basis.xs[i], basis.xs[j]))
            cxi = exi.expand(commutator(basis.xis[i], basis.xis[j]))
            for k in range(m):
                c[i, j, k], c[j, i, k] = cx[k], -cx[k]
                g[i, j, k], g[j, i, k] = cxi[k], -cxi[k]
    return StructureConstants(f, n, c, g)


def vertex_eval(vd: VertexDiagram, f: Family, n: int, sc: StructureConstants | None = None) -> Fraction:
    """Contract a diagram with one trivalent vertex.

    Bracket vertex, legs (in a, in b, out): sum c^k_ab xi^a, xi^b, x_k at the
    leg endpoints.  Cobracket vertex, legs (in, out a, out b): sum gamma^ab_i
    xi^i, x_a, x_b.
    """
    if sc is None:
        sc = structure_constants(f, n)
    xs, dx, xis, dxi = _stacks(f, n)
    net = _Network(len(vd.word))
    labels = {}
    for pos, (role, ident) in enumerate(vd.word):
        if role in ("i", "o"):
            continue
        lab = labels.setdefault(ident, net.new_label())
        net.point(pos, xs if role == HEAD else xis, lab)
    n_arrows = len(labels)
    legs = vd.leg_positions()
    leg_labels = [net.new_label() for _ in range(3)]
    if vd.kind == BRACKET:
        coeff, den = _integer_array(sc.c)
        stacks = (xis, xis, xs)
        scale = dxi * dxi * dx
    else:
        coeff, den = _integer_array(np.transpose(sc.gamma, (2, 0, 1)))
        stacks = (xis, xs, xs)
        scale = dxi * dx * dx
    for pos, stack, lab in zip(legs, stacks, leg_labels):
        net.point(pos, stack, lab)
    net.factor(coeff, leg_labels, den)
    return Fraction(net.value(), net.den * scale * (dx * dxi) ** n_arrows)


# -- unoriented weight systems ------------------------------------------------


def _form(f: Family, n: int) -> SparseMatrix:
    """Bilinear form J preserved by the ambient algebra in this realization."""
    if f is Family.SO_EVEN:
        return _add(*[_e(i, i + n) for i in range(1, n + 1)], *[_e(i + n, i) for i in range(1, n + 1)])
    if f is Family.SP:
        return _add(*[_e(i, i + n) for i in range(1, n + 1)], *[_e(i + n, i, -1) for i in range(1, n + 1)])
    if f is Family.SO_ODD:
        return _add(_e(1, 1), *[_e(i + 1, i + n + 1) for i in range(1, n + 1)],
                    *[_e(i + n + 1, i + 1) for i in range(1, n + 1)])
    raise ValueError(f)


@lru_cache(maxsize=None)
def ambient_basis(f: Family, n: int) -> tuple[SparseMatrix, ...]:
    """A basis of the full classical algebra: J^-1 S with S antisymmetric (so) or symmetric (sp)."""
    d = f.rep_dimension(n)
    if f is Family.GL:
        return tuple(_e(i, j) for i in range(1, d + 1) for j in range(1, d + 1))
    j_mat = _form(f, n)
    # J is a signed permutation matrix here, so J^-1 = J^T / (entries squared)
    j_inv = {(c, r): 1 / v for (r, c), v in j_mat.items()}
    out = []
    for i in range(1, d + 1):
        for j in range(i, d + 1):
            if f is Family.SP:
                s = _add(_e(i, j), _e(j, i)) if i != j else _e(i, i)
            else:
                if i == j:
                    continue
                s = _add(_e(i, j), _e(j, i, -1))
            out.append(_matmul(j_inv, s))
    return tuple(out)


def casimir_eval(c: ChordDiagram, f: Family, n: int, basis: Sequence[SparseMatrix] | None = None) -> Fraction:
    """Unoriented weight system of the ambient algebra with metric tr(AB)."""
    from .polycount import solve_inverse

    dim = f.rep_dimension(n)
    if c.n == 0:
        return Fraction(dim)
    if basis is None:
        basis = ambient_basis(f, n)
    basis = list(basis)
    gram = [[_trace(_matmul(a, b)) for b in basis] for a in basis]
    try:
        ginv = solve_inverse(gram)
    except ZeroDivisionError:
        raise ValueError("Gram matrix of the basis is singular") from None
    stack, ds = _to_integer_stack(basis, dim)
    gi, dg = _integer_array(np.array(ginv, dtype=object))
    net = _Network(len(c.word))
    first: dict[int, int] = {}
    for pos, (_, ident) in enumerate(c.word):
        if ident not in first:
            first[ident] = net.new_label()
            net.point(pos, stack, first[ident])
        else:
            lab = net.new_label()
            net.point(pos, stack, lab)
            net.factor(gi, [first[ident], lab], dg)
    return Fraction(net.value(), net.den * ds ** (2 * c.n))
