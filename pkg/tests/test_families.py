from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weightsys.diagrams import canonicalize, enumerate_diagrams, parse_diagram
from weightsys.families import (
    FAMILIES,
    GE,
    GT,
    LE,
    LT,
    Family,
    evaluate_weight,
    pattern_rules,
    rule_tensor,
    sector_index,
)
from weightsys.oracle import arrow_tensor, oracle_eval, oracle_poly
from weightsys.polycount import PolynomialQ

from strategies import oriented_diagrams

HALF_DIM = {
    Family.GL: PolynomialQ([0, 0, Fraction(1, 2)]),
    Family.SO_EVEN: PolynomialQ([0, Fraction(-1, 2), 1]),
    Family.SP: PolynomialQ([0, Fraction(1, 2), 1]),
    Family.SO_ODD: PolynomialQ([0, Fraction(1, 2), 1]),
}


def test_family_parse():
    assert Family.parse("SO-even") is Family.SO_EVEN
    with pytest.raises(ValueError):
        Family.parse("e8")


def test_rule_counts():
    assert [len(pattern_rules(f)) for f in FAMILIES] == [1, 8, 12, 8]


def test_gl_rule():
    (rule,) = pattern_rules(Family.GL)
    assert rule.sectors == ("A",) * 4
    assert rule.order == LE and rule.sign == 1 and rule.scalar == 1
    # joins alpha-nu and beta-mu
    assert rule.joins == ((0, 3), (1, 2))


def test_sp_k2_signs_positive():
    k2 = [r for r in pattern_rules(Family.SP) if r.sectors == ("A", "B", "B", "A")]
    assert len(k2) == 4 and all(r.sign == 1 for r in k2)
    assert {r.order for r in k2} == {LE, GE}


def test_so_even_k2_strict():
    k2 = [r for r in pattern_rules(Family.SO_EVEN) if r.sectors == ("A", "B", "B", "A")]
    assert {r.order for r in k2} == {LT, GT}


def test_joins_are_allowed_pairings():
    for f in FAMILIES:
        for r in pattern_rules(f):
            assert set(r.joins) in ({(0, 3), (1, 2)}, {(0, 2), (1, 3)})
            assert r.scalar in (Fraction(1), Fraction(1, 2))


def test_u_sector_only_for_so_odd():
    for f in FAMILIES:
        has_u = any("U" in r.sectors for r in pattern_rules(f))
        assert has_u == (f is Family.SO_ODD)
    with pytest.raises(ValueError):
        sector_index(Family.SO_EVEN, "U", 1, 2)
    assert sector_index(Family.SO_ODD, "B", 2, 3) == 6


@pytest.mark.parametrize("f", FAMILIES)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_rule_tensor_matches_oracle(f, n):
    assert rule_tensor(f, n) == arrow_tensor(f, n)


def test_bare_circle():
    assert evaluate_weight(parse_diagram(""), Family.GL) == PolynomialQ([0, 1])
    assert evaluate_weight(parse_diagram(""), Family.SO_EVEN) == PolynomialQ([0, 2])
    assert evaluate_weight(parse_diagram(""), Family.SO_ODD) == PolynomialQ([1, 2])
    assert evaluate_weight(parse_diagram(""), Family.SP) == PolynomialQ([0, 2])


@pytest.mark.parametrize("f", FAMILIES)
def test_single_arrow_is_half_dimension(f):
    assert evaluate_weight(parse_diagram("t1 h1"), f) == HALF_DIM[f]


# frozen values computed by both evaluators and cross-checked with the oracle
FROZEN = {
    ("t1 t2 h2 h1", Family.GL): ["0", "1/4", "1", "1"],
    ("t1 h1 t2 h2", Family.GL): ["0", "1/4", "2", "2"],
    ("t1 t2 h1 h2", Family.SO_EVEN): ["0", "1/8", "1/2"],
    ("t1 t2 h2 h1", Family.SO_EVEN): ["0", "1/8", "3/2", "2"],
    ("t1 t2 t3 h1 h2 h3", Family.SO_ODD): ["0", "-3/32", "-5/8", "-1/2"],
    ("t1 t2 h1 h2 t3 h3", Family.SO_ODD): ["0", "1/4", "11/8", "5/4"],
}


@pytest.mark.parametrize("word, f", list(FROZEN))
def test_frozen_values(word, f):
    assert evaluate_weight(parse_diagram(word), f).to_json()["binomial"] == FROZEN[word, f]


@pytest.mark.parametrize("f", FAMILIES)
def test_fast_path_equals_oracle_n_le_3(f):
    for n in range(4):
        for d in enumerate_diagrams(n):
            p = evaluate_weight(d, f)
            assert p == oracle_poly(d, f)
            assert p.degree <= n + 1


@settings(max_examples=25, deadline=None)
@given(oriented_diagrams(max_n=4), st.sampled_from(FAMILIES), st.integers(0, 10))
def test_rotation_invariance(d, f, k):
    p = evaluate_weight(d, f)
    assert evaluate_weight(d.rotate(k), f) == p
    assert evaluate_weight(canonicalize(d), f) == p
    assert p.degree <= d.n + 1


@settings(max_examples=10, deadline=None)
@given(oriented_diagrams(max_n=3), st.sampled_from(FAMILIES), st.integers(1, 4))
def test_random_diagrams_match_oracle_values(d, f, n):
    assert evaluate_weight(d, f)(n) == oracle_eval(d, f, n)
