from fractions import Fraction

import pytest

from weightsys.diagrams import OrientedChordDiagram, canonicalize, enumerate_diagrams, parse_diagram
from weightsys.families import FAMILIES, Family
from weightsys.oracle import structure_constants
from weightsys.relations import (
    RelationInstance,
    average,
    averaged_relation,
    bialgebra_residuals,
    check_averaging,
    check_bialgebra_identities,
    check_relation,
    check_stu,
    four_t_instances,
    six_t_instances,
    stu_instances,
    stu_pair,
    with_gamma_fault,
)


def test_average_examples():
    one = parse_diagram("c1 c1", oriented=False)
    terms = average(one)
    assert len(terms) == 2 and all(str(t) == "t1 h1" for t in terms)
    assert len(average(parse_diagram("c1 c2 c1 c2", oriented=False))) == 4
    assert len(average(parse_diagram("", oriented=False))) == 1


def test_average_forgets_to_source():
    for n in range(4):
        for c in enumerate_diagrams(n, oriented=False):
            avg = average(c)
            assert len(avg) == 2 ** n
            assert all(canonicalize(t.forget()) == c for t in avg)


def test_relation_instance_validation():
    d = parse_diagram("t1 h1")
    with pytest.raises(ValueError):
        RelationInstance("x", ((Fraction(1), d),))
    with pytest.raises(ValueError):
        RelationInstance("x", ((Fraction(1), d), (Fraction(0), d)))


def test_six_t_shape():
    (r,) = six_t_instances(0)
    assert [c for c, _ in r.terms] == [1, -1, 1, -1, 1, -1]
    assert all(d.n == 2 for _, d in r.terms)
    with_spectator = six_t_instances(1)
    assert len(with_spectator) == 12
    assert all(d.n == 3 for r in with_spectator for _, d in r.terms)
    with pytest.raises(ValueError):
        six_t_instances(2)


@pytest.mark.parametrize("f", FAMILIES)
def test_six_t_vanishes(f):
    for r in six_t_instances(0) + six_t_instances(1):
        res = check_relation(r, f)
        assert res.passed, res.to_json()


def test_four_t_shape_and_vanishing():
    (r,) = four_t_instances()
    assert [c for c, _ in r.terms] == [1, -1, 1, -1]
    for r in four_t_instances(0) + four_t_instances(1):
        for f in FAMILIES:
            assert check_relation(r, f, 2).passed
            assert check_relation(averaged_relation(r), f).passed


def test_non_relation_reports_residual():
    d = parse_diagram("t1 h1")
    r = RelationInstance("fake", ((Fraction(1), d), (Fraction(1), d)))
    res = check_relation(r, Family.GL)
    assert res.status == "fail" and res.residual == "['0', '1', '2']"
    res = check_relation(r, Family.GL, 3)
    assert res.status == "fail" and res.residual == "9"


def test_stu_pairs_and_antisymmetry():
    insts = stu_instances()
    kinds = {s.vertex.kind for s in insts}
    assert kinds == {"bracket", "cobracket"}
    for vertex, rel in insts[:40]:
        (c1, d1), (c2, d2) = rel.terms
        assert (c1, c2) == (1, -1)
        assert isinstance(d1, OrientedChordDiagram) and d1.n == d2.n


@pytest.mark.parametrize("f", FAMILIES)
@pytest.mark.parametrize("n", [2, 3])
def test_stu_identities(f, n):
    for s in stu_instances():
        res = check_stu(s, f, n)
        assert res.passed, res.to_json()


@pytest.mark.parametrize("f", FAMILIES)
@pytest.mark.parametrize("n", [2, 3])
def test_bialgebra_identities(f, n):
    report = check_bialgebra_identities(f, n)
    assert [r.check for r in report] == ["AS bracket", "AS cobracket", "Jacobi", "coJacobi", "cocycle"]
    assert all(r.passed for r in report)


@pytest.mark.parametrize("f", FAMILIES)
def test_injected_fault_detected(f):
    sc = structure_constants(f, 2)
    for index in [(0, 1, 0), (1, 0, sc.size - 1), (sc.size - 1, 0, 1)]:
        report = {r.check: r for r in check_bialgebra_identities(f, 2, with_gamma_fault(sc, index))}
        assert not report["cocycle"].passed
        assert "first failing index" in report["cocycle"].detail


def test_residual_shapes():
    sc = structure_constants(Family.SP, 2)
    res = bialgebra_residuals(sc)
    m = sc.size
    assert res["cocycle"].shape == (m, m, m, m)
    assert res["Jacobi"].shape == (m, m, m, m)


@pytest.mark.parametrize("f", FAMILIES)
def test_averaging_matches_casimir_small(f):
    for n in range(3):
        for c in enumerate_diagrams(n, oriented=False):
            for size in (1, 2):
                assert check_averaging(c, f, size).passed
