"""Classical Lie weight systems on oriented chord diagrams, with a matrix oracle and relation checkers."""

from .diagrams import (
    ChordDiagram,
    DiagramError,
    OrientedChordDiagram,
    VertexDiagram,
    canonicalize,
    enumerate_diagrams,
    format_diagram,
    parse_diagram,
    parse_vertex_diagram,
    resolve_arcs,
)
from .families import FAMILIES, Family, PatternRule, evaluate_weight, pattern_rules, rule_tensor
from .oracle import (
    StructureConstants,
    arrow_tensor,
    casimir_eval,
    family_basis,
    oracle_eval,
    oracle_poly,
    structure_constants,
    vertex_eval,
)
from .polycount import OrderSystem, PolynomialQ, count_strict_maps, expand_in_basis, poly_from_samples
from .relations import (
    AveragedSum,
    RelationInstance,
    average,
    check_bialgebra_identities,
    check_relation,
    four_t_instances,
    six_t_instances,
    stu_instances,
)

__all__ = [name for name in dir() if not name.startswith("_")]
