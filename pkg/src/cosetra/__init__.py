"""Finite coset relation algebras built from systems of groups, quotient
isomorphisms and coset shifts, checked against concrete relations."""

from .algebra import (
    AtomStructure,
    FiniteRelationAlgebra,
    InvalidTriple,
    MeasurabilityReport,
    build_full_algebra,
    check_ra_axioms,
    complex_algebra,
    identity_only_algebra,
    is_functional,
    is_relation_algebra,
    is_simple_ra,
    measurability,
)
from .analysis import (
    Embedding,
    InvariantViolation,
    NoEmbedding,
    NotFoundWithinBudget,
    check_lyndon_embedding,
    compare_compositions,
    find_embedding,
    point_partition,
    search_shift_systems,
    triviality_analysis,
    verify_coset_consequences,
    verify_embedding,
)
from .groups import FiniteGroup, cyclic, dihedral, direct_product, make_group, symmetric
from .lyndon import lyndon_algebra
from .pair import (
    GroupPair,
    GroupTriple,
    is_simple_triple,
    make_iso,
    make_triple,
    validate_pair,
    validate_shifts,
    validate_triple,
)
from .relations import AtomIndex, atom_compose, atom_converse, atom_relation, atom_shifted_compose
from .report import ConditionReport, Failure
from .specfile import ParseError, ResolutionError, TripleSpec, load_spec, parse_spec

__all__ = [
    "AtomIndex",
    "AtomStructure",
    "ConditionReport",
    "Embedding",
    "Failure",
    "FiniteGroup",
    "FiniteRelationAlgebra",
    "GroupPair",
    "GroupTriple",
    "InvalidTriple",
    "InvariantViolation",
    "MeasurabilityReport",
    "NoEmbedding",
    "NotFoundWithinBudget",
    "ParseError",
    "ResolutionError",
    "TripleSpec",
    "atom_compose",
    "atom_converse",
    "atom_relation",
    "atom_shifted_compose",
    "build_full_algebra",
    "check_lyndon_embedding",
    "check_ra_axioms",
    "compare_compositions",
    "complex_algebra",
    "cyclic",
    "dihedral",
    "direct_product",
    "find_embedding",
    "identity_only_algebra",
    "is_functional",
    "is_relation_algebra",
    "is_simple_ra",
    "is_simple_triple",
    "load_spec",
    "lyndon_algebra",
    "make_group",
    "make_iso",
    "make_triple",
    "measurability",
    "parse_spec",
    "point_partition",
    "search_shift_systems",
    "symmetric",
    "triviality_analysis",
    "validate_pair",
    "validate_shifts",
    "validate_triple",
    "verify_coset_consequences",
    "verify_embedding",
]
