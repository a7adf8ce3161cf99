"""Exact toolkit for finite conformal algebras.

Define algebras with a spectral product table over the rational d-polynomial
ring, verify their axioms, glue matched pairs into bicrossed products, twist
complements by deformation maps, and distinguish the results by exact module
invariants.  Everything is computed in exact rational arithmetic.
"""

from .actions import (
    MatchedPair,
    ModuleAction,
    action_eval,
    build_bicrossed,
    check_b1_b2_direct,
    check_bimodule,
    check_matched_pair,
    check_module,
    right_to_left,
    trivial_pair,
)
from .algebra import (
    ASSOCIATIVE,
    CheckReport,
    ConformalAlgebra,
    GenElement,
    LIE,
    check_axioms,
    product_eval,
)
from .constraints import (
    AnsatzSpec,
    ConstraintSystem,
    compile_deformation_constraints,
    grid_search,
    grid_values,
    linear_eliminate,
    verify_assignment,
)
from .deform import (
    DeformationMap,
    Morphism,
    apply_map,
    check_deformation_map,
    check_equivalence,
    check_morphism,
    deformed_algebra,
    graph_embedding_check,
    is_isomorphism,
)
from .dsl import Document, ParseError, parse_document, serialize, try_parse
from .poly import D, L1, L2, MultiPoly, unknown
from .structure import (
    Submodule,
    derived_subalgebra,
    hermite_normal_form,
    is_abelian,
    is_solvable,
    member,
    span,
    submodule_equals,
)

__version__ = "0.1.0"
