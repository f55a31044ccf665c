"""loopforge: a Cayley-table toolkit for finite commutative automorphic loops.

The package decides loop properties (Latin, unital, commutative, automorphic,
power-associative), runs a registry of equational identities with ambient
hypothesis gating, builds Bruck and nlp associate tables, computes structural
data (subloops, normality, quotients, center, direct decomposition,
solvability certificates), and searches small orders for commutative A-loops
up to isomorphism. The ``loopforge`` command exposes the same pipeline over a
plain-text Cayley file format.
"""

from .associates import (
    AssociateTable,
    GroupCertificate,
    PMap,
    bruck_associate,
    exp2_group_check,
    nlp_associate,
    p_map,
    s_translation,
    square_root_theorem_check,
    squaring_iso_check,
)
from .automorphic import (
    CORE_SUITE,
    EXP2_SUITE,
    REGISTRY,
    IdentityCase,
    IdentityReport,
    check_identity,
    check_suite,
    fix_set,
    has_aip,
    is_automorphic_loop,
    is_automorphism,
    is_bruck,
    is_left_bol,
    is_moufang,
)
from .cli import emit_cayley, parse_cayley, report_document
from .errors import (
    CapExceeded,
    DecompositionFailed,
    DegreeMismatch,
    HypothesisNotMet,
    IllDefined,
    InvalidParameter,
    LoopError,
    NoIdentity,
    NotAutomorphism,
    NotCommutative,
    NotLatin,
    NotNormal,
    NotPowerAssociative,
    NotSubloop,
    NotUniquely2Divisible,
    ParseError,
    SearchTimeout,
    TheoremViolation,
)
from .forge import (
    COCYCLES,
    FANO_LINES,
    SearchSpec,
    are_isomorphic,
    canonical_form,
    cocycle_table,
    gen_cml81,
    gen_cocycle,
    gen_cyclic,
    gen_elem_abelian,
    gen_product,
    gen_q9,
    gen_steiner_fano,
    relabel,
    search,
)
from .kernel import LoopTable, validate
from .permgroups import (
    PermGroup,
    compose,
    generate,
    inn_group,
    inner_generators,
    inner_tensor,
    inverse,
    mlt_group,
    perm_from,
    subgroup_equals,
)
from .structure import (
    Decomposition,
    SolvabilityCertificate,
    Subloop,
    cauchy_audit,
    center,
    decompose,
    h_chain,
    hall_sylow_audit,
    is_normal,
    is_simple,
    is_solvable,
    k_chain,
    lagrange_audit,
    normal_closure,
    p_loop_check,
    quotient,
    subloop_enumerate,
    subloop_generate,
)

__version__ = "0.1.0"

__all__ = [
    "AssociateTable",
    "CORE_SUITE",
    "COCYCLES",
    "CapExceeded",
    "Decomposition",
    "DecompositionFailed",
    "DegreeMismatch",
    "EXP2_SUITE",
    "FANO_LINES",
    "GroupCertificate",
    "HypothesisNotMet",
    "IdentityCase",
    "IdentityReport",
    "IllDefined",
    "InvalidParameter",
    "LoopError",
    "LoopTable",
    "NoIdentity",
    "NotAutomorphism",
    "NotCommutative",
    "NotLatin",
    "NotNormal",
    "NotPowerAssociative",
    "NotSubloop",
    "NotUniquely2Divisible",
    "PMap",
    "ParseError",
    "PermGroup",
    "REGISTRY",
    "SearchSpec",
    "SearchTimeout",
    "SolvabilityCertificate",
    "Subloop",
    "TheoremViolation",
    "are_isomorphic",
    "bruck_associate",
    "canonical_form",
    "cauchy_audit",
    "center",
    "check_identity",
    "check_suite",
    "cocycle_table",
    "compose",
    "decompose",
    "emit_cayley",
    "exp2_group_check",
    "fix_set",
    "gen_cml81",
    "gen_cocycle",
    "gen_cyclic",
    "gen_elem_abelian",
    "gen_product",
    "gen_q9",
    "gen_steiner_fano",
    "generate",
    "h_chain",
    "hall_sylow_audit",
    "has_aip",
    "inn_group",
    "inner_generators",
    "inner_tensor",
    "inverse",
    "is_automorphic_loop",
    "is_automorphism",
    "is_bruck",
    "is_left_bol",
    "is_moufang",
    "is_normal",
    "is_simple",
    "is_solvable",
    "k_chain",
    "lagrange_audit",
    "mlt_group",
    "nlp_associate",
    "normal_closure",
    "p_loop_check",
    "p_map",
    "parse_cayley",
    "perm_from",
    "quotient",
    "relabel",
    "report_document",
    "s_translation",
    "search",
    "square_root_theorem_check",
    "squaring_iso_check",
    "subgroup_equals",
    "subloop_enumerate",
    "subloop_generate",
    "validate",
]
