from ._core import (
    CompoundError,
    TolerancePolicy,
    adjugate,
    adjugate_via_compound,
    binomial,
    closed_form_inverse_nminus1,
    compound,
    compound_residual,
    family_contains,
    indexof_tuple,
    inverse_compound,
    is_decomposable,
    lex_tuples,
    rank_one_inverse,
    wedge,
    wedge_matrix,
)

__all__ = [
    "CompoundError",
    "TolerancePolicy",
    "adjugate",
    "adjugate_via_compound",
    "binomial",
    "closed_form_inverse_nminus1",
    "compound",
    "compound_residual",
    "family_contains",
    "indexof_tuple",
    "inverse_compound",
    "is_decomposable",
    "lex_tuples",
    "rank_one_inverse",
    "wedge",
    "wedge_matrix",
]
