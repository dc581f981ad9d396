"""Congruence distributivity spectra of finitely generated varieties."""
from .algebra import (
    FiniteAlgebra,
    Node,
    Signature,
    Var,
    direct_product,
    eval_term,
    holds_identity,
    load_algebra,
    nonindexed_product,
    parse_algebra,
    parse_term,
    serialize_algebra,
    subalgebra_generate,
)
from .conditions import (
    check_dist,
    check_identity_generic,
    check_smile_C,
    day_function,
    day_level,
    extract_chain_terms,
    find_terms,
    jonsson_level,
    relational_level,
    tschantz_function,
)
from .errors import AlgebraError, BudgetExceeded, CapExceeded, ParseError
from .free import FreeAlgebra, element_term, free_algebra

__version__ = "0.1.0"
