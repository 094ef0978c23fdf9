"""Closed forms of Euler sums ``sum_{k>=1} R(k) H_k`` by residues, with
high-precision numerical verification."""

__version__ = "0.1.0"

from .catalog import Fixture, emit_latex, load_catalog, parse_latex, verify_catalog, verify_fixture
from .directsum import DirectSumConfig, direct_euler_sum
from .exact import Polynomial, rational_roots, squarefree_factor
from .numerics import digamma_hp, eval_symexpr, hurwitz_zeta_hp, polygamma_hp
from .pslq import ConstantBasis, discover, pslq_find
from .residue import (
    ClosedForm,
    T_func,
    closed_form,
    closed_form_fast,
    closed_form_via_theorem3,
    corollary1,
    corollary2,
    partial_fractions,
)
from .rfparse import (
    InfiniteSummandError,
    NotConvergentError,
    ParseError,
    RationalFunction,
    check_summable,
    parse_ratfunc,
)
from .symbolic import SymbolicExpression, simplify_special_values

__all__ = [
    "ClosedForm",
    "ConstantBasis",
    "DirectSumConfig",
    "Fixture",
    "InfiniteSummandError",
    "NotConvergentError",
    "ParseError",
    "Polynomial",
    "RationalFunction",
    "SymbolicExpression",
    "T_func",
    "check_summable",
    "closed_form",
    "closed_form_fast",
    "closed_form_via_theorem3",
    "corollary1",
    "corollary2",
    "digamma_hp",
    "direct_euler_sum",
    "discover",
    "emit_latex",
    "eval_symexpr",
    "hurwitz_zeta_hp",
    "load_catalog",
    "parse_latex",
    "parse_ratfunc",
    "partial_fractions",
    "polygamma_hp",
    "pslq_find",
    "rational_roots",
    "simplify_special_values",
    "squarefree_factor",
    "verify_catalog",
    "verify_fixture",
]
