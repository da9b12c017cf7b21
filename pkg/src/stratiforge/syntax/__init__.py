"""Term and formula languages, the prelude of derived operators, and expansion."""

from .formulas import Formula, parse_formula, print_formula
from .prelude import (
    Definition, DefinitionTable, check_definition, default_prelude, expand, load_prelude,
    parse_prelude,
)
from .terms import Named, Term, Var, free_vars, is_primitive, parse_term, print_term

__all__ = [
    "Formula", "parse_formula", "print_formula", "Definition", "DefinitionTable",
    "check_definition", "default_prelude", "expand", "load_prelude", "parse_prelude",
    "Named", "Term", "Var", "free_vars", "is_primitive", "parse_term", "print_term",
]
