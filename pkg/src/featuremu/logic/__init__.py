from .parser import DialectError, FormulaSyntaxError, alpha_rename, parse_formula, read_formula_file
from .syntax import (
    DIALECTS,
    MUL,
    MULF,
    MULPF,
    And,
    Bot,
    Box,
    Diamond,
    Formula,
    Mu,
    Not,
    Nu,
    Or,
    Ruby,
    Top,
    Var,
    depth,
    dialect_of,
    format_formula,
    free_vars,
    is_box_only,
    is_closed,
    is_negation_free,
    modal_depth,
    substitute,
)
from .transform import (
    MonotonicityViolation,
    NotClosedError,
    NotMonotoneError,
    NotNormalizable,
    check_monotone,
    nnf,
    nnf_family,
)
