"""Modal mu-calculus model checking for featured transition systems.

Four readings are provided: plain LTSs, feature formulas over products,
family formulas over sets of products, and a first-order fragment over the
product-set-labelled LTS.
"""

from .features import FeatureModel, parse_fexpr
from .logic import parse_formula
from .models import Fts, Lts, parse_fts, parse_lts, project
from .semantics import sat_family, sat_lts, sat_product

__all__ = [
    "FeatureModel",
    "Fts",
    "Lts",
    "parse_fexpr",
    "parse_formula",
    "parse_fts",
    "parse_lts",
    "project",
    "sat_family",
    "sat_lts",
    "sat_product",
]
