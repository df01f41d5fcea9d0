"""Random generation, executable properties and campaigns."""

from .campaign import CampaignReport, InstanceResult, check_property, shrink
from .gen import GenBounds, derive_seed, gen_family, gen_fexpr, gen_formula, gen_fts
from .properties import FREE, PROPERTIES, Instance, Property

__all__ = [
    "FREE",
    "PROPERTIES",
    "CampaignReport",
    "GenBounds",
    "Instance",
    "InstanceResult",
    "Property",
    "check_property",
    "derive_seed",
    "gen_family",
    "gen_fexpr",
    "gen_formula",
    "gen_fts",
    "shrink",
]
