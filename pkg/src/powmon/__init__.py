"""Arithmetic of power monoids over finite monoids and truncated (N, +)."""

from .atoms import AtomTable, AtomVerdict, Variant, atom_census, is_atom, named_construction
from .factor import (
    FactorClass,
    FactorWord,
    LengthSet,
    is_minimal,
    is_nr,
    length_set_truncated,
    minimal_factorizations,
    minimal_length_set,
    preceq,
)
from .ground import GroundMonoid, classify, cyclic, make_ground, natural_segment, table_ground
from .powset import SubsetElem, parse_subset, power, setwise_product, subset, translate

__version__ = "0.1.0"

__all__ = [
    "AtomTable",
    "AtomVerdict",
    "FactorClass",
    "FactorWord",
    "GroundMonoid",
    "LengthSet",
    "SubsetElem",
    "Variant",
    "atom_census",
    "classify",
    "cyclic",
    "is_atom",
    "is_minimal",
    "is_nr",
    "length_set_truncated",
    "make_ground",
    "minimal_factorizations",
    "minimal_length_set",
    "named_construction",
    "natural_segment",
    "parse_subset",
    "power",
    "preceq",
    "setwise_product",
    "subset",
    "table_ground",
    "translate",
]
