"""Elements of the power monoids P_fin,1(H) and P_fin,x(H) and their arithmetic.

A :class:`SubsetElem` is a non-empty subset of the ground stored as a bit-set.
Whether it is read in the reduced monoid (identity is a member) or in the
restricted one (meets the unit set) is decided by the caller; the same value
lives in both whenever it qualifies.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .ground import CYCLIC, NATURAL, GroundMonoid, iter_bits

__all__ = [
    "HatLift",
    "SubsetElem",
    "cauchy_davenport_holds",
    "format_mask",
    "hat_lift",
    "is_prime",
    "parse_subset",
    "power",
    "products_many",
    "setwise_product",
    "subset",
    "translate",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubsetElem:
    """A finite non-empty subset of ``ground``; ``mask`` holds the members as bits."""

    ground: GroundMonoid
    mask: int

    def __post_init__(self) -> None:
        if self.mask <= 0:
            raise ValueError("power-monoid elements are non-empty subsets")
        if self.mask >> self.ground.size:
            raise ValueError(f"members outside the index range of {self.ground.name}")

    @classmethod
    def of(cls, ground: GroundMonoid, elements: Iterable[int]) -> "SubsetElem":
        return cls(ground, ground.mask_of(elements))

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, x: object) -> bool:
        return isinstance(x, int) and x >= 0 and bool(self.mask >> x & 1)

    def __mul__(self, other: "SubsetElem") -> "SubsetElem":
        return setwise_product(self, other)

    def __le__(self, other: "SubsetElem") -> bool:
        """Subset inclusion."""
        return self.ground == other.ground and self.mask & ~other.mask == 0

    def __str__(self) -> str:
        return format_mask(self.mask)

    def __repr__(self) -> str:
        return f"SubsetElem({self.ground.name}, {self})"

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.mask.bit_count(), self.mask)

    @property
    def in_reduced(self) -> bool:
        return bool(self.mask & 1)

    @property
    def in_restricted(self) -> bool:
        return bool(self.mask & self.ground.unit_mask)


def subset(ground: GroundMonoid, *elements: int) -> SubsetElem:
    """Shorthand: ``subset(cyclic(5), 0, 1)``."""
    return SubsetElem.of(ground, elements)


def format_mask(mask: int) -> str:
    """Canonical text form: sorted comma-separated indices in braces."""
    return "{" + ",".join(str(x) for x in iter_bits(mask)) + "}"


_SET_LITERAL = re.compile(r"^\{\s*(-?\d+(\s*,\s*-?\d+)*)?\s*\}$")


def parse_subset(text: str, ground: GroundMonoid) -> SubsetElem:
    """Parse ``{r1,r2,...}``; whitespace is ignored and residues reduced mod n
    on cyclic grounds (with a logged warning)."""
    text = text.strip()
    if not _SET_LITERAL.match(text):
        raise ValueError(f"not a set literal: {text!r}")
    body = text[1:-1].strip()
    values = [int(tok) for tok in body.split(",")] if body else []
    if not values:
        raise ValueError("power-monoid elements are non-empty subsets")
    if ground.kind == CYCLIC:
        reduced = [v % ground.size for v in values]
        if reduced != values:
            log.warning("residues reduced mod %d: %s -> %s", ground.size, values, reduced)
        values = reduced
    return SubsetElem.of(ground, values)


def _same_ground(*elems: SubsetElem) -> GroundMonoid:
    g = elems[0].ground
    for e in elems[1:]:
        if e.ground != g:
            raise ValueError(f"mixed grounds: {g.name} and {e.ground.name}")
    return g


def setwise_product(X: SubsetElem, Y: SubsetElem) -> SubsetElem:
    """``XY = {xy : x in X, y in Y}``.

    Raises :class:`~powmon.ground.CapacityError` when a sum leaves a truncated
    natural segment.
    """
    g = _same_ground(X, Y)
    return SubsetElem(g, g.product(X.mask, Y.mask))


def power(X: SubsetElem, k: int) -> SubsetElem:
    """k-fold setwise product; ``power(X, 0)`` is the identity singleton."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    g = X.ground
    out = 1
    base = X.mask
    # square-and-multiply; the product is associative
    while k:
        if k & 1:
            out = g.product(out, base)
        k >>= 1
        if k:
            base = g.product(base, base)
    return SubsetElem(g, out)


def translate(u: int, X: SubsetElem, v: int) -> SubsetElem:
    """``uXv`` for units u, v of the ground."""
    g = X.ground
    for w in (u, v):
        if not (0 <= w < g.size and g.is_unit(w)):
            raise ValueError(f"{w} is not a unit of {g.name}")
    return SubsetElem(g, g.translate(u, X.mask, v))


@dataclass(frozen=True)
class HatLift:
    """Least non-negative integer representatives of a set of residues."""

    values: frozenset[int]

    @property
    def max(self) -> int:
        return max(self.values)

    def __len__(self) -> int:
        return len(self.values)


def hat_lift(X: SubsetElem) -> HatLift:
    if X.ground.kind != CYCLIC:
        raise ValueError("hat-lift is defined for residues of Z/nZ only")
    return HatLift(frozenset(X.members))


def max_hat(mask: int) -> int:
    """Largest lifted residue of a cyclic bit-set."""
    return mask.bit_length() - 1


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def cauchy_davenport_holds(A: SubsetElem, B: SubsetElem) -> bool:
    """``|A+B| >= min(p, |A|+|B|-1)`` over Z/pZ, p prime."""
    g = _same_ground(A, B)
    if g.kind != CYCLIC or not is_prime(g.size):
        raise ValueError(f"Cauchy-Davenport needs Z/p with p prime, got {g.name}")
    return len(A * B) >= min(g.size, len(A) + len(B) - 1)


def natural_fits(ground: GroundMonoid, a: int, b: int) -> bool:
    """Whether ``a + b`` stays inside a natural segment."""
    if ground.kind != NATURAL:
        return True
    return (a.bit_length() - 1) + (b.bit_length() - 1) < ground.size


def products_many(ground: GroundMonoid, masks, A: int):
    """``P * A`` for every bit-set P in the numpy array ``masks``.

    Cyclic grounds (n <= 63) are handled with vectorised rotations; other
    grounds fall back to a Python loop and return an object array.
    """
    import numpy as np

    if ground.kind == CYCLIC and ground.size <= 63:
        n = ground.size
        arr = np.asarray(masks, dtype=np.uint64)
        full = np.uint64(ground.full_mask)
        out = np.zeros_like(arr)
        for s in iter_bits(A):
            if s == 0:
                out |= arr
            else:
                out |= ((arr << np.uint64(s)) | (arr >> np.uint64(n - s))) & full
        return out
    return np.array([ground.product(int(P), A) for P in masks], dtype=object)
