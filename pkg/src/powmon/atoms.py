"""Irreducibility in the reduced and restricted power monoids.

The decomposition test never loops over pairs (Y, Z).  For a candidate left
factor Y it builds the largest admissible right factor

    Z* = {z : Y z subset of X}

and X splits with left factor Y iff ``Y Z* == X`` and Z* is not a unit: any
valid Z lies inside Z*, and enlarging Z cannot push the product outside X.
Z* only shrinks as Y grows, so a subtree dies as soon as Z* degenerates.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator

from .ground import CYCLIC, NATURAL, TABLE, GroundMonoid, cyclic, iter_bits
from .powset import SubsetElem, format_mask, parse_subset

__all__ = [
    "AtomTable",
    "AtomVerdict",
    "CensusBoundError",
    "DEFAULT_CENSUS_BOUND",
    "RESTRICTED_TABLE_BOUND",
    "SCHEMA_VERSION",
    "Variant",
    "atom_census",
    "atom_flag",
    "atoms_within",
    "cache_path",
    "cached_census",
    "is_atom",
    "is_member",
    "is_unit",
    "named_construction",
    "split",
]

SCHEMA_VERSION = 1
DEFAULT_CENSUS_BOUND = 18
# unit bookkeeping without a group structure is only affordable on small tables
RESTRICTED_TABLE_BOUND = 12
CACHE_ENV = "POWMON_CACHE_DIR"


class Variant(str, Enum):
    REDUCED = "reduced"
    RESTRICTED = "restricted"

    def __str__(self) -> str:
        return self.value


class CensusBoundError(ValueError):
    """The requested ground is larger than the configured search bound."""


def _variant(v: Variant | str) -> Variant:
    return v if isinstance(v, Variant) else Variant(v)


def is_unit(g: GroundMonoid, mask: int, variant: Variant | str) -> bool:
    if _variant(variant) is Variant.REDUCED or g.kind == NATURAL:
        return mask == 1
    return mask.bit_count() == 1 and bool(mask & g.unit_mask)


def is_member(g: GroundMonoid, mask: int, variant: Variant | str) -> bool:
    if mask <= 0 or mask >> g.size:
        return False
    if _variant(variant) is Variant.REDUCED or g.kind == NATURAL:
        return bool(mask & 1)
    return bool(mask & g.unit_mask)


# splitting -------------------------------------------------------------------


def _reduced_split(g: GroundMonoid, X: int) -> tuple[int, int] | None:
    rest = list(iter_bits(X & ~1))
    pres = [g.left_preimage(y, X) for y in rest]
    m = len(rest)
    stack = [(0, 1, X)]
    while stack:
        start, Y, Z = stack.pop()
        for i in range(m - 1, start - 1, -1):
            Zi = Z & pres[i]
            if Zi == 1:
                continue
            stack.append((i + 1, Y | 1 << rest[i], Zi))
        if Y != 1 and g.product(Y, Z) == X:
            return Y, Z
    return None


def _restricted_split_exhaustive(g: GroundMonoid, X: int) -> tuple[int, int] | None:
    units = g.unit_mask
    for w in g.units():
        # a unit w of the right factor pins the left factor inside X w^-1
        pool = list(iter_bits(g.right_image(X, g.inverse(w))))
        pres = [g.left_preimage(y, X) for y in pool]
        m = len(pool)
        stack = [(0, 0, g.full_mask)]
        while stack:
            start, Y, Z = stack.pop()
            for i in range(m - 1, start - 1, -1):
                Zi = Z & pres[i]
                if Zi.bit_count() < 2:
                    continue
                stack.append((i + 1, Y | 1 << pool[i], Zi))
            if Y & units and Y.bit_count() >= 2 and g.product(Y, Z) == X:
                return Y, Z
    return None


def _restricted_split_translate(g: GroundMonoid, X: int) -> tuple[int, int] | None:
    u = (X & g.unit_mask & -(X & g.unit_mask)).bit_length() - 1
    found = _reduced_split(g, g.left_image(g.inverse(u), X))
    if found is None:
        return None
    Y, Z = found
    return g.left_image(u, Y), Z


def split(g: GroundMonoid, X: int, variant: Variant | str = Variant.REDUCED,
          method: str = "auto") -> tuple[int, int] | None:
    """A factorisation ``X = Y Z`` into two non-units of the variant, or None.

    ``method`` only matters for the restricted variant: ``"translate"`` moves a
    unit of X onto the identity and runs the reduced test (valid for groups),
    ``"exhaustive"`` searches restricted pairs directly.
    """
    variant = _variant(variant)
    if variant is Variant.REDUCED or g.kind == NATURAL:
        return _reduced_split(g, X)
    if method == "auto":
        method = "translate" if g.is_group else "exhaustive"
    if method == "translate":
        if not g.is_group:
            raise ValueError("unit translation is only used over groups")
        return _restricted_split_translate(g, X)
    if method == "exhaustive":
        if g.kind == TABLE and not g.is_group and g.size > RESTRICTED_TABLE_BOUND:
            raise CensusBoundError(
                f"restricted check over a non-group table needs size <= {RESTRICTED_TABLE_BOUND}"
            )
        return _restricted_split_exhaustive(g, X)
    raise ValueError(f"unknown method {method!r}")


_FLAGS: dict[tuple, dict[int, bool]] = {}


def atom_flag(g: GroundMonoid, X: int, variant: Variant | str = Variant.REDUCED) -> bool:
    """Memoised atom test on a raw bit-set (caller guarantees membership)."""
    variant = _variant(variant)
    cache = _FLAGS.setdefault((g.key, variant), {})
    flag = cache.get(X)
    if flag is None:
        flag = not is_unit(g, X, variant) and split(g, X, variant) is None
        cache[X] = flag
    return flag


@dataclass(frozen=True)
class AtomVerdict:
    is_atom: bool
    witness: tuple[SubsetElem, SubsetElem] | None = None
    unit: bool = False

    def __bool__(self) -> bool:
        return self.is_atom


def is_atom(X: SubsetElem, variant: Variant | str = Variant.REDUCED, method: str = "auto") -> AtomVerdict:
    """Decide irreducibility of X; a negative verdict on a non-unit carries
    a pair (Y, Z) of non-units with ``Y * Z == X``."""
    g = X.ground
    if not is_member(g, X.mask, variant):
        raise ValueError(f"{X} is not an element of the {_variant(variant).value} power monoid")
    if is_unit(g, X.mask, variant):
        return AtomVerdict(False, None, unit=True)
    found = split(g, X.mask, variant, method)
    if found is None:
        return AtomVerdict(True)
    return AtomVerdict(False, (SubsetElem(g, found[0]), SubsetElem(g, found[1])))


def submasks(mask: int) -> Iterator[int]:
    """All non-empty submasks of ``mask``."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def atoms_within(g: GroundMonoid, X: int, variant: Variant | str = Variant.REDUCED) -> list[int]:
    """Reduced atoms contained in X, in canonical (cardinality, bit-pattern) order."""
    out = [s for s in submasks(X) if s & 1 and s != 1 and atom_flag(g, s, variant)]
    out.sort(key=lambda s: (s.bit_count(), s))
    return out


# census ------------------------------------------------------------------------


def _census_bound(g: GroundMonoid, variant: Variant) -> int:
    if variant is Variant.RESTRICTED and g.kind == TABLE and not g.is_group:
        return RESTRICTED_TABLE_BOUND
    return DEFAULT_CENSUS_BOUND


def _candidates(g: GroundMonoid, variant: Variant, lo: int, hi: int) -> Iterator[int]:
    for X in range(lo, hi):
        if is_member(g, X, variant) and not is_unit(g, X, variant):
            yield X


def _census_chunk(args: tuple) -> list[int]:
    g, variant, lo, hi = args
    return [X for X in _candidates(g, variant, lo, hi) if split(g, X, variant) is None]


@dataclass(frozen=True)
class AtomTable:
    """All atoms of one power monoid, sorted by (cardinality, bit-pattern)."""

    ground: GroundMonoid
    variant: Variant
    atoms: tuple[int, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[SubsetElem]:
        return (SubsetElem(self.ground, a) for a in self.atoms)

    def __contains__(self, X: object) -> bool:
        if isinstance(X, SubsetElem):
            return X.ground == self.ground and X.mask in set(self.atoms)
        return False

    @property
    def sets(self) -> list[SubsetElem]:
        return list(self)

    def to_json(self) -> dict:
        ground = {"kind": self.ground.kind, "n": self.ground.n}
        if self.ground.kind == TABLE:
            ground["digest"] = self.ground.digest
        return {
            "schema_version": SCHEMA_VERSION,
            "ground": ground,
            "variant": self.variant.value,
            "atoms": [format_mask(a) for a in self.atoms],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    @classmethod
    def from_json(cls, doc: dict, ground: GroundMonoid | None = None) -> "AtomTable":
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
        gdoc = doc["ground"]
        if ground is None:
            if gdoc["kind"] == CYCLIC:
                ground = cyclic(gdoc["n"])
            elif gdoc["kind"] == NATURAL:
                from .ground import natural_segment

                ground = natural_segment(gdoc["n"])
            else:
                raise ValueError("table grounds must be supplied explicitly")
        if gdoc["kind"] != ground.kind or gdoc["n"] != ground.n or gdoc.get("digest") != ground.digest:
            raise ValueError(f"document describes {gdoc}, not {ground.name}")
        atoms = tuple(parse_subset(s, ground).mask for s in doc["atoms"])
        return cls(ground, Variant(doc["variant"]), atoms)


def atom_census(g: GroundMonoid, variant: Variant | str = Variant.REDUCED, bound: int | None = None,
                workers: int = 1) -> AtomTable:
    """Every atom of the chosen power monoid of a finite (or truncated) ground.

    Work is split into contiguous bit-pattern ranges; the merged result is
    sorted, so it does not depend on ``workers``.
    """
    variant = _variant(variant)
    limit = _census_bound(g, variant) if bound is None else bound
    if g.size > limit:
        raise CensusBoundError(
            f"{g.name} has {g.size} elements; the census bound is {limit} "
            f"(raise it to at least {g.size})"
        )
    total = 1 << g.size
    chunks = max(1, min(64, total // 256)) if workers > 1 else 1
    step = -(-total // chunks)
    jobs = [(g, variant, lo, min(total, lo + step)) for lo in range(1, total, step)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_census_chunk, jobs))
    else:
        parts = [_census_chunk(job) for job in jobs]
    found = sorted((a for part in parts for a in part), key=lambda a: (a.bit_count(), a))
    cache = _FLAGS.setdefault((g.key, variant), {})
    atoms = set(found)
    for X in _candidates(g, variant, 1, total):
        cache[X] = X in atoms
    return AtomTable(g, variant, tuple(found))


def default_cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "powmon")


def cache_path(g: GroundMonoid, variant: Variant | str, cache_dir: str | Path | None = None) -> Path:
    base = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    tag = f"{g.kind}-{g.n}" + (f"-{g.digest}" if g.kind == TABLE else "")
    return base / f"atoms-{tag}-{_variant(variant).value}.json"


def cached_census(g: GroundMonoid, variant: Variant | str = Variant.REDUCED, cache_dir: str | Path | None = None,
                  bound: int | None = None, workers: int = 1, refresh: bool = False) -> AtomTable:
    """Census backed by a JSON file; unreadable or incompatible files are recomputed."""
    path = cache_path(g, variant, cache_dir)
    if path.exists() and not refresh:
        try:
            return AtomTable.from_json(json.loads(path.read_text()), g)
        except (ValueError, KeyError, json.JSONDecodeError):
            pass
    table = atom_census(g, variant, bound=bound, workers=workers)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(table.dumps())
    tmp.replace(path)
    return table


# named families ----------------------------------------------------------------------


def named_construction(name: str, param: int, n: int) -> SubsetElem:
    """The sets B_h, C_l and X_k of Z/nZ.

    B_h = {0, 1, 3, ..., h} and C_l (C_1 = {0,2}, C_3 = {0,2,3,4},
    C_l = B_l + {l+1} otherwise) need odd n >= 5 and odd 1 <= param <= (n-1)/2;
    X_k = {0, ..., k} needs 2 <= k <= n-1.
    """
    name = name.upper()
    g = cyclic(n)
    if name in ("B", "C"):
        if n < 5 or n % 2 == 0:
            raise ValueError(f"{name}_h needs an odd modulus >= 5, got {n}")
        if param % 2 == 0 or not 1 <= param <= (n - 1) // 2:
            raise ValueError(f"{name}_h needs odd h in [1, {(n - 1) // 2}], got {param}")
        if name == "B":
            return SubsetElem.of(g, [0, *range(1, param + 1, 2)])
        if param == 1:
            return SubsetElem.of(g, [0, 2])
        if param == 3:
            return SubsetElem.of(g, [0, 2, 3, 4])
        return SubsetElem.of(g, [0, *range(1, param + 1, 2), param + 1])
    if name == "X":
        if not 2 <= param <= n - 1:
            raise ValueError(f"X_k needs 2 <= k <= {n - 1}, got {param}")
        return SubsetElem.of(g, range(param + 1))
    raise ValueError(f"unknown construction {name!r}; expected B, C or X")
