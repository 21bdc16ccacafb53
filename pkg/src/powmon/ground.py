"""Ground monoids: Z/nZ, truncated (N, +) and finite monoids given by a Cayley table.

Elements are dense indices ``0 .. size-1`` and index 0 is always the identity.
Subsets of the ground are plain Python ints used as bit-sets (bit ``i`` set
means element ``i`` is a member); every set-level primitive the upper layers
need (translations, preimages, setwise products) lives here so that the
search code never touches the multiplication table directly.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

__all__ = [
    "CYCLIC",
    "NATURAL",
    "TABLE",
    "TABLE_SIZE_LIMIT",
    "CapacityError",
    "ElementClassification",
    "GroundError",
    "GroundMonoid",
    "atomicity_criterion",
    "classify",
    "cyclic",
    "direct_product",
    "is_dedekind_finite",
    "iter_bits",
    "load_table",
    "make_ground",
    "natural_segment",
    "permutation_group",
    "table_ground",
]

CYCLIC = "cyclic"
NATURAL = "natural"
TABLE = "table"

# downstream searches are exponential in the ground size
TABLE_SIZE_LIMIT = 24


class GroundError(ValueError):
    """Invalid ground description (bad table, non-associative, no identity...)."""


class CapacityError(ValueError):
    """A product left the truncated segment of the naturals."""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _chunk_tables(images: Sequence[int], size: int) -> tuple[tuple[int, ...], ...]:
    """Byte-indexed lookup tables for the map ``mask -> OR of images[i] for i in mask``."""
    tables = []
    for start in range(0, size, 8):
        table = [0] * 256
        for byte in range(1, 256):
            low = byte & -byte
            i = start + low.bit_length() - 1
            table[byte] = table[byte ^ low] | (images[i] if i < size else 0)
        tables.append(tuple(table))
    return tuple(tables)


def _apply_chunks(tables: tuple[tuple[int, ...], ...], mask: int) -> int:
    out = 0
    for table in tables:
        if mask == 0:
            break
        out |= table[mask & 255]
        mask >>= 8
    return out


class GroundMonoid:
    """An immutable ground monoid H with identity at index 0.

    Use :func:`cyclic`, :func:`natural_segment`, :func:`table_ground` or
    :func:`make_ground` rather than calling the constructor directly.
    """

    __slots__ = (
        "kind",
        "size",
        "table",
        "name",
        "unit_mask",
        "full_mask",
        "commutative",
        "is_group",
        "_key",
        "_hash",
        "_inverse",
        "_left",
        "_right",
        "_left_pre",
        "_right_pre",
    )

    def __init__(self, kind: str, size: int, table: tuple[tuple[int, ...], ...] | None = None,
                 name: str | None = None) -> None:
        self.kind = kind
        self.size = size
        self.table = table
        self.full_mask = (1 << size) - 1
        if kind == CYCLIC:
            self.name = name or f"Z/{size}"
            self.unit_mask = self.full_mask
            self.commutative = True
            self.is_group = True
            self._inverse = tuple((-i) % size for i in range(size))
            self._key = (CYCLIC, size)
        elif kind == NATURAL:
            self.name = name or f"N<={size - 1}"
            self.unit_mask = 1
            self.commutative = True
            self.is_group = size == 1
            self._inverse = (0,) + (None,) * (size - 1)
            self._key = (NATURAL, size - 1)
        else:
            assert table is not None
            self.name = name or f"Table({size})"
            inverse: list[int | None] = [None] * size
            for u in range(size):
                for v in range(size):
                    if table[u][v] == 0 and table[v][u] == 0:
                        inverse[u] = v
                        break
            self._inverse = tuple(inverse)
            self.unit_mask = sum(1 << u for u in range(size) if inverse[u] is not None)
            self.commutative = all(table[a][b] == table[b][a] for a in range(size) for b in range(a))
            self.is_group = self.unit_mask == self.full_mask
            digest = hashlib.sha1(repr(table).encode()).hexdigest()[:12]
            self._key = (TABLE, size, digest)
        self._hash = hash(self._key)
        self._left = self._right = self._left_pre = self._right_pre = None

    # identity & comparison -------------------------------------------------

    @property
    def key(self) -> tuple:
        return self._key

    @property
    def n(self) -> int:
        """Modulus for Z/n, cap for the natural segment, order for tables."""
        return self.size - 1 if self.kind == NATURAL else self.size

    @property
    def digest(self) -> str | None:
        return self._key[2] if self.kind == TABLE else None

    @property
    def identity(self) -> int:
        return 0

    @property
    def is_finite(self) -> bool:
        return self.kind != NATURAL

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroundMonoid) and other._key == self._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"GroundMonoid({self.name})"

    def __reduce__(self):
        return (GroundMonoid, (self.kind, self.size, self.table, self.name))

    # element level ---------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        if self.kind == CYCLIC:
            return (a + b) % self.size
        if self.kind == NATURAL:
            c = a + b
            if c >= self.size:
                raise CapacityError(f"{a} + {b} exceeds cap {self.size - 1}")
            return c
        return self.table[a][b]

    def is_unit(self, x: int) -> bool:
        return bool(self.unit_mask >> x & 1)

    def inverse(self, u: int) -> int:
        inv = self._inverse[u]
        if inv is None:
            raise ValueError(f"element {u} is not a unit of {self.name}")
        return inv

    def units(self) -> list[int]:
        return list(iter_bits(self.unit_mask))

    def elements(self) -> range:
        return range(self.size)

    # set level -------------------------------------------------------------

    def _rot(self, mask: int, s: int) -> int:
        n = self.size
        s %= n
        if s == 0:
            return mask
        return ((mask << s) | (mask >> (n - s))) & self.full_mask

    def _shift(self, mask: int, s: int) -> int:
        out = mask << s
        if out >> self.size:
            raise CapacityError(
                f"product leaves the segment [0, {self.size - 1}]; enlarge the cap"
            )
        return out

    def _tables(self):
        if self._left is None:
            size, t = self.size, self.table
            self._left = tuple(_chunk_tables([1 << t[y][z] for z in range(size)], size) for y in range(size))
            self._right = tuple(_chunk_tables([1 << t[z][y] for z in range(size)], size) for y in range(size))
            left_pre, right_pre = [], []
            for y in range(size):
                # preimage maps are indexed by target element x
                lp = [0] * size
                rp = [0] * size
                for z in range(size):
                    lp[t[y][z]] |= 1 << z
                    rp[t[z][y]] |= 1 << z
                left_pre.append(_chunk_tables(lp, size))
                right_pre.append(_chunk_tables(rp, size))
            self._left_pre = tuple(left_pre)
            self._right_pre = tuple(right_pre)

    def left_image(self, y: int, mask: int) -> int:
        """The set ``y * mask``."""
        if self.kind == CYCLIC:
            return self._rot(mask, y)
        if self.kind == NATURAL:
            return self._shift(mask, y)
        self._tables()
        return _apply_chunks(self._left[y], mask)

    def right_image(self, mask: int, y: int) -> int:
        """The set ``mask * y``."""
        if self.kind != TABLE:
            return self.left_image(y, mask)
        self._tables()
        return _apply_chunks(self._right[y], mask)

    def left_preimage(self, y: int, mask: int) -> int:
        """``{z : y * z in mask}``."""
        if self.kind == CYCLIC:
            return self._rot(mask, -y)
        if self.kind == NATURAL:
            return mask >> y
        self._tables()
        return _apply_chunks(self._left_pre[y], mask)

    def right_preimage(self, mask: int, y: int) -> int:
        """``{z : z * y in mask}``."""
        if self.kind != TABLE:
            return self.left_preimage(y, mask)
        self._tables()
        return _apply_chunks(self._right_pre[y], mask)

    def product(self, a: int, b: int) -> int:
        """Setwise product of two bit-sets, ``{x*y : x in a, y in b}``."""
        if self.commutative and a.bit_count() > b.bit_count():
            a, b = b, a
        out = 0
        if self.kind == CYCLIC:
            n, full = self.size, self.full_mask
            while a:
                low = a & -a
                s = low.bit_length() - 1
                out |= ((b << s) | (b >> (n - s))) & full if s else b
                a ^= low
            return out
        for x in iter_bits(a):
            out |= self.left_image(x, b)
        return out

    def translate(self, u: int, mask: int, v: int) -> int:
        """The set ``u * mask * v``."""
        return self.right_image(self.left_image(u, mask), v)

    def mask_of(self, elements: Iterable[int]) -> int:
        out = 0
        for x in elements:
            if not 0 <= x < self.size:
                raise ValueError(f"element {x} outside the index range of {self.name}")
            out |= 1 << x
        return out


# constructors ----------------------------------------------------------------


@lru_cache(maxsize=None)
def cyclic(n: int) -> GroundMonoid:
    """The additive group Z/nZ; index i is the residue i."""
    if not isinstance(n, int) or n < 1:
        raise GroundError(f"cyclic modulus must be a positive integer, got {n!r}")
    return GroundMonoid(CYCLIC, n)


@lru_cache(maxsize=None)
def natural_segment(cap: int) -> GroundMonoid:
    """(N, +) truncated at ``cap``: elements 0..cap, sums beyond cap are errors."""
    if not isinstance(cap, int) or cap < 1:
        raise GroundError(f"cap must be a positive integer, got {cap!r}")
    return GroundMonoid(NATURAL, cap + 1)


def table_ground(rows: Sequence[Sequence[int]], name: str | None = None,
                 max_size: int = TABLE_SIZE_LIMIT) -> GroundMonoid:
    """Validate a Cayley table (row i, column j holds i*j) and wrap it.

    Index 0 must be a two-sided identity and the operation must be associative;
    both are checked exhaustively.
    """
    size = len(rows)
    if size == 0:
        raise GroundError("empty table")
    if size > max_size:
        raise GroundError(f"table of size {size} exceeds the configured limit {max_size}")
    table = tuple(tuple(int(v) for v in row) for row in rows)
    for i, row in enumerate(table):
        if len(row) != size:
            raise GroundError(f"row {i} has {len(row)} entries, expected {size}")
        for v in row:
            if not 0 <= v < size:
                raise GroundError(f"entry {v} in row {i} is outside 0..{size - 1}")
    for x in range(size):
        if table[0][x] != x or table[x][0] != x:
            raise GroundError("index 0 is not a two-sided identity")
    for a, b, c in itertools.product(range(size), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise GroundError(f"not associative: ({a}*{b})*{c} != {a}*({b}*{c})")
    return GroundMonoid(TABLE, size, table, name)


def load_table(path: str | Path, name: str | None = None) -> GroundMonoid:
    """Read a table ground from text: first line ``n``, then n rows of n indices."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise GroundError(f"{path}: empty file")
    try:
        size = int(lines[0][0])
        rows = [[int(tok) for tok in ln] for ln in lines[1:]]
    except ValueError as exc:
        raise GroundError(f"{path}: {exc}") from None
    if len(rows) != size:
        raise GroundError(f"{path}: header says {size} rows, found {len(rows)}")
    return table_ground(rows, name=name or Path(path).stem)


def make_ground(kind: str, n: int | None = None, table: Sequence[Sequence[int]] | None = None,
                name: str | None = None) -> GroundMonoid:
    """Build a ground from a description: ``("cyclic", n)``, ``("natural", cap)``
    or ``("table", table=rows)``."""
    kind = kind.lower()
    if kind in (CYCLIC, "z", "zn"):
        return cyclic(n)
    if kind in (NATURAL, "n", "segment"):
        return natural_segment(n)
    if kind == TABLE:
        if table is None:
            raise GroundError("table ground needs a table")
        return table_ground(table, name=name)
    raise GroundError(f"unknown ground kind {kind!r}")


def direct_product(g: GroundMonoid, h: GroundMonoid, name: str | None = None) -> GroundMonoid:
    """Cartesian product of two finite grounds as a table; (a, b) has index a*|h| + b."""
    if not (g.is_finite and h.is_finite):
        raise GroundError("direct products need finite factors")
    m = h.size
    rows = [
        [g.mul(a1, a2) * m + h.mul(b1, b2) for a2 in range(g.size) for b2 in range(m)]
        for a1 in range(g.size)
        for b1 in range(m)
    ]
    return table_ground(rows, name=name or f"{g.name}x{h.name}")


def permutation_group(generators: Sequence[Sequence[int]], name: str | None = None) -> GroundMonoid:
    """The permutation group generated by ``generators`` (images of 0..d-1)."""
    if not generators:
        raise GroundError("need at least one generator")
    d = len(generators[0])
    identity = tuple(range(d))
    elements = [identity]
    index = {identity: 0}
    frontier = [identity]
    gens = [tuple(g) for g in generators]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[i]] for i in range(d))
                if q not in index:
                    index[q] = len(elements)
                    elements.append(q)
                    nxt.append(q)
        frontier = nxt
    # (p*q)(i) = p(q(i)): apply q first
    rows = [[index[tuple(p[q[i]] for i in range(d))] for q in elements] for p in elements]
    return table_ground(rows, name=name)


# classification ------------------------------------------------------------------


@dataclass(frozen=True)
class ElementClassification:
    idempotents: frozenset[int]
    square_roots_of_identity: frozenset[int]
    orders: dict[int, int]


def _require_finite(g: GroundMonoid, what: str) -> None:
    if not g.is_finite:
        raise GroundError(f"{what} is undefined on the truncated naturals")


def classify(g: GroundMonoid) -> ElementClassification:
    """Idempotents, non-identity square roots of 1 and the order |<x>| of each element."""
    _require_finite(g, "classify")
    idem = frozenset(x for x in g.elements() if g.mul(x, x) == x)
    roots = frozenset(x for x in g.elements() if x != 0 and g.mul(x, x) == 0)
    orders = {}
    for x in g.elements():
        seen = set()
        p = x
        while p not in seen:
            seen.add(p)
            p = g.mul(p, x)
        orders[x] = len(seen)
    return ElementClassification(idem, roots, orders)


def atomicity_criterion(g: GroundMonoid) -> bool:
    """True iff x*x is neither 1 nor x for every non-identity x."""
    if not g.is_finite:
        return True
    for x in range(1, g.size):
        xx = g.mul(x, x)
        if xx == 0 or xx == x:
            return False
    return True


def is_dedekind_finite(g: GroundMonoid) -> bool:
    """True iff x*y = 1 forces y*x = 1 (scanned over every pair)."""
    for x in g.elements():
        for y in g.elements():
            try:
                if g.mul(x, y) == 0 and g.mul(y, x) != 0:
                    return False
            except CapacityError:
                continue
    return True
