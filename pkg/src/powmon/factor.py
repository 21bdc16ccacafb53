"""Factorizations into atoms, the minimality preorder, and sets of lengths.

Search facts used throughout (all for words whose product is X):

* in the reduced monoid every atom of a factorization of X is a subset of X,
  and every prefix product is a subset of X;
* a minimal word never has a prefix whose product is unchanged by the next
  atom (that atom could be dropped or absorbed into an associate), so prefix
  products grow strictly and minimal words have length at most |X| - 1;
* over commutative grounds a word is non-minimal iff dropping one atom keeps
  the product (reduced) or keeps its cardinality (restricted, over groups,
  where equal cardinality forces equality up to a unit).
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Iterator, Sequence

from .atoms import Variant, atom_flag, atoms_within, is_member, is_unit
from .ground import CYCLIC, NATURAL, GroundMonoid, iter_bits
from .powset import SubsetElem, format_mask, max_hat, products_many

__all__ = [
    "GENERAL_PATH_BOUND",
    "FactorClass",
    "FactorWord",
    "LengthSet",
    "find_minimal_factorization",
    "is_minimal",
    "is_nr",
    "length_set_truncated",
    "length_sets_truncated",
    "longest_factorization",
    "minimal_factorizations",
    "minimal_length_set",
    "normalize_atom",
    "preceq",
    "precedes",
]

# associate-aware minimality enumerates orderings and unit translates
GENERAL_PATH_BOUND = 12


def _v(variant: Variant | str) -> Variant:
    return variant if isinstance(variant, Variant) else Variant(variant)


def _prod(g: GroundMonoid, masks: Iterable[int]) -> int:
    return reduce(g.product, masks, 1)


# words and classes ----------------------------------------------------------------


@dataclass(frozen=True)
class FactorWord:
    """A sequence of atoms of one power monoid; the empty word has product {1}."""

    ground: GroundMonoid
    masks: tuple[int, ...]
    variant: Variant = Variant.REDUCED
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", _v(self.variant))
        if self.check:
            for m in self.masks:
                if not is_member(self.ground, m, self.variant) or not atom_flag(self.ground, m, self.variant):
                    raise ValueError(f"{format_mask(m)} is not an atom of the {self.variant.value} monoid")

    @classmethod
    def of(cls, atoms: Sequence[SubsetElem], variant: Variant | str = Variant.REDUCED,
           ground: GroundMonoid | None = None) -> "FactorWord":
        if not atoms and ground is None:
            raise ValueError("the empty word needs an explicit ground")
        g = ground or atoms[0].ground
        for a in atoms:
            if a.ground != g:
                raise ValueError(f"mixed grounds: {g.name} and {a.ground.name}")
        return cls(g, tuple(a.mask for a in atoms), _v(variant))

    @property
    def atoms(self) -> tuple[SubsetElem, ...]:
        return tuple(SubsetElem(self.ground, m) for m in self.masks)

    def __len__(self) -> int:
        return len(self.masks)

    @property
    def product_mask(self) -> int:
        return _prod(self.ground, self.masks)

    @property
    def product(self) -> SubsetElem:
        return SubsetElem(self.ground, self.product_mask)

    def __str__(self) -> str:
        return "*".join(format_mask(m) for m in self.masks) if self.masks else "()"


_NORMAL: dict[tuple, dict[int, int]] = {}


def normalize_atom(g: GroundMonoid, mask: int, variant: Variant | str) -> int:
    """Least bit-pattern among the associates ``u A v`` (identity for the reduced variant)."""
    if _v(variant) is Variant.REDUCED or g.unit_mask == 1:
        return mask
    cache = _NORMAL.setdefault(g.key, {})
    out = cache.get(mask)
    if out is None:
        units = g.units()
        if g.commutative:
            out = min(g.left_image(u, mask) for u in units)
        else:
            out = min(g.translate(u, mask, v) for u in units for v in units)
        cache[mask] = out
    return out


def _class_key(g: GroundMonoid, masks: Iterable[int], variant: Variant) -> tuple[int, ...]:
    return tuple(sorted(normalize_atom(g, m, variant) for m in masks))


@dataclass(frozen=True)
class FactorClass:
    """A factorization up to order and associates.

    ``key`` is the sorted tuple of least-associate bit-patterns; ``word`` is one
    representative factorization.  Classes sort lexicographically by key.
    """

    ground: GroundMonoid
    variant: Variant
    key: tuple[int, ...]
    word: FactorWord = field(compare=False)

    def __len__(self) -> int:
        return len(self.key)

    def __lt__(self, other: "FactorClass") -> bool:
        return self.key < other.key

    @property
    def atoms(self) -> tuple[SubsetElem, ...]:
        return tuple(SubsetElem(self.ground, m) for m in self.key)

    @property
    def strings(self) -> list[str]:
        return [format_mask(m) for m in self.word.masks]

    def __str__(self) -> str:
        return str(self.word)


def _make_class(g: GroundMonoid, variant: Variant, masks: Sequence[int]) -> FactorClass:
    word = FactorWord(g, tuple(masks), variant, check=False)
    return FactorClass(g, variant, _class_key(g, masks, variant), word)


@dataclass(frozen=True)
class LengthSet:
    values: frozenset[int]
    truncated_at: int | None = None

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, k: object) -> bool:
        return k in self.values

    @property
    def sorted(self) -> list[int]:
        return sorted(self.values)

    @property
    def truncated(self) -> bool:
        return self.truncated_at is not None

    def to_json(self) -> dict:
        return {"values": self.sorted, "truncated": self.truncated, "truncated_at": self.truncated_at}

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.sorted)) + "}"


# the preorder -------------------------------------------------------------------


def preceq(a: FactorWord, b: FactorWord) -> bool:
    """``a`` precedes ``b``: same product and the atoms of ``a`` inject into
    those of ``b`` up to associates.  The empty word precedes only itself."""
    if a.ground != b.ground or a.variant != b.variant:
        raise ValueError("words over different grounds or monoid variants")
    if not a.masks or not b.masks:
        return not a.masks and not b.masks
    if len(a) > len(b) or a.product_mask != b.product_mask:
        return False
    g, v = a.ground, a.variant
    need = Counter(normalize_atom(g, m, v) for m in a.masks)
    have = Counter(normalize_atom(g, m, v) for m in b.masks)
    return all(have[k] >= c for k, c in need.items())


def precedes(a: FactorWord, b: FactorWord) -> bool:
    """Strict version: ``a`` precedes ``b`` but not conversely."""
    return preceq(a, b) and not preceq(b, a)


# minimality ---------------------------------------------------------------------------


def _associates(g: GroundMonoid, mask: int, variant: Variant) -> set[int]:
    if variant is Variant.REDUCED or g.unit_mask == 1:
        return {mask}
    units = g.units()
    if g.commutative:
        return {g.left_image(u, mask) for u in units}
    return {g.translate(u, mask, v) for u in units for v in units}


def _is_minimal_general(g: GroundMonoid, masks: Sequence[int], variant: Variant, X: int) -> bool:
    """Does any proper sub-multiset, in some order and with any associates, reach X?

    ``reach[T]`` collects every product obtainable from the atoms indexed by T.
    """
    n = len(masks)
    assoc = [_associates(g, m, variant) for m in masks]
    size_x = X.bit_count()
    if variant is Variant.REDUCED:
        keep = lambda P: P & ~X == 0  # noqa: E731
    elif g.is_group:
        keep = lambda P: P.bit_count() <= size_x  # noqa: E731
    else:
        keep = lambda P: True  # noqa: E731
    full = (1 << n) - 1
    reach: dict[int, set[int]] = {0: {1}}
    for T in range(1, full):
        out: set[int] = set()
        for i in iter_bits(T):
            prev = reach.get(T ^ (1 << i))
            if not prev:
                continue
            for P in prev:
                for A in assoc[i]:
                    Q = g.product(P, A)
                    if keep(Q):
                        out.add(Q)
        if X in out:
            return False
        reach[T] = out
    return True


def _drop_one(g: GroundMonoid, masks: Sequence[int]) -> Iterator[int]:
    for i in range(len(masks)):
        yield _prod(g, masks[:i] + masks[i + 1:])


def _minimal_masks(g: GroundMonoid, masks: Sequence[int], variant: Variant, X: int) -> bool:
    if len(masks) <= 2:
        return True
    if g.commutative and (variant is Variant.REDUCED or g.unit_mask == 1):
        return all(P != X for P in _drop_one(g, masks))
    if g.commutative and g.is_group:
        size = X.bit_count()
        return all(P.bit_count() < size for P in _drop_one(g, masks))
    if g.size > GENERAL_PATH_BOUND:
        raise ValueError(
            f"associate-aware minimality is limited to grounds of size <= {GENERAL_PATH_BOUND}"
        )
    return _is_minimal_general(g, masks, variant, X)


def is_minimal(a: FactorWord) -> bool:
    """Whether no word strictly precedes ``a`` (words of length <= 2 always are)."""
    return _minimal_masks(a.ground, a.masks, a.variant, a.product_mask)


def is_nr(a: FactorWord) -> bool:
    """Lifted maxima of the atoms add up to the lifted maximum of the product."""
    if a.ground.kind != CYCLIC:
        raise ValueError("NR-factorizations are defined over Z/nZ only")
    if not a.masks:
        raise ValueError("the empty word has no NR property")
    return sum(max_hat(m) for m in a.masks) == max_hat(a.product_mask)


# search ---------------------------------------------------------------------------------


class _Search:
    """Depth-first search for factorizations of X with strictly growing prefixes.

    Modes: ``subset`` (reduced variant, any ground: prefixes stay inside X and
    words are multisets when the ground is commutative, sequences otherwise)
    and ``translate`` (restricted variant over a commutative group: atoms and
    prefixes are normalised so they contain 0, and a prefix only has to fit
    inside some translate of X).
    """

    def __init__(self, g: GroundMonoid, X: int, variant: Variant) -> None:
        self.g = g
        self.X = X
        self.variant = variant
        self.size = X.bit_count()
        self.natural = g.kind == NATURAL
        self.top = X.bit_length() - 1
        if variant is Variant.REDUCED or g.unit_mask == 1:
            self.mode = "subset"
            self.atoms = atoms_within(g, X, Variant.REDUCED)
        elif g.commutative and g.is_group:
            self.mode = "translate"
            found = set()
            for x in iter_bits(X):
                shifted = g.left_image(g.inverse(x), X)
                for A in atoms_within(g, shifted, Variant.REDUCED):
                    found.add(normalize_atom(g, A, variant))
            self.atoms = sorted(found, key=lambda a: (a.bit_count(), a))
        else:
            raise ValueError("restricted search over non-commutative grounds uses the general path")
        self.ordered = not g.commutative
        self.dead: set[tuple] = set()

    def step(self, P: int, A: int) -> int | None:
        """``P A`` if it can still extend to X with strict growth, else None."""
        g = self.g
        if self.mode == "subset":
            if self.natural and (P.bit_length() + A.bit_length() - 2) > self.top:
                return None
            Q = g.product(P, A)
            if Q & ~self.X or Q == P:
                return None
            return Q
        Q = g.product(P, A)
        if Q.bit_count() <= P.bit_count() or not self.fits(Q):
            return None
        return Q

    def fits(self, Q: int) -> bool:
        # some t with t + Q inside X
        t = self.g.full_mask
        for q in iter_bits(Q):
            t &= self.g.left_preimage(q, self.X)
            if not t:
                return False
        return True

    def is_target(self, Q: int) -> bool:
        return Q.bit_count() == self.size  # every surviving prefix fits

    def minimal(self, word: Sequence[int]) -> bool:
        if self.mode == "subset" and not self.ordered:
            return _minimal_masks(self.g, word, Variant.REDUCED, self.X)
        if self.mode == "translate":
            if len(word) <= 2:
                return True
            return all(P.bit_count() < self.size for P in _drop_one(self.g, word))
        return _minimal_masks(self.g, word, self.variant, self.X)

    def _next(self, i: int) -> int:
        return 0 if self.ordered else i

    def enumerate(self, first: int | None = None) -> list[tuple[int, ...]]:
        """All minimal words (multisets in canonical order when commutative)."""
        out: list[tuple[int, ...]] = []
        word: list[int] = []
        atoms = self.atoms
        m = len(atoms)

        def dfs(P: int, j: int) -> bool:
            key = (P, j)
            if key in self.dead:
                return False
            reached = False
            for i in range(j, m):
                Q = self.step(P, atoms[i])
                if Q is None:
                    continue
                word.append(atoms[i])
                if self.is_target(Q):
                    reached = True
                    if self.minimal(word):
                        out.append(tuple(word))
                elif dfs(Q, self._next(i)):
                    reached = True
                word.pop()
            if not reached:
                self.dead.add(key)
            return reached

        if first is None:
            dfs(1, 0)
        else:
            A = atoms[first]
            Q = self.step(1, A)
            if Q is not None:
                word.append(A)
                if self.is_target(Q):
                    out.append((A,))
                else:
                    dfs(Q, self._next(first))
        return out

    def exists(self, length: int) -> tuple[int, ...] | None:
        """Some minimal word of exactly ``length`` atoms, or None."""
        word: list[int] = []
        atoms = self.atoms
        m = len(atoms)
        dead: set[tuple] = set()

        def dfs(P: int, j: int, r: int) -> tuple[bool, bool]:
            key = (P, j, r)
            if key in dead:
                return False, False
            reached = False
            for i in range(j, m):
                Q = self.step(P, atoms[i])
                if Q is None or self.size - Q.bit_count() < r - 1:
                    continue
                word.append(atoms[i])
                if r == 1:
                    if self.is_target(Q):
                        reached = True
                        if self.minimal(word):
                            return True, True
                elif not self.is_target(Q):
                    found, rch = dfs(Q, self._next(i), r - 1)
                    if found:
                        return True, True
                    reached = reached or rch
                word.pop()
            if not reached:
                dead.add(key)
            return False, reached

        found, _ = dfs(1, 0, length)
        return tuple(word) if found else None

    def enumerate_all_ordered(self) -> list[tuple[int, ...]]:
        """Ordered words with strictly growing prefixes, minimality unchecked."""
        out: list[tuple[int, ...]] = []
        word: list[int] = []

        def dfs(P: int) -> None:
            for A in self.atoms:
                Q = self.step(P, A)
                if Q is None:
                    continue
                word.append(A)
                if Q == self.X:
                    out.append(tuple(word))
                else:
                    dfs(Q)
                word.pop()

        dfs(1)
        return out

    def realise(self, word: Sequence[int]) -> tuple[int, ...]:
        """An actual factorization of X from a normalised word."""
        if self.mode != "translate":
            return tuple(word)
        P = _prod(self.g, word)
        for t in iter_bits(self.g.unit_mask):
            if self.g.left_image(t, P) == self.X:
                return (self.g.left_image(t, word[0]),) + tuple(word[1:])
        raise AssertionError("normalised word does not reach a translate of X")


def _enumerate_job(args: tuple) -> list[tuple[int, ...]]:
    g, X, variant, first = args
    return _Search(g, X, variant).enumerate(first)


def _check_input(X: SubsetElem, variant: Variant) -> None:
    if not is_member(X.ground, X.mask, variant):
        raise ValueError(f"{X} is not an element of the {variant.value} power monoid")


def _general_restricted_words(g: GroundMonoid, X: int) -> list[tuple[int, ...]]:
    """Restricted factorizations over a (possibly non-commutative) group.

    Every restricted word of X can be rewritten, atom by atom up to
    associates, as a reduced word of ``X w^-1`` followed by the unit w, w in X.
    """
    words = []
    for w in iter_bits(X & g.unit_mask):
        Q = g.right_image(X, g.inverse(w))
        for red in _Search(g, Q, Variant.REDUCED).enumerate_all_ordered():
            masks = red[:-1] + (g.right_image(red[-1], w),)
            if _minimal_masks(g, masks, Variant.RESTRICTED, X):
                words.append(masks)
    return words


def minimal_factorizations(X: SubsetElem, variant: Variant | str = Variant.REDUCED,
                           workers: int = 1) -> list[FactorClass]:
    """Every minimal factorization class of X, sorted by canonical key.

    A unit yields exactly the class of the empty word.
    """
    variant = _v(variant)
    g = X.ground
    _check_input(X, variant)
    if is_unit(g, X.mask, variant):
        return [_make_class(g, variant, ())]
    if variant is Variant.RESTRICTED and g.unit_mask != 1 and not (g.commutative and g.is_group):
        if not g.is_group:
            raise ValueError("restricted factorizations are supported over groups and the naturals")
        if g.size > GENERAL_PATH_BOUND:
            raise ValueError(f"non-commutative search is limited to grounds of size <= {GENERAL_PATH_BOUND}")
        words = _general_restricted_words(g, X.mask)
    else:
        search = _Search(g, X.mask, variant)
        if search.ordered and g.size > GENERAL_PATH_BOUND:
            raise ValueError(f"non-commutative search is limited to grounds of size <= {GENERAL_PATH_BOUND}")
        if workers > 1 and len(search.atoms) > 1:
            jobs = [(g, X.mask, variant, i) for i in range(len(search.atoms))]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                words = [w for part in pool.map(_enumerate_job, jobs) for w in part]
        else:
            words = search.enumerate()
        words = [search.realise(w) for w in words]
    classes: dict[tuple[int, ...], FactorClass] = {}
    for w in words:
        c = _make_class(g, variant, w)
        classes.setdefault(c.key, c)
    return sorted(classes.values())


def _exists_job(args: tuple) -> tuple[int, tuple[int, ...] | None]:
    g, X, variant, length = args
    search = _Search(g, X, variant)
    found = search.exists(length)
    return length, (search.realise(found) if found else None)


def find_minimal_factorization(X: SubsetElem, length: int,
                               variant: Variant | str = Variant.REDUCED) -> FactorWord | None:
    """A minimal factorization of X with exactly ``length`` atoms, if one exists."""
    variant = _v(variant)
    g = X.ground
    _check_input(X, variant)
    if is_unit(g, X.mask, variant):
        return FactorWord(g, (), variant, check=False) if length == 0 else None
    if length < 1:
        return None
    if _uses_general_path(g, variant):
        for c in minimal_factorizations(X, variant):
            if len(c) == length:
                return c.word
        return None
    _, found = _exists_job((g, X.mask, variant, length))
    return FactorWord(g, found, variant, check=False) if found else None


def _uses_general_path(g: GroundMonoid, variant: Variant) -> bool:
    if not g.commutative:
        return True
    return variant is Variant.RESTRICTED and g.unit_mask != 1 and not g.is_group


def minimal_length_set(X: SubsetElem, variant: Variant | str = Variant.REDUCED,
                       workers: int = 1) -> LengthSet:
    """Lengths of the minimal factorizations of X, each in [1, |X|-1] for non-units."""
    variant = _v(variant)
    g = X.ground
    _check_input(X, variant)
    if is_unit(g, X.mask, variant):
        return LengthSet(frozenset({0}))
    if _uses_general_path(g, variant):
        return LengthSet(frozenset(len(c) for c in minimal_factorizations(X, variant)))
    if atom_flag(g, X.mask, variant):
        return LengthSet(frozenset({1}))
    jobs = [(g, X.mask, variant, L) for L in range(2, len(X))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_exists_job, jobs))
    else:
        results = [_exists_job(job) for job in jobs]
    return LengthSet(frozenset(L for L, w in results if w is not None))


# all factorizations (bounded) ------------------------------------------------------------


def _reduced_hits(g: GroundMonoid, X: int, atoms: Sequence[int], lmax: int) -> list[int]:
    """Lengths r <= lmax such that some product of r atoms equals X.

    Level r holds the products of r atoms that stay inside X.  Levels are a
    deterministic function of the previous one, so a repeated level repeats
    forever and the sweep can stop early.
    """
    hits: list[int] = []
    if not atoms:
        return hits
    if g.kind == CYCLIC and g.size <= 63:
        import numpy as np

        outside = np.uint64(g.full_mask & ~X)
        level = np.array([1], dtype=np.uint64)
        for r in range(1, lmax + 1):
            nxt = np.unique(np.concatenate([products_many(g, level, A) for A in atoms]))
            nxt = nxt[(nxt & outside) == 0]
            if nxt.size == 0:
                break
            if np.array_equal(nxt, level):
                if hits and hits[-1] == r - 1:
                    hits.extend(range(r, lmax + 1))
                break
            level = nxt
            if np.any(level == np.uint64(X)):
                hits.append(r)
        return hits
    top = X.bit_length() - 1
    natural = g.kind == NATURAL
    level = {1}
    for r in range(1, lmax + 1):
        nxt = set()
        for P in level:
            for A in atoms:
                if natural and P.bit_length() + A.bit_length() - 2 > top:
                    continue
                Q = g.product(P, A)
                if Q & ~X == 0:
                    nxt.add(Q)
        if not nxt:
            break
        if nxt == level:
            if hits and hits[-1] == r - 1:
                hits.extend(range(r, lmax + 1))
            break
        level = nxt
        if X in level:
            hits.append(r)
    return hits


def length_set_truncated(X: SubsetElem, variant: Variant | str = Variant.REDUCED,
                         lmax: int = 10) -> LengthSet:
    """``L(X)`` intersected with [0, lmax], by a level-by-level product sweep."""
    variant = _v(variant)
    if lmax < 1:
        raise ValueError("lmax must be positive")
    g = X.ground
    _check_input(X, variant)
    if is_unit(g, X.mask, variant):
        return LengthSet(frozenset({0}), lmax)
    if variant is Variant.RESTRICTED and g.unit_mask != 1:
        if not g.is_group:
            raise ValueError("restricted length sets are supported over groups and the naturals")
        # a restricted word of X is a reduced word of X w^-1 times the unit w in X
        values = set()
        for w in iter_bits(X.mask & g.unit_mask):
            shifted = SubsetElem(g, g.right_image(X.mask, g.inverse(w)))
            values |= length_set_truncated(shifted, Variant.REDUCED, lmax).values
        return LengthSet(frozenset(values), lmax)
    atoms = atoms_within(g, X.mask, Variant.REDUCED)
    return LengthSet(frozenset(_reduced_hits(g, X.mask, atoms, lmax)), lmax)


def length_sets_truncated(g: GroundMonoid, atoms: Sequence[int], lmax: int,
                          keep=None) -> dict[int, set[int]]:
    """``{X: L(X) within [1, lmax]}`` for every product of the given atoms at once.

    ``keep`` optionally filters intermediate products (e.g. a cardinality cap).
    """
    out: dict[int, set[int]] = {}
    level = {1}
    for r in range(1, lmax + 1):
        level = {g.product(P, A) for P in level for A in atoms}
        if keep is not None:
            level = {P for P in level if keep(P)}
        for P in level:
            out.setdefault(P, set()).add(r)
    return out


def longest_factorization(X: SubsetElem) -> int:
    """Largest factorization length of X over the naturals (finite there)."""
    g = X.ground
    if g.kind != NATURAL:
        raise ValueError("longest_factorization is meant for the torsion-free naturals")
    if X.mask == 1:
        return 0
    atoms = atoms_within(g, X.mask, Variant.REDUCED)
    # every atom other than {0} raises the maximum, so lengths are at most max X
    hits = _reduced_hits(g, X.mask, atoms, max_hat(X.mask))
    return hits[-1] if hits else 0
