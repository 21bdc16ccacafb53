"""Brute-force re-derivation of the structural facts about power monoids.

Every check returns a :class:`VerifyReport`.  A failing report always lists
witnesses that can be replayed through the public operations; ``details``
holds the evidence behind a pass (e.g. the non-factorable set on the
non-atomic side of an equivalence).
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .atoms import (
    DEFAULT_CENSUS_BOUND,
    CensusBoundError,
    Variant,
    atom_census,
    atom_flag,
    atoms_within,
    named_construction,
    split,
)
from .factor import (
    FactorWord,
    is_minimal,
    is_nr,
    length_set_truncated,
    length_sets_truncated,
    longest_factorization,
    minimal_factorizations,
    minimal_length_set,
    normalize_atom,
)
from .ground import (
    CYCLIC,
    GroundMonoid,
    atomicity_criterion,
    cyclic,
    direct_product,
    natural_segment,
    permutation_group,
)
from .powset import SubsetElem, format_mask, max_hat, power, products_many

__all__ = [
    "DEFAULT_GRID",
    "SUITES",
    "VerifyReport",
    "case_split_pair",
    "check_atomicity_characterization",
    "check_bf_bound_naturals",
    "check_hmf_classification",
    "check_interval_realization",
    "check_minimal_bound",
    "check_restricted_reduced_bridge",
    "check_unbounded_lengths",
    "explore_noncommutative",
    "format_summary",
    "run_suite",
]

DEFAULT_GRID = (3, 4, 5, 7, 9, 11, 13)
INTERVAL_BOUND = 13
BRIDGE_BOUND = 9

PASS, FAIL, INFO = "pass", "fail", "info"


@dataclass
class VerifyReport:
    check_id: str
    params: dict
    verdict: str
    witnesses: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def to_json(self) -> dict:
        return asdict(self)


def _finish(report: VerifyReport, start: float) -> VerifyReport:
    report.elapsed = round(time.perf_counter() - start, 4)
    if report.verdict == FAIL and not report.witnesses:
        raise AssertionError(f"{report.check_id}: failing report without witnesses")
    return report


def _s(g: GroundMonoid, mask: int) -> str:
    return format_mask(mask)


# factorability closure ----------------------------------------------------------------


def factorable_closure(g: GroundMonoid, atoms: Sequence[int]) -> set[int]:
    """All products of one or more of the given atoms (reduced, so closed inside P_1)."""
    seen = set(atoms)
    frontier = list(atoms)
    while frontier:
        arr = np.array(frontier, dtype=np.uint64 if g.kind == CYCLIC else object)
        new: set[int] = set()
        for A in atoms:
            for Q in products_many(g, arr, A).tolist():
                Q = int(Q)
                if Q not in seen:
                    new.add(Q)
        seen |= new
        frontier = sorted(new)
    return seen


def check_atomicity_characterization(g: GroundMonoid, bound: int = DEFAULT_CENSUS_BOUND) -> VerifyReport:
    """Every non-unit of the reduced monoid factors into atoms iff x*x is
    neither 1 nor x for all non-identity x."""
    start = time.perf_counter()
    if g.size > bound:
        raise CensusBoundError(f"{g.name} exceeds the census bound {bound}")
    criterion = atomicity_criterion(g)
    atoms = list(atom_census(g, Variant.REDUCED, bound=bound).atoms)
    reach = factorable_closure(g, atoms)
    stuck = [X for X in range(3, g.full_mask + 1, 2) if X not in reach]
    atomic = not stuck
    report = VerifyReport("atomicity", {"ground": g.name}, PASS,
                          details={"criterion": criterion, "atomic": atomic, "atoms": len(atoms)})
    if atomic != criterion:
        report.verdict = FAIL
        if stuck:
            report.witnesses.append(f"{_s(g, stuck[0])} has no factorization although the criterion holds")
        else:
            report.witnesses.append("every element factors although the criterion fails")
        return _finish(report, start)
    if not atomic:
        # the offending element x yields a two-element set that never factors
        bad = [x for x in range(1, g.size) if g.mul(x, x) in (0, x)]
        two_sets = [1 | 1 << x for x in bad]
        unfactorable = [m for m in two_sets if m not in reach]
        report.details["witness"] = [_s(g, m) for m in unfactorable]
        report.details["unfactorable"] = len(stuck)
        if not unfactorable:
            report.verdict = FAIL
            report.witnesses.append(
                f"two-element sets {[_s(g, m) for m in two_sets]} all factor, contrary to expectation"
            )
    return _finish(report, start)


# minimal-length bound --------------------------------------------------------------------


def _violating_words(g: GroundMonoid, atoms: Sequence[int], size_limit: int) -> Iterable[tuple[int, ...]]:
    """Minimal multisets of atoms whose product has at most as many elements
    as the word has atoms.

    Minimality is tested from the definition (no proper sub-multiset has the
    same product).  Sub-multisets of a minimal word are minimal, so only
    minimal words are extended; an empty result proves the bound everywhere.
    """
    m = len(atoms)

    def minimal(word: tuple[int, ...], X: int) -> bool:
        for r in range(1, len(word)):
            for idx in itertools.combinations(range(len(word)), r):
                P = 1
                for i in idx:
                    P = g.product(P, word[i])
                if P == X:
                    return False
        return True

    def dfs(P: int, j: int, word: list[int]):
        for i in range(j, m):
            Q = g.product(P, atoms[i])
            word.append(atoms[i])
            w = tuple(word)
            if minimal(w, Q):
                if Q.bit_count() <= len(w):
                    yield w
                elif len(w) < size_limit:
                    yield from dfs(Q, i, word)
            word.pop()

    yield from dfs(1, 0, [])


def check_minimal_bound(g: GroundMonoid, bound: int = DEFAULT_CENSUS_BOUND) -> VerifyReport:
    """Minimal factorizations of X have length at most |X| - 1 (reduced, commutative)."""
    start = time.perf_counter()
    if g.size > bound:
        raise CensusBoundError(f"{g.name} exceeds the census bound {bound}")
    if not g.commutative:
        raise ValueError("the sub-multiset sweep assumes a commutative ground")
    report = VerifyReport("minimal_bound", {"ground": g.name}, PASS)
    worst = (0, None)
    checked = 0
    for X in range(3, g.full_mask + 1, 2):
        ls = minimal_length_set(SubsetElem(g, X))
        checked += 1
        if ls.values:
            top = max(ls.values)
            if top > X.bit_count() - 1:
                report.verdict = FAIL
                report.witnesses.append(f"{_s(g, X)} has a minimal factorization of length {top}")
            if top > worst[0]:
                worst = (top, X)
    # independent sweep that does not rely on the length cap of the search
    atoms = list(atom_census(g, Variant.REDUCED, bound=bound).atoms)
    for word in _violating_words(g, atoms, g.size):
        report.verdict = FAIL
        report.witnesses.append(
            f"minimal word {'*'.join(_s(g, a) for a in word)} of length {len(word)} "
            f"for a product with {len(word)} elements"
        )
        break
    report.details = {"checked": checked, "max_length": worst[0],
                      "attained_at": _s(g, worst[1]) if worst[1] else None}
    return _finish(report, start)


# HmF classification --------------------------------------------------------------------------


def _is_c3(g: GroundMonoid) -> bool:
    return g.size == 3 and g.is_group


def check_hmf_classification(g: GroundMonoid, bound: int = DEFAULT_CENSUS_BOUND) -> VerifyReport:
    """The reduced power monoid is half-minimally-factorial iff the ground is
    trivial or cyclic of order 3, and minimally factorial iff trivial."""
    start = time.perf_counter()
    if g.size > bound:
        raise CensusBoundError(f"{g.name} exceeds the census bound {bound}")
    expect_hmf = g.size == 1 or _is_c3(g)
    report = VerifyReport("hmf", {"ground": g.name}, PASS, details={"expected_hmf": expect_hmf})
    full = g.full_mask
    preferred = [full]
    if g.kind == CYCLIC and g.size >= 5:
        preferred.insert(0, named_construction("X", 4, g.size).mask)
    order = preferred + [X for X in range(3, full + 1, 2) if X not in preferred]
    witness = None
    for X in order:
        if X == 1:
            continue
        ls = minimal_length_set(SubsetElem(g, X))
        # HmF asks for exactly one length; no factorization at all breaks it too
        if len(ls) != 1:
            witness = (X, ls)
            break
    hmf = witness is None
    report.details["hmf"] = hmf
    if witness is not None:
        report.details["witness"] = _s(g, witness[0])
        report.details["witness_lengths"] = witness[1].sorted
    if hmf != expect_hmf:
        report.verdict = FAIL
        report.witnesses.append(
            f"{_s(g, witness[0])} has minimal lengths {witness[1]}" if witness
            else f"every non-unit has a single minimal length over {g.name}"
        )
    if g.kind != CYCLIC and g.size == 9 and g.commutative and g.is_group:
        # the order-9 group case of the classification: the whole group needs lengths 2 and 4
        ls = minimal_length_set(SubsetElem(g, full))
        report.details["K_lengths"] = ls.sorted
        if not {2, 4} <= ls.values:
            report.verdict = FAIL
            report.witnesses.append(f"whole group has minimal lengths {ls}, lacking 2 or 4")
    if hmf and g.size > 1:
        # HmF already fails otherwise, and with it minimal factoriality
        classes = minimal_factorizations(SubsetElem(g, full))
        report.details["full_set_classes"] = [str(c) for c in classes]
        minimally_factorial = len(classes) == 1
        report.details["minimally_factorial"] = minimally_factorial
        if minimally_factorial:
            report.verdict = FAIL
            report.witnesses.append(f"full set of {g.name} has a unique minimal class")
    if g.kind == CYCLIC and g.size >= 5:
        x4 = named_construction("X", 4, g.size).mask
        ls = minimal_length_set(SubsetElem(g, x4))
        report.details["X_4_lengths"] = ls.sorted
        if ls.sorted != [2, 3, 4]:
            report.notes.append(f"X_4 over Z/{g.size} has minimal lengths {ls}, not [2,4]")
    return _finish(report, start)


# interval realization --------------------------------------------------------------------------


def case_split_pair(k: int) -> tuple[tuple[str, int], tuple[str, int]]:
    """The two named atoms prescribed for X_k by parity of k."""
    if k % 2:
        m = (k - 1) // 2
        return (("B", m), ("C", m)) if m % 2 else (("B", m + 1), ("C", m - 1))
    m = k // 2
    if k == 2:
        return ("B", 1), ("B", 1)
    if k == 4:
        return ("B", 1), ("B", 3)
    return (("C", m), ("C", m - 2)) if m % 2 else (("C", m - 1), ("C", m - 1))


def _case_split_witness(n: int, k: int) -> tuple[bool, str]:
    g = cyclic(n)
    X = named_construction("X", k, n).mask
    pair = case_split_pair(k)
    label = "+".join(f"{name}_{p}" for name, p in pair)
    try:
        sets = [named_construction(name, p, n).mask for name, p in pair]
    except ValueError as exc:
        return False, f"{label}: {exc}"
    prod = g.product(*sets)
    if prod != X:
        return False, f"{label} = {_s(g, prod)} != X_{k}"
    if not all(atom_flag(g, s) for s in sets):
        return False, f"{label}: not both atoms"
    if not is_nr(FactorWord(g, tuple(sets), check=False)):
        return False, f"{label}: not NR"
    return True, f"{label} = {' + '.join(_s(g, s) for s in sets)}"


def _two_atom_nr(n: int, k: int) -> tuple[int, int] | None:
    g = cyclic(n)
    X = named_construction("X", k, n).mask
    atoms = atoms_within(g, X)
    top = max_hat(X)
    by_max: dict[int, list[int]] = {}
    for A in atoms:
        by_max.setdefault(max_hat(A), []).append(A)
    for A in atoms:
        for B in by_max.get(top - max_hat(A), []):
            if A <= B and g.product(A, B) == X:
                return A, B
    return None


def check_interval_realization(n: int, bound: int = INTERVAL_BOUND, workers: int = 1) -> VerifyReport:
    """For every k in [2, n-1]: L^m(X_k) = [2, k], and X_k = P + Q with the
    named atoms prescribed by the parity case split, P + Q an NR-factorization."""
    start = time.perf_counter()
    if n % 2 == 0 or n < 5:
        raise ValueError(f"interval realization needs an odd modulus >= 5, got {n}")
    if n > bound:
        raise CensusBoundError(f"modulus {n} exceeds the interval bound {bound}")
    g = cyclic(n)
    report = VerifyReport("interval", {"n": n}, PASS)
    rows = []
    for k in range(2, n):
        X = named_construction("X", k, n)
        ls = minimal_length_set(X, workers=workers)
        lm_ok = ls.sorted == list(range(2, k + 1))
        split_ok, split_msg = _case_split_witness(n, k)
        alt = _two_atom_nr(n, k)
        rows.append({
            "k": k,
            "minimal_lengths": ls.sorted,
            "lengths_ok": lm_ok,
            "case_split_ok": split_ok,
            "case_split": split_msg,
            "two_atom_nr": f"{_s(g, alt[0])} + {_s(g, alt[1])}" if alt else None,
        })
        if not lm_ok:
            report.verdict = FAIL
            report.witnesses.append(f"L^m(X_{k}) = {ls} over Z/{n}, expected [2,{k}]")
        if not split_ok:
            report.verdict = FAIL
            report.witnesses.append(f"X_{k} over Z/{n}: case split fails: {split_msg}")
            if alt:
                report.notes.append(f"X_{k}: a two-atom NR factorization exists: "
                                    f"{_s(g, alt[0])} + {_s(g, alt[1])}")
        if alt is None:
            report.notes.append(f"X_{k}: no two-atom NR factorization at all")
    report.details["rows"] = rows
    return _finish(report, start)


# unbounded lengths -------------------------------------------------------------------------------


def check_unbounded_lengths(n: int, lmax: int | None = None) -> VerifyReport:
    """For the whole group Z/n, every length in [n, lmax] occurs in L."""
    start = time.perf_counter()
    if n < 3 or n % 2 == 0:
        raise ValueError(f"needs an odd modulus >= 3, got {n}")
    lmax = 2 * n if lmax is None else lmax
    g = cyclic(n)
    X = SubsetElem(g, g.full_mask)
    ls = length_set_truncated(X, lmax=lmax)
    report = VerifyReport("unbounded", {"n": n, "lmax": lmax}, PASS,
                          details={"lengths": ls.sorted, "min_length": min(ls.values) if ls.values else None})
    missing = [r for r in range(n, lmax + 1) if r not in ls]
    if missing:
        report.verdict = FAIL
        report.witnesses.append(f"lengths {missing} absent from L(Z/{n}) up to {lmax}")
    # direct witnesses: powers of the atom {0,1}
    one = SubsetElem.of(g, [0, 1])
    direct = [r for r in range(1, lmax + 1) if power(one, r) == X]
    report.details["power_witnesses"] = direct
    stray = [r for r in direct if r not in ls]
    if stray:
        report.verdict = FAIL
        report.witnesses.append(f"{{0,1}}^{stray[0]} equals Z/{n} but {stray[0]} was not found")
    if ls.values:
        gaps = [r for r in range(min(ls.values), lmax + 1) if r not in ls]
        report.details["gaps_above_min"] = gaps
    return _finish(report, start)


# naturals ---------------------------------------------------------------------------------------


def _all_factorizations(g: GroundMonoid, X: int) -> list[tuple[int, ...]]:
    atoms = atoms_within(g, X)
    top = X.bit_length() - 1
    out = []

    def dfs(P: int, j: int, word: list[int]) -> None:
        for i in range(j, len(atoms)):
            A = atoms[i]
            if P.bit_length() + A.bit_length() - 2 > top:
                continue
            Q = g.product(P, A)
            if Q & ~X:
                continue
            word.append(A)
            if Q == X:
                out.append(tuple(word))
            # products only grow and every atom raises the maximum
            dfs(Q, i, word)
            word.pop()

    dfs(1, 0, [])
    return out


def check_bf_bound_naturals(cap: int = 6, max_card: int = 6) -> VerifyReport:
    """Over (N, +): sup L(X) <= |X|^2 - |X| and every factorization is minimal."""
    start = time.perf_counter()
    if cap < max_card:
        raise ValueError(f"cap {cap} is too small for sets up to {max_card}; need cap >= {max_card}")
    g = natural_segment(cap)
    report = VerifyReport("bf_naturals", {"cap": cap, "max_card": max_card}, PASS)
    worst = []
    for X in range(3, 1 << (max_card + 1), 2):
        size = X.bit_count()
        longest = longest_factorization(SubsetElem(g, X))
        if longest > size * size - size:
            report.verdict = FAIL
            report.witnesses.append(f"{_s(g, X)} has a factorization of length {longest}")
        words = _all_factorizations(g, X)
        if words and max(len(w) for w in words) != longest:
            report.verdict = FAIL
            report.witnesses.append(f"{_s(g, X)}: level sweep and enumeration disagree on the longest length")
        for w in words:
            if not is_minimal(FactorWord(g, w, check=False)):
                report.verdict = FAIL
                report.witnesses.append(f"{'*'.join(_s(g, a) for a in w)} is not minimal")
                break
        worst.append((longest, size))
    report.details = {"checked": len(worst), "max_longest": max(w[0] for w in worst)}
    return _finish(report, start)


# bridge ------------------------------------------------------------------------------------------


def _restricted_min_lengths(g: GroundMonoid, X: int, natoms: Sequence[int]) -> set[int]:
    """Minimal lengths in the restricted monoid of a commutative group, straight
    from the definition: multisets of associate classes whose product is a
    translate of X and no proper sub-multiset reaches a translate of X."""
    size = X.bit_count()
    translates = {g.left_image(u, X) for u in g.units()}
    out = set()
    m = len(natoms)

    def reaches(masks: Sequence[int]) -> bool:
        P = 1
        for a in masks:
            P = g.product(P, a)
        return P in translates

    def minimal(word: list[int]) -> bool:
        for r in range(1, len(word)):
            for idx in itertools.combinations(range(len(word)), r):
                if reaches([word[i] for i in idx]):
                    return False
        return True

    def dfs(P: int, j: int, word: list[int]) -> None:
        for i in range(j, m):
            Q = g.product(P, natoms[i])
            if Q.bit_count() > size:
                continue
            word.append(natoms[i])
            if Q in translates:
                if minimal(word):
                    out.add(len(word))
            elif len(word) < size - 1:
                dfs(Q, i, word)
            word.pop()

    dfs(1, 0, [])
    return out


def check_restricted_reduced_bridge(g: GroundMonoid, lmax: int | None = None,
                                    bound: int = BRIDGE_BOUND) -> VerifyReport:
    """The reduced and restricted power monoids of a finite abelian group have
    the same system of sets of lengths and of minimal lengths."""
    start = time.perf_counter()
    if not (g.is_group and g.commutative):
        raise ValueError("the bridge check needs a finite abelian group")
    if g.size > bound:
        raise CensusBoundError(f"{g.name} exceeds the bridge bound {bound}")
    lmax = 2 * g.size if lmax is None else lmax
    report = VerifyReport("bridge", {"ground": g.name, "lmax": lmax}, PASS)
    reduced_atoms = list(atom_census(g, Variant.REDUCED).atoms)
    # restricted atoms straight from the pair search, not from translation
    restricted_atoms = [
        X for X in range(1, g.full_mask + 1)
        if X.bit_count() >= 2 and split(g, X, Variant.RESTRICTED, method="exhaustive") is None
    ]
    report.details["atoms"] = {"reduced": len(reduced_atoms), "restricted": len(restricted_atoms)}
    red = length_sets_truncated(g, reduced_atoms, lmax)
    res = length_sets_truncated(g, restricted_atoms, lmax)
    sys_red = {frozenset(red.get(X, ())) for X in range(3, g.full_mask + 1, 2)}
    sys_res = {frozenset(res.get(X, ())) for X in range(1, g.full_mask + 1) if X.bit_count() >= 2}
    if sys_red != sys_res:
        report.verdict = FAIL
        for L in sorted(sys_red ^ sys_res, key=sorted)[:5]:
            side = "reduced" if L in sys_red else "restricted"
            report.witnesses.append(f"length set {sorted(L)} occurs only in the {side} system")
    report.details["systems"] = len(sys_red)

    natoms = sorted({normalize_atom(g, A, Variant.RESTRICTED) for A in restricted_atoms},
                    key=lambda a: (a.bit_count(), a))
    min_red: dict[int, frozenset[int]] = {}
    min_res: dict[int, frozenset[int]] = {}
    for X in range(3, g.full_mask + 1, 2):
        min_red[X] = minimal_length_set(SubsetElem(g, X)).values
    for X in range(1, g.full_mask + 1):
        if X.bit_count() < 2:
            continue
        min_res[X] = frozenset(_restricted_min_lengths(g, X, natoms))
    for X, L in min_red.items():
        if min_res[X] != L:
            report.verdict = FAIL
            report.witnesses.append(
                f"{_s(g, X)}: reduced minimal lengths {sorted(L)} vs restricted {sorted(min_res[X])}"
            )
            if len(report.witnesses) > 5:
                break
    msys_red = set(min_red.values())
    msys_res = set(min_res.values())
    if msys_red != msys_res:
        report.verdict = FAIL
        for L in sorted(msys_red ^ msys_res, key=sorted)[:5]:
            report.witnesses.append(f"minimal length set {sorted(L)} occurs in only one system")
    report.details["minimal_systems"] = len(msys_red)
    return _finish(report, start)


# exploratory scan ------------------------------------------------------------------------------


def small_nonabelian_groups() -> dict[str, GroundMonoid]:
    return {
        "S3": permutation_group([[1, 0, 2], [1, 2, 0]], name="S3"),
        "D4": permutation_group([[1, 2, 3, 0], [3, 2, 1, 0]], name="D4"),
        "Q8": permutation_group(
            [[1, 2, 3, 0, 5, 6, 7, 4], [4, 7, 6, 5, 2, 1, 0, 3]], name="Q8"),
    }


def explore_noncommutative(names: Sequence[str] = ("S3",), max_card: int | None = None) -> VerifyReport:
    """Compare reduced and restricted minimal lengths over small non-abelian
    groups.  Findings are reported, no verdict is asserted."""
    start = time.perf_counter()
    groups = small_nonabelian_groups()
    report = VerifyReport("explore", {"groups": list(names), "max_card": max_card}, INFO)
    for name in names:
        g = groups[name]
        limit = g.size if max_card is None else max_card
        diffs = []
        scanned = 0
        for X in range(3, g.full_mask + 1, 2):
            if X.bit_count() > limit:
                continue
            scanned += 1
            a = minimal_length_set(SubsetElem(g, X), Variant.REDUCED)
            b = minimal_length_set(SubsetElem(g, X), Variant.RESTRICTED)
            if a != b:
                diffs.append(f"{_s(g, X)}: reduced {a} restricted {b}")
        report.details[name] = {"scanned": scanned, "differences": diffs}
        report.notes.append(f"{name}: {len(diffs)} differing sets among {scanned}")
    return _finish(report, start)


# suites ----------------------------------------------------------------------------------------


def _c3xc3() -> GroundMonoid:
    return direct_product(cyclic(3), cyclic(3), name="C3xC3")


def _jobs(name: str, grid: Sequence[int]) -> list[tuple[Callable, tuple]]:
    if name == "atomicity":
        return [(check_atomicity_characterization, (cyclic(n),)) for n in grid]
    if name == "minimal_bound":
        return [(check_minimal_bound, (cyclic(n),)) for n in grid if n <= 7]
    if name == "hmf":
        return [(check_hmf_classification, (cyclic(n),)) for n in grid if n % 2 and n <= 7] + [
            (check_hmf_classification, (_c3xc3(),))
        ]
    if name == "interval":
        return [(check_interval_realization, (n,)) for n in grid if n % 2 and 5 <= n <= INTERVAL_BOUND]
    if name == "unbounded":
        return [(check_unbounded_lengths, (n, 2 * n)) for n in grid if n % 2 and n >= 3]
    if name == "bf_naturals":
        return [(check_bf_bound_naturals, (6, 6))]
    if name == "bridge":
        return [(check_restricted_reduced_bridge, (cyclic(n),)) for n in grid if n % 2 and n <= BRIDGE_BOUND]
    if name == "explore":
        return [(explore_noncommutative, (("S3",),))]
    raise KeyError(name)


SUITES = ("atomicity", "minimal_bound", "hmf", "interval", "unbounded", "bf_naturals", "bridge", "explore")


def _run(job: tuple[Callable, tuple]) -> VerifyReport:
    fn, args = job
    return fn(*args)


def run_suite(names: Iterable[str] = SUITES, grid: Sequence[int] = DEFAULT_GRID,
              workers: int = 1) -> list[VerifyReport]:
    """Run the named suites over the grid; the report order is fixed by the
    suite and grid order, whatever the number of workers."""
    jobs = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        jobs.extend(_jobs(name, grid))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run, jobs))
    return [_run(job) for job in jobs]


def format_summary(reports: Sequence[VerifyReport]) -> str:
    rows = [("check", "params", "verdict", "seconds")]
    for r in reports:
        params = ", ".join(f"{k}={v}" for k, v in r.params.items())
        rows.append((r.check_id, params, r.verdict.upper(), f"{r.elapsed:.2f}"))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    failed = [r for r in reports if not r.passed]
    lines.append(f"{len(reports) - len(failed)}/{len(reports)} checks without failure")
    for r in failed:
        for w in r.witnesses:
            lines.append(f"  {r.check_id} {r.params}: {w}")
    return "\n".join(lines)


def reports_json(reports: Sequence[VerifyReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=1)
