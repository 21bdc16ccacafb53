import itertools

import pytest

import oracles
from powmon.atoms import Variant, atom_census, atoms_within, named_construction
from powmon.factor import (
    FactorWord,
    LengthSet,
    find_minimal_factorization,
    is_minimal,
    is_nr,
    length_set_truncated,
    longest_factorization,
    minimal_factorizations,
    minimal_length_set,
    normalize_atom,
    preceq,
    precedes,
)
from powmon.ground import cyclic, natural_segment, table_ground
from powmon.powset import SubsetElem, subset, translate

R, T = Variant.REDUCED, Variant.RESTRICTED


def S(n, *xs):
    return subset(cyclic(n), *xs)


def W(n, *sets, variant=R):
    return FactorWord.of([S(n, *s) for s in sets], variant)


def empty(n, variant=R):
    return FactorWord.of([], variant, ground=cyclic(n))


def as_tuples(classes):
    return sorted(tuple(sorted(tuple(A.members) for A in c.atoms)) for c in classes)


# words and the preorder


def test_word_basics():
    w = W(5, (0, 1), (0, 2))
    assert len(w) == 2 and w.product == S(5, 0, 1, 2, 3) and str(w) == "{0,1}*{0,2}"
    assert str(empty(5)) == "()" and empty(5).product == S(5, 0)
    with pytest.raises(ValueError, match="not an atom"):
        W(5, (0, 1, 2))
    with pytest.raises(ValueError, match="mixed"):
        FactorWord.of([S(5, 0, 1), S(7, 0, 1)])
    with pytest.raises(ValueError):
        FactorWord.of([])


def test_preceq_examples():
    e = empty(5)
    a4 = W(5, *[(0, 1)] * 4)
    a5 = W(5, *[(0, 1)] * 5)
    assert preceq(e, e) and not preceq(e, a4) and not preceq(a4, e)
    assert preceq(a4, a5) and precedes(a4, a5) and not preceq(a5, a4)
    assert not preceq(W(5, (0, 1)), W(5, (0, 1), (0, 1)))
    with pytest.raises(ValueError):
        preceq(W(5, (0, 1)), W(7, (0, 1)))
    with pytest.raises(ValueError):
        preceq(W(5, (0, 1)), W(5, (0, 1), variant=T))


def test_preceq_up_to_associates():
    a = W(5, (0, 1), (0, 1), variant=T)
    b = W(5, (1, 2), (4, 0), variant=T)
    assert a.product == b.product
    assert preceq(a, b) and preceq(b, a) and not precedes(a, b)
    assert not preceq(W(5, (0, 1), (0, 1)), W(5, (0, 1), (0, 4)))


def _words_z5(max_len=4):
    atoms = [S(5, *A) for A in [(0, 1), (0, 2), (0, 3), (0, 4)]]
    out = [empty(5)]
    for L in range(1, max_len + 1):
        out += [FactorWord.of(list(w)) for w in itertools.combinations_with_replacement(atoms, L)]
    return out


def test_preorder_laws():
    words = _words_z5()
    by_product = {}
    for w in words:
        by_product.setdefault(w.product_mask, []).append(w)
    for group in by_product.values():
        for a in group:
            assert preceq(a, a)
            for b in group:
                if preceq(a, b):
                    assert len(a) <= len(b)
                    if preceq(b, a):
                        assert sorted(a.masks) == sorted(b.masks)
                    for c in group:
                        if preceq(b, c):
                            assert preceq(a, c)


# minimality and NR


def test_short_words_are_minimal():
    for w in _words_z5(2):
        assert is_minimal(w)


def test_is_minimal_examples():
    assert not is_minimal(W(5, *[(0, 1)] * 5))
    assert is_minimal(W(5, *[(0, 1)] * 4))


def test_is_nr_examples():
    assert is_nr(W(5, (0, 1), (0, 1)))
    assert not is_nr(W(5, *[(0, 1)] * 5))
    assert is_nr(FactorWord.of([named_construction("B", 1, 7), named_construction("C", 1, 7)]))
    with pytest.raises(ValueError):
        is_nr(empty(5))
    g = natural_segment(6)
    with pytest.raises(ValueError):
        is_nr(FactorWord.of([subset(g, 0, 1)]))


@pytest.mark.parametrize("n", [5, 7])
def test_nr_implies_minimal_and_minimality_matches_definition(n):
    atoms = [SubsetElem(cyclic(n), a) for a in atom_census(cyclic(n)).atoms]
    checked = 0
    for L in range(1, 5):
        for combo in itertools.combinations_with_replacement(atoms, L):
            w = FactorWord.of(list(combo))
            minimal = is_minimal(w)
            if is_nr(w):
                assert minimal, str(w)
            if L >= 3:
                assert minimal == oracles.is_minimal_reduced(n, [frozenset(A) for A in combo])
            checked += 1
    assert checked > 0


# factorization sets


def test_minimal_factorizations_examples():
    assert as_tuples(minimal_factorizations(S(3, 0, 1, 2))) == [
        ((0, 1), (0, 1)),
        ((0, 1), (0, 2)),
        ((0, 2), (0, 2)),
    ]
    assert as_tuples(minimal_factorizations(S(5, 0, 1, 2))) == [((0, 1), (0, 1))]
    X7 = named_construction("X", 7, 9)
    keys = {c.key for c in minimal_factorizations(X7)}
    B3, C3 = named_construction("B", 3, 9), named_construction("C", 3, 9)
    assert tuple(sorted((B3.mask, C3.mask))) in keys


def test_unit_convention():
    classes = minimal_factorizations(S(5, 0))
    assert len(classes) == 1 and len(classes[0]) == 0
    assert minimal_length_set(S(5, 0)).values == {0}
    assert minimal_length_set(S(5, 3), T).values == {0}
    assert find_minimal_factorization(S(5, 0), 0) is not None
    assert find_minimal_factorization(S(5, 0), 1) is None


def test_classes_sorted_and_minimal():
    classes = minimal_factorizations(S(7, *range(6)))
    assert [c.key for c in classes] == sorted(c.key for c in classes)
    assert len({c.key for c in classes}) == len(classes)
    for c in classes:
        assert is_minimal(c.word) and c.word.product == S(7, *range(6))


@pytest.mark.parametrize("n", range(2, 7))
def test_minimal_factorizations_match_oracle(n):
    for X in oracles.subsets_with_zero(n):
        if len(X) == 1:
            continue
        got = as_tuples(minimal_factorizations(SubsetElem.of(cyclic(n), X)))
        assert got == sorted(oracles.minimal_factorizations_reduced(n, X)), sorted(X)


def test_minimal_factorizations_workers_agree():
    X = S(9, *range(8))
    assert minimal_factorizations(X, workers=1) == minimal_factorizations(X, workers=2)


def test_minimal_length_set_examples():
    assert minimal_length_set(named_construction("X", 4, 7)).values == {2, 3, 4}
    assert minimal_length_set(S(5, 0, 1)).values == {1}
    assert minimal_length_set(S(3, 0, 1, 2)).values == {2}
    assert minimal_length_set(named_construction("X", 4, 5)).values == {3, 4}
    assert not minimal_length_set(S(7, 0, 1, 2)).truncated


# lengths n=7 frozen from the oracle (it takes minutes there)
FROZEN_Z7 = {
    (0, 1, 2): {2},
    (0, 1, 2, 3): {2, 3},
    (0, 1, 2, 3, 4): {2, 3, 4},
    (0, 1, 2, 3, 4, 5): {2, 3, 4, 5},
    (0, 1, 2, 3, 4, 5, 6): {2, 3, 4, 5, 6},
    (0, 1, 3): {1},
    (0, 2, 4, 6): {2, 3},
}


@pytest.mark.parametrize("n", range(2, 7))
def test_minimal_lengths_match_oracle(n):
    for X in oracles.subsets_with_zero(n):
        if len(X) > 1:
            got = minimal_length_set(SubsetElem.of(cyclic(n), X)).values
            assert got == oracles.minimal_lengths_reduced(n, X), sorted(X)


def test_minimal_lengths_frozen_z7():
    for X, want in FROZEN_Z7.items():
        assert minimal_length_set(S(7, *X)).values == want, X


@pytest.mark.parametrize("n", [7, 9, 11])
def test_interval_sets(n):
    for k in range(2, n):
        assert minimal_length_set(named_construction("X", k, n)).sorted == list(range(2, k + 1))


@pytest.mark.parametrize("n", range(2, 8))
def test_minimal_lengths_inside_lengths(n):
    g = cyclic(n)
    for m in range(3, 1 << n, 2):
        X = SubsetElem(g, m)
        Lm = minimal_length_set(X).values
        L = length_set_truncated(X, lmax=len(X)).values
        assert Lm <= L & set(range(1, len(X)))
        if L:
            assert min(Lm) == min(L)
        else:
            # not factorable at all: only possible for even n
            assert not Lm and n % 2 == 0


@pytest.mark.parametrize("n", range(2, 8))
def test_restricted_agrees_with_reduced_and_is_translation_invariant(n):
    g = cyclic(n)
    seen = {}
    for m in range(1, 1 << n):
        X = SubsetElem(g, m)
        if len(X) == 1:
            continue
        got = minimal_length_set(X, T).values
        base = translate((-X.members[0]) % n, X, 0)
        seen.setdefault(base.mask, minimal_length_set(base, T).values)
        assert got == seen[base.mask]
        if m & 1:
            assert got == minimal_length_set(X, R).values


def test_restricted_classes_normalized():
    X = S(5, 1, 2, 3)
    classes = minimal_factorizations(X, T)
    assert [len(c) for c in classes] == [2]
    assert all(normalize_atom(cyclic(5), a, T) == a for c in classes for a in c.key)
    assert all(c.word.product == X for c in classes)


def test_s3_minimal_lengths_match_oracle(s3):
    t = s3.table
    for X in oracles.subsets_with_zero(6):
        if 1 < len(X) <= 4:
            got = minimal_length_set(SubsetElem.of(s3, X)).values
            assert got == oracles.table_minimal_lengths_reduced(t, X), sorted(X)


def test_s3_restricted_supported(s3):
    X = SubsetElem(s3, 0b011110)
    classes = minimal_factorizations(X, T)
    assert classes and all(c.word.product == X for c in classes)


def test_naturals_restricted_equals_reduced():
    g = natural_segment(6)
    # the naturals have only the trivial unit, so both variants coincide there
    assert minimal_length_set(subset(g, 0, 1, 2), T).values == {2}


def test_restricted_over_non_group_rejected():
    # an involution plus an absorbing element: units {0,1}, not a group
    g = table_ground([[0, 1, 2], [1, 0, 2], [2, 2, 2]], name="M")
    with pytest.raises(ValueError, match="groups"):
        minimal_factorizations(subset(g, 0, 2), T)
    with pytest.raises(ValueError, match="groups"):
        length_set_truncated(subset(g, 0, 2), T, lmax=3)


# truncated length sets


def test_length_set_truncated_examples():
    full = S(5, *range(5))
    L = length_set_truncated(full, lmax=8)
    assert L.sorted == [3, 4, 5, 6, 7, 8] and L.truncated and L.truncated_at == 8
    assert length_set_truncated(full, T, lmax=8).sorted == [3, 4, 5, 6, 7, 8]
    assert length_set_truncated(S(3, 0, 1, 2), lmax=6).sorted == [2, 3, 4, 5, 6]
    assert length_set_truncated(S(7, *range(7)), lmax=14).sorted == list(range(2, 15))
    g = natural_segment(20)
    assert length_set_truncated(subset(g, 0, 1, 2), lmax=20).values == {2}
    assert length_set_truncated(S(5, 0), lmax=3).values == {0}
    with pytest.raises(ValueError):
        length_set_truncated(full, lmax=0)


@pytest.mark.parametrize("n", range(2, 8))
def test_length_set_truncated_matches_oracle(n):
    for X in oracles.subsets_with_zero(n):
        if 1 < len(X) <= 5:
            got = length_set_truncated(SubsetElem.of(cyclic(n), X), lmax=6).values
            assert got == oracles.lengths_truncated_reduced(n, X, 6), sorted(X)


def test_length_set_json():
    L = LengthSet(frozenset({4, 2, 3}), 8)
    assert L.to_json() == {"values": [2, 3, 4], "truncated": True, "truncated_at": 8}
    assert str(L) == "{2,3,4}" and 3 in L and len(L) == 3


# the naturals


def _all_words(g, X):
    atoms = atoms_within(g, X, R)
    top = X.bit_length() - 1
    out = []

    def dfs(P, j, word):
        if P == X and word:
            out.append(tuple(word))
        for i in range(j, len(atoms)):
            A = atoms[i]
            if (P.bit_length() - 1) + (A.bit_length() - 1) > top:
                continue
            Q = g.product(P, A)
            if Q & ~X == 0:
                dfs(Q, i, word + [A])

    dfs(1, 0, [])
    return out


def test_naturals_every_factorization_minimal_and_bounded():
    g = natural_segment(8)
    for m in range(3, 1 << 9, 2):
        X = SubsetElem(g, m)
        words = _all_words(g, m)
        for w in words:
            assert is_minimal(FactorWord(g, w, R, check=False))
        if words:
            longest = max(len(w) for w in words)
            assert longest == longest_factorization(X)
            assert longest <= len(X) ** 2 - len(X)


def test_longest_factorization_rejects_cyclic():
    with pytest.raises(ValueError):
        longest_factorization(S(5, 0, 1))
