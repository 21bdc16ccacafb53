import math
import pickle

import pytest

from powmon.ground import (
    CapacityError,
    GroundError,
    atomicity_criterion,
    classify,
    cyclic,
    direct_product,
    is_dedekind_finite,
    load_table,
    make_ground,
    natural_segment,
    table_ground,
)


def test_cyclic_all_units():
    g = make_ground("cyclic", 5)
    assert g.size == 5 and len(g.units()) == 5 and g.is_group


def test_klein_table(klein):
    assert len(klein.units()) == 4
    assert klein.commutative and klein.is_group


def test_non_associative_rejected():
    # 0 is the identity; 1*1 = 0 but the 3x3 table below breaks associativity
    rows = [[0, 1, 2], [1, 0, 0], [2, 1, 0]]
    with pytest.raises(GroundError, match="associative"):
        table_ground(rows)


def test_two_by_two_non_associative():
    with pytest.raises(GroundError):
        table_ground([[0, 1], [0, 1]])


@pytest.mark.parametrize("bad", [
    [[1, 0], [0, 1]],
    [[0, 1], [1]],
    [[0, 5], [1, 0]],
])
def test_invalid_tables(bad):
    with pytest.raises(GroundError):
        table_ground(bad)


def test_zero_sizes_rejected():
    with pytest.raises(GroundError):
        make_ground("cyclic", 0)
    with pytest.raises(GroundError):
        make_ground("natural", 0)
    with pytest.raises(GroundError):
        make_ground("moebius", 3)


def test_table_size_limit():
    table = [[(i + j) % 25 for j in range(25)] for i in range(25)]
    with pytest.raises(GroundError, match="limit"):
        table_ground(table)


def test_classify_examples():
    c = classify(cyclic(3))
    assert c.idempotents == {0}
    assert c.square_roots_of_identity == frozenset()
    assert c.orders == {0: 1, 1: 3, 2: 3}
    assert classify(cyclic(4)).square_roots_of_identity == {2}
    c6 = classify(cyclic(6))
    assert c6.idempotents == {0} and c6.square_roots_of_identity == {3}


@pytest.mark.parametrize("n", range(1, 25))
def test_cyclic_orders(n):
    orders = classify(cyclic(n)).orders
    assert orders[0] == 1
    assert all(orders[x] == n // math.gcd(x, n) for x in range(n))


def test_classify_rejects_naturals():
    with pytest.raises(GroundError):
        classify(natural_segment(5))


def test_atomicity_criterion_examples():
    assert atomicity_criterion(cyclic(5))
    assert not atomicity_criterion(cyclic(4))
    assert not atomicity_criterion(cyclic(2))
    assert atomicity_criterion(natural_segment(7))


@pytest.mark.parametrize("n", range(1, 65))
def test_atomicity_criterion_parity(n):
    assert atomicity_criterion(cyclic(n)) == (n % 2 == 1)


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9, 15])
def test_atomic_grounds_have_odd_orders(n):
    c = classify(cyclic(n))
    assert c.idempotents == {0}
    assert all(o == 1 or (o % 2 == 1 and o >= 3) for o in c.orders.values())


def test_dedekind_finite(klein, s3):
    assert is_dedekind_finite(cyclic(7))
    assert is_dedekind_finite(natural_segment(10))
    assert is_dedekind_finite(klein) and is_dedekind_finite(s3)
    # a non-group monoid: {0, 1} with 1*1 = 1
    assert is_dedekind_finite(table_ground([[0, 1], [1, 1]]))


def test_natural_overflow():
    g = natural_segment(4)
    assert g.mul(2, 2) == 4
    with pytest.raises(CapacityError):
        g.mul(3, 2)
    with pytest.raises(CapacityError):
        g.product(0b11000, 0b10)
    assert g.units() == [0]


def test_load_table(tmp_path):
    path = tmp_path / "v4.txt"
    path.write_text("4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n")
    g = load_table(path)
    assert g.size == 4 and g.is_group and g.name == "v4"
    path.write_text("3\n0 1 2\n1 2 0\n")
    with pytest.raises(GroundError, match="header"):
        load_table(path)
    path.write_text("2\n0 x\n1 0\n")
    with pytest.raises(GroundError):
        load_table(path)


def test_permutation_group_s3(s3):
    assert s3.size == 6 and s3.is_group and not s3.commutative
    assert all(s3.mul(s3.inverse(x), x) == 0 for x in range(6))


def test_direct_product():
    g = direct_product(cyclic(3), cyclic(3))
    assert g.size == 9 and g.is_group and g.commutative
    assert classify(g).orders[1] == 3 and max(classify(g).orders.values()) == 3


def test_equality_hash_pickle(klein):
    assert cyclic(5) == make_ground("z", 5)
    assert cyclic(5) != natural_segment(4)
    again = pickle.loads(pickle.dumps(klein))
    assert again == klein and hash(again) == hash(klein)
    assert again.product(0b0110, 0b0110) == klein.product(0b0110, 0b0110)


def test_preimages_match_definition(s3):
    for y in range(6):
        for mask in range(1, 64):
            left = {z for z in range(6) if mask >> s3.mul(y, z) & 1}
            right = {z for z in range(6) if mask >> s3.mul(z, y) & 1}
            assert s3.left_preimage(y, mask) == sum(1 << z for z in left)
            assert s3.right_preimage(mask, y) == sum(1 << z for z in right)
