import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopflattice.algebra import (
    HALF,
    ONE,
    SQRT2,
    ZERO,
    ExactScalar,
    FieldOverflowError,
    Hyper,
    UnsupportedLevelError,
    basis_element,
    basis_table,
    cd_conj,
    cd_inv,
    cd_mul,
    cd_mul_recursive,
    cd_norm2,
    find_zero_divisor,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(ExactScalar, fractions, fractions)
nonzero = scalars.filter(bool)


def hypers(level):
    return st.lists(scalars, min_size=1 << level, max_size=1 << level).map(
        lambda cs: Hyper(level, cs))


# independent oracle for Q(sqrt2): plain pairs of Fractions
def o_mul(x, y):
    return (x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def pair(s: ExactScalar):
    return (s.rat, s.irr)


# --------------------------------------------------------------------------
# ExactScalar


@given(scalars, scalars, scalars)
def test_field_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO and a + ZERO == a and a * ONE == a


@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == ONE
    assert a / a == ONE


@given(scalars, scalars)
def test_product_matches_pair_oracle(a, b):
    assert pair(a * b) == o_mul(pair(a), pair(b))
    assert pair(a + b) == (a.rat + b.rat, a.irr + b.irr)


@given(scalars)
def test_sign_matches_float(a):
    f = float(a.rat) + float(a.irr) * math.sqrt(2)
    if abs(f) > 1e-9:
        assert a.sign() == (1 if f > 0 else -1)
    assert (a.sign() == 0) == (a == ZERO)


@given(scalars, scalars)
def test_order_is_consistent(a, b):
    assert (a < b) + (a == b) + (a > b) == 1
    assert (a <= b) == (not a > b)


@given(scalars)
def test_text_round_trip(a):
    assert ExactScalar.parse(str(a)) == a
    assert str(ExactScalar.parse(str(a))) == str(a)


@pytest.mark.parametrize("text,rat,irr", [
    ("-1/2+3/4√2", Fraction(-1, 2), Fraction(3, 4)),
    ("0/1", 0, 0),
    ("1/1", 1, 0),
    ("0/1-1/2√2", 0, Fraction(-1, 2)),
])
def test_parse_examples(text, rat, irr):
    s = ExactScalar.parse(text)
    assert (s.rat, s.irr) == (rat, irr)
    assert str(s) == text


@pytest.mark.parametrize("text", ["1", "2/4", "1/0", "1/2+0/1√2", "-0/1", "1/2 + 1/2√2", "abc", ""])
def test_parse_rejects_noncanonical(text):
    with pytest.raises(ValueError):
        ExactScalar.parse(text)


def test_components_in_lowest_terms():
    s = ExactScalar(Fraction(6, 8), Fraction(-10, 4))
    assert s.rat == Fraction(3, 4) and s.irr == Fraction(-5, 2)
    assert s.rat.denominator > 0 and s.irr.denominator > 0


@pytest.mark.parametrize("value,root", [
    (ExactScalar(4), ExactScalar(2)),
    (ExactScalar(2), SQRT2),
    (ExactScalar(3, 2), ExactScalar(1, 1)),
    (HALF, ExactScalar(0, Fraction(1, 2))),
    (ZERO, ZERO),
])
def test_sqrt_in_field(value, root):
    assert value.sqrt() == root


@pytest.mark.parametrize("value", [ExactScalar(3), ExactScalar(1, 1), ExactScalar(-1)])
def test_sqrt_outside_field(value):
    with pytest.raises(FieldOverflowError):
        value.sqrt()


def test_hash_agrees_with_equality():
    assert hash(ExactScalar(Fraction(1, 2))) == hash(ExactScalar(Fraction(2, 4)))
    assert len({ExactScalar(1, 1), ExactScalar(1, 1), ExactScalar(1)}) == 2


# --------------------------------------------------------------------------
# Cayley-Dickson tower


def test_spec_products():
    i = basis_element(1, 1)
    assert cd_mul(i, i) == Hyper(1, [-1, 0])
    e = [basis_element(2, k) for k in range(4)]
    assert cd_mul(e[2], e[2]) == -e[0]
    # (i, 0)(0, 1) = (i*0 - 1*0*, i* 1 + 0*0) = (0, -i)
    assert cd_mul(e[1], e[2]) == -e[3]


@pytest.mark.parametrize("level", [0, 1, 2, 3, 4])
def test_table_matches_recursive_product(level):
    rng = random.Random(level)
    n = 1 << level
    for _ in range(40):
        x = [ExactScalar(rng.randint(-5, 5), rng.randint(-2, 2)) for _ in range(n)]
        y = [ExactScalar(rng.randint(-5, 5), rng.randint(-2, 2)) for _ in range(n)]
        assert cd_mul(Hyper(level, x), Hyper(level, y)).coords == tuple(cd_mul_recursive(x, y))


@pytest.mark.parametrize("level", [1, 2, 3, 4])
def test_basis_table_is_signed_permutation(level):
    table = basis_table(level)
    n = 1 << level
    for i in range(n):
        assert sorted(k for _, k in table[i]) == list(range(n))
        assert table[0][i] == (1, i) and table[i][0] == (1, i)
        if i:
            assert table[i][i] == (-1, 0)


@pytest.mark.parametrize("level", [0, 1, 2])
def test_associative_on_basis_up_to_quaternions(level):
    e = [basis_element(level, k) for k in range(1 << level)]
    for a, b, c in itertools.product(e, repeat=3):
        assert cd_mul(cd_mul(a, b), c) == cd_mul(a, cd_mul(b, c))


def test_octonions_not_associative_on_basis():
    e = [basis_element(3, k) for k in range(8)]
    bad = [(i, j, k) for i, j, k in itertools.product(range(8), repeat=3)
           if cd_mul(cd_mul(e[i], e[j]), e[k]) != cd_mul(e[i], cd_mul(e[j], e[k]))]
    assert bad
    # associator of distinct imaginary units outside a quaternion triple flips sign
    i, j, k = bad[0]
    assert cd_mul(cd_mul(e[i], e[j]), e[k]) == -cd_mul(e[i], cd_mul(e[j], e[k]))


@settings(max_examples=200)
@given(hypers(3), hypers(3))
def test_octonions_alternative(x, y):
    assert cd_mul(x, cd_mul(x, y)) == cd_mul(cd_mul(x, x), y)
    assert cd_mul(cd_mul(y, x), x) == cd_mul(y, cd_mul(x, x))


@pytest.mark.parametrize("level", [1, 2, 3])
@settings(max_examples=150)
@given(data=st.data())
def test_norm_multiplicative(level, data):
    x = data.draw(hypers(level))
    y = data.draw(hypers(level))
    assert cd_norm2(cd_mul(x, y)) == cd_norm2(x) * cd_norm2(y)


def test_sedenion_norm_not_multiplicative():
    x, y = find_zero_divisor(4)
    assert cd_norm2(cd_mul(x, y)) != cd_norm2(x) * cd_norm2(y)


@pytest.mark.parametrize("level", [0, 1, 2, 3, 4])
@settings(max_examples=60)
@given(data=st.data())
def test_conj_reverses_products(level, data):
    x = data.draw(hypers(level))
    y = data.draw(hypers(level))
    assert cd_conj(cd_mul(x, y)) == cd_mul(cd_conj(y), cd_conj(x))
    assert cd_conj(cd_conj(x)) == x


@pytest.mark.parametrize("level", [1, 2, 3])
@given(data=st.data())
def test_conj_sum_is_twice_real_part(level, data):
    x = data.draw(hypers(level))
    assert x + cd_conj(x) == Hyper.real(level, x.real_part * 2)


@pytest.mark.parametrize("level", [1, 2, 3])
@settings(max_examples=60)
@given(data=st.data())
def test_norm_is_real_part_of_x_xbar(level, data):
    x = data.draw(hypers(level))
    prod = cd_mul(x, cd_conj(x))
    assert prod == Hyper.real(level, cd_norm2(x))


def test_conj_examples():
    assert cd_conj(basis_element(2, 0)) == basis_element(2, 0)
    assert cd_conj(basis_element(2, 3)) == -basis_element(2, 3)


def test_norm_examples():
    assert cd_norm2(basis_element(3, 0)) == ONE
    assert cd_norm2(Hyper(1, [Fraction(3, 5), Fraction(4, 5)])) == ONE


@pytest.mark.parametrize("level", [1, 2, 3])
@settings(max_examples=80)
@given(data=st.data())
def test_inverse_is_two_sided(level, data):
    x = data.draw(hypers(level).filter(bool))
    one = basis_element(level, 0)
    assert cd_mul(x, cd_inv(x)) == one
    assert cd_mul(cd_inv(x), x) == one


def test_inverse_examples():
    e0 = basis_element(3, 0)
    assert cd_inv(e0) == e0
    assert cd_inv(e0 * 2) == e0 * HALF


def test_inverse_of_unit_octonion_is_conjugate():
    u = Hyper(3, [HALF, HALF, HALF, HALF, 0, 0, 0, 0])
    assert cd_inv(u) == cd_conj(u)


def test_inverse_errors():
    with pytest.raises(ZeroDivisionError):
        cd_inv(Hyper.zero(2))
    with pytest.raises(UnsupportedLevelError):
        cd_inv(basis_element(4, 0))


def test_basis_element():
    assert basis_element(1, 1) == Hyper(1, [0, 1])
    assert basis_element(3, 0).coords == (ONE,) + (ZERO,) * 7
    assert basis_element(4, 10).coords[10] == ONE
    with pytest.raises(IndexError):
        basis_element(2, 4)
    with pytest.raises(IndexError):
        basis_element(2, -1)


def test_level_mismatch_rejected():
    with pytest.raises(ValueError):
        cd_mul(basis_element(2, 1), basis_element(3, 1))


def test_bad_coordinate_count_rejected():
    with pytest.raises(ValueError):
        Hyper(2, [1, 2, 3])


@pytest.mark.parametrize("level", [1, 2, 3])
def test_no_zero_divisor_below_sedenions(level):
    assert find_zero_divisor(level) is None


def test_sedenion_zero_divisor():
    x, y = find_zero_divisor(4)
    assert x and y
    assert cd_mul(x, y) == Hyper.zero(4)
    for h in (x, y):
        nz = [c for c in h.coords if c]
        assert len(nz) == 2 and all(abs(c) == ONE for c in nz)
