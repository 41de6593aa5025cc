import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rank1dm import GF, QQ, FieldMismatchError
from rank1dm.field import is_prime

PRIMES = [2, 3, 5, 7, 11, 101, 65537, 2**31 - 1]


def test_gf_add_examples():
    f = GF(5)
    assert (f.element(2) + f.element(4)).value == 1
    assert (GF(2).element(1) + GF(2).element(1)).value == 0


def test_rational_add_example():
    assert (QQ.element(Fraction(1, 2)) + QQ.element(Fraction(1, 3))).value == Fraction(5, 6)


def test_mul_examples():
    assert (GF(5).element(3) * GF(5).element(4)).value == 2
    assert (QQ.element(Fraction(2, 3)) * QQ.element(Fraction(3, 4))).value == Fraction(1, 2)
    x = GF(7).element(4)
    assert x * GF(7).one == x


def test_inverse_examples():
    assert GF(5).element(3).inverse().value == 2
    assert QQ.element(Fraction(-2, 7)).inverse().value == Fraction(-7, 2)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GF(5).zero.inverse()
    with pytest.raises(ZeroDivisionError):
        QQ.zero.inverse()


def _egcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def test_gf_inverse_against_extended_euclid():
    rng = random.Random(20240311)
    for _ in range(1000):
        p = rng.choice(PRIMES)
        a = rng.randrange(1, p)
        inv = GF(p).element(a).inverse().value
        g, x, _ = _egcd(a, p)
        assert g == 1
        assert inv == x % p
        assert a * inv % p == 1


def test_mixed_field_operands_rejected():
    with pytest.raises(FieldMismatchError):
        GF(5).element(1) + GF(7).element(1)
    with pytest.raises(FieldMismatchError):
        GF(2).element(1) * QQ.one
    with pytest.raises(FieldMismatchError):
        QQ.one - GF(3).element(2)


def test_field_axioms_randomized():
    rng = random.Random(7)
    for p in (2, 3, 5, 101):
        f = GF(p)
        for _ in range(200):
            a, b, c = (f.element(rng.randrange(p)) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
            assert (a * b) * c == a * (b * c)
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c
            assert a + (-a) == f.zero
            if a:
                assert a * a.inverse() == f.one


@given(
    st.fractions(max_denominator=50),
    st.fractions(max_denominator=50),
    st.fractions(max_denominator=50),
)
def test_rational_axioms(a, b, c):
    x, y, z = QQ.element(a), QQ.element(b), QQ.element(c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == QQ.zero
    if x:
        assert x * x.inverse() == QQ.one


def test_canonical_form_idempotent():
    f = GF(7)
    assert f.canon(f.canon(23)) == f.canon(23) == 2
    assert QQ.canon(QQ.canon(Fraction(6, -4))) == Fraction(-3, 2)


def test_rational_canonical_sign_and_reduction():
    v = QQ.element(Fraction(6, -4)).value
    assert v.numerator == -3 and v.denominator == 2
    assert QQ.zero.value == Fraction(0, 1)


def test_nonprime_modulus_rejected():
    for bad in (0, 1, 4, 6, 9, 561, 2**31):
        with pytest.raises(ValueError):
            GF(bad)


def test_is_prime():
    assert is_prime(2) and is_prime(3) and is_prime(65537) and is_prime(2**31 - 1)
    assert not is_prime(1) and not is_prime(561) and not is_prime(1105)


def test_parse_format_round_trip():
    f = GF(11)
    for s in ("0", "7", "10"):
        assert f.format(f.parse(s)) == s
    for s in ("0", "-3", "5/6", "-7/2"):
        assert QQ.format(QQ.parse(s)) == s
    with pytest.raises(ValueError):
        f.parse("x")
    with pytest.raises(ValueError):
        QQ.parse("1/0")


def test_elements_hashable_and_eq():
    assert GF(5).element(7) == GF(5).element(2)
    assert len({GF(5).element(i % 5) for i in range(20)}) == 5
    assert GF(5).element(1) != GF(7).element(1)
