import random
from fractions import Fraction

import pytest

from cyclochern.scalars import I, ONE, Scalar, ZERO, format_scalar, parse_scalar


def rand_scalar(rng):
    return Scalar(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                  Fraction(rng.randint(-9, 9), rng.randint(1, 9)))


def test_field_axioms_random():
    rng = random.Random(1)
    for _ in range(200):
        a, b, c = (rand_scalar(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + ZERO == a and a * ONE == a
        if a:
            assert a * a.inverse() == ONE


def test_conjugation_involution_and_norm():
    rng = random.Random(2)
    for _ in range(100):
        a, b = rand_scalar(rng), rand_scalar(rng)
        assert a.conjugate().conjugate() == a
        assert (a * b).conjugate() == a.conjugate() * b.conjugate()
        assert (a.norm_sq() == 0) == (not a)


def test_i_squared():
    assert I * I == Scalar(-1)


def test_parse_and_format_roundtrip():
    cases = ["3", "-2/7", "1/2+1/3i", "0-1i", "5+2i"]
    for text in cases:
        z = parse_scalar(text)
        assert parse_scalar(format_scalar(z)) == z


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar("2 + bananas")
