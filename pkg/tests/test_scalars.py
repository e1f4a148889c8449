"""Exact cyclotomic scalars: arithmetic against an independent float oracle."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from cotwist.scalars import Cyclotomic, euler_phi, format_cyclotomic, parse_cyclotomic


def rand_cyclotomic(rng, order, span=3):
    phi = euler_phi(order)
    coeffs = [Fraction(int(rng.integers(-span, span + 1))) for _ in range(phi)]
    return Cyclotomic(order, coeffs)


def test_euler_phi_table():
    table = {1: 1, 2: 1, 3: 2, 4: 2, 5: 4, 6: 2, 7: 6, 8: 4, 9: 6, 12: 4, 15: 8}
    for n, phi in table.items():
        assert euler_phi(n) == phi


def test_zeta_embeds_as_primitive_root():
    for order in (3, 4, 5, 12):
        z = Cyclotomic.zeta(order)
        assert abs(z.embed() - cmath.exp(2j * cmath.pi / order)) < 1e-12


def test_root_of_unity_relations():
    for order in (3, 5, 7):
        z = Cyclotomic.zeta(order)
        power = Cyclotomic.one(order)
        total = Cyclotomic.zero(order)
        for _ in range(order):
            total = total + power
            power = power * z
        assert power == Cyclotomic.one(order), "zeta^order != 1"
        assert total == Cyclotomic.zero(order), "sum of all order-th roots != 0"


@pytest.mark.parametrize("order", [3, 4, 5, 6])
def test_ring_ops_match_complex_oracle(order):
    rng = np.random.default_rng(11 + order)
    for _ in range(25):
        a = rand_cyclotomic(rng, order)
        b = rand_cyclotomic(rng, order)
        assert abs((a + b).embed() - (a.embed() + b.embed())) < 1e-10
        assert abs((a - b).embed() - (a.embed() - b.embed())) < 1e-10
        assert abs((a * b).embed() - (a.embed() * b.embed())) < 1e-10
        assert abs(a.conj().embed() - a.embed().conjugate()) < 1e-10


@pytest.mark.parametrize("order", [3, 5])
def test_inverse(order):
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(40):
        a = rand_cyclotomic(rng, order)
        if a.is_zero:
            continue
        checked += 1
        assert a * a.inverse() == Cyclotomic.one(order)
    assert checked >= 20


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        Cyclotomic.zero(3).inverse()


def test_exact_equality_is_not_float():
    # 1 + zeta + zeta^2 = 0 exactly in Q(zeta_3)
    z = Cyclotomic.zeta(3)
    s = Cyclotomic.one(3) + z + z * z
    assert s == Cyclotomic.zero(3)
    # a float-looking near-miss stays nonzero
    tiny = Cyclotomic(3, (Fraction(1, 10**12), Fraction(0)))
    assert not (s + tiny).is_zero


def test_order_mixing_requires_explicit_rescale():
    with pytest.raises(ValueError):
        Cyclotomic.zeta(3) + Cyclotomic.zeta(5)
    mixed = Cyclotomic.zeta(3).rescale_order(15) + Cyclotomic.zeta(5).rescale_order(15)
    expected = cmath.exp(2j * cmath.pi / 3) + cmath.exp(2j * cmath.pi / 5)
    assert abs(mixed.embed() - expected) < 1e-12
    # equality comparison does widen
    assert Cyclotomic.one(3) == Cyclotomic.one(5)


def test_division():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a = rand_cyclotomic(rng, 5)
        b = rand_cyclotomic(rng, 5)
        if b.is_zero:
            continue
        assert (a / b) * b == a


def test_parse_round_trip():
    rng = np.random.default_rng(23)
    for _ in range(20):
        a = rand_cyclotomic(rng, 6)
        assert parse_cyclotomic(format_cyclotomic(a), 6) == a


def test_parse_literals():
    assert parse_cyclotomic("0", 3) == Cyclotomic.zero(3)
    assert parse_cyclotomic("1/1*E(3)^0", 3) == Cyclotomic.one(3)
    assert parse_cyclotomic("1/1*E(5)^2", 5) == Cyclotomic.zeta(5, 2)
    assert parse_cyclotomic("-1/2*E(4)^1", 4) == Cyclotomic.zeta(4, 1, Fraction(-1, 2))
    two_terms = parse_cyclotomic("1/3*E(3)^0;2/3*E(3)^1", 3)
    assert two_terms == Cyclotomic(3, (Fraction(1, 3), Fraction(2, 3)))


def test_parse_rejects_malformed():
    for bad in ("", "E(3)", "2**3", "1/0*E(3)^0", "q", "1/1*E(5)^0"):
        with pytest.raises(ValueError):
            parse_cyclotomic(bad, 3)


def test_rational_detection():
    assert Cyclotomic.from_rational(Fraction(7, 2), 5).is_rational
    assert Cyclotomic.from_rational(Fraction(7, 2), 5).rational_value() == Fraction(7, 2)
    assert not Cyclotomic.zeta(5).is_rational
