"""Test cyclotomic.py.
"""

from fractions import Fraction
import cmath
import math
import pytest
from hypothesis import given, strategies as st
from metaplectic.cyclotomic import CyclotomicValue, RootOfUnity

coeff_lists = st.lists(st.integers(-5, 5), min_size=12, max_size=12)


def test_root_wraps_around():
    assert CyclotomicValue.root(12, 12) == CyclotomicValue.one(12)
    assert CyclotomicValue.root(12, -1) == CyclotomicValue.root(12, 11)


def test_roots_sum_to_zero():
    total = sum((CyclotomicValue.root(3, k) for k in range(3)), CyclotomicValue.zero(3))
    assert total.is_zero()


def test_equality_across_orders():
    assert CyclotomicValue.root(3, 1) == CyclotomicValue.root(12, 4)
    assert CyclotomicValue.root(3, 1).embed(12) == CyclotomicValue.root(12, 4)
    with pytest.raises(ValueError):
        CyclotomicValue.root(12, 1).embed(18)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_sqrt_prime(p):
    root = CyclotomicValue.sqrt_prime(p, 4 * p)
    assert root * root == p
    assert abs(root.approx() - math.sqrt(p)) < 1e-12


def test_sqrt_prime_requires_field():
    with pytest.raises(ValueError):
        CyclotomicValue.sqrt_prime(3, 6)
    with pytest.raises(ValueError):
        CyclotomicValue.sqrt_prime(9, 36)


def test_conjugate_inverts_roots():
    zeta = CyclotomicValue.root(7, 1)
    assert zeta * zeta.conjugate() == 1
    assert not zeta.is_real()
    assert (zeta + zeta.conjugate()).is_real()


def test_rationals():
    half = CyclotomicValue.from_rational(Fraction(1, 2), 12)
    assert half.is_rational()
    assert half.to_fraction() == Fraction(1, 2)
    assert (half * 4).to_fraction() == 2
    assert (CyclotomicValue.root(12, 3) / 2).approx() == pytest.approx(0.5j)
    with pytest.raises(ValueError):
        CyclotomicValue.root(12, 1).to_fraction()
    with pytest.raises(ValueError):
        CyclotomicValue.root(12, 1) ** -1


@pytest.mark.parametrize("order", [12, 20, 28, 36])
def test_inverse(order):
    root = CyclotomicValue.root(order, 1)
    assert root.inverse() == root.conjugate()
    # y = cos(4π/m) is a sum of two roots of unity
    y = (CyclotomicValue.root(order, 8) + CyclotomicValue.root(order, -8)) / 2
    assert y * y.inverse() == 1
    assert y.inverse().approx() == pytest.approx(1 / y.approx())
    with pytest.raises(ZeroDivisionError):
        CyclotomicValue.zero(order).inverse()


def test_to_dict():
    data = CyclotomicValue.root(12, 2, Fraction(3, 2)).to_dict()
    assert data["order"] == 12
    assert len(data["coeffs"]) == 12
    assert data["scale"] == 1
    value = sum(
        (CyclotomicValue.root(12, k, Fraction(c)) for k, c in enumerate(data["coeffs"])),
        CyclotomicValue.zero(12),
    )
    assert value == CyclotomicValue.root(12, 2, Fraction(3, 2))


def test_str():
    assert str(CyclotomicValue.zero(5)) == "0"
    assert str(CyclotomicValue.from_rational(3, 5)) == "3"


@given(coeff_lists, coeff_lists)
def test_arithmetic_matches_complex(a, b):
    x = CyclotomicValue(12, tuple(a))
    y = CyclotomicValue(12, tuple(b))
    zx = sum(c * cmath.exp(2j * math.pi * k / 12) for k, c in enumerate(a))
    zy = sum(c * cmath.exp(2j * math.pi * k / 12) for k, c in enumerate(b))
    assert abs((x + y).approx() - (zx + zy)) < 1e-9
    assert abs((x * y).approx() - zx * zy) < 1e-7
    assert x * y == y * x
    assert (x - y) + y == x


def test_root_of_unity():
    root = RootOfUnity(Fraction(5, 4))
    assert root.turn == Fraction(1, 4)
    assert root.order == 4
    assert abs(root.value - 1j) < 1e-12
    assert root**4 == RootOfUnity(Fraction(0))
    assert root * RootOfUnity(Fraction(3, 4)) == RootOfUnity(Fraction(0))
    assert root.to_cyclotomic(8) == CyclotomicValue.root(8, 2)
    with pytest.raises(ValueError):
        root.to_cyclotomic(6)
