"""Exact arithmetic in cyclotomic fields Q(ζ_N).
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math
import cmath
import sympy

Rational = int | Fraction


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(order: int) -> tuple[int, ...]:
    """Coefficients of the order-th cyclotomic polynomial, constant term first."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(order, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def _reduce(coeffs: list[Fraction], order: int) -> tuple[Fraction, ...]:
    folded = [Fraction(0)] * order
    for k, c in enumerate(coeffs):
        if c:
            folded[k % order] += c
    phi = _cyclotomic_coeffs(order)
    deg = len(phi) - 1
    for k in range(order - 1, deg - 1, -1):
        c = folded[k]
        if not c:
            continue
        folded[k] = Fraction(0)
        shift = k - deg
        for j in range(deg):
            if phi[j]:
                folded[shift + j] -= c * phi[j]
    return tuple(folded[:deg])


def _format_fraction(c: Fraction) -> int | str:
    if c.denominator == 1:
        return int(c.numerator)
    return f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True, eq=False)
class CyclotomicValue:
    """An exact element Σ_k c_k ζ_N^k of Q(ζ_N) with ζ_N = e^{2πi/N}.
    Coefficients are kept reduced modulo the N-th cyclotomic polynomial,
    so two values of the same order are equal iff their coefficients are.
    """

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"The order of a cyclotomic field must be positive, got {self.order}!")
        object.__setattr__(
            self, "coeffs", _reduce([Fraction(c) for c in self.coeffs], self.order)
        )

    @classmethod
    def zero(cls, order: int) -> CyclotomicValue:
        return cls(order, ())

    @classmethod
    def one(cls, order: int) -> CyclotomicValue:
        return cls(order, (Fraction(1),))

    @classmethod
    def from_rational(cls, value: Rational, order: int) -> CyclotomicValue:
        return cls(order, (Fraction(value),))

    @classmethod
    def root(cls, order: int, power: int, coeff: Rational = 1) -> CyclotomicValue:
        """Return coeff * ζ_N^power.

        :param order: The order N of the root of unity ζ_N.
        :param power: The exponent of ζ_N (any integer).
        :param coeff: A rational coefficient.
        """
        coeffs = [Fraction(0)] * order
        coeffs[power % order] = Fraction(coeff)
        return cls(order, tuple(coeffs))

    @classmethod
    def sqrt_prime(cls, p: int, order: int) -> CyclotomicValue:
        """Return the positive square root of an odd prime p inside Q(ζ_N).
        It is the quadratic Gauss sum g_p when p ≡ 1 mod 4 and -i·g_p otherwise.

        :param p: An odd prime.
        :param order: The order N of the field, which must be a multiple of 4p.
        """
        if p < 3 or not sympy.isprime(p):
            raise ValueError(f"{p} is not an odd prime!")
        if order % (4 * p):
            raise ValueError(f"sqrt({p}) does not live in Q(ζ_{order}); use an order divisible by {4 * p}.")
        step = order // p
        gauss = cls(order, tuple(_gauss_coeffs(p, step, order)))
        if p % 4 == 1:
            return gauss
        return gauss * cls.root(order, 3 * order // 4)

    def embed(self, order: int) -> CyclotomicValue:
        """Return the same number as an element of Q(ζ_order).

        :param order: A multiple of the current order.
        """
        if order % self.order:
            raise ValueError(f"Q(ζ_{self.order}) does not embed into Q(ζ_{order})!")
        factor = order // self.order
        coeffs = [Fraction(0)] * order
        for k, c in enumerate(self.coeffs):
            coeffs[k * factor] = c
        return CyclotomicValue(order, tuple(coeffs))

    def _align(self, other) -> tuple[CyclotomicValue, CyclotomicValue]:
        if isinstance(other, (int, Fraction)):
            return self, CyclotomicValue.from_rational(other, self.order)
        if not isinstance(other, CyclotomicValue):
            return NotImplemented, NotImplemented
        if other.order == self.order:
            return self, other
        order = math.lcm(self.order, other.order)
        return self.embed(order), other.embed(order)

    def __add__(self, other):
        lhs, rhs = self._align(other)
        if lhs is NotImplemented:
            return NotImplemented
        size = max(len(lhs.coeffs), len(rhs.coeffs))
        coeffs = [Fraction(0)] * size
        for k, c in enumerate(lhs.coeffs):
            coeffs[k] += c
        for k, c in enumerate(rhs.coeffs):
            coeffs[k] += c
        return CyclotomicValue(lhs.order, tuple(coeffs))

    __radd__ = __add__

    def __neg__(self) -> CyclotomicValue:
        return CyclotomicValue(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        lhs, rhs = self._align(other)
        if lhs is NotImplemented:
            return NotImplemented
        if not lhs.coeffs or not rhs.coeffs:
            return CyclotomicValue.zero(lhs.order)
        coeffs = [Fraction(0)] * (len(lhs.coeffs) + len(rhs.coeffs) - 1)
        for i, a in enumerate(lhs.coeffs):
            if not a:
                continue
            for j, b in enumerate(rhs.coeffs):
                if b:
                    coeffs[i + j] += a * b
        return CyclotomicValue(lhs.order, tuple(coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other: Rational) -> CyclotomicValue:
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("division of a cyclotomic value by zero")
        return CyclotomicValue(self.order, tuple(c / other for c in self.coeffs))

    def inverse(self) -> CyclotomicValue:
        """The multiplicative inverse, via the extended Euclidean algorithm
        against the cyclotomic polynomial.

        :raises ZeroDivisionError: If the value is zero.
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of a zero cyclotomic value")
        x = sympy.Symbol("x")
        num = sum(
            sympy.Rational(c.numerator, c.denominator) * x**k
            for k, c in enumerate(self.coeffs)
            if c
        )
        inv = sympy.invert(num, sympy.cyclotomic_poly(self.order, x), x)
        coeffs = []
        for c in reversed(sympy.Poly(inv, x, domain="QQ").all_coeffs()):
            p, q = sympy.fraction(c)
            coeffs.append(Fraction(int(p), int(q)))
        return CyclotomicValue(self.order, tuple(coeffs))

    def __pow__(self, exponent: int) -> CyclotomicValue:
        if exponent < 0:
            raise ValueError("Only non-negative integer powers are supported!")
        result = CyclotomicValue.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        lhs, rhs = self._align(other)
        if lhs is NotImplemented:
            return NotImplemented
        return lhs.coeffs == rhs.coeffs

    def __hash__(self) -> int:
        value = self.approx()
        return hash((round(value.real, 9) + 0.0, round(value.imag, 9) + 0.0))

    def conjugate(self) -> CyclotomicValue:
        """Complex conjugation, ζ_N^k -> ζ_N^{-k}."""
        coeffs = [Fraction(0)] * self.order
        for k, c in enumerate(self.coeffs):
            coeffs[(-k) % self.order] += c
        return CyclotomicValue(self.order, tuple(coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational number!")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def approx(self) -> complex:
        """Numeric value as a Python complex number."""
        terms = [
            float(c) * cmath.exp(2j * math.pi * k / self.order)
            for k, c in enumerate(self.coeffs)
            if c
        ]
        return complex(
            math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)
        )

    def to_dict(self) -> dict:
        """JSON-friendly exact representation (coefficients indexed 0..N-1)."""
        coeffs = list(self.coeffs) + [Fraction(0)] * (self.order - len(self.coeffs))
        return {
            "order": self.order,
            "coeffs": [_format_fraction(c) for c in coeffs],
            "scale": 1,
        }

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            coeff = _format_fraction(c)
            terms.append(str(coeff) if k == 0 else f"({coeff})*z{self.order}^{k}")
        return " + ".join(terms) if terms else "0"


def _gauss_coeffs(p: int, step: int, order: int) -> list[Fraction]:
    coeffs = [Fraction(0)] * order
    for x in range(p):
        coeffs[(x * x % p) * step] += 1
    return coeffs


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """The root of unity e^{2πi·turn} with a rational turn reduced to [0, 1)."""

    turn: Fraction

    def __post_init__(self):
        object.__setattr__(self, "turn", Fraction(self.turn) % 1)

    @property
    def order(self) -> int:
        return self.turn.denominator

    @property
    def value(self) -> complex:
        return cmath.exp(2j * math.pi * float(self.turn))

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        return RootOfUnity(self.turn + other.turn)

    def __pow__(self, exponent: int) -> RootOfUnity:
        return RootOfUnity(self.turn * exponent)

    def to_cyclotomic(self, order: int | None = None) -> CyclotomicValue:
        if order is None:
            order = self.order
        if order % self.order:
            raise ValueError(f"{self} is not an element of Q(ζ_{order})!")
        return CyclotomicValue.root(order, int(self.turn * order))

    def __str__(self) -> str:
        return f"exp(2πi*{self.turn})"
