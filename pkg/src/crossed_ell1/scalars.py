"""Scalar helpers shared by the float and exact arithmetic modes.

Float mode uses Python/numpy ``complex``.  Exact mode uses
:class:`GaussianRational`, a complex number whose real and imaginary parts
are :class:`fractions.Fraction`.  Exact scalars live in numpy ``object``
arrays, so the same array code serves both modes.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction

import numpy as np


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("imaginary part given twice")
            self.re, self.im = re.re, re.im
            return
        self.re = _to_fraction(re)
        self.im = _to_fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(value)

    def __repr__(self) -> str:
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __eq__(self, other) -> bool:
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pos__(self) -> "GaussianRational":
        return self

    def __add__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        d = other.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, n: int) -> "GaussianRational":
        if not isinstance(n, numbers.Integral):
            raise TypeError("only integer powers are exact")
        base = self if n >= 0 else 1 / self
        result = GaussianRational(1)
        for _ in range(abs(int(n))):
            result = result * base
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return sqrt_fraction(self.abs2())

    @property
    def real(self) -> Fraction:
        return self.re

    @property
    def imag(self) -> Fraction:
        return self.im


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (numbers.Integral, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def sqrt_fraction(r: Fraction) -> float:
    """Correctly rounded-ish float square root of a non-negative rational."""
    if r == 0:
        return 0.0
    # Scale to keep ~60 bits before taking the integer square root.
    num, den = r.numerator, r.denominator
    shift = max(0, 120 - (num.bit_length() - den.bit_length()))
    shift += shift & 1
    root = math.isqrt((num << shift) // den)
    return math.ldexp(float(root), -(shift // 2))


def sqrt_bounds(r: Fraction, bits: int = 96) -> tuple[Fraction, Fraction]:
    """Rational enclosure ``lo <= sqrt(r) <= hi`` of width at most ``2**-bits``."""
    if r < 0:
        raise ValueError("negative argument")
    scale = 1 << (2 * bits)
    lo = math.isqrt((r.numerator * scale) // r.denominator)
    hi = lo if lo * lo * r.denominator == r.numerator * scale else lo + 1
    return Fraction(lo, 1 << bits), Fraction(hi, 1 << bits)


def is_exact(value) -> bool:
    return isinstance(value, (GaussianRational, Fraction, numbers.Integral))


def abs2(value):
    """Squared modulus; exact (a Fraction) for exact and float inputs alike."""
    if isinstance(value, GaussianRational):
        return value.abs2()
    if isinstance(value, (numbers.Integral, Fraction)):
        return Fraction(value) ** 2
    z = complex(value)
    return Fraction(z.real) ** 2 + Fraction(z.imag) ** 2


def modulus(value) -> float:
    if isinstance(value, GaussianRational):
        return abs(value)
    return abs(complex(value))


def is_zero(value, tol: float = 0.0) -> bool:
    if tol == 0:
        return not value
    return modulus(value) <= tol


def unit_power(lam, n: int):
    """``lam**n`` for a unit-modulus scalar, with negative powers via conjugation."""
    if isinstance(lam, GaussianRational):
        return lam ** n
    lam = complex(lam)
    if n >= 0:
        return lam ** n
    return lam.conjugate() ** (-n)


def as_exact_array(values) -> np.ndarray:
    out = np.empty(len(values), dtype=object)
    for i, v in enumerate(values):
        out[i] = GaussianRational.coerce(v)
    return out


def is_exact_array(arr: np.ndarray) -> bool:
    return arr.dtype == object


def to_complex(value) -> complex:
    return complex(value)


def check_unit(lam, tol: float = 1e-12) -> None:
    if isinstance(lam, GaussianRational):
        if lam.abs2() != 1:
            raise ValueError(f"lambda must have modulus 1, got |lambda|^2 = {lam.abs2()}")
        return
    if abs(abs(complex(lam)) - 1.0) > tol:
        raise ValueError(f"lambda must have modulus 1, got {abs(complex(lam))!r}")


def pythagorean_units(limit: int = 30) -> list[GaussianRational]:
    """Exact unit-modulus Gaussian rationals ``(a + bi)/c`` with ``a^2+b^2=c^2``."""
    units = {GaussianRational(1), GaussianRational(-1), GaussianRational(0, 1), GaussianRational(0, -1)}
    for m in range(1, limit):
        for k in range(1, m):
            a, b, c = m * m - k * k, 2 * m * k, m * m + k * k
            for sa in (1, -1):
                for sb in (1, -1):
                    units.add(GaussianRational(Fraction(sa * a, c), Fraction(sb * b, c)))
                    units.add(GaussianRational(Fraction(sb * b, c), Fraction(sa * a, c)))
    return sorted(units, key=lambda z: (math.atan2(float(z.im), float(z.re)) % (2 * math.pi)))
