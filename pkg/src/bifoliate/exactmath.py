"""Exact arithmetic in real quadratic fields and on 2x2 integer matrices.

Values are stored as ``(p + q*sqrt(D)) / r`` with integer fields and a
canonical normal form, so equality is structural and ordering is decided by
integer comparisons only.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from numbers import Rational
from typing import Union

from sympy import factorint

__all__ = [
    "QuadraticNumber",
    "IntMatrix2",
    "EigenData",
    "DiscriminantMismatch",
    "NotUnimodular",
    "SlopePoleError",
    "quad_arith",
    "quad_sign",
    "quad_floor",
    "mat_ops",
    "slope_action",
    "sign_of",
]


class DiscriminantMismatch(ValueError):
    """Operands live in different quadratic fields."""


class NotUnimodular(ValueError):
    """Matrix inverse requested for a matrix with det not in {1, -1}."""


class SlopePoleError(ZeroDivisionError):
    """The slope action sends the slope to infinity (vertical line)."""


@lru_cache(maxsize=4096)
def _square_split(n: int) -> tuple[int, int]:
    """Return (s, f) with n = s*s*f and f squarefree."""
    if n <= 0:
        raise ValueError("discriminant must be positive")
    if n == 1:
        return 1, 1
    s, f = 1, 1
    for prime, e in factorint(n).items():
        s *= prime ** (e // 2)
        if e % 2:
            f *= prime
    return s, f


def sign_of(x: int, y: int, d: int) -> int:
    """Exact sign of x + y*sqrt(d) for integers x, y and d >= 0."""
    if y == 0 or d == 0:
        return (x > 0) - (x < 0)
    if x == 0:
        return (y > 0) - (y < 0)
    if (x > 0) == (y > 0):
        return 1 if x > 0 else -1
    lhs, rhs = x * x, y * y * d
    if lhs == rhs:
        return 0
    if lhs > rhs:
        return 1 if x > 0 else -1
    return 1 if y > 0 else -1


Scalar = Union[int, Fraction, "QuadraticNumber"]


class QuadraticNumber:
    """An element (p + q*sqrt(D))/r of a real quadratic field.

    Rationals are stored with q = 0 and D = 1 so they compare equal no matter
    which field they were produced in.
    """

    __slots__ = ("_p", "_q", "_r", "_d")

    def __init__(self, p: int, q: int = 0, r: int = 1, D: int = 1):
        if r == 0:
            raise ZeroDivisionError("zero denominator")
        if D <= 0:
            raise ValueError("D must be positive")
        if q != 0:
            s, D = _square_split(D)
            q *= s
            if D == 1:
                p, q = p + q, 0
        if q == 0:
            D = 1
        if r < 0:
            p, q, r = -p, -q, -r
        g = gcd(gcd(p, q), r)
        self._p, self._q, self._r, self._d = p // g, q // g, r // g, D

    # -- constructors -----------------------------------------------------
    @classmethod
    def coerce(cls, x: Scalar) -> "QuadraticNumber":
        if isinstance(x, QuadraticNumber):
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not a number here")
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, Rational):
            return cls(int(x.numerator), 0, int(x.denominator))
        raise TypeError(f"cannot coerce {type(x).__name__} to QuadraticNumber")

    @classmethod
    def sqrt(cls, n: int) -> "QuadraticNumber":
        return cls(0, 1, 1, n)

    # -- fields ---------------------------------------------------------------
    p = property(lambda self: self._p)
    q = property(lambda self: self._q)
    r = property(lambda self: self._r)
    D = property(lambda self: self._d)

    @property
    def is_rational(self) -> bool:
        return self._q == 0

    def as_fraction(self) -> Fraction:
        if self._q:
            raise ValueError("irrational value")
        return Fraction(self._p, self._r)

    def fields(self) -> tuple[int, int, int, int]:
        return self._p, self._q, self._r, self._d

    # -- arithmetic -----------------------------------------------------------
    def _field(self, other: "QuadraticNumber") -> int:
        if self._q and other._q and self._d != other._d:
            raise DiscriminantMismatch(f"sqrt({self._d}) vs sqrt({other._d})")
        return self._d if self._q else other._d

    def __add__(self, other: Scalar) -> "QuadraticNumber":
        try:
            o = QuadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(o)
        return QuadraticNumber(
            self._p * o._r + o._p * self._r, self._q * o._r + o._q * self._r, self._r * o._r, d
        )

    __radd__ = __add__

    def __neg__(self) -> "QuadraticNumber":
        return QuadraticNumber(-self._p, -self._q, self._r, self._d)

    def __sub__(self, other: Scalar) -> "QuadraticNumber":
        try:
            o = QuadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Scalar) -> "QuadraticNumber":
        return QuadraticNumber.coerce(other) - self

    def __mul__(self, other: Scalar) -> "QuadraticNumber":
        try:
            o = QuadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(o)
        return QuadraticNumber(
            self._p * o._p + self._q * o._q * d,
            self._p * o._q + self._q * o._p,
            self._r * o._r,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self._p, -self._q, self._r, self._d)

    def norm(self) -> Fraction:
        """Field norm x * conjugate(x), always rational."""
        return Fraction(self._p * self._p - self._q * self._q * self._d, self._r * self._r)

    def reciprocal(self) -> "QuadraticNumber":
        num = self._p * self._p - self._q * self._q * self._d
        if num == 0:
            raise ZeroDivisionError("division by zero")
        # r / (p + q sqrt D) = r (p - q sqrt D) / (p^2 - q^2 D)
        return QuadraticNumber(self._r * self._p, -self._r * self._q, num, self._d)

    def __truediv__(self, other: Scalar) -> "QuadraticNumber":
        try:
            o = QuadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        self._field(o)
        return self * o.reciprocal()

    def __rtruediv__(self, other: Scalar) -> "QuadraticNumber":
        return QuadraticNumber.coerce(other) / self

    def __pow__(self, e: int) -> "QuadraticNumber":
        if e < 0:
            return self.reciprocal() ** (-e)
        out, base = QuadraticNumber(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- order ----------------------------------------------------------------
    def sign(self) -> int:
        return sign_of(self._p, self._q, self._d)

    def _cmp(self, other: Scalar) -> int:
        return (self - QuadraticNumber.coerce(other)).sign()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadraticNumber):
            return self.fields() == other.fields()
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.fields() == QuadraticNumber.coerce(other).fields()
        return NotImplemented

    def __hash__(self) -> int:
        if self._q == 0:
            return hash(Fraction(self._p, self._r))
        return hash(self.fields())

    def __lt__(self, other: Scalar) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Scalar) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Scalar) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Scalar) -> bool:
        return self._cmp(other) >= 0

    def __abs__(self) -> "QuadraticNumber":
        return -self if self.sign() < 0 else self

    def __floor__(self) -> int:
        return quad_floor(self)

    # -- display --------------------------------------------------------------
    def to_decimal(self, digits: int = 30) -> Decimal:
        """Approximate value, for display only."""
        with localcontext() as ctx:
            ctx.prec = digits + 10
            v = (Decimal(self._p) + Decimal(self._q) * Decimal(self._d).sqrt()) / Decimal(self._r)
            ctx.prec = digits
            return +v

    def __float__(self) -> float:
        return float(self.to_decimal(20))

    def exact_str(self) -> str:
        """Structured exact form, parsed back by :func:`parse_quadratic`."""
        if self._q == 0:
            return str(self._p) if self._r == 1 else f"{self._p}/{self._r}"
        return f"({self._p} + {self._q}*sqrt({self._d}))/{self._r}"

    def __str__(self) -> str:
        return self.exact_str()

    def __repr__(self) -> str:
        return f"QuadraticNumber({self._p}, {self._q}, {self._r}, {self._d})"


def parse_quadratic(text: str) -> QuadraticNumber:
    """Inverse of :meth:`QuadraticNumber.exact_str`."""
    text = text.strip()
    m = re.fullmatch(r"\((-?\d+) \+ (-?\d+)\*sqrt\((\d+)\)\)/(\d+)", text)
    if m:
        p, q, d, r = (int(g) for g in m.groups())
        return QuadraticNumber(p, q, r, d)
    return QuadraticNumber.coerce(Fraction(text))


def quad_arith(x: QuadraticNumber, y: QuadraticNumber | None, op: str) -> QuadraticNumber:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "neg":
        return -x
    if op == "conjugate":
        return x.conjugate()
    raise ValueError(f"unknown op {op!r}")


def quad_sign(x: QuadraticNumber) -> int:
    return x.sign()


def quad_floor(x: Scalar) -> int:
    """Greatest integer n <= x, certified with exact sign tests."""
    x = QuadraticNumber.coerce(x)
    p, q, r, d = x.fields()
    root = isqrt(q * q * d)
    guess = (p + (root if q >= 0 else -root)) // r
    while (x - guess).sign() < 0:
        guess -= 1
    while (x - (guess + 1)).sign() >= 0:
        guess += 1
    return guess


def quad_ceil(x: Scalar) -> int:
    return -quad_floor(-QuadraticNumber.coerce(x))


@dataclass(frozen=True)
class IntMatrix2:
    """Row-major 2x2 integer matrix [[a, b], [c, d]]."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "IntMatrix2":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, o: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> "IntMatrix2":
        return IntMatrix2(-self.a, -self.b, -self.c, -self.d)

    def scale(self, k: int) -> "IntMatrix2":
        return IntMatrix2(k * self.a, k * self.b, k * self.c, k * self.d)

    def __pow__(self, e: int) -> "IntMatrix2":
        if e < 0:
            return self.inverse() ** (-e)
        out, base = IntMatrix2.identity(), self
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def transpose(self) -> "IntMatrix2":
        return IntMatrix2(self.a, self.c, self.b, self.d)

    def inverse(self) -> "IntMatrix2":
        det = self.det
        if det not in (1, -1):
            raise NotUnimodular(f"det = {det}")
        return IntMatrix2(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def is_hyperbolic(self) -> bool:
        return self.det == 1 and abs(self.trace) > 2

    def apply(self, m: int, n: int) -> tuple[int, int]:
        """Matrix times the column vector (m, n)."""
        return self.a * m + self.b * n, self.c * m + self.d * n

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


def mat_ops(M: IntMatrix2, N: IntMatrix2 | int | None, op: str):
    if op == "mul":
        return M @ N
    if op == "pow":
        if N < 0:
            raise ValueError("pow takes a non-negative exponent")
        return M ** N
    if op == "det":
        return M.det
    if op == "trace":
        return M.trace
    if op == "inverse":
        return M.inverse()
    if op == "is_hyperbolic":
        return M.is_hyperbolic()
    raise ValueError(f"unknown op {op!r}")


def slope_action(Q: IntMatrix2, x: Scalar) -> QuadraticNumber:
    """Slope of the image of the line of slope x: (c + d x)/(a + b x)."""
    x = QuadraticNumber.coerce(x)
    den = Q.b * x + Q.a
    if den.sign() == 0:
        raise SlopePoleError("image line is vertical")
    return (Q.d * x + Q.c) / den


@dataclass(frozen=True)
class EigenData:
    eigen_contracting: QuadraticNumber
    eigen_expanding: QuadraticNumber
    slope_contracting: QuadraticNumber
    slope_expanding: QuadraticNumber
