"""Exact group law on y^2 = x^3 + a x^2 + b x and its 2-isogeny."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class SingularCurveError(ValueError):
    pass


class NotOnCurveError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Curve:
    """y^2 = x^3 + a x^2 + b x with integer a, b and b^2 (a^2 - 4b) != 0."""

    a: int
    b: int

    def __post_init__(self):
        if self.b == 0 or self.a * self.a - 4 * self.b == 0:
            raise SingularCurveError(f"singular curve: a={self.a}, b={self.b}")

    @property
    def discriminant(self) -> int:
        """Discriminant of x^3 + a x^2 + b x, i.e. b^2 (a^2 - 4b)."""
        return self.b * self.b * (self.a * self.a - 4 * self.b)

    def rhs(self, x):
        return x * (x * x + self.a * x + self.b)

    def __str__(self):
        return f"y^2 = x^3 + {self.a}x^2 + {self.b}x"


@dataclass(frozen=True)
class Point:
    """An affine rational point, or the point at infinity when x is None."""

    x: Fraction | None = None
    y: Fraction | None = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("a point needs both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = Point()


def on_curve(c: Curve, p: Point) -> bool:
    if p.is_infinity:
        return True
    return p.y * p.y == c.rhs(p.x)


def _check(c: Curve, *points: Point) -> None:
    for p in points:
        if not on_curve(c, p):
            raise NotOnCurveError(f"{p} is not on {c}")


def negate(c: Curve, p: Point) -> Point:
    _check(c, p)
    if p.is_infinity:
        return p
    return Point(p.x, -p.y)


def _add(c: Curve, p: Point, q: Point) -> Point:
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    if p.x == q.x:
        if p.y != q.y or p.y == 0:
            return INFINITY
        lam = (3 * p.x * p.x + 2 * c.a * p.x + c.b) / (2 * p.y)
    else:
        lam = (q.y - p.y) / (q.x - p.x)
    x3 = lam * lam - c.a - p.x - q.x
    y3 = lam * (p.x - x3) - p.y
    return Point(x3, y3)


def add(c: Curve, p: Point, q: Point) -> Point:
    """Chord-tangent sum with INFINITY as identity."""
    _check(c, p, q)
    return _add(c, p, q)


def scalar_mul(c: Curve, n: int, p: Point) -> Point:
    _check(c, p)
    if n < 0:
        n, p = -n, Point(p.x, -p.y) if not p.is_infinity else p
    result, addend = INFINITY, p
    while n:
        if n & 1:
            result = _add(c, result, addend)
        addend = _add(c, addend, addend)
        n >>= 1
    return result


def isogenous_curve(c: Curve) -> Curve:
    """The 2-isogenous curve y^2 = x^3 - 2a x^2 + (a^2 - 4b) x."""
    return Curve(-2 * c.a, c.a * c.a - 4 * c.b)


def isogeny_apply(c: Curve, p: Point) -> Point:
    """phi(x, y) = (y^2/x^2, y (x^2 - b)/x^2); kernel {O, (0,0)}."""
    _check(c, p)
    if p.is_infinity or p.x == 0:
        return INFINITY
    x2 = p.x * p.x
    return Point(p.y * p.y / x2, p.y * (x2 - c.b) / x2)


def is_integral(p: Point) -> bool:
    return p.is_infinity or (p.x.denominator == 1 and p.y.denominator == 1)
