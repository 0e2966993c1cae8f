"""Rational torsion of y^2 = x^3 + a x^2 + b x by Nagell-Lutz and Mazur."""

from __future__ import annotations

from dataclasses import dataclass

from .arith import divisors, factorize, is_perfect_square, integer_sqrt
from .curve import INFINITY, Curve, Point, add, is_integral, negate, scalar_mul

MAZUR_CYCLIC = frozenset((*range(1, 11), 12))
MAZUR_PRODUCT = frozenset(range(1, 5))
MAX_TORSION_ORDER = 12


class TorsionClassificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TorsionStructure:
    """Z/n ("cyclic") or Z/2 x Z/2n ("product")."""

    kind: str
    n: int
    generators: tuple[Point, ...]
    points: tuple[Point, ...] = ()

    def __post_init__(self):
        allowed = MAZUR_CYCLIC if self.kind == "cyclic" else MAZUR_PRODUCT
        if self.kind not in ("cyclic", "product") or self.n not in allowed:
            raise TorsionClassificationError(f"{self.kind}({self.n}) is not in Mazur's list")

    @property
    def order(self) -> int:
        return self.n if self.kind == "cyclic" else 4 * self.n

    def __str__(self):
        return f"Z/{self.n}" if self.kind == "cyclic" else f"Z/2 x Z/{2 * self.n}"


def _sort_key(p: Point):
    # by x, then positive y before its negative
    return (0,) if p.is_infinity else (1, p.x, abs(p.y), p.y < 0)


def nagell_lutz_bound(c: Curve) -> int:
    """|disc(x^3 + a x^2 + b x)|; for a = 0 this is |4 b^3|."""
    return abs(c.discriminant)


def torsion_candidates(c: Curve) -> list[Point]:
    """Integral points with y = 0 or y^2 | disc, found by exact root extraction."""
    pts = {Point(0, 0)}
    disc_q = c.a * c.a - 4 * c.b
    if is_perfect_square(disc_q):
        s = integer_sqrt(disc_q)
        for num in (-c.a + s, -c.a - s):
            if num % 2 == 0:
                pts.add(Point(num // 2, 0))
    # y^2 | D: walk square divisors of D via its factorization
    ys = [1]
    for p, k in factorize(nagell_lutz_bound(c)).items():
        ys = [y * p**i for y in ys for i in range(k // 2 + 1)]
    for y in ys:
        y2 = y * y
        # an integer root of x^3 + a x^2 + b x - y^2 divides y^2
        for d in divisors(y2):
            for x in (d, -d):
                if c.rhs(x) == y2:
                    pts.add(Point(x, y))
                    pts.add(Point(x, -y))
    return sorted(pts, key=_sort_key)


def point_order(c: Curve, p: Point) -> int | None:
    """Order of p if it is torsion, else None.

    Multiples of a torsion point stay integral (Nagell-Lutz) and the order is
    at most 12 (Mazur), so leaving integrality or exceeding 12 proves p has
    infinite order.
    """
    q = p
    for n in range(1, MAX_TORSION_ORDER + 1):
        if q.is_infinity:
            return n
        if not is_integral(q):
            return None
        q = add(c, q, p)
    return None


def torsion_subgroup(c: Curve) -> TorsionStructure:
    orders = {INFINITY: 1}
    for p in torsion_candidates(c):
        n = point_order(c, p)
        if n is not None:
            orders[p] = n
    group = set(orders)
    for p in group:
        if negate(c, p) not in group or any(add(c, p, q) not in group for q in group):
            raise TorsionClassificationError(f"torsion set of {c} is not closed")
    size = len(group)
    two_torsion = [p for p, n in orders.items() if n == 2]
    ranked = sorted(orders, key=lambda p: (-orders[p], _sort_key(p)))
    if len(two_torsion) == 3:
        if size % 4:
            raise TorsionClassificationError(f"{c}: full 2-torsion but order {size}")
        n = size // 4
        g = ranked[0]  # order 2n
        if orders[g] != 2 * n:
            raise TorsionClassificationError(f"{c}: no element of order {2 * n}")
        multiple = scalar_mul(c, n, g)
        h = next(p for p in sorted(two_torsion, key=_sort_key) if p != multiple)
        structure = TorsionStructure("product", n, (h, g), tuple(sorted(group, key=_sort_key)))
    else:
        g = ranked[0]
        if orders[g] != size:
            raise TorsionClassificationError(f"{c}: torsion of order {size} is not cyclic")
        gens = () if size == 1 else (g,)
        structure = TorsionStructure("cyclic", size, gens, tuple(sorted(group, key=_sort_key)))
    return structure
