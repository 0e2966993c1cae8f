"""2-isogeny descent: candidate classes, torsor obstructions and witness search.

For a curve C: y^2 = x^3 + a x^2 + b x and a squarefree class d dividing b,
the torsor is N^2 = d M^4 + a M^2 e^2 + (b/d) e^4.  A solution with M, e != 0
is the same thing as a rational point with x = d M^2 / e^2, so the image of
the descent map on C(Q) is the set of classes whose torsor is solvable, plus
the images 1 and b of O and (0, 0).

Gcd side conditions.  With the canonical (squarefree) d the conditions
gcd(M, e) = gcd(N, e) = gcd(d, e) = 1 always hold for the primitive solution
attached to a point.  The conditions gcd(b2, M) = gcd(M, N) = 1 hold at every
prime p with p^2 not dividing b2; at primes with p^2 | b2 they may fail
(x = 20 M^2/e^2 = 5 (2M)^2/e^2), so they are only imposed where they are
implied.  For squarefree b this is the usual list of five conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

import numpy as np

from .arith import (
    SquareClass,
    class_mul,
    class_sort_key,
    factorize,
    is_squarefree,
    square_class,
    squarefree_classes,
)
from .curve import INFINITY, Curve, Point, add, isogenous_curve, on_curve

DEFAULT_TORSOR_BOUND = 1000
DEFAULT_POINT_BOUND = 10_000
DEFAULT_MODULUS_CAP = 10_000
FIXED_MODULI = (4, 8, 16, 5, 3, 7, 11, 13)


class Side(str, Enum):
    GAMMA = "gamma"
    GAMMA_BAR = "gamma_bar"


@dataclass(frozen=True)
class Torsor:
    """N^2 = b1 M^4 + a M^2 e^2 + b2 e^4."""

    b1: int
    a: int
    b2: int

    def __post_init__(self):
        if not is_squarefree(self.b1):
            raise ValueError(f"b1 must be squarefree and nonzero, got {self.b1}")
        if self.b2 == 0:
            raise ValueError("b2 must be nonzero")

    def value(self, M: int, e: int) -> int:
        M2, e2 = M * M, e * e
        return self.b1 * M2 * M2 + self.a * M2 * e2 + self.b2 * e2 * e2

    def curve(self) -> Curve:
        return Curve(self.a, self.b1 * self.b2)


@dataclass(frozen=True)
class TorsorWitness:
    N: int
    M: int
    e: int


@dataclass(frozen=True)
class Solved:
    witness: TorsorWitness


@dataclass(frozen=True)
class Obstructed:
    modulus: int


@dataclass(frozen=True)
class Unknown:
    search_bound: int


@dataclass(frozen=True)
class Excluded:
    """Not in the image: the product with a confirmed class is obstructed."""

    via: SquareClass


TorsorStatus = Union[Solved, Obstructed, Unknown, Excluded]


@dataclass(frozen=True)
class RankBounds:
    lower: int
    upper: int

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper:
            raise ValueError(f"invalid rank bounds ({self.lower}, {self.upper})")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


@dataclass
class DescentReport:
    curve: Curve  # the curve whose descent image this is (E or its isogenous curve)
    side: Side
    confirmed: frozenset
    possible: frozenset
    per_torsor: dict = field(default_factory=dict)

    def torsor(self, d: SquareClass) -> Torsor:
        return torsor_for(self.curve, d)


# -- witnesses and points ---------------------------------------------------


def witness_problems(t: Torsor, w: TorsorWitness) -> list[str]:
    """Reasons why w is not an admissible solution of t (empty list if it is)."""
    problems = []
    if w.M == 0 or w.e == 0:
        problems.append("M and e must be nonzero")
    if w.N * w.N != t.value(w.M, w.e):
        problems.append("torsor equation fails")
    for name, g in (("gcd(N,e)", math.gcd(w.N, w.e)), ("gcd(M,e)", math.gcd(w.M, w.e)),
                    ("gcd(b1,e)", math.gcd(t.b1, w.e))):
        if g != 1:
            problems.append(f"{name} = {g}")
    for name, g in (("gcd(b2,M)", math.gcd(t.b2, w.M)), ("gcd(M,N)", math.gcd(w.M, w.N))):
        if g != 1 and any(t.b2 % (p * p) for p in factorize(g)):
            problems.append(f"{name} = {g}")
    return problems


def is_valid_witness(t: Torsor, w: TorsorWitness) -> bool:
    return not witness_problems(t, w)


def witness_to_point(t: Torsor, w: TorsorWitness) -> Point:
    """The point (b1 M^2/e^2, b1 M N/e^3) on y^2 = x^3 + a x^2 + b1 b2 x."""
    return Point(Fraction(t.b1 * w.M * w.M, w.e * w.e), Fraction(t.b1 * w.M * w.N, w.e**3))


def point_to_witness(c: Curve, p: Point) -> tuple[SquareClass, TorsorWitness]:
    """Class of x(p) and the primitive torsor solution attached to p."""
    if p.is_infinity or p.x == 0:
        raise ValueError("O and (0,0) have no torsor witness")
    u, v = p.x.numerator, p.x.denominator
    e = math.isqrt(v)
    d = square_class(u)
    M = math.isqrt(u // d)
    if e * e != v or d * M * M != u:
        raise ValueError(f"{p} is not a rational point of {c}")
    N = p.y * e**3 / (d * M)
    if N.denominator != 1:
        raise ValueError(f"{p} is not a rational point of {c}")
    return d, TorsorWitness(abs(N.numerator), M, e)


def torsor_for(c: Curve, d: SquareClass) -> Torsor:
    if c.b % d:
        raise ValueError(f"class {d} does not divide {c.b}")
    return Torsor(d, c.a, c.b // d)


# -- candidate classes and local obstructions --------------------------------


def real_insolvable(b1: int, middle: int, b2: int) -> bool:
    """True when b1 t^2 + middle t + b2 < 0 for every real t > 0."""
    if b1 > 0 or b2 > 0:
        return False
    return middle <= 0 or middle * middle < 4 * b1 * b2


def candidate_classes(coefficient: int, middle: int) -> set[SquareClass]:
    """Square classes dividing coefficient that survive the real-place test."""
    if coefficient == 0:
        raise ValueError("coefficient must be nonzero")
    keep = {1, square_class(coefficient)}
    return {
        d for d in squarefree_classes(coefficient)
        if d in keep or not real_insolvable(d, middle, coefficient // d)
    }


def obstruction_moduli(t: Torsor) -> list[int]:
    """Moduli tried by search_torsor, in the order they are tried.

    Odd primes dividing b1*b2 come first (that is where obstructions live),
    then the fixed small moduli.
    """
    bad = [p for p in factorize(t.b1 * t.b2) if p % 2]
    out = []
    for m in (*bad, *FIXED_MODULI):
        if m not in out:
            out.append(m)
    return out


@lru_cache(maxsize=65536)
def _prime_power_obstructs(b1: int, a: int, b2: int, p: int, k: int, b2_sq: bool) -> bool:
    # b1, a, b2 are reduced mod p^k; b2_sq says whether p^2 | b2 over Z.
    # Admissible (M, e) pairs are classified up to scaling by units of Z/p^k,
    # which multiplies the right-hand side by a fourth power and N by a square.
    m = p**k
    squares_any = {n * n % m for n in range(m)}
    squares_unit = {n * n % m for n in range(m) if n % p}
    p_b1 = b1 % p == 0
    p_b2 = b2 % p == 0
    for t in range(m):  # M = 1, e = t
        e_div = t % p == 0
        if e_div and p_b1:
            continue
        t2 = t * t % m
        r = (b1 + a * t2 + b2 * t2 * t2) % m
        if r in (squares_unit if e_div else squares_any):
            return False
    if p_b2 and not b2_sq:
        return True
    for s in range(0, m, p):  # p | M, e = 1
        s2 = s * s % m
        r = (b1 * s2 * s2 + a * s2 + b2) % m
        if r in (squares_any if b2_sq else squares_unit):
            return False
    return True


def local_obstruction(t: Torsor, m: int, cap: int = DEFAULT_MODULUS_CAP) -> bool:
    """True iff the torsor has no admissible solution modulo m.

    A True answer proves that the torsor has no integer solution.
    """
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if m > cap:
        raise ValueError(f"modulus {m} exceeds the enumeration cap {cap}")
    for p, k in factorize(m).items():
        q = p**k
        if _prime_power_obstructs(t.b1 % q, t.a % q, t.b2 % q, p, k, t.b2 % (p * p) == 0):
            return True
    return False


REAL_PLACE = -1  # Obstructed.modulus for an obstruction over the reals


def find_obstruction(t: Torsor, cap: int = DEFAULT_MODULUS_CAP) -> int | None:
    """First obstructing modulus, REAL_PLACE, or None."""
    if real_insolvable(t.b1, t.a, t.b2):
        return REAL_PLACE
    for m in obstruction_moduli(t):
        if m <= cap and local_obstruction(t, m, cap):
            return m
    return None


# -- global search ----------------------------------------------------------

_SIEVE_MODULI = (64, 63, 65, 11)
_SIEVE_TABLES = {m: np.isin(np.arange(m), [n * n % m for n in range(m)]) for m in _SIEVE_MODULI}


def _rows_candidates(t: Torsor, e: int, M: np.ndarray) -> np.ndarray:
    """Entries of M for which b1 M^4 + a M^2 e^2 + b2 e^4 may be a square."""
    keep = np.gcd(M, e) == 1
    for m, table in _SIEVE_TABLES.items():
        Mr = M % m
        M2 = Mr * Mr % m
        e2 = e * e % m
        r = ((t.b1 % m) * (M2 * M2 % m) + (t.a % m) * M2 % m * e2 + (t.b2 % m) * (e2 * e2 % m)) % m
        keep &= table[r]
    return M[keep]


def _scan(t: Torsor, lo: int, hi: int) -> list[TorsorWitness]:
    # all admissible solutions with lo < max(M, e) <= hi
    found = []
    for e in range(1, hi + 1):
        if math.gcd(t.b1, e) != 1:
            continue
        start = lo + 1 if e <= lo else 1
        M = np.arange(start, hi + 1, dtype=np.int64)
        for Mi in _rows_candidates(t, e, M).tolist():
            r = t.value(Mi, e)
            if r < 0:
                continue
            n = math.isqrt(r)
            if n * n == r:
                w = TorsorWitness(n, Mi, e)
                if is_valid_witness(t, w):
                    found.append(w)
    return found


def search_witness(t: Torsor, bound: int) -> TorsorWitness | None:
    """Smallest admissible solution with 1 <= M, e <= bound, ordered by (max(M, e), M, e)."""
    if bound < 1:
        raise ValueError(f"search bound must be positive, got {bound}")
    lo, hi = 0, 1
    while lo < bound:
        hi = min(hi, bound)
        found = _scan(t, lo, hi)
        if found:
            return min(found, key=lambda w: (max(w.M, w.e), w.M, w.e))
        lo, hi = hi, 2 * hi
    return None


def search_torsor(t: Torsor, bound: int, cap: int = DEFAULT_MODULUS_CAP) -> TorsorStatus:
    """Obstruction moduli first, then a bounded witness search."""
    if bound < 1:
        raise ValueError(f"search bound must be positive, got {bound}")
    m = find_obstruction(t, cap)
    if m is not None:
        return Obstructed(m)
    w = search_witness(t, bound)
    return Solved(w) if w is not None else Unknown(bound)


# -- descent on one side ----------------------------------------------------


def side_curve(c: Curve, side: Side) -> Curve:
    return c if side is Side.GAMMA else isogenous_curve(c)


def largest_subgroup(confirmed: set, allowed: set) -> frozenset:
    """Largest subgroup of Q*/Q*^2 with confirmed <= H <= allowed.

    confirmed must be a subgroup inside allowed.  Ties are broken by trying
    generators in class_sort_key order, so the answer is deterministic.
    """
    best = frozenset(confirmed)
    if all(class_mul(x, y) in allowed for x in allowed for y in allowed):
        return frozenset(allowed)
    cands = sorted(allowed - best, key=class_sort_key)

    def grow(H: frozenset, start: int) -> None:
        nonlocal best
        if len(H) + len(allowed - H) <= len(best):
            return
        for i in range(start, len(cands)):
            g = cands[i]
            if g in H:
                continue
            coset = {class_mul(h, g) for h in H}
            if coset <= allowed:
                bigger = H | coset
                if len(bigger) > len(best):
                    best = bigger
                grow(bigger, i + 1)

    grow(best, 0)
    return best


def descent_side(
    c: Curve,
    side: Side,
    bound: int = DEFAULT_TORSOR_BOUND,
    points: Iterable[Point] = (),
    cap: int = DEFAULT_MODULUS_CAP,
) -> DescentReport:
    """Descent image of one side of the isogeny.

    points are known rational points on the side's curve; their classes are
    confirmed before any search.
    """
    if bound < 1:
        raise ValueError(f"search bound must be positive, got {bound}")
    curve = side_curve(c, side)
    coef = curve.b
    trivial = {1, square_class(coef)}
    group = squarefree_classes(coef)
    candidates = candidate_classes(coef, curve.a)
    order = sorted(candidates - trivial, key=class_sort_key)

    # reps maps each confirmed class to a point realising it
    reps: dict[SquareClass, Point] = {1: INFINITY, square_class(coef): Point(0, 0)}

    def absorb(P: Point) -> None:
        if P.is_infinity or P.x == 0:
            return
        d, _ = point_to_witness(curve, P)
        if d in reps:
            return
        for known, Q in list(reps.items()):
            reps[class_mul(known, d)] = add(curve, Q, P)

    for P in points:
        if not on_curve(curve, P):
            raise ValueError(f"seed point {P} is not on {curve}")
        absorb(P)

    status: dict[SquareClass, TorsorStatus] = {}
    for d in order:
        m = find_obstruction(torsor_for(curve, d), cap)
        if m is not None:
            status[d] = Obstructed(m)
    obstructed = set(status) | (group - candidates)

    def excluded_by(d: SquareClass) -> SquareClass | None:
        for known in sorted(reps, key=class_sort_key):
            if class_mul(known, d) in obstructed:
                return known
        return None

    for d in order:
        if d in status or d in reps or excluded_by(d) is not None:
            continue
        t = torsor_for(curve, d)
        w = search_witness(t, bound)
        if w is None:
            status[d] = Unknown(bound)
        else:
            absorb(witness_to_point(t, w))
            status[d] = Solved(w)

    for d in order:
        if d in reps:
            if isinstance(status.get(d), Obstructed):
                raise RuntimeError(f"class {d} is both obstructed and confirmed on {curve}")
            if not isinstance(status.get(d), Solved):
                status[d] = Solved(point_to_witness(curve, reps[d])[1])
        else:
            via = excluded_by(d)
            if via is not None and not isinstance(status.get(d), Obstructed):
                status[d] = Excluded(via)

    confirmed = frozenset(reps)
    forbidden = (group - candidates) | {d for d, s in status.items() if isinstance(s, (Obstructed, Excluded))}
    possible = largest_subgroup(set(confirmed), group - forbidden)
    return DescentReport(
        curve=curve,
        side=side,
        confirmed=confirmed,
        possible=possible,
        per_torsor={d: status[d] for d in order},
    )


def _log2(n: int) -> int:
    return n.bit_length() - 1


def bounds_from_reports(gamma: DescentReport, gamma_bar: DescentReport) -> RankBounds:
    lower = _log2(len(gamma.confirmed)) + _log2(len(gamma_bar.confirmed)) - 2
    upper = _log2(len(gamma.possible)) + _log2(len(gamma_bar.possible)) - 2
    return RankBounds(max(lower, 0), max(upper, 0))


@dataclass
class Descent:
    curve: Curve
    gamma: DescentReport
    gamma_bar: DescentReport
    bounds: RankBounds


def descend(
    c: Curve,
    bound: int = DEFAULT_TORSOR_BOUND,
    point_bound: int | None = None,
    cap: int = DEFAULT_MODULUS_CAP,
) -> Descent:
    """Both sides of the descent.  A point search up to point_bound is run
    only when the torsor search leaves the rank undetermined."""
    gamma = descent_side(c, Side.GAMMA, bound, cap=cap)
    gamma_bar = descent_side(c, Side.GAMMA_BAR, bound, cap=cap)
    bounds = bounds_from_reports(gamma, gamma_bar)
    if point_bound and not bounds.exact:
        if len(gamma.confirmed) < len(gamma.possible):
            gamma = descent_side(c, Side.GAMMA, bound, point_search(c, point_bound), cap)
        if len(gamma_bar.confirmed) < len(gamma_bar.possible):
            cbar = isogenous_curve(c)
            gamma_bar = descent_side(c, Side.GAMMA_BAR, bound, point_search(cbar, point_bound), cap)
        bounds = bounds_from_reports(gamma, gamma_bar)
    return Descent(c, gamma, gamma_bar, bounds)


def rank_bounds(c: Curve, bound: int = DEFAULT_TORSOR_BOUND, point_bound: int | None = None) -> RankBounds:
    return descend(c, bound, point_bound).bounds


# -- naive point search -----------------------------------------------------


def point_search(c: Curve, height_bound: int) -> list[Point]:
    """Points with x = u/w^2, |u| <= height_bound, w <= ceil(sqrt(height_bound)), y != 0."""
    if height_bound < 1:
        raise ValueError(f"height bound must be positive, got {height_bound}")
    W = math.isqrt(height_bound - 1) + 1
    u_all = np.arange(-height_bound, height_bound + 1, dtype=np.int64)
    u_all = u_all[u_all != 0]
    out = []
    for w in range(1, W + 1):
        w2 = w * w
        keep = np.gcd(u_all, w) == 1
        for m, table in _SIEVE_TABLES.items():
            ur = u_all % m
            r = ur * ((ur * ur + (c.a * w2 % m) * ur + (c.b * w2 * w2 % m)) % m) % m
            keep &= table[r]
        for u in u_all[keep].tolist():
            # y^2 = (u^3 + a u^2 w^2 + b u w^4) / w^6
            num = u * (u * u + c.a * u * w2 + c.b * w2 * w2)
            if num <= 0:
                continue
            s = math.isqrt(num)
            if s * s == num:
                x = Fraction(u, w2)
                y = Fraction(s, w2 * w)
                out.extend((Point(x, y), Point(x, -y)))
    return out
