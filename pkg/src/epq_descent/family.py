"""The family E_pq: y^2 = x^3 - 5pq x and its rank/torsion theorems."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import integer_sqrt, is_perfect_square, is_prime, is_squarefree
from .curve import Curve
from .descent import DEFAULT_TORSOR_BOUND, Descent, RankBounds, Solved, descend
from .torsion import TorsionStructure, torsion_subgroup

TABLE1 = ((73, 7), (113, 7), (73, 47), (113, 47), (73, 127), (113, 127))
TABLE2 = ((2, 2), (2, 5), (2, 8), (7, 5), (10, 5), (7, 8))
TABLE2_RANK = 1


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyParams:
    p: int
    q: int
    k: int | None = None
    l: int | None = None

    def __post_init__(self):
        problems = family_problems(self.p, self.q)
        if self.k is not None and self.p != 40 * self.k + 33:
            problems.append(f"p = {self.p} is not 40k + 33 for k = {self.k}")
        if self.l is not None and self.q != 40 * self.l + 27:
            problems.append(f"q = {self.q} is not 40l + 27 for l = {self.l}")
        if problems:
            raise FamilyError("; ".join(problems))

    @classmethod
    def from_kl(cls, k: int, l: int) -> "FamilyParams":
        return cls(40 * k + 33, 40 * l + 27, k, l)


def family_problems(p: int, q: int) -> list[str]:
    problems = []
    for name, v in (("p", p), ("q", q)):
        if not is_prime(v):
            problems.append(f"{name} = {v} is not prime")
        elif v == 2:
            problems.append(f"{name} = 2 is not odd")
        elif v == 5:
            problems.append(f"{name} = 5 makes 5pq non-squarefree")
    if p == q:
        problems.append("p and q must be distinct")
    return problems


def curve_of(params: FamilyParams) -> Curve:
    return Curve(0, -5 * params.p * params.q)


def _require_primes(*values: int) -> None:
    bad = [v for v in values if not is_prime(v)]
    if bad:
        raise FamilyError(", ".join(f"{v} is not prime" for v in bad))


def satisfies_thm11(p: int, q: int) -> bool:
    """p = 33 (mod 40) and q = 7 (mod 40)."""
    _require_primes(p, q)
    return p % 40 == 33 and q % 40 == 7


def satisfies_weak_congruences(p: int, q: int) -> bool:
    """The weakened hypothesis p = 33 (mod 40), q = 7 (mod 20)."""
    _require_primes(p, q)
    return p % 40 == 33 and q % 20 == 7


@dataclass(frozen=True)
class RankOneCondition:
    p: int
    q: int
    value: int
    satisfied: bool
    statement_value: int
    statement_satisfied: bool


def thm12_condition(k: int, l: int) -> RankOneCondition:
    """Perfect-square test for p = 40k + 33, q = 40l + 27.

    value is 5k + 25l + 21, the quantity with 2p + 10q = 16 value that makes
    (4 sqrt(value), 1, 1) solve N^2 = 2p M^4 + 10q e^4.  The transposed
    expression 25k + 5l + 21 is reported alongside as statement_value.
    """
    p, q = 40 * k + 33, 40 * l + 27
    _require_primes(p, q)
    value = 5 * k + 25 * l + 21
    statement = 25 * k + 5 * l + 21
    return RankOneCondition(p, q, value, is_perfect_square(value), statement, is_perfect_square(statement))


@dataclass
class TheoremVerdict:
    theorem: str
    hypothesis_met: bool
    bounds: RankBounds
    torsion: TorsionStructure | None
    expected_rank: int
    matches_claim: bool
    resolved: bool
    notes: list[str] = field(default_factory=list)
    descent: Descent | None = None

    @property
    def status(self) -> str:
        if self.matches_claim:
            return "MATCH"
        return "UNRESOLVED" if not self.resolved else "MISMATCH"


def thm11_verdict(result: Descent, tors: TorsionStructure) -> TheoremVerdict:
    """Compare a finished descent and torsion computation with rank 0, Z/2."""
    z2 = tors.kind == "cyclic" and tors.n == 2
    ok = result.bounds == RankBounds(0, 0) and z2
    notes = [] if z2 else [f"torsion is {tors}, expected Z/2"]
    return TheoremVerdict("1.1", True, result.bounds, tors, 0, ok, True, notes, result)


def verify_thm11(p: int, q: int, bound: int = DEFAULT_TORSOR_BOUND, point_bound: int | None = None) -> TheoremVerdict:
    """Rank 0 and torsion Z/2 under p = 33, q = 7 (mod 40)."""
    if not satisfies_thm11(p, q):
        raise FamilyError(f"({p}, {q}) does not satisfy p = 33, q = 7 (mod 40)")
    result = descend(curve_of(FamilyParams(p, q)), bound, point_bound)
    return thm11_verdict(result, torsion_subgroup(result.curve))


def thm12_verdict(k: int, l: int, result: Descent) -> TheoremVerdict:
    """Compare a finished descent of E_pq, p = 40k + 33, q = 40l + 27, with rank 1.

    A pair whose interval still contains 1 without being (1, 1) is
    unresolved rather than a mismatch.
    """
    cond = thm12_condition(k, l)
    b = result.bounds
    notes = [
        f"5k+25l+21 = {cond.value} ({'square' if cond.satisfied else 'not a square'})",
        f"25k+5l+21 = {cond.statement_value} ({'square' if cond.statement_satisfied else 'not a square'})",
    ]
    st = result.gamma_bar.per_torsor.get(2 * cond.p)
    if isinstance(st, Solved):
        w = st.witness
        notes.append(f"class 2p witness (N, M, e) = ({w.N}, {w.M}, {w.e})")
    if cond.satisfied:
        notes.append(f"predicted witness ({4 * integer_sqrt(cond.value)}, 1, 1)")
    contains = b.lower <= TABLE2_RANK <= b.upper
    return TheoremVerdict(
        "1.2", cond.satisfied, b, None, TABLE2_RANK,
        matches_claim=b == RankBounds(TABLE2_RANK, TABLE2_RANK),
        resolved=b.exact or not contains,
        notes=notes,
        descent=result,
    )


def verify_thm12(k: int, l: int, bound: int = DEFAULT_TORSOR_BOUND, point_bound: int | None = None) -> TheoremVerdict:
    """Rank 1 for p = 40k + 33, q = 40l + 27 (any prime pair of that shape;
    hypothesis_met records the perfect-square condition)."""
    params = FamilyParams.from_kl(k, l)
    return thm12_verdict(k, l, descend(curve_of(params), bound, point_bound))


def twist_curve(c: Curve, m: int) -> Curve:
    """Quadratic twist y^2 = x^3 + m a x^2 + m^2 b x."""
    if not is_squarefree(m):
        raise ValueError(f"twist parameter must be squarefree and nonzero, got {m}")
    return Curve(m * c.a, m * m * c.b)


def rank_over_quadratic_field(c: Curve, m: int, bound: int = DEFAULT_TORSOR_BOUND,
                              point_bound: int | None = None) -> RankBounds:
    """Rank bounds over Q(sqrt m) as the sum over E and its m-twist."""
    own = descend(c, bound, point_bound).bounds
    tw = twist_curve(c, m)
    other = own if tw == c else descend(tw, bound, point_bound).bounds
    return RankBounds(own.lower + other.lower, own.upper + other.upper)


def rank_over_Qi(p: int, q: int, bound: int = DEFAULT_TORSOR_BOUND, point_bound: int | None = None) -> RankBounds:
    return rank_over_quadratic_field(curve_of(FamilyParams(p, q)), -1, bound, point_bound)


def _primes_below(limit: int, residue: int, modulus: int = 40) -> list[int]:
    return [n for n in range(residue, limit, modulus) if is_prime(n)]


def scan_pairs(theorem: str, limit: int, all_congruent: bool = False) -> list[FamilyParams]:
    """Prime pairs below limit meeting the congruences of theorem "1.1" or "1.2".

    For "1.2" the perfect-square condition is also required unless
    all_congruent is set.
    """
    if limit < 1:
        raise ValueError(f"limit must be positive, got {limit}")
    if theorem == "1.1":
        return [FamilyParams(p, q) for p in _primes_below(limit, 33) for q in _primes_below(limit, 7)]
    if theorem == "1.2":
        out = []
        for p in _primes_below(limit, 33):
            for q in _primes_below(limit, 27):
                k, l = (p - 33) // 40, (q - 27) // 40
                if all_congruent or thm12_condition(k, l).satisfied:
                    out.append(FamilyParams(p, q, k, l))
        return out
    raise ValueError(f"unknown theorem {theorem!r}; expected '1.1' or '1.2'")


def doubled(b: RankBounds) -> RankBounds:
    return RankBounds(2 * b.lower, 2 * b.upper)


@dataclass
class FamilyResult:
    params: FamilyParams
    descent: Descent
    torsion: TorsionStructure
    rank_over_Qi: RankBounds
    verdicts: list[TheoremVerdict]


def analyse(params: FamilyParams, bound: int = DEFAULT_TORSOR_BOUND, point_bound: int | None = None) -> FamilyResult:
    """One descent and torsion computation for E_pq, with every applicable verdict.

    E_pq is its own (-1)-twist, so the rank over Q(i) is twice the rank over Q.
    """
    c = curve_of(params)
    result = descend(c, bound, point_bound)
    tors = torsion_subgroup(c)
    verdicts = []
    p, q = params.p, params.q
    if satisfies_thm11(p, q):
        verdicts.append(thm11_verdict(result, tors))
    if p % 40 == 33 and q % 40 == 27:
        verdicts.append(thm12_verdict((p - 33) // 40, (q - 27) // 40, result))
    if satisfies_weak_congruences(p, q):
        b = result.bounds
        ok = b.upper <= 1
        verdicts.append(TheoremVerdict("rank<=1", True, b, None, 1, ok, True,
                                       [] if ok else [f"upper bound {b.upper} exceeds 1"], result))
    assert twist_curve(c, -1) == c
    return FamilyResult(params, result, tors, doubled(result.bounds), verdicts)
