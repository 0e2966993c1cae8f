"""JSON-ready dictionaries for descent, torsion and family results, and back.

Square classes and integers are emitted as JSON integers, rationals as
decimal "num/den" strings.  Key order is fixed so equal inputs give
byte-identical documents.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .arith import class_sort_key
from .curve import Curve, Point
from .descent import (
    Descent,
    DescentReport,
    Excluded,
    Obstructed,
    RankBounds,
    Side,
    Solved,
    TorsorStatus,
    TorsorWitness,
    Unknown,
)
from .family import FamilyResult, TheoremVerdict
from .torsion import TorsionStructure

SCHEMA_VERSION = "1.0"


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _classes(s) -> list[int]:
    return sorted(s, key=class_sort_key)


def curve_to_dict(c: Curve) -> dict:
    return {"a": c.a, "b": c.b}


def curve_from_dict(d: dict) -> Curve:
    return Curve(d["a"], d["b"])


def point_to_dict(p: Point) -> dict | None:
    if p.is_infinity:
        return None
    return {"x": str(p.x), "y": str(p.y)}


def point_from_dict(d: dict | None) -> Point:
    if d is None:
        return Point()
    return Point(Fraction(d["x"]), Fraction(d["y"]))


def status_to_dict(s: TorsorStatus) -> dict:
    if isinstance(s, Solved):
        w = s.witness
        return {"status": "solved", "witness": {"N": w.N, "M": w.M, "e": w.e}}
    if isinstance(s, Obstructed):
        return {"status": "obstructed", "modulus": s.modulus}
    if isinstance(s, Unknown):
        return {"status": "unknown", "search_bound": s.search_bound}
    if isinstance(s, Excluded):
        return {"status": "excluded", "via": s.via}
    raise TypeError(f"not a torsor status: {s!r}")


def status_from_dict(d: dict) -> TorsorStatus:
    kind = d["status"]
    if kind == "solved":
        w = d["witness"]
        return Solved(TorsorWitness(w["N"], w["M"], w["e"]))
    if kind == "obstructed":
        return Obstructed(d["modulus"])
    if kind == "unknown":
        return Unknown(d["search_bound"])
    if kind == "excluded":
        return Excluded(d["via"])
    raise ValueError(f"unknown torsor status {kind!r}")


def side_to_dict(r: DescentReport) -> dict:
    torsors = []
    for d in _classes(r.per_torsor):
        t = r.torsor(d)
        torsors.append({"class": d, "b1": t.b1, "a": t.a, "b2": t.b2, **status_to_dict(r.per_torsor[d])})
    return {
        "side": r.side.value,
        "curve": curve_to_dict(r.curve),
        "confirmed": _classes(r.confirmed),
        "possible": _classes(r.possible),
        "torsors": torsors,
    }


def side_from_dict(d: dict) -> DescentReport:
    return DescentReport(
        curve=curve_from_dict(d["curve"]),
        side=Side(d["side"]),
        confirmed=frozenset(d["confirmed"]),
        possible=frozenset(d["possible"]),
        per_torsor={t["class"]: status_from_dict(t) for t in d["torsors"]},
    )


def bounds_to_dict(b: RankBounds) -> dict:
    return {"lower": b.lower, "upper": b.upper}


def bounds_from_dict(d: dict) -> RankBounds:
    return RankBounds(d["lower"], d["upper"])


def descent_to_dict(r: Descent) -> dict:
    return {
        "curve": curve_to_dict(r.curve),
        "gamma": side_to_dict(r.gamma),
        "gamma_bar": side_to_dict(r.gamma_bar),
        "rank": bounds_to_dict(r.bounds),
    }


def descent_from_dict(d: dict) -> Descent:
    return Descent(
        curve_from_dict(d["curve"]),
        side_from_dict(d["gamma"]),
        side_from_dict(d["gamma_bar"]),
        bounds_from_dict(d["rank"]),
    )


def torsion_to_dict(t: TorsionStructure) -> dict:
    return {
        "structure": str(t),
        "kind": t.kind,
        "n": t.n,
        "order": t.order,
        "generators": [point_to_dict(g) for g in t.generators],
        "points": [point_to_dict(p) for p in t.points],
    }


def torsion_from_dict(d: dict) -> TorsionStructure:
    return TorsionStructure(
        d["kind"], d["n"],
        tuple(point_from_dict(g) for g in d["generators"]),
        tuple(point_from_dict(p) for p in d["points"]),
    )


def verdict_to_dict(v: TheoremVerdict) -> dict:
    return {
        "theorem": v.theorem,
        "hypothesis_met": v.hypothesis_met,
        "rank": bounds_to_dict(v.bounds),
        "expected_rank": v.expected_rank,
        "matches_claim": v.matches_claim,
        "resolved": v.resolved,
        "status": v.status,
        "notes": list(v.notes),
    }


def verdict_from_dict(d: dict) -> TheoremVerdict:
    return TheoremVerdict(
        d["theorem"], d["hypothesis_met"], bounds_from_dict(d["rank"]), None,
        d["expected_rank"], d["matches_claim"], d["resolved"], list(d["notes"]),
    )


def family_to_dict(f: FamilyResult) -> dict:
    params = {"p": f.params.p, "q": f.params.q}
    if f.params.k is not None:
        params.update(k=f.params.k, l=f.params.l)
    return {
        "family": params,
        **descent_to_dict(f.descent),
        "torsion": torsion_to_dict(f.torsion),
        "rank_over_Qi": bounds_to_dict(f.rank_over_Qi),
        "verdicts": [verdict_to_dict(v) for v in f.verdicts],
    }


def document(command: str, parameters: dict, body: dict[str, Any]) -> dict:
    """Top-level machine-format document; timing is never part of it."""
    return {"schema_version": SCHEMA_VERSION, "command": command, "parameters": parameters, **body}
