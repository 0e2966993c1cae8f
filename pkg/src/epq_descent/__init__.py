"""Rank bounds by 2-isogeny descent and Nagell-Lutz torsion for y^2 = x^3 + a x^2 + b x,
with tooling for the family y^2 = x^3 - 5pq x."""

from .curve import INFINITY, Curve, Point
from .descent import RankBounds, descend, rank_bounds
from .torsion import torsion_subgroup

__all__ = ["Curve", "Point", "INFINITY", "RankBounds", "descend", "rank_bounds", "torsion_subgroup"]
__version__ = "0.1.0"
