"""Fundamental-domain descriptors and their exact set operations.

Variants: IntegerInterval (inclusive endpoints, discrete groups), HalfOpenBox
(per-axis [lo, hi), continuous groups), FiniteSubset, CosetUnion (union of
shifted copies of a base domain) and Ball (Euclidean, closed).  Membership is
exact on rational coordinates; the half-open convention resolves boundaries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exact import as_fraction
from .exceptions import DomainParameterError, UnboundedWindowError
from .groups import GroupSpec, element_add, element_neg


@dataclass(frozen=True)
class IntegerInterval:
    lo: int
    hi: int  # inclusive

    def __post_init__(self):
        if self.hi < self.lo:
            raise DomainParameterError(f"empty integer interval [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class HalfOpenBox:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        if len(self.lo) != len(self.hi) or any(a >= b for a, b in zip(self.lo, self.hi)):
            raise DomainParameterError(f"degenerate box {self.lo} .. {self.hi}")


def interval(lo, hi) -> HalfOpenBox:
    """One-dimensional half-open interval [lo, hi)."""
    return HalfOpenBox((Fraction(lo),), (Fraction(hi),))


def box(lo, hi) -> HalfOpenBox:
    return HalfOpenBox(tuple(Fraction(a) for a in lo), tuple(Fraction(b) for b in hi))


@dataclass(frozen=True)
class FiniteSubset:
    points: tuple


@dataclass(frozen=True)
class CosetUnion:
    base: object
    shifts: tuple


@dataclass(frozen=True)
class Ball:
    radius: Fraction  # closed ball around 0

    def __post_init__(self):
        if self.radius < 0:
            raise DomainParameterError("ball radius must be nonnegative")


def coords(p) -> tuple:
    return p if isinstance(p, tuple) else (p,)


def contains(dom, p, group: GroupSpec) -> bool:
    """Exact membership of p in dom inside the given group."""
    if isinstance(dom, IntegerInterval):
        return isinstance(p, int) and dom.lo <= p <= dom.hi
    if isinstance(dom, HalfOpenBox):
        return all(a <= x < b for x, a, b in zip(coords(p), dom.lo, dom.hi))
    if isinstance(dom, FiniteSubset):
        return p in dom.points
    if isinstance(dom, Ball):
        sq = sum(Fraction(x) ** 2 if as_fraction(x) is not None else float(x) ** 2 for x in coords(p))
        return sq <= dom.radius**2
    if isinstance(dom, CosetUnion):
        return any(contains(dom.base, element_add(group, p, element_neg(group, s)), group) for s in dom.shifts)
    raise DomainParameterError(f"unknown domain {dom!r}")


def measure(dom, group: GroupSpec) -> Fraction:
    """Exact Haar measure of dom under the group's normalization."""
    if isinstance(dom, IntegerInterval):
        if not group.is_discrete:
            raise DomainParameterError("integer interval needs a discrete group")
        return (dom.hi - dom.lo + 1) * group.point_mass
    if isinstance(dom, FiniteSubset):
        if not group.is_discrete:
            raise DomainParameterError("finite subset has measure zero in a continuous group")
        return len(dom.points) * group.point_mass
    if isinstance(dom, HalfOpenBox):
        if group.is_discrete:
            raise DomainParameterError("half-open box needs a continuous group")
        out = Fraction(1)
        for a, b in zip(dom.lo, dom.hi):
            out *= Fraction(b) - Fraction(a)
        return out
    if isinstance(dom, CosetUnion):
        # valid under the pairwise-disjointness the chain constructions certify
        return len(dom.shifts) * measure(dom.base, group)
    raise DomainParameterError(f"no exact measure for {dom!r}")


def iter_points(dom, group: GroupSpec):
    """Enumerate a discrete domain in deterministic order."""
    if isinstance(dom, IntegerInterval):
        yield from range(dom.lo, dom.hi + 1)
        return
    if isinstance(dom, FiniteSubset):
        yield from dom.points
        return
    if isinstance(dom, CosetUnion):
        for s in dom.shifts:
            for p in iter_points(dom.base, group):
                yield element_add(group, p, s)
        return
    raise DomainParameterError(f"{dom!r} is not enumerable")


def bounds(dom) -> tuple[tuple, tuple]:
    """Inclusive rational bounding box (lo, hi)."""
    if isinstance(dom, IntegerInterval):
        return (Fraction(dom.lo),), (Fraction(dom.hi),)
    if isinstance(dom, HalfOpenBox):
        return tuple(map(Fraction, dom.lo)), tuple(map(Fraction, dom.hi))
    if isinstance(dom, FiniteSubset):
        pts = [tuple(map(Fraction, coords(p))) for p in dom.points]
        dims = range(len(pts[0]))
        return (
            tuple(min(p[i] for p in pts) for i in dims),
            tuple(max(p[i] for p in pts) for i in dims),
        )
    if isinstance(dom, Ball):
        return (-dom.radius,), (dom.radius,)
    if isinstance(dom, CosetUnion):
        blo, bhi = bounds(dom.base)
        slo = [tuple(map(Fraction, coords(s))) for s in dom.shifts]
        dims = range(len(blo))
        return (
            tuple(blo[i] + min(s[i] for s in slo) for i in dims),
            tuple(bhi[i] + max(s[i] for s in slo) for i in dims),
        )
    raise DomainParameterError(f"no bounds for {dom!r}")


def is_bounded(dom) -> bool:
    try:
        bounds(dom)
    except DomainParameterError:
        return False
    return True


def require_bounded(dom):
    if not is_bounded(dom):
        raise UnboundedWindowError(f"window {dom!r} is unbounded")


def is_subset(a, b, group: GroupSpec) -> bool:
    """Structural subset test for the descriptor combinations in scope."""
    if isinstance(a, IntegerInterval) and isinstance(b, IntegerInterval):
        return b.lo <= a.lo and a.hi <= b.hi
    if isinstance(a, HalfOpenBox) and isinstance(b, HalfOpenBox):
        return all(bl <= al and ah <= bh for al, ah, bl, bh in zip(a.lo, a.hi, b.lo, b.hi))
    if isinstance(a, Ball) and isinstance(b, Ball):
        return a.radius <= b.radius
    if isinstance(a, Ball) and isinstance(b, HalfOpenBox):
        # closed ball fits in the half-open box iff radius < every half-width
        return all(bl <= -a.radius and a.radius < bh for bl, bh in zip(b.lo, b.hi))
    if isinstance(a, (IntegerInterval, FiniteSubset)):
        return all(contains(b, p, group) for p in iter_points(a, group))
    raise DomainParameterError(f"no subset test for {type(a).__name__} in {type(b).__name__}")


def grid_points(dom, total: int, scalar: bool = True) -> list:
    """About `total` rational grid points covering a box-like domain.

    scalar=True unwraps 1-tuples (T and the dual of Z use scalar coordinates;
    R^1 keeps tuples).
    """
    lo, hi = bounds(dom)
    s = len(lo)
    per_axis = max(2, round(total ** (1.0 / s)))
    if per_axis**s < total:
        per_axis += 1
    axes = []
    for a, b in zip(lo, hi):
        step = (Fraction(b) - Fraction(a)) / per_axis
        axes.append([Fraction(a) + j * step for j in range(per_axis)])
    unwrap = scalar and s == 1
    return [t[0] if unwrap else t for t in itertools.product(*axes)]


def random_points(dom, n: int, rng, scalar: bool = True) -> list:
    """n uniform float points in the bounding box of dom."""
    lo, hi = bounds(dom)
    unwrap = scalar and len(lo) == 1
    out = []
    for _ in range(n):
        t = tuple(float(a) + rng.random() * (float(b) - float(a)) for a, b in zip(lo, hi))
        out.append(t[0] if unwrap else t)
    return out


def domain_to_json(dom) -> dict:
    if isinstance(dom, IntegerInterval):
        return {"kind": "integer_interval", "lo": dom.lo, "hi": dom.hi}
    if isinstance(dom, HalfOpenBox):
        return {"kind": "box", "lo": [str(a) for a in dom.lo], "hi": [str(b) for b in dom.hi]}
    if isinstance(dom, FiniteSubset):
        return {"kind": "finite", "points": [_point_json(p) for p in dom.points]}
    if isinstance(dom, Ball):
        return {"kind": "ball", "radius": str(dom.radius)}
    if isinstance(dom, CosetUnion):
        return {
            "kind": "coset_union",
            "base": domain_to_json(dom.base),
            "shifts": [_point_json(s) for s in dom.shifts],
        }
    raise DomainParameterError(f"unserializable domain {dom!r}")


def domain_from_json(data: dict):
    kind = data["kind"]
    if kind == "integer_interval":
        return IntegerInterval(data["lo"], data["hi"])
    if kind == "box":
        return HalfOpenBox(tuple(Fraction(a) for a in data["lo"]), tuple(Fraction(b) for b in data["hi"]))
    if kind == "finite":
        return FiniteSubset(tuple(_point_from_json(p) for p in data["points"]))
    if kind == "ball":
        return Ball(Fraction(data["radius"]))
    if kind == "coset_union":
        return CosetUnion(domain_from_json(data["base"]), tuple(_point_from_json(s) for s in data["shifts"]))
    raise DomainParameterError(f"unknown domain kind {kind!r}")


def _point_json(p):
    if isinstance(p, tuple):
        return [_point_json(x) for x in p]
    if isinstance(p, (int, float)):
        return p
    return str(p)  # Fraction


def _point_from_json(v):
    if isinstance(v, list):
        return tuple(_point_from_json(x) for x in v)
    if isinstance(v, str):
        f = Fraction(v)
        return int(f) if f.denominator == 1 else f
    return v
