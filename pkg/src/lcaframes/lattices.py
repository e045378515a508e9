"""Uniform lattices in elementary LCA groups as scaled integer grids.

Every lattice in scope is {j * step : j} per axis, either over all of Z
(integers, Euclidean axes, annihilators in Z) or over range(order) for the
finite subgroups of Z_N and T.  Steps are exact rationals so membership and
coset arithmetic never rely on tolerances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import domains
from .exceptions import DomainParameterError, UnboundedWindowError
from .groups import CYCLIC, EUCLIDEAN, GroupSpec, dual_group


@dataclass(frozen=True)
class ScaledLattice:
    group: GroupSpec
    step: tuple
    order: tuple | None = None  # per-axis point count, None = infinite

    def __post_init__(self):
        if any(s <= 0 for s in self.step):
            raise DomainParameterError("lattice steps must be positive")

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    @property
    def size(self) -> int:
        if self.order is None:
            raise DomainParameterError("infinite lattice has no size")
        out = 1
        for n in self.order:
            out *= n
        return out

    def density(self) -> Fraction:
        """Haar measure of a fundamental domain, s(Lambda)."""
        out = Fraction(1)
        for s in self.step:
            out *= Fraction(s)
        if self.group.is_discrete:
            out *= self.group.point_mass
        return out

    def _scalar(self) -> bool:
        return self.group.kind != EUCLIDEAN

    def _point(self, js) -> object:
        vals = []
        for j, s in zip(js, self.step):
            v = j * Fraction(s)
            if v.denominator == 1:
                v = int(v)
            vals.append(v)
        return vals[0] if self._scalar() else tuple(vals)

    def contains(self, p) -> bool:
        # finite lattices live in compact groups whose canonical coordinates
        # make the range check automatic; only divisibility matters
        cs = domains.coords(p)
        if len(cs) != len(self.step):
            return False
        for x, s in zip(cs, self.step):
            q = Fraction(x) / Fraction(s)
            if q.denominator != 1:
                return False
        return True

    def points(self, window=None) -> list:
        """Lattice points (within window, if given), deterministically sorted."""
        if self.order is not None:
            ranges = [range(n) for n in self.order]
        else:
            if window is None:
                raise UnboundedWindowError("infinite lattice needs a bounded window")
            domains.require_bounded(window)
            lo, hi = domains.bounds(window)
            ranges = []
            for a, b, s in zip(lo, hi, self.step):
                s = Fraction(s)
                jlo = -((-Fraction(a)) // s)  # ceil(a/s)
                jhi = Fraction(b) // s  # floor(b/s)
                ranges.append(range(int(jlo), int(jhi) + 1))
        pts = (self._point(js) for js in itertools.product(*ranges))
        if window is not None:
            pts = (p for p in pts if domains.contains(window, p, self.group))
        return sorted(pts, key=_sort_key)


def _sort_key(p):
    return tuple(Fraction(x) for x in domains.coords(p))


def cyclic_sublattice(modulus: int, step: int, point_mass=1) -> ScaledLattice:
    """The subgroup step*Z_{modulus/step} of Z_modulus."""
    if modulus % step:
        raise DomainParameterError(f"step {step} does not divide modulus {modulus}")
    from .groups import cyclic_group

    return ScaledLattice(cyclic_group(modulus, point_mass), (Fraction(step),), (modulus // step,))


def cyclic_annihilator(lat: ScaledLattice) -> ScaledLattice:
    """Annihilator of a cyclic sublattice, inside the dual copy of Z_N."""
    if lat.group.kind != CYCLIC:
        raise DomainParameterError("cyclic_annihilator needs a Z_N lattice")
    n = lat.group.modulus
    g = int(lat.step[0])
    dual = dual_group(lat.group)
    return ScaledLattice(dual, (Fraction(n // g),), (g,))
