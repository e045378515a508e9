"""Elementary LCA groups, their duals, Haar normalizations and characters.

Four group variants are modeled concretely: the cyclic group Z_N, the
integers Z, the circle T = [0,1) and Euclidean space R^s.  Each fixes a dual
(Z_N <-> Z_N, Z <-> T, R^s <-> R^s) and a Haar normalization chosen so the
Fourier inversion formula holds with no extra constants:

    Z    counting            T (dual)    Lebesgue, total mass 1
    Z_N  counting            Z_N (dual)  counting / N
    T    Lebesgue, mass 1    Z (dual)    counting
    R^s  Lebesgue            R^s (dual)  Lebesgue

Element coordinates: int for Z and Z_N (reduced mod N), rational-or-float in
[0,1) for T, tuples for R^s.  Lattice data stays rational for exactness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from .exact import Radical, as_fraction, cis, cis_exact
from .exceptions import DomainParameterError, VariantMismatchError

CYCLIC = "cyclic"
INTEGERS = "integers"
TORUS = "torus"
EUCLIDEAN = "euclidean"


@dataclass(frozen=True)
class GroupSpec:
    """One elementary LCA group together with its Haar normalization.

    point_mass is the Haar measure of a single point for discrete groups
    (None for T and R^s); it distinguishes Z_N as a primal group (mass 1)
    from Z_N as a dual group (mass 1/N).
    """

    kind: str
    modulus: int | None = None
    dimension: int = 1
    point_mass: Fraction | None = None

    @property
    def is_discrete(self) -> bool:
        return self.point_mass is not None

    @property
    def is_compact(self) -> bool:
        return self.kind in (CYCLIC, TORUS)

    def describe(self) -> str:
        if self.kind == CYCLIC:
            return f"Z_{self.modulus}"
        if self.kind == EUCLIDEAN:
            return f"R^{self.dimension}"
        return {INTEGERS: "Z", TORUS: "T"}[self.kind]


def cyclic_group(modulus: int, point_mass=1) -> GroupSpec:
    if not isinstance(modulus, int) or modulus < 2:
        raise DomainParameterError(f"cyclic modulus must be an integer >= 2, got {modulus}")
    return GroupSpec(CYCLIC, modulus=modulus, point_mass=Fraction(point_mass))


def integer_group() -> GroupSpec:
    return GroupSpec(INTEGERS, point_mass=Fraction(1))


def torus_group() -> GroupSpec:
    return GroupSpec(TORUS)


def euclidean_group(dimension: int) -> GroupSpec:
    if not isinstance(dimension, int) or dimension < 1:
        raise DomainParameterError(f"euclidean dimension must be a positive integer, got {dimension}")
    return GroupSpec(EUCLIDEAN, dimension=dimension)


def dual_group(group: GroupSpec) -> GroupSpec:
    """The dual group, normalized so Fourier inversion holds."""
    if group.kind == CYCLIC:
        return cyclic_group(group.modulus, point_mass=Fraction(1, group.modulus))
    if group.kind == INTEGERS:
        return torus_group()
    if group.kind == TORUS:
        return integer_group()
    return euclidean_group(group.dimension)


def check_element(group: GroupSpec, x, what: str = "element"):
    """Validate and canonicalize a coordinate for this group."""
    if group.kind in (CYCLIC, INTEGERS):
        if not isinstance(x, int):
            raise VariantMismatchError(f"{what} of {group.describe()} must be an integer, got {x!r}")
        return x % group.modulus if group.kind == CYCLIC else x
    if group.kind == TORUS:
        if isinstance(x, (int, Fraction)):
            return Fraction(x) % 1
        if isinstance(x, Real):
            return float(x) % 1.0
        raise VariantMismatchError(f"{what} of T must be a real number, got {x!r}")
    if not isinstance(x, tuple) or len(x) != group.dimension:
        raise VariantMismatchError(
            f"{what} of {group.describe()} must be a {group.dimension}-tuple, got {x!r}"
        )
    return x


def element_add(group: GroupSpec, a, b):
    if group.kind == CYCLIC:
        return (a + b) % group.modulus
    if group.kind == TORUS:
        return (a + b) % 1 if isinstance(a + b, (int, Fraction)) else (a + b) % 1.0
    if group.kind == EUCLIDEAN:
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def element_neg(group: GroupSpec, a):
    if group.kind == CYCLIC:
        return (-a) % group.modulus
    if group.kind == TORUS:
        return (-a) % 1 if isinstance(a, (int, Fraction)) else (-a) % 1.0
    if group.kind == EUCLIDEAN:
        return tuple(-x for x in a)
    return -a


def element_scale(group: GroupSpec, n: int, a):
    """n-fold group sum of a (n may be negative)."""
    if group.kind == CYCLIC:
        return (n * a) % group.modulus
    if group.kind == TORUS:
        return (n * a) % 1 if isinstance(a, (int, Fraction)) else (n * a) % 1.0
    if group.kind == EUCLIDEAN:
        return tuple(n * x for x in a)
    return n * a


def pairing_phase(group: GroupSpec, x, gamma):
    """The phase t with (x, gamma) = e^{2 pi i t}; Fraction when exact."""
    if group.kind == CYCLIC:
        return Fraction(x * gamma, group.modulus)
    if group.kind == EUCLIDEAN:
        total, exact = Fraction(0), True
        for xr, gr in zip(x, gamma):
            fx, fg = as_fraction(xr), as_fraction(gr)
            if exact and fx is not None and fg is not None:
                total += fx * fg
            else:
                if exact:
                    total, exact = float(total), False
                total += float(xr) * float(gr)
        return total
    # Z x T and T x Z: plain product
    fx, fg = as_fraction(x), as_fraction(gamma)
    if fx is not None and fg is not None:
        return fx * fg
    return float(x) * float(gamma)


def pairing(group: GroupSpec, x, gamma) -> complex:
    """Character value (x, gamma) for x in the group, gamma in its dual."""
    x = check_element(group, x, "group element")
    gamma = check_element(dual_group(group), gamma, "dual element")
    return cis(pairing_phase(group, x, gamma))


def pairing_exact(group: GroupSpec, x, gamma) -> Radical | None:
    """Exact character value when the phase reduces to a quarter turn."""
    return cis_exact(pairing_phase(group, x, gamma))
