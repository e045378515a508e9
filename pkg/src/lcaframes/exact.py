"""Exact scalar helpers: rational phases, unit characters, quadratic radicals.

Coset membership, fundamental-domain splittings and the finite-group
verification paths must not depend on float tolerances.  Rational data is kept
as `fractions.Fraction`; unimodular character values at quarter turns and
scalars of the form (rational + i*rational)*sqrt(square-free integer) are kept
exact so that Gram identities on finite groups come out as literal zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

TWO_PI = 2.0 * math.pi

#: character values at quarter turns, exact in IEEE arithmetic
_QUARTER_TURNS = {
    Fraction(0): (Fraction(1), Fraction(0)),
    Fraction(1, 2): (Fraction(-1), Fraction(0)),
    Fraction(1, 4): (Fraction(0), Fraction(1)),
    Fraction(3, 4): (Fraction(0), Fraction(-1)),
}


def as_fraction(x) -> Fraction | None:
    """Return x as a Fraction if it is exactly rational, else None."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return None


def cis(t) -> complex:
    """e^{2 pi i t}, with the phase reduced mod 1 before evaluation.

    Rational phases are reduced exactly; quarter turns return exact values.
    """
    f = as_fraction(t)
    if f is not None:
        f %= 1
        q = _QUARTER_TURNS.get(f)
        if q is not None:
            return complex(q[0], q[1])
        t = float(f)
    else:
        t = float(t) % 1.0
    return complex(math.cos(TWO_PI * t), math.sin(TWO_PI * t))


def _square_split(n: int) -> tuple[int, int]:
    """n = s*s*f with f square-free; returns (s, f). Requires n >= 0."""
    if n in (0, 1):
        return 1, n
    s, f, d = 1, 1, 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        s *= d ** (e // 2)
        if e % 2:
            f *= d
        d += 1
    return s, f * n


@dataclass(frozen=True)
class Radical:
    """(re + i*im) * sqrt(rad) with rational re, im and square-free int rad."""

    re: Fraction
    im: Fraction
    rad: int

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conj(self) -> "Radical":
        return Radical(self.re, -self.im, self.rad)

    def __neg__(self) -> "Radical":
        return Radical(-self.re, -self.im, self.rad)

    def scale(self, c: Fraction) -> "Radical":
        return radical(self.re * c, self.im * c, self.rad)

    def mul(self, other: "Radical") -> "Radical":
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        return radical(re, im, self.rad * other.rad)

    def add(self, other: "Radical") -> "Radical | None":
        """Exact sum, or None when the radicands are incompatible."""
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.rad != other.rad:
            return None
        return radical(self.re + other.re, self.im + other.im, self.rad)

    def abs2(self) -> Fraction:
        return (self.re * self.re + self.im * self.im) * self.rad

    def __complex__(self) -> complex:
        root = math.sqrt(self.rad)
        return complex(float(self.re) * root, float(self.im) * root)


def radical(re, im=0, rad: int | Fraction = 1) -> Radical:
    """Normalized Radical: integer square-free radicand, zero gets rad 1."""
    re, im = Fraction(re), Fraction(im)
    rad = Fraction(rad)
    if rad < 0:
        raise ValueError("radicand must be nonnegative")
    if rad == 0 or (re == 0 and im == 0):
        return Radical(Fraction(0), Fraction(0), 1)
    # sqrt(p/q) = sqrt(p*q)/q, then pull out the square part of p*q
    p, q = rad.numerator, rad.denominator
    s, f = _square_split(p * q)
    c = Fraction(s, q)
    return Radical(re * c, im * c, f)


ZERO = radical(0)
ONE = radical(1)


def cis_exact(t) -> Radical | None:
    """Exact character value e^{2 pi i t} when t reduces to a quarter turn."""
    f = as_fraction(t)
    if f is None:
        return None
    q = _QUARTER_TURNS.get(f % 1)
    if q is None:
        return None
    return Radical(q[0], q[1], 1)


def sqrt_rational(x) -> Radical:
    """sqrt(x) for nonnegative rational x, as an exact Radical."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of negative rational")
    return radical(1, 0, x)
