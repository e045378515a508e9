"""Character pairings, duals and Haar normalizations."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcaframes.exact import Radical, cis, radical, sqrt_rational
from lcaframes.exceptions import DomainParameterError, VariantMismatchError
from lcaframes.groups import (
    cyclic_group,
    dual_group,
    euclidean_group,
    integer_group,
    pairing,
    pairing_exact,
    torus_group,
)

Z = integer_group()
T = torus_group()
Z8 = cyclic_group(8)


def test_pairing_identity_element():
    assert pairing(Z, 0, 0.37) == 1


def test_pairing_half_turn_is_exactly_minus_one():
    # e^{2 pi i 16/32} = -1, exactly in the quarter-turn fast path
    assert pairing(Z, 16, Fraction(1, 32)) == -1


def test_pairing_cyclic():
    # e^{2 pi i * 4 / 8} = -1
    assert pairing(Z8, 2, 2) == -1
    assert pairing(Z8, 1, 2) == 1j


def test_pairing_euclidean_dot_product():
    r2 = euclidean_group(2)
    assert pairing(r2, (Fraction(1, 2), 0), (1, 0)) == -1
    assert abs(abs(pairing(r2, (0.3, 0.4), (1.7, -2.2))) - 1) < 1e-15


def test_pairing_torus_both_ways():
    assert pairing(T, Fraction(1, 4), 2) == -1
    assert pairing(Z, 3, Fraction(1, 2)) == -1


@given(
    st.integers(min_value=-50, max_value=50),
    st.integers(min_value=-50, max_value=50),
    st.fractions(min_value=-2, max_value=2),
)
def test_pairing_is_a_character(x, y, gamma):
    lhs = pairing(Z, x + y, gamma)
    rhs = pairing(Z, x, gamma) * pairing(Z, y, gamma)
    assert abs(lhs - rhs) < 1e-12
    assert abs(abs(lhs) - 1) < 1e-12


def test_variant_mismatch():
    with pytest.raises(VariantMismatchError):
        pairing(Z, 0.5, 0.3)  # non-integer element of Z
    with pytest.raises(VariantMismatchError):
        pairing(euclidean_group(2), (1.0,), (0.0, 0.0))  # wrong dimension


def test_dual_round_trip_and_masses():
    assert dual_group(Z) == T
    assert dual_group(T) == Z
    d8 = dual_group(Z8)
    assert d8.modulus == 8 and d8.point_mass == Fraction(1, 8)
    assert dual_group(euclidean_group(3)) == euclidean_group(3)


def test_group_validation():
    with pytest.raises(DomainParameterError):
        cyclic_group(1)
    with pytest.raises(DomainParameterError):
        euclidean_group(0)


def test_cis_quarter_turns_exact():
    assert cis(Fraction(1, 2)) == -1
    assert cis(Fraction(1, 4)) == 1j
    assert cis(Fraction(3, 4)) == -1j
    assert cis(5) == 1


def test_pairing_exact_detects_quarter_turns():
    v = pairing_exact(Z, 16, Fraction(1, 32))
    assert isinstance(v, Radical) and complex(v) == -1
    assert pairing_exact(Z, 1, Fraction(1, 3)) is None


@given(
    st.fractions(min_value=-4, max_value=4),
    st.fractions(min_value=-4, max_value=4),
    st.sampled_from([1, 2, 3, 6]),
)
def test_radical_algebra_matches_complex(a, b, rad):
    u = radical(a, b, rad)
    v = radical(b, a, rad)
    assert abs(complex(u.mul(v)) - complex(u) * complex(v)) < 1e-10
    s = u.add(v)
    assert s is not None and abs(complex(s) - (complex(u) + complex(v))) < 1e-10
    assert abs(float(u.abs2()) - abs(complex(u)) ** 2) < 1e-10


def test_radical_normalization_pulls_out_squares():
    # sqrt(12) = 2 sqrt(3), sqrt(4) = 2
    assert radical(1, 0, 12) == Radical(Fraction(2), Fraction(0), 3)
    assert radical(1, 0, 4) == Radical(Fraction(2), Fraction(0), 1)
    assert sqrt_rational(Fraction(1, 2)) == Radical(Fraction(1, 2), Fraction(0), 2)


def test_radical_add_incompatible_is_none():
    assert radical(1, 0, 2).add(radical(1, 0, 3)) is None
    # zero is compatible with everything
    assert radical(0).add(radical(1, 0, 3)) == radical(1, 0, 3)
