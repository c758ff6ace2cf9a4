from fractions import Fraction

import pytest

from exceptions import ZeroPolynomialError
from polynomial import (
    IntPoly, NormalizedPoly, eval_at_integer, expanded_real_roots, normalize,
    real_root_count, real_roots
)


def test_trailing_zeros_are_stripped():
    assert IntPoly((1, 2, 0, 0)).coeffs == (1, 2)
    assert IntPoly((0, 0)).is_zero()
    assert IntPoly().degree == -1


def test_arithmetic():
    a = IntPoly((-1, 0, 4))
    b = IntPoly((0, 2))
    assert (a + b).coeffs == (-1, 2, 4)
    assert (a - a).is_zero()
    assert (a * b).coeffs == (0, -2, 0, 8)
    assert (3 * b).coeffs == (0, 6)
    assert (a * b).exact_div(b) == a


def test_exact_division_rejects_remainders():
    with pytest.raises(ArithmeticError):
        IntPoly((1, 0, 1)).exact_div(IntPoly((1, 1)))
    with pytest.raises(ArithmeticError):
        IntPoly((0, 3)).exact_div(IntPoly((0, 2)))


def test_eval_at_integer():
    assert eval_at_integer(IntPoly((-1, 0, 4)), 1) == 3
    assert eval_at_integer(IntPoly((0, -1, 0, 6)), 0) == 0
    assert eval_at_integer(IntPoly((0, 2)), Fraction(1, 2)) == 1
    assert eval_at_integer(IntPoly((0, 1)), Fraction(1, 3)) == Fraction(1, 3)


def test_normalize_examples():
    """Cubic class at p=9 normalizes to 6z^3 - z"""
    assert normalize(IntPoly.parse("-36z^3+6z")).coeffs == (0, -1, 0, 6)
    assert normalize(IntPoly.parse("-24z^3+4z")).coeffs == (0, -1, 0, 6)
    assert normalize(IntPoly.parse("4z^2-1")).coeffs == (-1, 0, 4)


def test_normalize_is_idempotent():
    poly = normalize(IntPoly.parse("-30z^3+5z"))
    assert normalize(poly) == poly
    assert isinstance(poly, NormalizedPoly)


def test_normalize_rejects_zero():
    with pytest.raises(ZeroPolynomialError):
        normalize(IntPoly())


def test_normalized_poly_validation():
    with pytest.raises(ValueError):
        NormalizedPoly((0, 2))
    with pytest.raises(ValueError):
        NormalizedPoly((1, -1))


def test_format():
    assert IntPoly((0, 5, 0, -12)).format() == "-12z^3+5z"
    assert IntPoly((-1, 0, 4)).format() == "4z^2-1"
    assert IntPoly((0, 1)).format() == "z"
    assert IntPoly((0, -1)).format() == "-z"
    assert IntPoly().format() == "0"


def test_parse():
    assert IntPoly.parse("−12z^3+5z").coeffs == (0, 5, 0, -12)
    assert IntPoly.parse("-64z^5 + 32z^3").coeffs == (0, 0, 0, 32, 0, -64)
    assert IntPoly.parse("z^2-z+1").coeffs == (1, -1, 1)
    assert IntPoly.parse("-7").coeffs == (-7,)


def test_parse_rejects_garbled_terms():
    with pytest.raises(ValueError):
        IntPoly.parse("-72z^5+54^3-7z")
    with pytest.raises(ValueError):
        IntPoly.parse("18^2-1")
    with pytest.raises(ValueError):
        IntPoly.parse("3z 2")
    with pytest.raises(ValueError):
        IntPoly.parse("")


def test_json_uses_decimal_strings():
    big = IntPoly((-1, 0, 2 ** 70))
    data = big.to_json()
    assert data == ["-1", "0", str(2 ** 70)]
    assert IntPoly.from_json(data) == big


def test_multiplicity_and_parity():
    poly = IntPoly.parse("8z^3-6z-2")
    assert poly.multiplicity_at(1) == 1
    assert poly.multiplicity_at(-1) == 0
    assert IntPoly.parse("6z^3-z").parity() == 1
    assert IntPoly.parse("48z^4-22z^2+1").parity() == 0
    assert IntPoly.parse("12z^3-7z-2").parity() == -1


def test_real_roots_with_multiplicity():
    poly = IntPoly.parse("8z^3-6z-2")
    roots = real_roots(poly)
    assert [k for _, k in roots] == [2, 1]
    assert roots[0][0] == pytest.approx(-0.5, abs=1e-15)
    assert roots[1][0] == pytest.approx(1.0, abs=1e-15)
    assert real_root_count(poly) == 3
    assert real_root_count(poly, -1, 0) == 2


def test_expanded_real_roots():
    roots = expanded_real_roots(IntPoly.parse("4z^2-1"))
    assert roots == pytest.approx([-0.5, 0.5], abs=1e-15)
