from fractions import Fraction

import numpy as np
import pytest

from tools.algebra import (BiPoly, PolarHomog, TrigPoly, as_rational, format_rational, from_polar, homog_part,
                           lowest_homog, parse_rational, polar_bracket, polar_jacobian, polar_laplacian, poly_arith,
                           poly_derive, to_polar)
from tools.errors import DegreeUnderflow, InputError, NotHomogeneous, NotPolynomial, PolyFormatError
from tools.operators import bracket, jacobian, laplacian

from conftest import poly

x, y = BiPoly.x(), BiPoly.y()


def test_parse_rational_forms():
    assert parse_rational("3/5") == Fraction(3, 5)
    assert parse_rational("-7") == -7
    assert parse_rational("0.25") == Fraction(1, 4)
    assert as_rational(0.5) == Fraction(1, 2)


@pytest.mark.parametrize("text", ["1/0", "abc", "1/2/3", "2/-3"])
def test_parse_rational_rejects(text):
    with pytest.raises(InputError):
        parse_rational(text)


def test_format_rational_keeps_denominator():
    assert format_rational(Fraction(4)) == "4/1"
    assert format_rational(Fraction(-1, 2)) == "-1/2"


def test_bipoly_arithmetic():
    assert (x + y) ** 2 == poly((2, 0, 1), (1, 1, 2), (0, 2, 1))
    assert (x - x).is_zero()
    assert (x * y).degree == 2
    assert (x ** 2).translate(1, 0) == poly((2, 0, 1), (1, 0, 2), (0, 0, 1))
    assert (x ** 2 + y).compose_linear(0, 1, 1, 0) == poly((0, 2, 1), (1, 0, 1))


def test_poly_ops():
    p, q = x + y, x - y
    assert poly_arith(p, q, "mul") == x ** 2 - y ** 2
    assert poly_arith(p, q, "sub") == y.scale(2)
    assert poly_derive(poly((3, 1, 2)), "y") == poly((3, 0, 2))
    with pytest.raises(InputError):
        poly_arith(p, q, "div")


def test_bipoly_evaluation():
    p = poly((3, 0, 1), (1, 2, -3))
    assert p.evaluate("1/2", 1) == Fraction(1, 8) - Fraction(3, 2)
    assert np.allclose(p(np.array([0.5, 2.0]), np.array([1.0, 0.0])), [0.125 - 1.5, 8.0])


def test_homog_part():
    p = poly((0, 0, 1), (2, 0, 3), (1, 1, -1), (3, 0, 2))
    assert homog_part(p, 2) == poly((2, 0, 3), (1, 1, -1))
    assert homog_part(p, 5).is_zero()
    with pytest.raises(InputError):
        homog_part(p, -1)


def test_zeta_powers():
    assert BiPoly.re_zeta_power(3) == poly((3, 0, 1), (1, 2, -3))
    assert BiPoly.im_zeta_power(3) == poly((2, 1, 3), (0, 3, -1))
    assert BiPoly.radial(2) == poly((4, 0, 1), (2, 2, 2), (0, 4, 1))


def test_homogeneous_parts():
    p = x ** 2 + x ** 3 + y ** 3
    assert lowest_homog(p) == x ** 2
    assert set(p.homog_parts()) == {2, 3}
    assert not p.is_homogeneous()


def test_json_format_errors():
    with pytest.raises(PolyFormatError):
        BiPoly.from_json({"terms": [[1, 2]]})
    with pytest.raises(PolyFormatError):
        BiPoly.from_json("{not json")
    p = poly((2, 1, "3/4"))
    assert BiPoly.from_json(p.to_json()) == p


def test_trig_product_and_derivative():
    c = TrigPoly.cos_k(1)
    assert c * c == TrigPoly.const(Fraction(1, 2)) + TrigPoly.cos_k(2, Fraction(1, 2))
    assert TrigPoly.sin_k(3, 2).derive() == TrigPoly.cos_k(3, 6)
    assert TrigPoly.cos_k(2).derive(2) == TrigPoly.cos_k(2, -4)
    assert np.allclose(TrigPoly.sin_k(2)(np.array([np.pi / 4])), [1.0])


def test_to_polar_standard_forms():
    assert to_polar(BiPoly.radial(2)) == PolarHomog(4, TrigPoly.const(1))
    assert to_polar(BiPoly.re_zeta_power(3)) == PolarHomog(3, TrigPoly.cos_k(3))
    assert to_polar(BiPoly.im_zeta_power(4)) == PolarHomog(4, TrigPoly.sin_k(4))


def test_to_polar_rejects_mixed_degrees():
    with pytest.raises(NotHomogeneous):
        to_polar(x + x ** 2)


@pytest.mark.parametrize("w", [
    poly((3, 1, 2), (0, 4, -1)),
    poly((2, 3, "1/3"), (5, 0, 1)),
    poly((1, 1, 1)),
])
def test_from_polar_inverts_to_polar(w):
    assert from_polar(to_polar(w)) == w


def test_from_polar_parity():
    with pytest.raises(NotPolynomial):
        from_polar(PolarHomog(3, TrigPoly.cos_k(2)))


def test_polar_laplacian_matches_cartesian():
    w = poly((3, 1, 2), (0, 4, -1), (2, 2, 5))
    assert polar_laplacian(to_polar(w)) == to_polar(laplacian(w), 2)
    with pytest.raises(DegreeUnderflow):
        polar_laplacian(to_polar(x))


def test_polar_jacobian_matches_cartesian():
    f, g = poly((2, 1, 1), (0, 3, 2)), poly((2, 0, 1), (1, 1, -3))
    assert polar_jacobian(to_polar(f), to_polar(g)) == to_polar(jacobian(f, g), 3)


def test_polar_bracket_matches_cartesian():
    f, g = BiPoly.radial(2), poly((3, 1, 1), (1, 3, "1/2"), (0, 4, -2))
    assert polar_bracket(to_polar(f), to_polar(g)) == to_polar(bracket(f, g), 4)
    with pytest.raises(DegreeUnderflow):
        polar_bracket(to_polar(x), to_polar(x * y))
