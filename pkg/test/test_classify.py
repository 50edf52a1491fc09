from fractions import Fraction

import pytest

from tools.algebra import BiPoly
from tools.classify import (C1, C2, C3, LemmaViolation, Quadratic, classification_report, classify_point,
                            decompose, is_in_U, mu_squared, radial_about, rotate_poly)
from tools.errors import Degenerate, InputError, NotInU
from tools.fields import PolyField

from conftest import poly

r2 = BiPoly.radial(1)


def test_decompose_about_shifted_center():
    u = poly((1, 0, 1), (2, 0, "-1/2"), (0, 2, "-1/2"))
    dec = decompose(u, (1, 0))
    assert (dec.c0, dec.a, dec.b, dec.lam) == (Fraction(1, 2), 0, 0, -1)
    assert not dec.w and dec.n is None


def test_decompose_outside_U():
    with pytest.raises(NotInU):
        decompose(poly((2, 0, 1)), (0, 0))
    assert not is_in_U(poly((2, 0, 1)), (0, 0))


def test_mu_squared_quadratic_is_degenerate():
    with pytest.raises(Degenerate):
        mu_squared(r2)


@pytest.mark.parametrize("n", range(1, 7))
def test_harmonic_points_are_C1(n):
    result = classify_point(r2 + BiPoly.re_zeta_power(n + 2), (0, 0))
    assert isinstance(result, C1)
    assert result.n == n and result.mu2 == 0
    assert result.a == pytest.approx(1.0) and result.phase == pytest.approx(0.0)


def test_C1_phase_of_imaginary_part():
    result = classify_point(r2 + BiPoly.im_zeta_power(3), (0, 0))
    assert isinstance(result, C1)
    assert result.phase == pytest.approx(3.141592653589793 / 6)


@pytest.mark.parametrize("n", range(1, 7))
def test_linear_powers_are_C2(n):
    ell = poly((1, 0, 3), (0, 1, 4))
    result = classify_point(r2 + ell ** (n + 2), (0, 0))
    assert isinstance(result, C2)
    assert result.n == n and result.mu2 == 1
    # ∇(ℓ^N) points along (3, 4) up to sign
    assert result.axis_angle == pytest.approx(0.9272952180016122)
    assert abs(result.a) == pytest.approx(5.0 ** (n + 2))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_radial_powers_are_C3(k):
    result = classify_point(r2 + BiPoly.radial(k + 1), (0, 0))
    assert isinstance(result, C3)
    assert result.k == k
    assert result.mu == 1 + Fraction(1, k)
    assert result.mu2 == (1 + Fraction(1, k)) ** 2


def test_rho2_plus_rho4_report():
    report = classification_report(r2 + BiPoly.radial(2), (0, 0)).to_dict()
    assert report["class"] == "C3"
    assert report["k"] == 1
    assert report["mu2"] == "4/1"


def test_lemma_violation():
    result = classify_point(r2 + poly((2, 1, 1)), (0, 0))
    assert isinstance(result, LemmaViolation)
    assert result.tag == "violation"


def test_higher_order_point_is_quadratic():
    assert isinstance(classify_point(r2, (0, 0)), Quadratic)


def test_classification_accepts_polyfield():
    assert isinstance(classify_point(PolyField(r2 + BiPoly.radial(2)), (0, 0)), C3)


def test_rotation_preserves_class():
    u = r2 + BiPoly.re_zeta_power(4)
    rotated = rotate_poly(u, "3/5", "4/5")
    assert isinstance(classify_point(rotated, (0, 0)), C1)
    with pytest.raises(InputError):
        rotate_poly(u, 1, 1)


def test_radial_about():
    assert radial_about(r2 + BiPoly.radial(3), (0, 0))
    assert radial_about(poly((1, 0, 1), (2, 0, "-1/2"), (0, 2, "-1/2")), (1, 0))
    assert not radial_about(r2 + BiPoly.re_zeta_power(3), (0, 0))


def test_report_outside_U():
    report = classification_report(poly((2, 0, 1)), (0, 0))
    assert report.to_dict() == {"point": ["0/1", "0/1"], "in_U": False}


@pytest.mark.parametrize("w", [BiPoly.re_zeta_power(4), poly((1, 0, 3), (0, 1, 4)) ** 3, BiPoly.radial(3)],
                         ids=["C1", "C2", "C3"])
def test_classification_is_rotation_invariant(w):
    before = classify_point(r2 + w, (0, 0))
    after = classify_point(rotate_poly(r2 + w, "3/5", "4/5"), (0, 0))
    assert after.tag == before.tag
    assert after.mu2 == before.mu2
