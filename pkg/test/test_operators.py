import pytest

from tools.algebra import BiPoly
from tools.fields import PolyField
from tools.operators import (HessianSample, bracket, discriminant, discriminant_at, double_angle_polys,
                             hess_at, hess_det, hess_det_at, jacobian, jacobian_residual_at, laplacian, laplacian_at)

from conftest import poly

x, y = BiPoly.x(), BiPoly.y()


def test_radial_quadratic():
    r2 = BiPoly.radial(1)
    assert laplacian(r2) == BiPoly.const(4)
    assert hess_det(r2) == BiPoly.const(4)
    assert discriminant(r2).is_zero()


@pytest.mark.parametrize("f, g", [
    (poly((3, 0, 1), (1, 2, -3)), poly((2, 2, 1), (0, 1, 5))),
    (BiPoly.radial(2), poly((4, 1, "1/2"), (1, 1, -1))),
    (x ** 2, y ** 2),
])
def test_hessian_is_quadratic_with_bracket(f, g):
    assert hess_det(f + g) == hess_det(f) + hess_det(g) + bracket(f, g)


def test_bracket_is_symmetric():
    f, g = poly((3, 1, 2), (0, 2, 1)), poly((2, 2, -1), (1, 0, 3))
    assert bracket(f, g) == bracket(g, f)
    assert bracket(f, f) == hess_det(f).scale(2)


def test_jacobian_antisymmetric():
    f, g = poly((2, 1, 1)), poly((1, 3, 2), (0, 0, 1))
    assert jacobian(f, g) == -jacobian(g, f)
    assert jacobian(f, f).is_zero()


def test_harmonic_cubic():
    u = BiPoly.re_zeta_power(3)
    assert laplacian(u).is_zero()
    assert discriminant(u) == BiPoly.radial(1).scale(144)
    assert double_angle_polys(u) == (x.scale(12), y.scale(-12))


def test_numeric_jets_match_exact(torsion):
    jet = PolyField(torsion).jet3_at(("1/3", "1/5"))
    assert hess_at(jet) == HessianSample(-0.5, 0.0, -0.5)
    assert laplacian_at(jet) == pytest.approx(-1.0)
    assert hess_det_at(jet) == pytest.approx(0.25)
    assert discriminant_at(jet) == pytest.approx(0.0)
    residual, _ = jacobian_residual_at(jet)
    assert residual == 0.0


def test_jacobian_residual_nonsolution():
    u = BiPoly.radial(1) + poly((2, 1, 1))
    jet = PolyField(u).jet3_at((1, 0))
    residual, scale = jacobian_residual_at(jet)
    # J[Δu, H(u)] = 16x for x² + y² + x²y
    assert residual == pytest.approx(16.0)
    assert scale >= abs(residual)


def test_hessian_sample():
    h = HessianSample(3.0, 1.0, 1.0)
    assert h.laplacian == 4.0
    assert h.det == 2.0
    assert h.discriminant == pytest.approx(h.laplacian ** 2 - 4 * h.det)
    assert h.double_angle() == (2.0, 2.0)
    assert h.bilinear((1, 0), (0, 1)) == 1.0
