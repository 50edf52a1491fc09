from fractions import Fraction

import pytest

from tools.algebra import BiPoly
from tools.classify import C3
from tools.domains import AnnulusField, DiskDomain, FourierCurve, NormalMapDomain
from tools.errors import BoundaryViolation, InvalidConstant, ZeroScale
from tools.fields import BumpField, Disk, PolyField, RadialLinearField, RadialProfile
from tools.linefield import PHReport, TangencyReport
from tools.serrin import (BoundaryReport, Contradiction, HypothesisNotMet, OverdeterminedSpec, PDEReport,
                          RadialDisk, RadialFamily, Verdict, bump_report, check_overdetermined,
                          check_pde_consistency, nodal_line_check, ode_factor_check, polynomial_of,
                          radial_ode_residual, scale_transform, theorem1_audit)

from conftest import poly

shifted = poly((1, 0, 1), (2, 0, "-1/2"), (0, 2, "-1/2"))


def test_negative_constant():
    with pytest.raises(InvalidConstant):
        OverdeterminedSpec(PolyField(BiPoly.radial(1)), DiskDomain(1), -1)


def test_boundary_check(torsion, settings):
    good = check_overdetermined(OverdeterminedSpec(PolyField(torsion), DiskDomain(1), "1/2"), settings=settings)
    assert good.passed and good.max_abs_u < 1e-15
    bad = check_overdetermined(OverdeterminedSpec(PolyField(torsion), DiskDomain(1), 1), settings=settings)
    assert not bad.passed
    assert bad.max_grad_deviation == pytest.approx(0.5)


def test_pde_consistency_is_exact_for_polynomials(torsion, settings):
    assert check_pde_consistency(PolyField(torsion), DiskDomain(1), settings).passed
    report = check_pde_consistency(PolyField(BiPoly.radial(1) + poly((2, 1, 1))), DiskDomain(1), settings)
    assert report.exact and not report.passed
    assert report.polynomial == poly((1, 0, 16))


def test_torsion_audit(torsion, settings):
    verdict = theorem1_audit(OverdeterminedSpec(PolyField(torsion), DiskDomain(1), "1/2"), settings)
    assert isinstance(verdict.conclusion, RadialDisk)
    assert verdict.conclusion.center == (0, 0)
    assert verdict.conclusion.radius == pytest.approx(1.0)
    assert verdict.exit_code == 0
    assert verdict.to_dict()["conclusion"]["tag"] == "radial_disk"


def test_shifted_radial_audit(settings):
    verdict = theorem1_audit(OverdeterminedSpec(PolyField(shifted), DiskDomain(1, (1, 0)), 1), settings)
    assert isinstance(verdict.conclusion, RadialDisk)
    assert verdict.conclusion.center == (1, 0)


def test_quartic_audit_finds_C3(settings):
    u = poly((0, 0, 1), (2, 0, -2), (0, 2, -2)) + BiPoly.radial(2)
    verdict = theorem1_audit(OverdeterminedSpec(PolyField(u), DiskDomain(1), 0), settings)
    assert isinstance(verdict.conclusion, RadialDisk)
    assert [type(r.result) for r in verdict.inventory] == [C3]
    assert verdict.inventory[0].result.k == 1


def test_audit_rejects_wrong_constant(torsion, settings):
    with pytest.raises(BoundaryViolation) as err:
        theorem1_audit(OverdeterminedSpec(PolyField(torsion), DiskDomain(1), 1), settings)
    assert not err.value.report.passed


def test_annulus_is_not_simply_connected(settings):
    band = NormalMapDomain(FourierCurve.circle(2), settings=settings)
    verdict = theorem1_audit(OverdeterminedSpec(AnnulusField(band), band, 2), settings)
    assert isinstance(verdict.conclusion, HypothesisNotMet)
    assert verdict.conclusion.which == "simply-connected"
    assert not verdict.pde.exact and verdict.pde.passed


def test_scale_transform(torsion, settings):
    spec = scale_transform(OverdeterminedSpec(PolyField(torsion), DiskDomain(1), "1/2"), 2)
    assert spec.c == Fraction(1, 4)
    assert spec.domain.radius_exact == Fraction(1, 2)
    assert polynomial_of(spec.field) == poly((0, 0, "1/16"), (2, 0, "-1/4"), (0, 2, "-1/4"))
    assert check_overdetermined(spec, settings=settings).passed
    assert isinstance(theorem1_audit(spec, settings).conclusion, RadialDisk)
    with pytest.raises(ZeroScale):
        scale_transform(spec, 0)


def test_scale_transform_of_analytic_field(settings):
    u = RadialLinearField(1, 0, 0, RadialProfile.linear(0, "3/5"))
    spec = scale_transform(scale_transform(OverdeterminedSpec(u, DiskDomain(1), 1), 2), 3)
    assert spec.field.t == 6.0
    assert spec.field.base is u


@pytest.mark.parametrize("family, c0, c2", [
    (RadialFamily.linear("3/5"), 0, Fraction(16, 25)),
    (RadialFamily.linear(0), 5, Fraction(1)),
    (RadialFamily.quadratic(1, -1), 0, Fraction(5)),
    (RadialFamily.quadratic("-1/2", 0), "1/2", Fraction(2)),
])
def test_radial_families(family, c0, c2):
    assert family.c_squared(c0) == c2
    assert radial_ode_residual(family, c0) <= 1e-12
    exact = ode_factor_check(family, c0)
    assert exact["factor_vanishes"] and exact["equation_vanishes"]


def test_family_constant_must_be_real():
    with pytest.raises(InvalidConstant):
        RadialFamily.linear(2).c_squared(0)


def test_wrong_constant_leaves_residual():
    assert radial_ode_residual(RadialFamily.linear("3/5"), 0, c=1.0) == pytest.approx(9 / 25)


def test_nodal_lines_are_rays():
    report = nodal_line_check(RadialLinearField(1, 0, 0, RadialProfile.linear(0, "3/5")))
    assert report.directions == [pytest.approx((-0.6, 0.8)), pytest.approx((-0.6, -0.8))]
    assert report.sign_changes == 2 and not report.origin_only
    steep = nodal_line_check(RadialLinearField(1, 0, 0, RadialProfile.linear(0, 2)))
    assert steep.origin_only and steep.sign_changes == 0


def test_bump_counterexample(settings):
    u = BumpField([Disk((-2.0, 0.0), 1.0), Disk((2.0, 0.0), 1.0)])
    report = bump_report(u, DiskDomain(4), settings=settings)
    assert report.passed
    assert report.margin == settings.bump_margin
    assert report.to_dict()["radial_about_any"] is False


def test_bump_must_stay_inside(settings):
    u = BumpField([Disk((3.5, 0.0), 1.0)])
    assert not bump_report(u, DiskDomain(4), settings=settings).passed


def test_contradiction_exit_code():
    verdict = Verdict(PDEReport(True, True, 0.0), BoundaryReport(0.0, 0.0, Fraction(0), 1, True),
                      Contradiction(PHReport([], Fraction(-1, 2), 1, "contradiction"),
                                    TangencyReport(0.0, True, 1, {"L1": 1, "L2": 0}, 0)))
    assert verdict.exit_code == 2


def test_pde_consistency_negative_control(settings):
    report = check_pde_consistency(PolyField(poly((4, 0, 1), (0, 3, 1))), DiskDomain(1), settings)
    assert not report.passed
    assert report.polynomial == poly((3, 0, 1728), (1, 1, -864))


def test_degenerate_audit_skips_certified_c2_curve(settings):
    from tools.serrin import Inconclusive, _degenerate_audit

    quartic = BiPoly.radial(1) + poly((4, 0, 1))
    spec = OverdeterminedSpec(PolyField(quartic), DiskDomain("1/2"), 1)
    conclusion = _degenerate_audit(spec, quartic, Verdict(None, None), settings)
    assert isinstance(conclusion, Contradiction)
    assert conclusion.ph.index_sum == 0

    cubic = BiPoly.radial(1) + poly((3, 0, 1))
    spec = OverdeterminedSpec(PolyField(cubic), DiskDomain("1/2"), 1)
    conclusion = _degenerate_audit(spec, cubic, Verdict(None, None), settings)
    assert isinstance(conclusion, Inconclusive)
    assert not conclusion.to_dict()["regions"][0]["c2_certified"]
