import math
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from tools.algebra import BiPoly
from tools.classify import rotate_poly
from tools.domains import DiskDomain
from tools.errors import Degenerate, DegenerateOnCircle, InputError, NonIntegerWinding
from tools.fields import PolyField
from tools.linefield import (DUMP_COLUMNS, boundary_index, c2_crossing_check, dump_field, eigen_directions,
                             index_report, line_index, locate_singularities, ph_audit, tangency_check,
                             winding_index)
from tools.operators import HessianSample

from conftest import poly

r2 = BiPoly.radial(1)


def test_eigen_directions():
    major, minor = eigen_directions(HessianSample(2.0, 0.0, 1.0))
    assert major.direction == pytest.approx((1.0, 0.0))
    assert minor.angle == pytest.approx(math.pi / 2)
    with pytest.raises(Degenerate):
        eigen_directions(HessianSample(1.0, 0.0, 1.0))


@pytest.mark.parametrize("radius", [0.05, 0.1, 0.2])
@pytest.mark.parametrize("n", range(1, 7))
def test_harmonic_index(n, radius, settings):
    u = PolyField(r2 + BiPoly.re_zeta_power(n + 2))
    assert winding_index(u, (0, 0), radius, settings) == Fraction(-n, 2)


@pytest.mark.parametrize("w", [BiPoly.re_zeta_power(3) + poly((4, 1, 1)), BiPoly.re_zeta_power(5),
                               BiPoly.radial(2) + poly((5, 0, 1))])
def test_index_is_rotation_invariant(w, settings):
    u = r2 + w
    rotated = PolyField(rotate_poly(u, "3/5", "4/5"))
    assert winding_index(rotated, (0, 0), 0.1, settings) == winding_index(PolyField(u), (0, 0), 0.1, settings)


@pytest.mark.parametrize("k", [1, 2])
def test_radial_index(k, settings):
    u = PolyField(r2 + BiPoly.radial(k + 1))
    assert winding_index(u, (0, 0), 0.1, settings) == 1


def test_branches_agree(settings):
    u = PolyField(r2 + BiPoly.re_zeta_power(3))
    assert line_index(u, (0, 0), 0.1, 1, settings) == Fraction(-1, 2)
    assert line_index(u, (0, 0), 0.1, 2, settings) == Fraction(-1, 2)
    with pytest.raises(InputError):
        line_index(u, (0, 0), 0.1, 3, settings)


def test_index_is_radius_independent(settings):
    report = index_report(PolyField(r2 + BiPoly.re_zeta_power(3)), (0, 0), 0.2, settings=settings)
    assert report.converged
    assert report.index == Fraction(-1, 2)
    assert report.radii == [0.2, 0.1, 0.05]
    assert report.to_dict()["index"] == "-1/2"


def test_degenerate_line_on_circle(settings):
    u = PolyField(r2 + poly((4, 0, 1)))
    with pytest.raises(DegenerateOnCircle):
        winding_index(u, (0, 0), 0.1, settings)
    report = index_report(u, (0, 0), 0.1, settings=settings)
    assert not report.converged and report.index is None


def test_boundary_half_indices(settings):
    harmonic = PolyField(r2 + BiPoly.re_zeta_power(3))
    radial = PolyField(r2 + BiPoly.radial(2))
    assert boundary_index(harmonic, (0, 0), (0, 1), 0.1, settings) == Fraction(-1, 4)
    assert boundary_index(radial, (0, 0), (0, 1), 0.1, settings) == Fraction(1, 2)


@pytest.mark.parametrize("n", range(1, 5))
def test_boundary_half_index_of_harmonic_terms(n, settings):
    # V is a positive multiple of conj(ζ)^n, so arg V drops by nπ over the semicircle
    u = PolyField(r2 + BiPoly.re_zeta_power(n + 2))
    assert boundary_index(u, (0, 0), (0, 1), 0.1, settings) == Fraction(-n, 4)


def test_boundary_index_needs_aligned_ends(settings):
    # V = (1 + x/2, y) never vanishes near the origin and is not tangent-aligned at the ends
    u = PolyField(poly((2, 0, "1/2"), (3, 0, "1/6"), (1, 2, "1/4")))
    with pytest.raises(NonIntegerWinding):
        boundary_index(u, (0, 0), (math.sin(0.3), math.cos(0.3)), 0.1, settings)


def test_tangency_of_radial_solution(torsion, settings):
    report = tangency_check(PolyField(torsion), DiskDomain(1), settings=settings)
    # D²u = -Id/2 everywhere
    assert report.passed
    assert report.degenerate == report.samples


def test_tangency_on_shifted_disk(settings):
    u = PolyField(r2 + BiPoly.radial(2))
    report = tangency_check(u, DiskDomain(1), settings=settings)
    assert report.passed
    assert report.tangent_branch["L2"] == report.samples
    skewed = tangency_check(u, DiskDomain(1, ("1/2", 0)), settings=settings)
    assert not skewed.passed


def test_locate_single_singularity(settings):
    scan = locate_singularities(PolyField(r2 + BiPoly.re_zeta_power(3)), DiskDomain("1/2"), settings)
    assert not scan.non_isolated_regions
    assert len(scan.singularities) == 1
    s = scan.singularities[0]
    assert s.kind == "interior"
    assert s.exact_point == (0, 0)
    assert s.isolated_certificate


def test_ph_audit_contradiction(settings):
    report = ph_audit(PolyField(r2 + BiPoly.re_zeta_power(3)), DiskDomain("1/2"), settings)
    assert report.verdict == "contradiction"
    assert report.index_sum == Fraction(-1, 2)
    assert report.expected == 1


def test_ph_audit_consistent_for_radial(settings):
    u = PolyField(poly((0, 0, 1), (2, 0, -2), (0, 2, -2)) + BiPoly.radial(2))
    report = ph_audit(u, DiskDomain(1), settings)
    assert report.verdict == "consistent"
    assert report.index_sum == 1
    assert report.to_dict()["singularities"][0]["exact_point"] == ["0/1", "0/1"]


def test_ph_audit_single_radial_point(settings):
    report = ph_audit(PolyField(BiPoly.radial(2)), DiskDomain(1), settings)
    assert len(report.singularities) == 1
    assert report.index_sum == 1
    assert report.verdict == "consistent"


def test_c2_curve_is_certified_and_skipped(settings):
    # V = (12x², 0) vanishes on x = 0 without changing direction across it
    scan = locate_singularities(PolyField(r2 + poly((4, 0, 1))), DiskDomain("1/2"), settings)
    assert len(scan.non_isolated_regions) == 1
    region = scan.non_isolated_regions[0]
    assert region.c2_certified
    assert not scan.uncertified_regions
    assert all(c["passed"] for c in region.crossings)
    assert abs(region.bbox[0]) < 1e-6 and abs(region.bbox[1]) < 1e-6

    report = ph_audit(PolyField(r2 + poly((4, 0, 1))), DiskDomain("1/2"), settings)
    assert report.verdict == "contradiction"
    assert report.index_sum == 0
    assert report.regions[0]["c2_certified"]
    assert any("is C2" in note for note in report.notes)


def test_curve_with_flipping_lines_stays_inconclusive(settings):
    # V = (6x, 0) reverses across x = 0
    u = PolyField(r2 + poly((3, 0, 1)))
    scan = locate_singularities(u, DiskDomain("1/2"), settings)
    assert scan.uncertified_regions
    report = ph_audit(u, DiskDomain("1/2"), settings)
    assert report.verdict == "inconclusive"
    assert report.index_sum is None
    assert not report.regions[0]["c2_certified"]


def test_ph_audit_notes_follow_singularity_order(settings, monkeypatch):
    import tools.linefield as linefield

    points = [(0.1, 0.0), (-0.1, 0.0), (0.0, 0.1)]
    scan = linefield.SingularityScan(
        [linefield.Singularity(p, "interior", isolated_certificate=False, radius=0.01) for p in points], [], 0.01)
    monkeypatch.setattr(linefield, "locate_singularities", lambda *a: scan)

    def reversed_map(fn, items, *args, **kwargs):
        items = list(items)
        done = {i: fn(item) for i, item in reversed(list(enumerate(items)))}
        return [done[i] for i in range(len(items))]

    u = PolyField(r2 + BiPoly.re_zeta_power(3))
    serial = ph_audit(u, DiskDomain(1), settings).to_dict()
    monkeypatch.setattr(linefield, "parallel_map", reversed_map)
    shuffled = ph_audit(u, DiskDomain(1), settings).to_dict()
    assert shuffled == serial
    flagged = [n for n in serial["notes"] if "not positive" in n]
    assert len(flagged) == 3
    assert all(str(p) in n for p, n in zip(points, flagged))


def test_c2_crossing():
    u = PolyField(r2 + poly((4, 0, 1)))
    report = c2_crossing_check(u, (0, "1/4"))
    assert report.passed
    with pytest.raises(InputError):
        c2_crossing_check(PolyField(r2 + BiPoly.radial(2)), (0, 0))


def test_dump_field(tmp_path, torsion):
    pts = DiskDomain(1).interior_samples(16)
    path = tmp_path / "field.csv"
    rows = dump_field(PolyField(torsion), pts, path)
    frame = pd.read_csv(path)
    assert rows == len(pts) == len(frame)
    assert list(frame.columns) == DUMP_COLUMNS
    assert np.allclose(frame["uxx"], -0.5)
    assert np.allclose(frame["discriminant"], 0.0)


def test_saddle_is_not_tangent(settings):
    report = tangency_check(PolyField(poly((1, 1, 1))), DiskDomain(1), settings=settings)
    assert not report.passed
    assert report.max_residual == pytest.approx(1 / math.sqrt(2))
