"""Eigenline fields of D²u, rotation indices and the Poincaré–Hopf audit.

Lines are handled through the double-angle vector V = (uxx - uyy, 2uxy): its argument
is twice the angle of the major eigenline, so the line-field index around a point is
half the winding number of V. Boundary half-indices use the inward semicircle from +T
through the inward normal n to -T (det[T, n] = 1) and equal Δarg V / 4π.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.ndimage import binary_dilation, minimum_filter
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from tools.algebra import BiPoly, format_rational, lowest_homog, to_polar
from tools.domains import Domain
from tools.errors import (Degenerate, DegenerateOnCircle, HessfieldError, InputError, NonConvergent,
                          NonIntegerWinding)
from tools.fields import PolyField, ScalarField
from tools.operators import HessianSample, discriminant, double_angle_polys
from tools.settings import Settings, get_settings
from tools.workers import parallel_map

logger = logging.getLogger(__name__)

BOUNDARY_CONVENTION = "boundary index = Δarg V over the inward semicircle (+T → n → -T) / 4π"


@dataclass(frozen=True)
class LineDirection:
    double_angle_vector: Tuple[float, float]

    @property
    def angle(self) -> float:
        """Line angle in [0, π)."""
        c, s = self.double_angle_vector
        return (math.atan2(s, c) / 2) % math.pi

    @property
    def direction(self) -> Tuple[float, float]:
        a = self.angle
        return math.cos(a), math.sin(a)


def eigen_directions(h: HessianSample, tolerance: Optional[float] = None) -> Tuple[LineDirection, LineDirection]:
    """Major and minor eigenlines of a Hessian sample."""
    tolerance = get_settings().degenerate_tolerance if tolerance is None else tolerance
    vx, vy = h.double_angle()
    size = math.hypot(vx, vy)
    if size <= tolerance * h.norm or h.norm == 0:
        raise Degenerate(f"D²u is a multiple of the identity: {h}")
    return LineDirection((vx / size, vy / size)), LineDirection((-vx / size, -vy / size))


# --------------------------------------------------------------------------
# adaptive angle tracking
# --------------------------------------------------------------------------

def _fold(d: np.ndarray, period: float) -> np.ndarray:
    return (d + period / 2) % period - period / 2


def _double_angle_at(field: ScalarField, pts: np.ndarray, tolerance: float) -> np.ndarray:
    uxx, uxy, uyy = field.hessians(pts[:, 0], pts[:, 1])
    vx, vy = uxx - uyy, 2 * uxy
    norm = np.sqrt(uxx ** 2 + 2 * uxy ** 2 + uyy ** 2)
    bad = (np.hypot(vx, vy) <= tolerance * norm) | (norm == 0)
    if np.any(bad):
        p = pts[int(np.flatnonzero(bad)[0])]
        raise DegenerateOnCircle(f"degenerate Hessian on the path at ({p[0]:.6g}, {p[1]:.6g})")
    return np.arctan2(vy, vx)


def _eigenline_angle_at(field: ScalarField, pts: np.ndarray, branch: int, tolerance: float) -> np.ndarray:
    uxx, uxy, uyy = field.hessians(pts[:, 0], pts[:, 1])
    norm = np.sqrt(uxx ** 2 + 2 * uxy ** 2 + uyy ** 2)
    if np.any((np.hypot(uxx - uyy, 2 * uxy) <= tolerance * norm) | (norm == 0)):
        raise DegenerateOnCircle("degenerate Hessian on the path")
    mats = np.stack([np.stack([uxx, uxy], -1), np.stack([uxy, uyy], -1)], -2)
    _, vecs = np.linalg.eigh(mats)
    v = vecs[:, :, 1] if branch == 1 else vecs[:, :, 0]
    return np.arctan2(v[:, 1], v[:, 0]) % np.pi


def _angle_change(angle_at: Callable[[np.ndarray], np.ndarray], path: Callable[[np.ndarray], np.ndarray],
                  start: float, stop: float, period: float, settings: Settings) -> Tuple[float, int]:
    """Total continuous change of a period-valued angle along path(start..stop)."""
    params = np.linspace(start, stop, settings.index_initial_samples + 1)
    angles = angle_at(path(params))
    while True:
        inc = _fold(np.diff(angles), period)
        bad = np.abs(inc) >= period / 4
        if not np.any(bad):
            return float(np.sum(inc)), len(params)
        if len(params) + int(np.count_nonzero(bad)) > settings.index_max_samples:
            raise NonConvergent(f"angle tracking needs more than {settings.index_max_samples} samples")
        where = np.flatnonzero(bad)
        mids = (params[where] + params[where + 1]) / 2
        params = np.insert(params, where + 1, mids)
        angles = np.insert(angles, where + 1, angle_at(path(mids)))


def _circle(center, radius) -> Callable[[np.ndarray], np.ndarray]:
    cx, cy = float(center[0]), float(center[1])
    return lambda th: np.stack([cx + radius * np.cos(th), cy + radius * np.sin(th)], axis=-1)


def _snap(raw: float, denominator: int, tolerance: float) -> Fraction:
    k = round(raw)
    if abs(raw - k) > tolerance:
        raise NonIntegerWinding(f"winding {raw:.9g} is not within {tolerance} of an integer")
    return Fraction(k, denominator)


def winding_raw(field: ScalarField, center, radius: float, settings: Optional[Settings] = None) -> Tuple[float, int]:
    """Winding number of V along the positively oriented circle, unrounded, and the samples used."""
    settings = settings or get_settings()
    change, n = _angle_change(lambda p: _double_angle_at(field, p, settings.degenerate_tolerance),
                              _circle(center, radius), 0.0, 2 * np.pi, 2 * np.pi, settings)
    return change / (2 * np.pi), n


def winding_index(field: ScalarField, center, radius: float, settings: Optional[Settings] = None) -> Fraction:
    """Line-field index: half the winding number of V."""
    settings = settings or get_settings()
    raw, _ = winding_raw(field, center, radius, settings)
    return _snap(raw, 2, settings.index_tolerance)


def line_index(field: ScalarField, center, radius: float, branch: int = 1,
               settings: Optional[Settings] = None) -> Fraction:
    """Index from tracking the eigenline of one branch (1 major, 2 minor) modulo π."""
    settings = settings or get_settings()
    if branch not in (1, 2):
        raise InputError("branch must be 1 or 2")
    change, _ = _angle_change(lambda p: _eigenline_angle_at(field, p, branch, settings.degenerate_tolerance),
                              _circle(center, radius), 0.0, 2 * np.pi, np.pi, settings)
    return _snap(change / np.pi, 2, settings.index_tolerance)


def _frame(inward_normal) -> Tuple[np.ndarray, np.ndarray]:
    n = np.asarray(inward_normal, dtype=float)
    n = n / np.hypot(*n)
    return np.array([n[1], -n[0]]), n


def boundary_raw(field: ScalarField, point, inward_normal, radius: float,
                 settings: Optional[Settings] = None) -> Tuple[float, int]:
    settings = settings or get_settings()
    T, n = _frame(inward_normal)
    p0 = np.asarray(point, dtype=float)

    def path(phi):
        return p0 + radius * (np.cos(phi)[:, None] * T + np.sin(phi)[:, None] * n)

    change, samples = _angle_change(lambda p: _double_angle_at(field, p, settings.degenerate_tolerance),
                                    path, 0.0, np.pi, 2 * np.pi, settings)
    return change / np.pi, samples


def boundary_index(field: ScalarField, point, inward_normal, radius: float,
                   settings: Optional[Settings] = None) -> Fraction:
    settings = settings or get_settings()
    raw, _ = boundary_raw(field, point, inward_normal, radius, settings)
    return _snap(raw, 4, settings.index_tolerance)


# --------------------------------------------------------------------------
# index reports
# --------------------------------------------------------------------------

@dataclass
class IndexReport:
    point: Tuple[float, float]
    kind: str
    index: Optional[Fraction]
    radii: List[float]
    raw: List[float] = field(default_factory=list)
    samples: List[int] = field(default_factory=list)
    converged: bool = True
    error: Optional[str] = None
    exact_point: Optional[Tuple[Fraction, Fraction]] = None
    inward_normal: Optional[Tuple[float, float]] = None

    def to_dict(self) -> dict:
        out = {"point": [float(c) for c in self.point], "kind": self.kind,
               "index": format_rational(self.index) if self.index is not None else None,
               "radii": self.radii, "winding_raw": self.raw, "samples": self.samples,
               "converged": self.converged}
        if self.error:
            out["error"] = self.error
        if self.exact_point is not None:
            out["exact_point"] = [format_rational(c) for c in self.exact_point]
        if self.kind == "boundary":
            out["inward_normal"] = list(self.inward_normal)
            out["convention"] = BOUNDARY_CONVENTION
        return out


def index_report(field: ScalarField, center, radius: float, kind: str = "interior", inward_normal=None,
                 settings: Optional[Settings] = None) -> IndexReport:
    """Index at radii r, r/2, r/4; reported only when all three agree."""
    settings = settings or get_settings()
    radii = [radius, radius / 2, radius / 4]
    report = IndexReport((float(center[0]), float(center[1])), kind, None, radii,
                         inward_normal=tuple(map(float, inward_normal)) if inward_normal is not None else None)
    values = []
    try:
        for r in radii:
            if kind == "boundary":
                raw, n = boundary_raw(field, center, inward_normal, r, settings)
                values.append(_snap(raw, 4, settings.index_tolerance))
            else:
                raw, n = winding_raw(field, center, r, settings)
                values.append(_snap(raw, 2, settings.index_tolerance))
            report.raw.append(raw)
            report.samples.append(n)
    except (DegenerateOnCircle, NonConvergent, NonIntegerWinding) as e:
        report.converged, report.error = False, f"{type(e).__name__}: {e}"
        return report
    if len(set(values)) != 1:
        report.converged, report.error = False, f"radii disagree: {[str(v) for v in values]}"
        return report
    report.index = values[0]
    return report


# --------------------------------------------------------------------------
# tangency along the boundary
# --------------------------------------------------------------------------

@dataclass
class TangencyReport:
    max_residual: float
    passed: bool
    samples: int
    tangent_branch: dict
    degenerate: int

    def to_dict(self) -> dict:
        return {"max_residual": self.max_residual, "passed": self.passed, "samples": self.samples,
                "tangent_branch": self.tangent_branch, "degenerate_samples": self.degenerate}


def tangency_check(field: ScalarField, domain: Domain, samples: Optional[int] = None,
                   settings: Optional[Settings] = None) -> TangencyReport:
    """max |Tᵀ D²u n| / ‖D²u‖ over boundary samples, and which eigenline is tangent."""
    settings = settings or get_settings()
    b = domain.boundary_samples(samples or settings.boundary_samples)
    uxx, uxy, uyy = field.hessians(b.points[:, 0], b.points[:, 1])
    T, n = b.tangents, b.normals
    cross = T[:, 0] * (uxx * n[:, 0] + uxy * n[:, 1]) + T[:, 1] * (uxy * n[:, 0] + uyy * n[:, 1])
    norm = np.sqrt(uxx ** 2 + 2 * uxy ** 2 + uyy ** 2)
    residual = np.where(norm > 0, np.abs(cross) / np.where(norm > 0, norm, 1.0), 0.0)
    vx, vy = uxx - uyy, 2 * uxy
    degenerate = (np.hypot(vx, vy) <= settings.degenerate_tolerance * norm) | (norm == 0)
    psi = np.arctan2(T[:, 1], T[:, 0])
    major = (vx * np.cos(2 * psi) + vy * np.sin(2 * psi)) > 0
    worst = float(residual.max())
    return TangencyReport(
        max_residual=worst,
        passed=worst <= settings.tangency_tolerance,
        samples=len(b.points),
        tangent_branch={"L1": int(np.count_nonzero(major & ~degenerate)),
                        "L2": int(np.count_nonzero(~major & ~degenerate))},
        degenerate=int(np.count_nonzero(degenerate)),
    )


# --------------------------------------------------------------------------
# singularity location
# --------------------------------------------------------------------------

@dataclass
class Singularity:
    point: Tuple[float, float]
    kind: str
    exact_point: Optional[Tuple[Fraction, Fraction]] = None
    isolated_certificate: Optional[bool] = None
    inward_normal: Optional[Tuple[float, float]] = None
    radius: float = 0.0


@dataclass
class DegenerateRegion:
    """A connected cluster of degenerate points that is not a single point."""

    bbox: List[float]
    points: np.ndarray
    c2_certified: bool = False
    crossings: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"bbox": self.bbox, "samples": len(self.points), "c2_certified": self.c2_certified,
                "crossings": self.crossings}


@dataclass
class SingularityScan:
    singularities: List[Singularity]
    non_isolated_regions: List[DegenerateRegion]
    spacing: float

    @property
    def uncertified_regions(self) -> List[DegenerateRegion]:
        return [r for r in self.non_isolated_regions if not r.c2_certified]


def _polish(field: ScalarField, pts: np.ndarray, spacing: float, iterations: int) -> Tuple[np.ndarray, np.ndarray]:
    pts = pts.copy()
    for _ in range(iterations):
        d = field.derivatives(pts[:, 0], pts[:, 1])
        V = np.stack([d.uxx - d.uyy, 2 * d.uxy], axis=-1)
        J = np.stack([np.stack([d.uxxx - d.uxyy, d.uxxy - d.uyyy], -1),
                      np.stack([2 * d.uxxy, 2 * d.uxyy], -1)], -2)
        step = -np.einsum("nij,nj->ni", np.linalg.pinv(J, rcond=1e-12), V)
        length = np.hypot(step[:, 0], step[:, 1])
        step *= np.minimum(1.0, 4 * spacing / np.maximum(length, 1e-300))[:, None]
        pts = pts + step
    d = field.derivatives(pts[:, 0], pts[:, 1])
    return pts, np.hypot(d.uxx - d.uyy, 2 * d.uxy)


def _exact_isolation(poly: BiPoly, point: Tuple[Fraction, Fraction]) -> bool:
    """Lowest homogeneous part of the discriminant about the point is positive on 64 angles."""
    low = lowest_homog(discriminant(poly).translate(*point))
    if not low or low.degree == 0:
        return False
    theta = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    return bool(np.all(to_polar(low)(1.0, theta) > 0))


def _defined(field: ScalarField, xs, ys) -> np.ndarray:
    domain = getattr(field, "domain", None)
    if domain is not None:
        return domain.contains_many(xs, ys)
    return np.ones(np.shape(xs), dtype=bool)


def locate_singularities(field: ScalarField, domain: Domain, settings: Optional[Settings] = None) -> SingularityScan:
    """
    Grid scan of |V| followed by Newton polish of V = 0.

    Args:
        field: the scalar field
        domain: region whose closure is searched
        settings: scan resolution, cluster radius and snapping denominator

    Returns:
        located singularities (interior or boundary) and any non-isolated regions
    """
    settings = settings or get_settings()
    x0, x1, y0, y1 = domain.bounding_box()
    pad = 0.02 * max(x1 - x0, y1 - y0)
    res = settings.scan_resolution
    gx = np.linspace(x0 - pad, x1 + pad, res)
    gy = np.linspace(y0 - pad, y1 + pad, res)
    spacing = max(gx[1] - gx[0], gy[1] - gy[0])
    X, Y = np.meshgrid(gx, gy)
    inside = domain.contains_many(X, Y)
    live = binary_dilation(inside, iterations=2) & _defined(field, X, Y)

    uxx, uxy, uyy = field.hessians(X[live], Y[live])
    size = np.hypot(uxx - uyy, 2 * uxy)
    scale = float(np.max(np.sqrt(uxx ** 2 + 2 * uxy ** 2 + uyy ** 2))) or 1.0
    grid = np.full(X.shape, np.inf)
    grid[live] = size / scale
    minima = (grid == minimum_filter(grid, size=3, mode="nearest")) & live & (grid < 0.1)
    seeds = np.stack([X[minima], Y[minima]], axis=-1)
    logger.debug("singularity scan: %d seeds on a %dx%d grid", len(seeds), res, res)
    if not len(seeds):
        return SingularityScan([], [], spacing)

    pts, residual = _polish(field, seeds, spacing, 2 * settings.newton_max_iterations)
    keep = residual <= 1e-9 * scale
    defined = _defined(field, pts[:, 0], pts[:, 1])
    pts, residual = pts[keep & defined], residual[keep & defined]

    # cluster duplicates, best residual first
    radius = max(settings.cluster_radius, 0.25 * spacing)
    accepted: List[np.ndarray] = []
    for i in np.argsort(residual):
        if all(np.hypot(*(pts[i] - q)) > radius for q in accepted):
            accepted.append(pts[i])

    regions: List[DegenerateRegion] = []
    isolated = np.ones(len(accepted), dtype=bool)
    if len(accepted) > 1:
        cloud = np.array(accepted)
        pairs = np.array(sorted(cKDTree(cloud).query_pairs(3 * spacing)), dtype=int).reshape(-1, 2)
        isolated[pairs.ravel()] = False
        graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(cloud), len(cloud)))
        _, labels = connected_components(graph, directed=False)
        for label in np.unique(labels[~isolated]):
            members = cloud[labels == label]
            region = DegenerateRegion([float(members[:, 0].min()), float(members[:, 0].max()),
                                       float(members[:, 1].min()), float(members[:, 1].max())], members)
            if isinstance(field, PolyField):
                _certify_c2_region(field, region, spacing, settings)
            if not region.c2_certified:
                logger.warning("degenerate set is not isolated in %s", region.bbox)
            regions.append(region)

    found = []
    others = np.array(accepted)
    for p, ok in zip(accepted, isolated):
        if not ok:
            continue
        bpoint, btan, bnormal, dist = domain.nearest_boundary(p)
        gaps = np.hypot(*(others - p).T)
        gaps = gaps[gaps > 0]
        room = 0.4 * float(gaps.min()) if len(gaps) else np.inf
        if dist <= 2 * spacing:
            s = Singularity(tuple(map(float, bpoint)), "boundary", inward_normal=tuple(map(float, bnormal)),
                            radius=min(4 * spacing, room))
        elif domain.contains(p):
            s = Singularity(tuple(map(float, p)), "interior", radius=min(4 * spacing, 0.5 * dist, room))
        else:
            continue
        if isinstance(field, PolyField) and s.kind == "interior":
            _certify_exact(field, s, spacing, settings)
        found.append(s)
    return SingularityScan(found, regions, spacing)


def _certify_exact(field: PolyField, s: Singularity, spacing: float, settings: Settings) -> None:
    snapped = tuple(Fraction(c).limit_denominator(settings.snap_denominator) for c in s.point)
    if max(abs(float(a) - b) for a, b in zip(snapped, s.point)) > spacing:
        return
    vx, vy = double_angle_polys(field.poly)
    if vx.evaluate(*snapped) == 0 and vy.evaluate(*snapped) == 0:
        s.exact_point = snapped
        s.point = (float(snapped[0]), float(snapped[1]))
        s.isolated_certificate = _exact_isolation(field.poly, snapped)


def _certify_c2_region(field: PolyField, region: DegenerateRegion, spacing: float, settings: Settings,
                       samples: int = 8) -> None:
    """
    A cluster is certified when every sampled point snaps to an exact C2 point whose
    eigenlines extend across the curve. The extended line field is then continuous there
    and the cluster drops out of the index sum.
    """
    from tools.classify import C2, classify_point

    vx, vy = double_angle_polys(field.poly)
    order = np.argsort(region.points[:, int(np.argmax(np.ptp(region.points, axis=0)))])
    picks = region.points[order][np.unique(np.linspace(0, len(order) - 1, samples).round().astype(int))]
    for p in picks:
        snapped = tuple(Fraction(float(c)).limit_denominator(settings.snap_denominator) for c in p)
        if vx.evaluate(*snapped) != 0 or vy.evaluate(*snapped) != 0:
            return
        try:
            if not isinstance(classify_point(field.poly, snapped), C2):
                return
        except HessfieldError:
            return
        crossing = c2_crossing_check(field, snapped, half_length=2 * spacing, levels=20)
        region.crossings.append({"point": [format_rational(c) for c in snapped], **crossing.to_dict()})
        if not crossing.passed:
            return
    region.c2_certified = True


# --------------------------------------------------------------------------
# Poincaré–Hopf audit
# --------------------------------------------------------------------------

@dataclass
class PHReport:
    singularities: List[IndexReport]
    index_sum: Optional[Fraction]
    expected: int
    verdict: str
    regions: List[dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"singularities": [s.to_dict() for s in self.singularities],
                "index_sum": format_rational(self.index_sum) if self.index_sum is not None else None,
                "expected": self.expected, "verdict": self.verdict,
                "non_isolated_regions": self.regions, "notes": self.notes}


def ph_audit(field: ScalarField, domain: Domain, settings: Optional[Settings] = None) -> PHReport:
    settings = settings or get_settings()
    scan = locate_singularities(field, domain, settings)
    expected = domain.euler_characteristic
    notes = [BOUNDARY_CONVENTION]

    def one(s: Singularity) -> IndexReport:
        rep = index_report(field, s.point, s.radius, s.kind, s.inward_normal, settings)
        rep.exact_point = s.exact_point
        return rep

    reports = parallel_map(one, scan.singularities, settings.threads, desc="indices", progress=settings.progress)
    for s in scan.singularities:
        if s.isolated_certificate is False:
            notes.append(f"lowest discriminant part at {s.point} is not positive; isolation rests on the ring test")
    regions = [r.to_dict() for r in scan.non_isolated_regions]
    for r in scan.non_isolated_regions:
        if r.c2_certified:
            notes.append(f"degenerate curve in {r.bbox} is C2; the line field extends across it")
    if scan.uncertified_regions:
        return PHReport(reports, None, expected, "inconclusive", regions,
                        notes + ["degenerate set is not a finite set of points"])
    if not all(r.converged for r in reports):
        return PHReport(reports, None, expected, "inconclusive", regions, notes + ["an index did not converge"])
    total = sum((r.index for r in reports), Fraction(0))
    verdict = "consistent" if total == expected else "contradiction"
    logger.info("index sum %s, expected %d: %s", total, expected, verdict)
    return PHReport(reports, total, expected, verdict, regions, notes)


# --------------------------------------------------------------------------
# crossing a C2 curve
# --------------------------------------------------------------------------

@dataclass
class CrossingReport:
    axis_angle: float
    epsilons: List[float]
    direction_jump: List[float]
    misalignment: List[float]
    passed: bool

    def to_dict(self) -> dict:
        return {"axis_angle": self.axis_angle, "epsilons": self.epsilons, "direction_jump": self.direction_jump,
                "misalignment": self.misalignment, "passed": self.passed}


def c2_crossing_check(field: PolyField, point, half_length: float = 0.1, levels: int = 12,
                      tolerance: float = 1e-6) -> CrossingReport:
    """
    Cross the degenerate curve through a C2 point along its normal line.

    The extended eigenlines must agree on both sides and one of them must be tangent
    to the curve, whose tangent is the zero line of the axis form ℓ.
    """
    from tools.classify import C2, classify_point

    cls = classify_point(field.poly, point)
    if not isinstance(cls, C2):
        raise InputError(f"point {point} is not a C2 point ({cls.tag})")
    a = cls.axis_angle
    normal = np.array([math.cos(a), math.sin(a)])
    tangent2 = np.array([math.cos(2 * a + np.pi), math.sin(2 * a + np.pi)])
    p0 = np.array([float(point[0]), float(point[1])])
    eps = [half_length * 2.0 ** -k for k in range(levels + 1)]
    jumps, misalign = [], []
    for e in eps:
        pts = np.array([p0 - e * normal, p0 + e * normal])
        uxx, uxy, uyy = field.hessians(pts[:, 0], pts[:, 1])
        V = np.stack([uxx - uyy, 2 * uxy], axis=-1)
        V = V / np.hypot(V[:, 0], V[:, 1])[:, None]
        jumps.append(float(np.hypot(*(V[1] - V[0]))))
        misalign.append(float(np.max(np.abs(V[:, 0] * tangent2[1] - V[:, 1] * tangent2[0]))))
    return CrossingReport(a, eps, jumps, misalign, jumps[-1] <= tolerance and misalign[-1] <= tolerance)


# --------------------------------------------------------------------------
# field dumps
# --------------------------------------------------------------------------

DUMP_COLUMNS = ["x", "y", "u", "ux", "uy", "uxx", "uxy", "uyy", "discriminant"]


def field_frame(field: ScalarField, points: np.ndarray) -> pd.DataFrame:
    pts = np.asarray(points, dtype=float)
    d = field.derivatives(pts[:, 0], pts[:, 1])
    return pd.DataFrame({
        "x": pts[:, 0], "y": pts[:, 1], "u": d.value, "ux": d.ux, "uy": d.uy,
        "uxx": d.uxx, "uxy": d.uxy, "uyy": d.uyy,
        "discriminant": (d.uxx - d.uyy) ** 2 + 4 * d.uxy ** 2,
    }, columns=DUMP_COLUMNS)


def dump_field(field: ScalarField, points: np.ndarray, path) -> int:
    frame = field_frame(field, points)
    frame.to_csv(path, index=False, float_format="%.17g")
    return len(frame)
