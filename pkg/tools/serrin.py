"""Overdetermined problems u = 0, |Du| = c on ∂Ω for solutions of J[Δu, H(u)] = 0.

The audit follows the radial-or-contradiction argument: a degenerate point of radial
type (C3) forces u to be radial and Ω a disk, while harmonic (C1) or linear-power (C2)
points carry negative indices that cannot add up to the Euler characteristic of a disk.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import numpy as np

from tools.algebra import BiPoly, RationalLike, as_rational, format_rational
from tools.classify import (C3, ClassificationReport, LemmaViolation, classification_report,
                            radial_about)
from tools.domains import Domain, fit_circle, scale_domain
from tools.errors import (BoundaryViolation, InputError, InvalidConstant, PDEInconsistent,
                          ZeroScale)
from tools.fields import (BumpField, Derivatives, PolyField, RadialLinearField, RadialProfile,
                          ScalarField, ScaledField, radial_deviation)
from tools.linefield import PHReport, TangencyReport, locate_singularities, ph_audit, tangency_check
from tools.operators import hess_det, jacobian, laplacian
from tools.settings import Settings, get_settings

logger = logging.getLogger(__name__)


@dataclass
class OverdeterminedSpec:
    field: ScalarField
    domain: Domain
    c: Fraction

    def __post_init__(self):
        self.c = as_rational(self.c)
        if self.c < 0:
            raise InvalidConstant(f"boundary constant must be nonnegative, got {self.c}")

    def describe(self) -> dict:
        return {"field": self.field.describe(), "domain": self.domain.describe(), "c": format_rational(self.c)}


def polynomial_of(u: ScalarField) -> Optional[BiPoly]:
    """Exact polynomial behind a field, when there is one."""
    if isinstance(u, PolyField):
        return u.poly
    if isinstance(u, RadialLinearField) and u.is_polynomial:
        return u.to_poly()
    return None


# --------------------------------------------------------------------------
# boundary and PDE checks
# --------------------------------------------------------------------------

@dataclass
class BoundaryReport:
    max_abs_u: float
    max_grad_deviation: float
    c: Fraction
    samples: int
    passed: bool

    def to_dict(self) -> dict:
        return {"max_abs_u": self.max_abs_u, "max_grad_deviation": self.max_grad_deviation,
                "c": format_rational(self.c), "samples": self.samples, "passed": self.passed}


def check_overdetermined(spec: OverdeterminedSpec, samples: Optional[int] = None,
                         settings: Optional[Settings] = None) -> BoundaryReport:
    settings = settings or get_settings()
    n = max(samples or settings.boundary_samples, settings.boundary_samples)
    b = spec.domain.boundary_samples(n)
    d = spec.field.derivatives(b.points[:, 0], b.points[:, 1])
    max_u = float(np.max(np.abs(d.value)))
    max_grad = float(np.max(np.abs(np.hypot(d.ux, d.uy) - float(spec.c))))
    tol = settings.boundary_residual_tolerance
    passed = max_u <= tol and max_grad <= tol * max(1.0, float(spec.c))
    logger.debug("boundary residuals: |u| %.3g, ||Du| - c| %.3g", max_u, max_grad)
    return BoundaryReport(max_u, max_grad, spec.c, len(b.points), passed)


@dataclass
class PDEReport:
    exact: bool
    passed: bool
    residual: float
    scale: float = 1.0
    polynomial: Optional[BiPoly] = None
    samples: int = 0

    def to_dict(self) -> dict:
        out = {"exact": self.exact, "passed": self.passed, "residual": self.residual}
        if self.exact:
            out["jacobian"] = self.polynomial.to_json()
        else:
            out["scale"], out["samples"] = self.scale, self.samples
        return out


def jacobian_residuals(d: Derivatives) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized J[Δu, H(u)] and the bound |∇Δu|·|∇H| from third-order data."""
    lap_x, lap_y = d.uxxx + d.uxyy, d.uxxy + d.uyyy
    det_x = d.uxxx * d.uyy + d.uxx * d.uxyy - 2 * d.uxy * d.uxxy
    det_y = d.uxxy * d.uyy + d.uxx * d.uyyy - 2 * d.uxy * d.uxyy
    return lap_x * det_y - lap_y * det_x, np.hypot(lap_x, lap_y) * np.hypot(det_x, det_y)


def check_pde_consistency(u: ScalarField, domain: Domain, settings: Optional[Settings] = None) -> PDEReport:
    """Exact J[Δu, H(u)] for polynomials, the largest grid residual otherwise."""
    settings = settings or get_settings()
    poly = polynomial_of(u)
    if poly is not None:
        J = jacobian(laplacian(poly), hess_det(poly))
        worst = max((abs(float(c)) for _, c in J.items()), default=0.0)
        return PDEReport(exact=True, passed=J.is_zero(), residual=worst, polynomial=J)
    pts = domain.interior_samples(64)
    residual, scale = jacobian_residuals(u.derivatives(pts[:, 0], pts[:, 1]))
    worst = float(np.max(np.abs(residual)))
    return PDEReport(exact=False, passed=worst <= settings.pde_residual_tolerance, residual=worst,
                     scale=float(np.max(scale)), samples=len(pts))


# --------------------------------------------------------------------------
# scaling
# --------------------------------------------------------------------------

def scale_transform(spec: OverdeterminedSpec, t: RationalLike) -> OverdeterminedSpec:
    """u_t(p) = u(t p) / t² on Ω / t with boundary constant c / |t|."""
    t = as_rational(t)
    if t == 0:
        raise ZeroScale("scale factor must be nonzero")
    poly = polynomial_of(spec.field)
    if poly is not None:
        scaled: ScalarField = PolyField(poly.compose_linear(t, 0, 0, t).scale(1 / (t * t)))
    elif isinstance(spec.field, ScaledField):
        scaled = ScaledField(spec.field.base, spec.field.t * float(t))
    else:
        scaled = ScaledField(spec.field, float(t))
    return OverdeterminedSpec(scaled, scale_domain(spec.domain, t), spec.c / abs(t))


# --------------------------------------------------------------------------
# radial ODE families
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RadialFamily:
    """v = -c₀ + tϱ (linear) or v = t₁ϱ² + t₂ (quadratic)."""

    kind: str
    t: Fraction = Fraction(0)
    t1: Fraction = Fraction(0)
    t2: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in ("linear", "quadratic"):
            raise InputError(f"unknown radial family {self.kind!r}")

    @classmethod
    def linear(cls, t: RationalLike) -> "RadialFamily":
        return cls("linear", t=as_rational(t))

    @classmethod
    def quadratic(cls, t1: RationalLike, t2: RationalLike) -> "RadialFamily":
        return cls("quadratic", t1=as_rational(t1), t2=as_rational(t2))

    def profile(self, c0: RationalLike) -> RadialProfile:
        if self.kind == "linear":
            return RadialProfile.linear(c0, self.t)
        return RadialProfile.quadratic(self.t1, self.t2)

    def c_squared(self, c0: RationalLike) -> Fraction:
        c0 = as_rational(c0)
        value = 1 - self.t ** 2 if self.kind == "linear" else 1 - 4 * self.t1 * (c0 + self.t2)
        if value < 0:
            raise InvalidConstant(f"{self.kind} family needs c² = {value} < 0")
        return value

    def to_dict(self) -> dict:
        if self.kind == "linear":
            return {"kind": self.kind, "t": format_rational(self.t)}
        return {"kind": self.kind, "t1": format_rational(self.t1), "t2": format_rational(self.t2)}


def radial_ode_residual(family: RadialFamily, c0: RationalLike, c: Optional[float] = None,
                        rho: Optional[np.ndarray] = None) -> float:
    """
    Largest |1 + v'² - 2(c₀ + v)v'/ϱ - c²| over the samples.

    Args:
        family: linear or quadratic profile family
        c0: additive constant of u
        c: boundary constant; defaults to the one the family requires
        rho: positive radii, 256 log-spaced samples in [0.1, 10] when omitted
    """
    c0 = as_rational(c0)
    c2 = float(family.c_squared(c0)) if c is None else float(c) ** 2
    rho = np.geomspace(0.1, 10.0, 256) if rho is None else np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise InputError("radii must be positive")
    v = family.profile(c0)
    v0, v1 = v(rho), v.derive()(rho)
    residual = 1 + v1 ** 2 - 2 * (float(c0) + v0) / rho * v1 - c2
    return float(np.max(np.abs(residual)))


def ode_factor_check(family: RadialFamily, c0: RationalLike) -> dict:
    """
    Exact checks on the profile: the factor of the factored radial equation that the
    family kills, and the equation itself multiplied through by ϱ.
    """
    c0 = as_rational(c0)
    v = family.profile(c0)
    dv = v.derive()
    if family.kind == "linear":
        factor = v.shift(c0) - dv.times_rho()
        name = "c0 + v - rho v'"
    else:
        factor = v.derive(2).times_rho() - dv
        name = "-v' + rho v''"
    c2 = family.c_squared(c0)
    one = RadialProfile([1])
    equation = (one + dv * dv).shift(-c2).times_rho() - (v.shift(c0) * dv) * 2
    return {"family": family.to_dict(), "c0": format_rational(c0), "c_squared": format_rational(c2),
            "factor": name, "factor_vanishes": factor.is_zero(), "equation_vanishes": equation.is_zero()}


@dataclass
class NodalReport:
    t: Fraction
    directions: List[Tuple[float, float]]
    origin_only: bool
    sign_changes: int
    bounds_jordan_domain: bool = False

    def to_dict(self) -> dict:
        return {"t": format_rational(self.t), "rays": [list(d) for d in self.directions],
                "origin_only": self.origin_only, "sign_changes_on_unit_circle": self.sign_changes,
                "bounds_jordan_domain": self.bounds_jordan_domain}


def nodal_line_check(u: RadialLinearField, samples: int = 720) -> NodalReport:
    """
    Zero set of u = ℓ·p + tϱ for the linear family: rays from the origin in the
    directions d with ℓ̂·d = -t/|ℓ|, so never a smooth closed curve.
    """
    if u.profile != RadialProfile.linear(u.c0, u.profile.coeffs[1] if len(u.profile.coeffs) > 1 else 0):
        raise InputError("nodal lines are only known for the linear family v = -c0 + t rho")
    t = u.profile.coeffs[1] if len(u.profile.coeffs) > 1 else Fraction(0)
    a, b = float(u.a), float(u.b)
    norm = float(np.hypot(a, b))
    if norm == 0:
        raise InputError("linear part a x + b y must not vanish")
    e = np.array([a, b]) / norm
    perp = np.array([-e[1], e[0]])
    tn = float(t) / norm
    directions: List[Tuple[float, float]] = []
    if abs(tn) <= 1:
        root = float(np.sqrt(1 - tn * tn))
        for sign in ((1.0, -1.0) if root > 0 else (1.0,)):
            d = -tn * e + sign * root * perp
            directions.append((float(d[0]), float(d[1])))
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    vals = u.values(np.cos(theta), np.sin(theta))
    signs = np.sign(vals)
    changes = int(np.count_nonzero(signs != np.roll(signs, 1)))
    return NodalReport(t, directions, not directions, changes)


# --------------------------------------------------------------------------
# the audit
# --------------------------------------------------------------------------

@dataclass
class RadialDisk:
    center: Tuple[Fraction, Fraction]
    radius: float
    deviation: float
    tag = "radial_disk"

    def to_dict(self) -> dict:
        return {"tag": self.tag, "center": [format_rational(c) for c in self.center],
                "radius": self.radius, "circle_deviation": self.deviation}


@dataclass
class Contradiction:
    ph: PHReport
    tangency: TangencyReport
    tag = "contradiction"

    def to_dict(self) -> dict:
        return {"tag": self.tag, "ph": self.ph.to_dict(), "tangency": self.tangency.to_dict()}


@dataclass
class HypothesisNotMet:
    which: str
    tag = "hypothesis_not_met"

    def to_dict(self) -> dict:
        return {"tag": self.tag, "which": self.which}


@dataclass
class Inconclusive:
    why: str
    details: dict = field(default_factory=dict)
    tag = "inconclusive"

    def to_dict(self) -> dict:
        return {"tag": self.tag, "why": self.why, **self.details}


Conclusion = Union[RadialDisk, Contradiction, HypothesisNotMet, Inconclusive]


@dataclass
class Verdict:
    pde: PDEReport
    boundary: BoundaryReport
    conclusion: Optional[Conclusion] = None
    inventory: List[ClassificationReport] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 2 if isinstance(self.conclusion, Contradiction) else 0

    def to_dict(self) -> dict:
        return {"pde_consistent": self.pde.passed, "pde": self.pde.to_dict(),
                "boundary_ok": self.boundary.passed, "boundary": self.boundary.to_dict(),
                "U_inventory": [r.to_dict() for r in self.inventory],
                "conclusion": self.conclusion.to_dict() if self.conclusion else None}


def _disk_conclusion(spec: OverdeterminedSpec, center: Tuple[Fraction, Fraction],
                     settings: Settings) -> Conclusion:
    fit = fit_circle(spec.domain.boundary_samples(settings.boundary_samples).points)
    tol = settings.circle_fit_tolerance * fit.radius
    offset = float(np.hypot(fit.center[0] - float(center[0]), fit.center[1] - float(center[1])))
    if fit.max_deviation > tol or offset > tol:
        return Inconclusive("boundary is not a circle about the centre of symmetry",
                            {"circle_deviation": fit.max_deviation, "center_offset": offset})
    return RadialDisk(center, fit.radius, fit.max_deviation)


def _index_conclusion(spec: OverdeterminedSpec, poly: BiPoly, settings: Settings) -> Conclusion:
    ph = ph_audit(PolyField(poly), spec.domain, settings)
    tangency = tangency_check(spec.field, spec.domain, settings=settings)
    if ph.verdict == "contradiction":
        return Contradiction(ph, tangency)
    return Inconclusive(f"index audit is {ph.verdict}", {"ph": ph.to_dict(), "tangency": tangency.to_dict()})


def _quadratic_audit(spec: OverdeterminedSpec, poly: BiPoly, verdict: Verdict, settings: Settings) -> Conclusion:
    uxx, uxy, uyy = 2 * poly.coeff(2, 0), poly.coeff(1, 1), 2 * poly.coeff(0, 2)
    if uxy or uxx != uyy:
        return _index_conclusion(spec, poly, settings)
    lam = uxx
    if lam == 0:
        return Inconclusive("u is affine, so D²u vanishes identically")
    center = (-poly.coeff(1, 0) / lam, -poly.coeff(0, 1) / lam)
    verdict.inventory.append(classification_report(poly, center))
    if not radial_about(poly, center):
        raise PDEInconsistent(f"D²u = {lam}·Id but u is not radial about {center}")
    return _disk_conclusion(spec, center, settings)


def _degenerate_audit(spec: OverdeterminedSpec, poly: BiPoly, verdict: Verdict, settings: Settings) -> Conclusion:
    scan = locate_singularities(PolyField(poly), spec.domain, settings)
    if scan.uncertified_regions:
        return Inconclusive("degenerate set is not a finite set of points",
                            {"regions": [r.to_dict() for r in scan.uncertified_regions]})
    for s in scan.singularities:
        if s.exact_point is None:
            return Inconclusive(f"degenerate point near {s.point} has no exact rational location")
        verdict.inventory.append(classification_report(poly, s.exact_point))
    for report in verdict.inventory:
        if isinstance(report.result, LemmaViolation):
            raise PDEInconsistent(f"point {report.point} violates the proportionality lemma: "
                                  f"{report.result.reason}", report)
    for report in verdict.inventory:
        if isinstance(report.result, C3):
            if not radial_about(poly, report.point):
                raise PDEInconsistent(f"C3 point {report.point} but u is not radial about it", report)
            return _disk_conclusion(spec, report.point, settings)
    return _index_conclusion(spec, poly, settings)


def theorem1_audit(spec: OverdeterminedSpec, settings: Optional[Settings] = None) -> Verdict:
    """
    Audit one overdetermined instance end to end.

    Raises:
        BoundaryViolation: u = 0 or |Du| = c fails on the sampled boundary
        PDEInconsistent: J[Δu, H(u)] does not vanish, or a degenerate point breaks the lemma
    """
    settings = settings or get_settings()
    poly = polynomial_of(spec.field)
    if poly is not None and poly.is_zero():
        raise InputError("u must not vanish identically")
    boundary = check_overdetermined(spec, settings=settings)
    if not boundary.passed:
        raise BoundaryViolation(f"boundary conditions fail: |u| up to {boundary.max_abs_u:.3g}, "
                                f"||Du| - c| up to {boundary.max_grad_deviation:.3g}", boundary)
    pde = check_pde_consistency(spec.field, spec.domain, settings)
    if not pde.passed:
        raise PDEInconsistent(f"J[Δu, H(u)] does not vanish (residual {pde.residual:.3g})", pde)
    verdict = Verdict(pde, boundary)
    if not spec.domain.simply_connected:
        verdict.conclusion = HypothesisNotMet("simply-connected")
    elif poly is None:
        verdict.conclusion = Inconclusive("no certified Taylor data for a non-polynomial field")
    elif poly.degree <= 2:
        verdict.conclusion = _quadratic_audit(spec, poly, verdict, settings)
    else:
        verdict.conclusion = _degenerate_audit(spec, poly, verdict, settings)
    logger.info("audit conclusion: %s", verdict.conclusion.tag)
    return verdict


# --------------------------------------------------------------------------
# bump counterexample
# --------------------------------------------------------------------------

@dataclass
class BumpReport:
    boundary: BoundaryReport
    pde: PDEReport
    margin: float
    disks_inside: bool
    radial_deviation: dict
    radial_about_any: bool

    @property
    def passed(self) -> bool:
        return self.boundary.passed and self.pde.passed and self.disks_inside and not self.radial_about_any

    def to_dict(self) -> dict:
        return {"boundary": self.boundary.to_dict(), "pde": self.pde.to_dict(), "margin": self.margin,
                "disks_inside": self.disks_inside, "radial_deviation": self.radial_deviation,
                "radial_about_any": self.radial_about_any, "passed": self.passed}


def bump_report(u: BumpField, domain: Domain, margin: Optional[float] = None,
                settings: Optional[Settings] = None) -> BumpReport:
    """Overdetermined with c = 0, J[Δu, H(u)] = 0, and radial about no candidate centre."""
    settings = settings or get_settings()
    margin = settings.bump_margin if margin is None else margin
    theta = np.linspace(0.0, 2 * np.pi, 128, endpoint=False)
    inside = all(
        bool(np.all(domain.contains_many(d.center[0] + (d.radius + margin) * np.cos(theta),
                                         d.center[1] + (d.radius + margin) * np.sin(theta))))
        for d in u.disks)
    spec = OverdeterminedSpec(u, domain, Fraction(0))
    boundary = check_overdetermined(spec, settings=settings)
    pde = check_pde_consistency(u, domain, settings)

    x0, x1, y0, y1 = domain.bounding_box()
    candidates = {f"disk {i}": d.center for i, d in enumerate(u.disks)}
    candidates["domain centre"] = ((x0 + x1) / 2, (y0 + y1) / 2)
    radii = np.linspace(0.02, 1.0, 50) * domain.diameter
    deviation = {name: radial_deviation(u, c, radii) for name, c in candidates.items()}
    floor = settings.boundary_residual_tolerance
    return BumpReport(boundary, pde, margin, inside, deviation,
                      radial_about_any=any(v <= floor for v in deviation.values()))
