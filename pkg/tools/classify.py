"""Hopf classification of degenerate Hessian points of polynomial fields.

At a point of U the field decomposes as c₀ + ax + by + λ/2(x² + y²) + w + ..., with w
the first homogeneous part of degree n + 2 ≥ 3. A solution of J[Δu, H(u)] = 0 forces
(Δw)² = μ²((Δw)² - 4H(w)) and w falls in one of three normal forms:

    C1  μ = 0        w = a Re ζ^(n+2)       (harmonic)
    C2  μ = 1        w = a ℓ^(n+2)           (power of a linear form)
    C3  μ = 1 + 1/k  w = a |ζ|^(2k+2)         (radial)
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Tuple, Union

from tools.algebra import BiPoly, RationalLike, as_rational, format_rational, to_polar
from tools.errors import Degenerate, InputError, NotInU
from tools.fields import PolyField
from tools.operators import discriminant, hess_det, laplacian

logger = logging.getLogger(__name__)

Center = Tuple[RationalLike, RationalLike]

# ∇w is sampled here, in order, to recover the axis of a C2 point
_AXIS_SAMPLES = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2), (3, 1), (1, 3)]


@dataclass(frozen=True)
class UPointClass:
    tag = "abstract"

    def to_dict(self) -> dict:
        out = {"class": self.tag}
        for k, v in asdict(self).items():
            out[k] = format_rational(v) if isinstance(v, Fraction) else v
        return out


@dataclass(frozen=True)
class Quadratic(UPointClass):
    tag = "quadratic"


@dataclass(frozen=True)
class C1(UPointClass):
    n: int
    a: float
    phase: float
    mu2: Fraction = Fraction(0)
    tag = "C1"


@dataclass(frozen=True)
class C2(UPointClass):
    n: int
    a: float
    axis_angle: float
    mu2: Fraction = Fraction(1)
    tag = "C2"


@dataclass(frozen=True)
class C3(UPointClass):
    k: int
    a: float
    mu: Fraction
    mu2: Fraction
    tag = "C3"


@dataclass(frozen=True)
class LemmaViolation(UPointClass):
    reason: str
    mu2: Optional[Fraction] = None
    tag = "violation"


@dataclass(frozen=True)
class JetDecomposition:
    """u = c₀ + ax + by + λ/2(x² + y²) + w + remainder about the center."""
    c0: Fraction
    a: Fraction
    b: Fraction
    lam: Fraction
    w: BiPoly
    remainder: BiPoly

    @property
    def n(self) -> Optional[int]:
        return self.w.degree - 2 if self.w else None

    @property
    def u1(self) -> BiPoly:
        return self.w + self.remainder


def _center(center: Center) -> Tuple[Fraction, Fraction]:
    return as_rational(center[0]), as_rational(center[1])


def _poly(u: Union[BiPoly, PolyField]) -> BiPoly:
    return u.poly if isinstance(u, PolyField) else u


def is_in_U(u: Union[BiPoly, PolyField], point: Center) -> bool:
    """True iff (Δu)² = 4H(u) holds exactly at the rational point."""
    x, y = _center(point)
    return discriminant(_poly(u)).evaluate(x, y) == 0


def decompose(u: Union[BiPoly, PolyField], center: Center = (0, 0)) -> JetDecomposition:
    u = _poly(u)
    cx, cy = _center(center)
    v = u.translate(cx, cy)
    c20, c11, c02 = v.coeff(2, 0), v.coeff(1, 1), v.coeff(0, 2)
    if c11 or c20 != c02:
        raise NotInU(f"D²u({cx}, {cy}) is not a multiple of the identity")
    u1 = BiPoly({k: c for k, c in v.terms.items() if sum(k) >= 3})
    w = u1.homog_part(u1.lowest_degree) if u1 else BiPoly.zero()
    return JetDecomposition(v.coeff(0, 0), v.coeff(1, 0), v.coeff(0, 1), 2 * c20, w, u1 - w)


def mu_squared(w: BiPoly) -> Optional[Fraction]:
    """
    Exact μ² with (Δw)² = μ²((Δw)² - 4H(w)).

    Returns:
        the rational μ², or None when the two sides are not proportional
    """
    lap = laplacian(w)
    top = lap * lap
    bottom = top - hess_det(w).scale(4)
    if bottom.is_zero():
        raise Degenerate("(Δw)² - 4H(w) vanishes identically; w has degree ≤ 2")
    key, ref = next(bottom.items())
    ratio = top.coeff(*key) / ref
    return ratio if top == bottom.scale(ratio) else None


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    return Fraction(n, d) if n * n == q.numerator and d * d == q.denominator else None


def _c1(w: BiPoly, n: int) -> UPointClass:
    if laplacian(w):
        return LemmaViolation("μ² = 0 but Δw is not identically zero", Fraction(0))
    ang = to_polar(w).angular
    N = n + 2
    if ang.harmonics() != [N]:
        return LemmaViolation(f"harmonic w is not a pure mode of order {N}", Fraction(0))
    A, B = float(ang.cos_coeff(N)), float(ang.sin_coeff(N))
    return C1(n=n, a=math.hypot(A, B), phase=math.atan2(B, A) / N)


def _c2(w: BiPoly, n: int) -> UPointClass:
    if hess_det(w):
        return LemmaViolation("μ² = 1 but H(w) is not identically zero", Fraction(1))
    wx, wy = w.derive("x"), w.derive("y")
    for px, py in _AXIS_SAMPLES:
        gx, gy = wx.evaluate(px, py), wy.evaluate(px, py)
        if gx or gy:
            break
    else:
        return LemmaViolation("∇w vanishes at every axis sample", Fraction(1))
    N = n + 2
    power = BiPoly({(1, 0): gx, (0, 1): gy}) ** N
    key, ref = next(power.items())
    k = w.coeff(*key) / ref
    if w != power.scale(k):
        return LemmaViolation("w is not a power of a linear form", Fraction(1))
    angle = math.atan2(gy, gx)
    a = float(k) * math.hypot(gx, gy) ** N
    if angle < 0:
        angle += math.pi
        a *= (-1) ** N
    if angle >= math.pi:
        angle -= math.pi
        a *= (-1) ** N
    return C2(n=n, a=a, axis_angle=angle)


def _c3(w: BiPoly, mu2: Fraction) -> UPointClass:
    mu = _exact_sqrt(mu2)
    if mu is None or mu <= 1:
        return LemmaViolation(f"μ² = {mu2} is not 0, 1 or (1 + 1/k)²", mu2)
    k = 1 / (mu - 1)
    if k.denominator != 1 or w.degree != 2 * k.numerator + 2:
        return LemmaViolation(f"μ² = {mu2} does not match degree {w.degree}", mu2)
    ang = to_polar(w).angular
    if not ang.is_constant():
        return LemmaViolation("μ = 1 + 1/k but w is not radial", mu2)
    return C3(k=k.numerator, a=float(ang.constant), mu=mu, mu2=mu2)


def classify_point(u: Union[BiPoly, PolyField], center: Center = (0, 0)) -> UPointClass:
    dec = decompose(u, center)
    if not dec.w:
        return Quadratic()
    n = dec.w.degree - 2
    mu2 = mu_squared(dec.w)
    if mu2 is None:
        result: UPointClass = LemmaViolation("(Δw)² is not proportional to (Δw)² - 4H(w)")
    elif mu2 == 0:
        result = _c1(dec.w, n)
    elif mu2 == 1:
        result = _c2(dec.w, n)
    else:
        result = _c3(dec.w, mu2)
    logger.debug("classified %s at %s as %s", u, center, result.tag)
    return result


def radial_about(u: Union[BiPoly, PolyField], center: Center) -> bool:
    """Every homogeneous part about the center has constant angular part."""
    cx, cy = _center(center)
    v = _poly(u).translate(cx, cy)
    return all(to_polar(part).angular.is_constant() for d, part in v.homog_parts().items() if d > 0)


def rotate_poly(u: BiPoly, c: RationalLike, s: RationalLike) -> BiPoly:
    """u(c x - s y, s x + c y) for a rational rotation c² + s² = 1."""
    c, s = as_rational(c), as_rational(s)
    if c * c + s * s != 1:
        raise InputError(f"({c}, {s}) is not a rotation")
    return u.compose_linear(c, -s, s, c)


@dataclass
class ClassificationReport:
    point: Tuple[Fraction, Fraction]
    in_U: bool
    result: Optional[UPointClass] = None
    decomposition: Optional[JetDecomposition] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {"point": [format_rational(c) for c in self.point], "in_U": self.in_U}
        if self.result is not None:
            out.update(self.result.to_dict())
            if isinstance(self.result, C3):
                out["n"] = 2 * self.result.k
        if self.decomposition is not None:
            d = self.decomposition
            out["params"] = {**out.get("params", {}),
                             "c0": format_rational(d.c0), "a": format_rational(d.a),
                             "b": format_rational(d.b), "lambda": format_rational(d.lam),
                             "w": d.w.to_json()}
        return out


def classification_report(u: Union[BiPoly, PolyField], point: Center) -> ClassificationReport:
    p = _center(point)
    if not is_in_U(u, p):
        return ClassificationReport(p, False)
    return ClassificationReport(p, True, classify_point(u, p), decompose(u, p))
