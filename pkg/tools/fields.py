"""Scalar fields with closed-form jets up to third order."""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from tools.algebra import BiPoly, RationalLike, as_rational
from tools.errors import InputError, NearSingular, OutsideSupport
from tools.operators import HessianSample

logger = logging.getLogger(__name__)

Point = Tuple[float, float]

# exp(-745) underflows to zero in double precision
_EXP_UNDERFLOW = 745.0


@dataclass(frozen=True)
class Jet3:
    value: float
    grad: Tuple[float, float]
    hess: HessianSample
    third: Tuple[float, float, float, float]  # uxxx, uxxy, uxyy, uyyy

    def __post_init__(self):
        entries = (self.value, *self.grad, self.hess.uxx, self.hess.uxy, self.hess.uyy, *self.third)
        if not all(math.isfinite(v) for v in entries):
            raise NearSingular("jet has non-finite entries")

    @property
    def grad_norm(self) -> float:
        return math.hypot(*self.grad)


class Derivatives(NamedTuple):
    value: np.ndarray
    ux: np.ndarray
    uy: np.ndarray
    uxx: np.ndarray
    uxy: np.ndarray
    uyy: np.ndarray
    uxxx: np.ndarray
    uxxy: np.ndarray
    uxyy: np.ndarray
    uyyy: np.ndarray

    def jet(self, i: int = 0) -> Jet3:
        f = [float(np.ravel(a)[i]) for a in self]
        return Jet3(f[0], (f[1], f[2]), HessianSample(f[3], f[4], f[5]), (f[6], f[7], f[8], f[9]))


class ScalarField(ABC):
    """A planar field u with analytic derivatives; subclasses vectorize over point arrays."""

    kind = "field"

    @abstractmethod
    def derivatives(self, xs: np.ndarray, ys: np.ndarray) -> Derivatives:
        ...

    def jet3_at(self, point: Sequence[float]) -> Jet3:
        x, y = point
        return self.derivatives(np.array([float(x)]), np.array([float(y)])).jet(0)

    def hessians(self, xs, ys) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        d = self.derivatives(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
        return d.uxx, d.uxy, d.uyy

    def values(self, xs, ys) -> np.ndarray:
        return self.derivatives(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)).value

    @property
    def is_polynomial(self) -> bool:
        return False

    def describe(self) -> dict:
        return {"type": self.kind}


class PolyField(ScalarField):
    kind = "poly"

    def __init__(self, poly: BiPoly):
        self.poly = poly
        p = poly
        px, py = p.derive("x"), p.derive("y")
        pxx, pxy, pyy = px.derive("x"), px.derive("y"), py.derive("y")
        self._chain = (p, px, py, pxx, pxy, pyy,
                       pxx.derive("x"), pxx.derive("y"), pxy.derive("y"), pyy.derive("y"))

    @property
    def is_polynomial(self) -> bool:
        return True

    def derivatives(self, xs, ys) -> Derivatives:
        return Derivatives(*(q(xs, ys) for q in self._chain))

    def jet3_at(self, point: Sequence[RationalLike]) -> Jet3:
        # exact evaluation, rounded once
        x, y = as_rational(point[0]), as_rational(point[1])
        f = [float(q.evaluate(x, y)) for q in self._chain]
        return Jet3(f[0], (f[1], f[2]), HessianSample(f[3], f[4], f[5]), (f[6], f[7], f[8], f[9]))

    def describe(self) -> dict:
        return {"type": self.kind, **self.poly.to_json()}


# --------------------------------------------------------------------------
# bump field
# --------------------------------------------------------------------------

def bump_profile_derivs(r2, rho: float):
    """
    g(s) = exp(-1/(ρ² - s)) and its first three s-derivatives at s = r².

    Args:
        r2: squared distance to the bump center, scalar or array, must be < ρ²
        rho: bump radius

    Returns:
        (g, g', g'', g''')
    """
    r2 = np.asarray(r2, dtype=float)
    q = rho * rho - r2
    if np.any(q <= 0):
        raise OutsideSupport(f"r² must be below ρ² = {rho * rho}")
    live = q * _EXP_UNDERFLOW > 1.0
    q = np.where(live, q, 1.0)
    inv = 1.0 / q
    g = np.where(live, np.exp(-inv), 0.0)
    g1 = -g * inv ** 2
    g2 = g * (1 - 2 * q) * inv ** 4
    g3 = g * (-1 + 6 * q - 6 * q * q) * inv ** 6
    if g.ndim == 0:
        return float(g), float(g1), float(g2), float(g3)
    return g, g1, g2, g3


@dataclass(frozen=True)
class Disk:
    center: Tuple[float, float]
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InputError(f"bump radius must be positive, got {self.radius}")


class BumpField(ScalarField):
    """u = exp(-1/(ρ² - r²)) inside each disk, 0 elsewhere."""

    kind = "bump"

    def __init__(self, disks: Sequence[Disk], margin: float = 0.0):
        self.disks: List[Disk] = list(disks)
        if not self.disks:
            raise InputError("bump field needs at least one disk")
        for i, a in enumerate(self.disks):
            for b in self.disks[i + 1:]:
                gap = math.dist(a.center, b.center) - a.radius - b.radius
                if gap <= margin:
                    raise InputError(f"disks at {a.center} and {b.center} are not disjoint with margin {margin}")

    def derivatives(self, xs, ys) -> Derivatives:
        xs, ys = np.broadcast_arrays(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
        out = [np.zeros(xs.shape) for _ in range(10)]
        for disk in self.disks:
            X, Y = xs - disk.center[0], ys - disk.center[1]
            s = X * X + Y * Y
            inside = s < disk.radius ** 2
            if not np.any(inside):
                continue
            X, Y = X[inside], Y[inside]
            g, g1, g2, g3 = bump_profile_derivs(s[inside], disk.radius)
            parts = (
                g,
                2 * X * g1,
                2 * Y * g1,
                2 * g1 + 4 * X * X * g2,
                4 * X * Y * g2,
                2 * g1 + 4 * Y * Y * g2,
                12 * X * g2 + 8 * X ** 3 * g3,
                4 * Y * g2 + 8 * X * X * Y * g3,
                4 * X * g2 + 8 * X * Y * Y * g3,
                12 * Y * g2 + 8 * Y ** 3 * g3,
            )
            for arr, part in zip(out, parts):
                arr[inside] = part
        return Derivatives(*out)

    def describe(self) -> dict:
        return {"type": self.kind,
                "disks": [{"center": list(d.center), "radius": d.radius} for d in self.disks]}


# --------------------------------------------------------------------------
# radial plus linear
# --------------------------------------------------------------------------

class RadialProfile:
    """v(ϱ) = Σ c_k ϱ^k with exact coefficients."""

    def __init__(self, coeffs: Sequence[RationalLike]):
        c = [as_rational(v) for v in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(c)

    @classmethod
    def linear(cls, c0: RationalLike, t: RationalLike) -> "RadialProfile":
        """v = -c₀ + tϱ."""
        return cls([-as_rational(c0), t])

    @classmethod
    def quadratic(cls, t1: RationalLike, t2: RationalLike) -> "RadialProfile":
        """v = t₁ϱ² + t₂."""
        return cls([t2, 0, t1])

    def __repr__(self) -> str:
        return f"RadialProfile({[str(c) for c in self.coeffs]})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RadialProfile) and self.coeffs == other.coeffs

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RadialProfile([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "RadialProfile":
        return RadialProfile([-c for c in self.coeffs])

    def __sub__(self, other: "RadialProfile") -> "RadialProfile":
        return self + (-other)

    def __mul__(self, other) -> "RadialProfile":
        if not isinstance(other, RadialProfile):
            return RadialProfile([as_rational(other) * c for c in self.coeffs])
        out = [Fraction(0)] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RadialProfile(out)

    __rmul__ = __mul__

    def shift(self, c: RationalLike) -> "RadialProfile":
        return self + RadialProfile([c])

    def times_rho(self) -> "RadialProfile":
        return RadialProfile([0, *self.coeffs]) if self.coeffs else self

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_even(self) -> bool:
        return all(not c for k, c in enumerate(self.coeffs) if k % 2)

    def derive(self, order: int = 1) -> "RadialProfile":
        c = list(self.coeffs)
        for _ in range(order):
            c = [k * v for k, v in enumerate(c)][1:]
        return RadialProfile(c)

    def __call__(self, rho):
        if not self.coeffs:
            return np.zeros(np.shape(rho))
        return np.polynomial.polynomial.polyval(np.asarray(rho, dtype=float), [float(c) for c in self.coeffs])

    def to_bipoly(self) -> BiPoly:
        if not self.is_even():
            raise InputError("only even profiles are polynomial in x and y")
        out = BiPoly.zero()
        for k in range(0, len(self.coeffs), 2):
            out = out + BiPoly.radial(k // 2).scale(self.coeffs[k])
        return out


class RadialLinearField(ScalarField):
    """u = a x + b y + c₀ + v(√(x² + y²))."""

    kind = "radial_linear"

    def __init__(self, a: RationalLike, b: RationalLike, c0: RationalLike, profile: RadialProfile):
        self.a, self.b, self.c0 = as_rational(a), as_rational(b), as_rational(c0)
        self.profile = profile
        self._poly = PolyField(self.to_poly()) if profile.is_even() else None

    def to_poly(self) -> BiPoly:
        return (BiPoly({(1, 0): self.a, (0, 1): self.b, (0, 0): self.c0})
                + self.profile.to_bipoly())

    @property
    def is_polynomial(self) -> bool:
        return self._poly is not None

    def jet3_at(self, point) -> Jet3:
        if self._poly is not None:
            return self._poly.jet3_at(point)
        return super().jet3_at(point)

    def derivatives(self, xs, ys) -> Derivatives:
        if self._poly is not None:
            return self._poly.derivatives(xs, ys)
        xs, ys = np.broadcast_arrays(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
        rho = np.hypot(xs, ys)
        if np.any(rho < 1e-12):
            raise NearSingular("odd radial profile is not smooth at the origin")
        v = self.profile
        v0, v1, v2, v3 = v(rho), v.derive()(rho), v.derive(2)(rho), v.derive(3)(rho)
        e1, e2 = xs / rho, ys / rho
        A, B = v2, v1 / rho
        C = (A - B) / rho
        D = v3 - 3 * C
        return Derivatives(
            float(self.a) * xs + float(self.b) * ys + float(self.c0) + v0,
            float(self.a) + v1 * e1,
            float(self.b) + v1 * e2,
            B + (A - B) * e1 * e1,
            (A - B) * e1 * e2,
            B + (A - B) * e2 * e2,
            3 * C * e1 + D * e1 ** 3,
            C * e2 + D * e1 * e1 * e2,
            C * e1 + D * e1 * e2 * e2,
            3 * C * e2 + D * e2 ** 3,
        )

    def describe(self) -> dict:
        return {"type": self.kind, "a": str(self.a), "b": str(self.b), "c0": str(self.c0),
                "profile": [str(c) for c in self.profile.coeffs]}


class ScaledField(ScalarField):
    """u_t(p) = u(t p) / t²."""

    kind = "scaled"

    def __init__(self, base: ScalarField, t: float):
        self.base = base
        self.t = float(t)

    def derivatives(self, xs, ys) -> Derivatives:
        t = self.t
        d = self.base.derivatives(t * np.asarray(xs, dtype=float), t * np.asarray(ys, dtype=float))
        return Derivatives(d.value / t ** 2, d.ux / t, d.uy / t, d.uxx, d.uxy, d.uyy,
                           t * d.uxxx, t * d.uxxy, t * d.uxyy, t * d.uyyy)

    def describe(self) -> dict:
        return {"type": self.kind, "t": self.t, "base": self.base.describe()}


def radial_deviation(field: ScalarField, center: Point, radii: Sequence[float], samples: int = 256) -> float:
    """Largest spread of u over circles about center; zero for a radial field."""
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    worst = 0.0
    for r in radii:
        vals = field.values(center[0] + r * np.cos(theta), center[1] + r * np.sin(theta))
        worst = max(worst, float(np.max(vals) - np.min(vals)))
    return worst


def finite_difference_check(field: ScalarField, point: Point, step: float = 1e-5) -> float:
    """Worst relative mismatch between each jet entry and a central difference of the entry below."""
    x, y = point
    jets = {(dx, dy): field.jet3_at((x + dx, y + dy))
            for dx, dy in ((step, 0), (-step, 0), (0, step), (0, -step))}
    j0 = field.jet3_at(point)

    def cd(attr, axis):
        if axis == "x":
            return (attr(jets[(step, 0)]) - attr(jets[(-step, 0)])) / (2 * step)
        return (attr(jets[(0, step)]) - attr(jets[(0, -step)])) / (2 * step)

    pairs = [
        (j0.grad[0], cd(lambda j: j.value, "x")),
        (j0.grad[1], cd(lambda j: j.value, "y")),
        (j0.hess.uxx, cd(lambda j: j.grad[0], "x")),
        (j0.hess.uxy, cd(lambda j: j.grad[0], "y")),
        (j0.hess.uyy, cd(lambda j: j.grad[1], "y")),
        (j0.third[0], cd(lambda j: j.hess.uxx, "x")),
        (j0.third[1], cd(lambda j: j.hess.uxx, "y")),
        (j0.third[2], cd(lambda j: j.hess.uyy, "x")),
        (j0.third[3], cd(lambda j: j.hess.uyy, "y")),
    ]
    scale = max(1.0, max(abs(a) for a, _ in pairs))
    return max(abs(a - b) for a, b in pairs) / scale
