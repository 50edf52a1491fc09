"""Planar domains: disks, Fourier curves and the tubular band of the normal map.

The band Ψ(s, t) = γ(s) + t ν(s) uses the left normal ν = (-y', x')/|γ'|, so for a
counter-clockwise curve t > 0 points into the enclosed region and the Jacobian
determinant of Ψ in arc length is 1 - tκ(s).
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from matplotlib.path import Path
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

from tools.algebra import RationalLike, as_rational
from tools.errors import EmbeddingError, IllConditioned, InputError, NotInBand
from tools.fields import Derivatives, Jet3, ScalarField
from tools.settings import Settings, get_settings

logger = logging.getLogger(__name__)

TWO_PI = 2 * np.pi
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class BoundarySamples(NamedTuple):
    """Boundary points with unit tangents and inward normals, det[T, n] = 1."""
    points: np.ndarray
    tangents: np.ndarray
    normals: np.ndarray


# --------------------------------------------------------------------------
# Fourier curves
# --------------------------------------------------------------------------

class FourierCurve:
    """γ(τ) = (Σ x_cos[k] cos kτ + x_sin[k] sin kτ, Σ y_cos[k] cos kτ + y_sin[k] sin kτ)."""

    def __init__(self, x_cos: Sequence[RationalLike] = (), x_sin: Sequence[RationalLike] = (),
                 y_cos: Sequence[RationalLike] = (), y_sin: Sequence[RationalLike] = (),
                 settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        raw = [list(map(as_rational, c)) for c in (x_cos, x_sin, y_cos, y_sin)]
        K = max(len(c) for c in raw)
        if K < 2:
            raise InputError("curve needs at least one nonconstant harmonic")
        self.coeffs: Tuple[Tuple[Fraction, ...], ...] = tuple(
            tuple(c + [Fraction(0)] * (K - len(c))) for c in raw)
        self._xc, self._xs, self._yc, self._ys = (np.array([float(v) for v in c]) for c in self.coeffs)
        self._k = np.arange(K, dtype=float)
        self._check_regular()
        self._build_arc_length()

    # constructors

    @classmethod
    def circle(cls, radius: RationalLike, center: Tuple[RationalLike, RationalLike] = (0, 0),
               settings: Optional[Settings] = None) -> "FourierCurve":
        return cls([center[0], radius], [0, 0], [center[1], 0], [0, radius], settings=settings)

    @classmethod
    def ellipse(cls, a: RationalLike, b: RationalLike, settings: Optional[Settings] = None) -> "FourierCurve":
        """x = a cos τ, y = b sin τ."""
        return cls([0, a], [0, 0], [0, 0], [0, b], settings=settings)

    def reversed(self) -> "FourierCurve":
        xc, xs, yc, ys = self.coeffs
        return FourierCurve(xc, [-v for v in xs], yc, [-v for v in ys], settings=self.settings)

    def scaled(self, factor: RationalLike) -> "FourierCurve":
        f = as_rational(factor)
        return FourierCurve(*([v * f for v in c] for c in self.coeffs), settings=self.settings)

    def to_json(self) -> dict:
        names = ("x_cos", "x_sin", "y_cos", "y_sin")
        return {n: [f"{v.numerator}/{v.denominator}" for v in c] for n, c in zip(names, self.coeffs)}

    # evaluation

    def _series(self, cos_c, sin_c, tau, order):
        tau = np.asarray(tau, dtype=float)
        phase = np.multiply.outer(tau, self._k) + order * np.pi / 2
        weight = self._k ** order
        return np.cos(phase) @ (cos_c * weight) + np.sin(phase) @ (sin_c * weight)

    def derivative(self, tau, order: int = 0) -> np.ndarray:
        """d^order γ/dτ^order, shape (..., 2)."""
        return np.stack([self._series(self._xc, self._xs, tau, order),
                         self._series(self._yc, self._ys, tau, order)], axis=-1)

    def point(self, tau) -> np.ndarray:
        return self.derivative(tau, 0)

    def speed(self, tau) -> np.ndarray:
        d1 = self.derivative(tau, 1)
        return np.hypot(d1[..., 0], d1[..., 1])

    def frame(self, tau) -> Tuple[np.ndarray, np.ndarray]:
        """Unit tangent T and left normal ν."""
        d1 = self.derivative(tau, 1)
        T = d1 / np.hypot(d1[..., 0], d1[..., 1])[..., None]
        nu = np.stack([-T[..., 1], T[..., 0]], axis=-1)
        return T, nu

    def curvature_tau(self, tau) -> np.ndarray:
        d1, d2 = self.derivative(tau, 1), self.derivative(tau, 2)
        cross = d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]
        return cross / np.hypot(d1[..., 0], d1[..., 1]) ** 3

    def curvature_prime_tau(self, tau) -> np.ndarray:
        """dκ/ds."""
        d1, d2, d3 = self.derivative(tau, 1), self.derivative(tau, 2), self.derivative(tau, 3)
        S = np.hypot(d1[..., 0], d1[..., 1])
        N = d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]
        dN = d1[..., 0] * d3[..., 1] - d1[..., 1] * d3[..., 0]
        dS = (d1[..., 0] * d2[..., 0] + d1[..., 1] * d2[..., 1]) / S
        return (dN / S ** 3 - 3 * N * dS / S ** 4) / S

    def _check_regular(self) -> None:
        tau = np.linspace(0.0, TWO_PI, 4096, endpoint=False)
        speed = self.speed(tau)
        scale = float(np.max(np.abs(self.point(tau)))) + 1.0
        if np.min(speed) <= 1e-12 * scale:
            raise InputError("curve is not regular: |γ'(τ)| vanishes")

    # arc length

    def _build_arc_length(self) -> None:
        m = self.settings.arc_length_table
        self._tau_table = np.linspace(0.0, TWO_PI, m + 1)
        pieces = [quad(lambda t: float(self.speed(t)), a, b, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
                  for a, b in zip(self._tau_table[:-1], self._tau_table[1:])]
        self._s_table = np.concatenate([[0.0], np.cumsum(pieces)])
        self.length = float(self._s_table[-1])
        if np.any(np.diff(self._s_table) <= 0):
            raise InputError("arc-length table is not strictly increasing")
        self._tau_guess = PchipInterpolator(self._s_table, self._tau_table)
        logger.debug("curve length %.15g from %d quadrature panels", self.length, m)

    def arc_length(self, tau) -> np.ndarray:
        """s(τ), continued by periodicity outside [0, 2π)."""
        tau = np.asarray(tau, dtype=float)
        turns = np.floor(tau / TWO_PI)
        local = tau - turns * TWO_PI
        h = self._tau_table[1]
        idx = np.minimum((local / h).astype(int), len(self._tau_table) - 2)
        left = np.asarray(self._tau_table[idx])
        half = np.asarray((local - left) / 2)
        nodes = left[..., None] + half[..., None] * (_GL_NODES + 1)
        partial = half * (self.speed(nodes) @ _GL_WEIGHTS)
        return turns * self.length + self._s_table[idx] + partial

    def tau_of_s(self, s) -> np.ndarray:
        """Inverse of the arc-length map on [0, L): PCHIP guess refined by Newton."""
        s = np.mod(np.asarray(s, dtype=float), self.length)
        tau = self._tau_guess(s)
        for _ in range(8):
            step = (self.arc_length(tau) - s) / self.speed(tau)
            tau = tau - step
            if np.all(np.abs(step) < 1e-15):
                break
        return tau

    # geometry

    def curvature(self, s) -> np.ndarray:
        return self.curvature_tau(self.tau_of_s(s))

    def signed_area(self) -> Fraction:
        """Exact ½∮(x dy - y dx) / π; positive for counter-clockwise curves."""
        xc, xs, yc, ys = self.coeffs
        return sum((k * (xc[k] * ys[k] - xs[k] * yc[k]) for k in range(len(xc))), Fraction(0))

    @property
    def orientation(self) -> int:
        return 1 if self.signed_area() > 0 else -1

    def samples(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """n points uniform in arc length, with their τ values."""
        tau = self.tau_of_s(np.linspace(0.0, self.length, n, endpoint=False))
        return self.point(tau), tau


def curvature(curve: FourierCurve, s: float) -> float:
    return float(curve.curvature(s))


# --------------------------------------------------------------------------
# domain protocol
# --------------------------------------------------------------------------

class Domain(ABC):
    kind = "domain"
    euler_characteristic = 1
    simply_connected = True

    @abstractmethod
    def boundary_samples(self, n: int) -> BoundarySamples:
        ...

    @abstractmethod
    def contains_many(self, xs, ys) -> np.ndarray:
        ...

    def contains(self, point) -> bool:
        return bool(self.contains_many(np.array([float(point[0])]), np.array([float(point[1])]))[0])

    def bounding_box(self) -> Tuple[float, float, float, float]:
        pts = self.boundary_samples(512).points
        return (float(pts[:, 0].min()), float(pts[:, 0].max()),
                float(pts[:, 1].min()), float(pts[:, 1].max()))

    @property
    def diameter(self) -> float:
        return float(pdist(self.boundary_samples(512).points).max())

    def interior_samples(self, resolution: int = 64) -> np.ndarray:
        x0, x1, y0, y1 = self.bounding_box()
        X, Y = np.meshgrid(np.linspace(x0, x1, resolution), np.linspace(y0, y1, resolution))
        X, Y = X.ravel(), Y.ravel()
        keep = self.contains_many(X, Y)
        return np.stack([X[keep], Y[keep]], axis=-1)

    def nearest_boundary(self, point, n: int = 2048) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
        b = self.boundary_samples(n)
        d = np.hypot(*(b.points - np.asarray(point, dtype=float)).T)
        i = int(np.argmin(d))
        return b.points[i], b.tangents[i], b.normals[i], float(d[i])

    def describe(self) -> dict:
        return {"type": self.kind}


class DiskDomain(Domain):
    kind = "disk"

    def __init__(self, radius: RationalLike, center: Tuple[RationalLike, RationalLike] = (0, 0)):
        self.radius_exact = as_rational(radius)
        if self.radius_exact <= 0:
            raise InputError(f"disk radius must be positive, got {radius}")
        self.center_exact = (as_rational(center[0]), as_rational(center[1]))
        self.radius = float(self.radius_exact)
        self.center = (float(self.center_exact[0]), float(self.center_exact[1]))

    def boundary_samples(self, n: int) -> BoundarySamples:
        theta = np.linspace(0.0, TWO_PI, n, endpoint=False)
        c, s = np.cos(theta), np.sin(theta)
        points = np.stack([self.center[0] + self.radius * c, self.center[1] + self.radius * s], axis=-1)
        return BoundarySamples(points, np.stack([-s, c], axis=-1), np.stack([-c, -s], axis=-1))

    def contains_many(self, xs, ys) -> np.ndarray:
        return np.hypot(np.asarray(xs) - self.center[0], np.asarray(ys) - self.center[1]) < self.radius

    def bounding_box(self):
        (cx, cy), r = self.center, self.radius
        return cx - r, cx + r, cy - r, cy + r

    @property
    def diameter(self) -> float:
        return 2 * self.radius

    def interior_samples(self, resolution: int = 64) -> np.ndarray:
        r = np.linspace(0.0, self.radius, resolution // 4 + 1)[1:]
        theta = np.linspace(0.0, TWO_PI, resolution, endpoint=False)
        R, TH = np.meshgrid(r, theta)
        pts = np.stack([self.center[0] + R.ravel() * np.cos(TH.ravel()),
                        self.center[1] + R.ravel() * np.sin(TH.ravel())], axis=-1)
        return np.vstack([np.array([self.center]), pts])

    def describe(self) -> dict:
        return {"type": self.kind, "center": [str(c) for c in self.center_exact], "radius": str(self.radius_exact)}


class CurveDomain(Domain):
    """Interior of a Fourier Jordan curve."""

    kind = "curve"

    def __init__(self, curve: FourierCurve):
        self.curve = curve
        pts, _ = curve.samples(2048)
        self._path = Path(pts)

    def boundary_samples(self, n: int) -> BoundarySamples:
        pts, tau = self.curve.samples(n)
        T, nu = self.curve.frame(tau)
        sign = self.curve.orientation
        return BoundarySamples(pts, sign * T, sign * nu)

    def contains_many(self, xs, ys) -> np.ndarray:
        pts = np.stack([np.ravel(xs), np.ravel(ys)], axis=-1)
        return self._path.contains_points(pts).reshape(np.shape(xs))

    def describe(self) -> dict:
        return {"type": self.kind, "curve": self.curve.to_json()}


class ScaledDomain(Domain):
    """Ω / t, the domain of u(t p) / t²."""

    kind = "scaled"

    def __init__(self, base: Domain, t: float):
        self.base = base
        self.t = float(t)
        self.euler_characteristic = base.euler_characteristic
        self.simply_connected = base.simply_connected

    def boundary_samples(self, n: int) -> BoundarySamples:
        b = self.base.boundary_samples(n)
        sign = math.copysign(1.0, self.t)
        return BoundarySamples(b.points / self.t, sign * b.tangents, sign * b.normals)

    def contains_many(self, xs, ys) -> np.ndarray:
        return self.base.contains_many(self.t * np.asarray(xs), self.t * np.asarray(ys))

    def interior_samples(self, resolution: int = 64) -> np.ndarray:
        return self.base.interior_samples(resolution) / self.t

    def describe(self) -> dict:
        return {"type": self.kind, "t": self.t, "base": self.base.describe()}


# --------------------------------------------------------------------------
# normal map band
# --------------------------------------------------------------------------

class NormalMapDomain(Domain):
    """The band {γ(s) + t ν(s) : |t| ≤ halfwidth} with its inverse map."""

    kind = "band"
    euler_characteristic = 0
    simply_connected = False

    def __init__(self, curve: FourierCurve, halfwidth: float = 1.0, rescale: bool = False,
                 settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.halfwidth = float(halfwidth)
        self.scale = 1.0
        if rescale:
            kmax = float(np.max(np.abs(curve.curvature_tau(np.linspace(0, TWO_PI, 4096, endpoint=False)))))
            self.scale = kmax / self.settings.curvature_target
            curve = curve.scaled(Fraction(self.scale))
            logger.info("rescaled curve by %.12g so that max|κ| = %g", self.scale, self.settings.curvature_target)
        self.curve = curve

        ns, nt = self.settings.seed_grid
        self.s_samples = np.linspace(0.0, curve.length, ns, endpoint=False)
        tau = curve.tau_of_s(self.s_samples)
        self.kappa_samples = curve.curvature_tau(tau)
        fine = curve.curvature_tau(np.linspace(0, TWO_PI, 8 * ns, endpoint=False))
        self.max_abs_kappa = float(max(np.max(np.abs(fine)), np.max(np.abs(self.kappa_samples))))
        if self.max_abs_kappa * self.halfwidth >= 1:
            raise EmbeddingError(
                f"max|κ|·halfwidth = {self.max_abs_kappa * self.halfwidth:.6g} ≥ 1; rescale the curve")
        self.convex = bool(np.all(fine >= 0) or np.all(fine <= 0))

        t = np.linspace(-self.halfwidth, self.halfwidth, nt)
        TAU, TT = np.meshgrid(tau, t, indexing="ij")
        seeds = self.psi(TAU.ravel(), TT.ravel())
        self._seed_tau, self._seed_t = TAU.ravel(), TT.ravel()
        self._seed_tree = cKDTree(seeds)
        self._diameter = float(pdist(curve.samples(512)[0]).max()) + 2 * self.halfwidth
        self.certificate = self._injectivity_certificate()
        self.certified = self.convex and self.certificate["passed"]
        if not self.certificate["passed"]:
            raise EmbeddingError(f"sampled normal-map image overlaps itself ({self.certificate['collisions']} collisions)")
        if not self.convex:
            logger.warning("curve is not convex; band relies on the sampled injectivity certificate only")

    # forward map

    def psi(self, tau, t) -> np.ndarray:
        _, nu = self.curve.frame(tau)
        return self.curve.point(tau) + np.asarray(t, dtype=float)[..., None] * nu

    def normal_map(self, s, t) -> Tuple[np.ndarray, np.ndarray]:
        """Ψ(s, t) and the Jacobian factor 1 - tκ(s)."""
        tau = self.curve.tau_of_s(s)
        return self.psi(tau, t), 1 - np.asarray(t, dtype=float) * self.curve.curvature_tau(tau)

    def _injectivity_certificate(self) -> dict:
        ns, nt = self.settings.injectivity_grid
        L, h = self.curve.length, self.halfwidth
        tau = self.curve.tau_of_s(np.linspace(0.0, L, ns, endpoint=False))
        t = np.linspace(-h, h, nt)
        TAU, TT = np.meshgrid(tau, t, indexing="ij")
        pts = self.psi(TAU, TT)
        spacing = max(float(np.max(np.hypot(*np.diff(pts, axis=0, append=pts[:1]).transpose(2, 0, 1)))),
                      float(np.max(np.hypot(*np.diff(pts, axis=1).transpose(2, 0, 1)))))
        stretch = float(np.min(np.minimum(1.0, 1 - TT * self.curve.curvature_tau(TAU))))
        pairs = cKDTree(pts.reshape(-1, 2)).query_pairs(r=spacing, output_type="ndarray")
        collisions = 0
        if len(pairs):
            i1, j1 = np.divmod(pairs[:, 0], nt)
            i2, j2 = np.divmod(pairs[:, 1], nt)
            di = np.abs(i1 - i2)
            di = np.minimum(di, ns - di)
            param = np.hypot(di * L / ns, (j1 - j2) * 2 * h / (nt - 1))
            collisions = int(np.count_nonzero(param > 3 * spacing / stretch))
        logger.debug("injectivity certificate: spacing %.3g, %d collisions", spacing, collisions)
        return {"grid": [ns, nt], "collision_radius": spacing, "collisions": collisions,
                "passed": collisions == 0, "kind": "sampled"}

    # inverse map

    def _newton(self, p: np.ndarray, tau: np.ndarray, t: np.ndarray):
        tol = 1e-12 * self._diameter
        done = np.zeros(len(p), dtype=bool)
        for _ in range(self.settings.newton_max_iterations):
            T, nu = self.curve.frame(tau)
            r = p - (self.curve.point(tau) + t[:, None] * nu)
            err = np.hypot(r[:, 0], r[:, 1])
            done = err <= tol
            if np.all(done):
                break
            jac = self.curve.speed(tau) * (1 - t * self.curve.curvature_tau(tau))
            jac = np.where(np.abs(jac) < 1e-300, 1e-300, jac)
            tau = np.where(done, tau, tau + np.einsum("ij,ij->i", r, T) / jac)
            t = np.where(done, t, t + np.einsum("ij,ij->i", r, nu))
        else:
            T, nu = self.curve.frame(tau)
            r = p - (self.curve.point(tau) + t[:, None] * nu)
            done = np.hypot(r[:, 0], r[:, 1]) <= tol
        return tau, t, done

    def locate(self, xs, ys) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Vectorized inverse of Ψ without raising.

        Returns:
            (tau, t, ok) where ok marks converged points with |t| ≤ halfwidth
        """
        p = np.stack([np.ravel(xs), np.ravel(ys)], axis=-1).astype(float)
        eps = 1e-9 * max(1.0, self.halfwidth)
        _, nearest = self._seed_tree.query(p, k=4)
        tau = np.full(len(p), np.nan)
        t = np.full(len(p), np.nan)
        ok = np.zeros(len(p), dtype=bool)
        for col in range(nearest.shape[1]):
            todo = ~ok
            if not np.any(todo):
                break
            seed = nearest[todo, col]
            with np.errstate(all="ignore"):
                ta, tt, conv = self._newton(p[todo], self._seed_tau[seed].copy(), self._seed_t[seed].copy())
            good = conv & (np.abs(tt) <= self.halfwidth + eps)
            idx = np.flatnonzero(todo)[good]
            tau[idx], t[idx], ok[idx] = np.mod(ta[good], TWO_PI), tt[good], True
        return tau, t, ok

    def invert(self, point) -> Tuple[float, float]:
        """(s, t) with Ψ(s, t) = point."""
        tau, t, ok = self.locate(np.array([float(point[0])]), np.array([float(point[1])]))
        if not ok[0]:
            raise NotInBand(f"no seed converged to a band point for {tuple(point)}")
        self._check_conditioning(tau, t)
        return float(self.curve.arc_length(tau[0])), float(t[0])

    def invert_many(self, xs, ys) -> Tuple[np.ndarray, np.ndarray]:
        """(τ, t) for every point; raises NotInBand if any point is outside the band."""
        tau, t, ok = self.locate(xs, ys)
        if not np.all(ok):
            bad = int(np.flatnonzero(~ok)[0])
            raise NotInBand(f"point {(float(np.ravel(xs)[bad]), float(np.ravel(ys)[bad]))} is not in the band")
        self._check_conditioning(tau, t)
        return tau, t

    def _check_conditioning(self, tau, t) -> None:
        factor = 1 - t * self.curve.curvature_tau(tau)
        if np.any(factor < self.settings.conditioning_floor):
            raise IllConditioned(f"1 - tκ = {float(np.min(factor)):.3g} below {self.settings.conditioning_floor}")

    # domain protocol

    def contains_many(self, xs, ys) -> np.ndarray:
        return self.locate(xs, ys)[2].reshape(np.shape(xs))

    def boundary_samples(self, n: int) -> BoundarySamples:
        tau = self.curve.tau_of_s(np.linspace(0.0, self.curve.length, n, endpoint=False))
        T, nu = self.curve.frame(tau)
        h = self.halfwidth
        outer = self.curve.point(tau) - h * nu
        inner = self.curve.point(tau) + h * nu
        return BoundarySamples(np.vstack([outer, inner]), np.vstack([T, -T]), np.vstack([nu, -nu]))

    @property
    def diameter(self) -> float:
        return self._diameter

    def grid(self, ns: int = 128, nt: int = 17) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(s, t) grid with t spanning [-halfwidth, halfwidth] and its image points."""
        s = np.linspace(0.0, self.curve.length, ns, endpoint=False)
        t = np.linspace(-self.halfwidth, self.halfwidth, nt)
        S, TT = np.meshgrid(s, t, indexing="ij")
        pts = self.normal_map(S.ravel(), TT.ravel())[0]
        return S.ravel(), TT.ravel(), pts

    def interior_samples(self, resolution: int = 64) -> np.ndarray:
        return self.grid(2 * resolution, 17)[2]

    def describe(self) -> dict:
        return {"type": self.kind, "curve": self.curve.to_json(), "halfwidth": self.halfwidth,
                "scale": self.scale, "max_abs_kappa": self.max_abs_kappa, "convex": self.convex,
                "certified": self.certified, "certificate": self.certificate}


def normal_map(domain: NormalMapDomain, s, t) -> Tuple[float, float, float]:
    pts, factor = domain.normal_map(s, t)
    return float(pts[0]), float(pts[1]), float(factor)


def invert_normal_map(domain: NormalMapDomain, point) -> Tuple[float, float]:
    return domain.invert(point)


# --------------------------------------------------------------------------
# annulus field u(Ψ(s, t)) = 1 - t²
# --------------------------------------------------------------------------

class AnnulusField(ScalarField):
    kind = "annulus"

    def __init__(self, domain: NormalMapDomain):
        self.domain = domain

    def derivatives(self, xs, ys) -> Derivatives:
        shape = np.shape(xs)
        tau, t = self.domain.invert_many(xs, ys)
        curve = self.domain.curve
        T, nu = curve.frame(tau)
        kappa = curve.curvature_tau(tau)
        dkappa = curve.curvature_prime_tau(tau)
        q = 1 - t * kappa

        # t = signed distance along ν: Dt = ν, D²t = φ T⊗T
        phi = -kappa / q
        phi_s = -dkappa / q ** 2
        phi_t = -kappa ** 2 / q ** 2
        s_grad = T / q[:, None]
        t1 = nu
        t2 = phi[:, None, None] * np.einsum("ni,nj->nij", T, T)
        dphi = phi_s[:, None] * s_grad + phi_t[:, None] * nu
        dTT = (phi * kappa / q)[:, None, None, None] * (
            np.einsum("ni,nj,nk->nijk", nu, T, T) + np.einsum("ni,nj,nk->nijk", T, nu, T))
        t3 = np.einsum("nk,ni,nj->nijk", dphi, T, T) + dTT

        u1 = -2 * t[:, None] * t1
        u2 = -2 * np.einsum("ni,nj->nij", t1, t1) - 2 * t[:, None, None] * t2
        u3 = (-2 * (np.einsum("nik,nj->nijk", t2, t1) + np.einsum("ni,njk->nijk", t1, t2)
                    + np.einsum("nk,nij->nijk", t1, t2))
              - 2 * t[:, None, None, None] * t3)
        parts = (1 - t * t, u1[:, 0], u1[:, 1], u2[:, 0, 0], u2[:, 0, 1], u2[:, 1, 1],
                 u3[:, 0, 0, 0], u3[:, 0, 0, 1], u3[:, 0, 1, 1], u3[:, 1, 1, 1])
        return Derivatives(*(np.reshape(a, shape) for a in parts))

    def describe(self) -> dict:
        return {"type": self.kind, "domain": self.domain.describe()}


def annulus_jet(field: AnnulusField, point) -> Jet3:
    return field.jet3_at(point)


# --------------------------------------------------------------------------
# circle fitting
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CircleFit:
    center: Tuple[float, float]
    radius: float
    max_deviation: float


def fit_circle(points: np.ndarray) -> CircleFit:
    """Algebraic least-squares circle x² + y² + Dx + Ey + F = 0."""
    pts = np.asarray(points, dtype=float)
    A = np.column_stack([pts[:, 0], pts[:, 1], np.ones(len(pts))])
    rhs = -(pts[:, 0] ** 2 + pts[:, 1] ** 2)
    (D, E, F), *_ = np.linalg.lstsq(A, rhs, rcond=None)
    cx, cy = -D / 2, -E / 2
    radius = math.sqrt(max(cx * cx + cy * cy - F, 0.0))
    dev = np.abs(np.hypot(pts[:, 0] - cx, pts[:, 1] - cy) - radius)
    return CircleFit((float(cx), float(cy)), float(radius), float(dev.max()))


def scale_domain(domain: Domain, t: RationalLike) -> Domain:
    """Ω / t, collapsing nested scalings and keeping disks and curves concrete."""
    t = as_rational(t)
    if isinstance(domain, DiskDomain):
        return DiskDomain(domain.radius_exact / abs(t), (domain.center_exact[0] / t, domain.center_exact[1] / t))
    if isinstance(domain, CurveDomain):
        return CurveDomain(domain.curve.scaled(1 / t))
    if isinstance(domain, ScaledDomain):
        product = Fraction(domain.t) * t
        return domain.base if product == 1 else ScaledDomain(domain.base, float(product))
    return ScaledDomain(domain, float(t))
