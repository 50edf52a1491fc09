"""Δ, H, the bracket {f, g}, the Jacobian J and the degeneracy discriminant.

Exact versions act on BiPoly; the *_at versions act on numeric jets.
"""
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Tuple

import numpy as np

from tools.algebra import BiPoly

if TYPE_CHECKING:
    from tools.fields import Jet3


def laplacian(p: BiPoly) -> BiPoly:
    return p.derive("x", 2) + p.derive("y", 2)


def hess_det(p: BiPoly) -> BiPoly:
    pxy = p.derive("x").derive("y")
    return p.derive("x", 2) * p.derive("y", 2) - pxy * pxy


def bracket(f: BiPoly, g: BiPoly) -> BiPoly:
    """{f, g} = f_xx g_yy + f_yy g_xx - 2 f_xy g_xy, so that H(f+g) = H(f) + H(g) + {f, g}."""
    fxx, fyy, fxy = f.derive("x", 2), f.derive("y", 2), f.derive("x").derive("y")
    gxx, gyy, gxy = g.derive("x", 2), g.derive("y", 2), g.derive("x").derive("y")
    return fxx * gyy + fyy * gxx - (fxy * gxy).scale(2)


def jacobian(f: BiPoly, g: BiPoly) -> BiPoly:
    return f.derive("x") * g.derive("y") - f.derive("y") * g.derive("x")


def discriminant(p: BiPoly) -> BiPoly:
    """(Δp)² - 4 H(p); vanishes exactly where D²p is a multiple of the identity."""
    lap = laplacian(p)
    return lap * lap - hess_det(p).scale(4)


def double_angle_polys(p: BiPoly) -> Tuple[BiPoly, BiPoly]:
    """Components (p_xx - p_yy, 2 p_xy) of the double-angle vector."""
    return p.derive("x", 2) - p.derive("y", 2), p.derive("x").derive("y").scale(2)


@dataclass(frozen=True)
class HessianSample:
    uxx: float
    uxy: float
    uyy: float

    @property
    def laplacian(self) -> float:
        return self.uxx + self.uyy

    @property
    def det(self) -> float:
        return self.uxx * self.uyy - self.uxy ** 2

    @property
    def discriminant(self) -> float:
        # (uxx-uyy)² + 4uxy² avoids the cancellation in (Δu)² - 4H
        return (self.uxx - self.uyy) ** 2 + 4 * self.uxy ** 2

    @property
    def norm(self) -> float:
        return math.sqrt(self.uxx ** 2 + 2 * self.uxy ** 2 + self.uyy ** 2)

    def double_angle(self) -> Tuple[float, float]:
        return self.uxx - self.uyy, 2 * self.uxy

    def matrix(self) -> np.ndarray:
        return np.array([[self.uxx, self.uxy], [self.uxy, self.uyy]])

    def bilinear(self, a, b) -> float:
        return float(np.asarray(a) @ self.matrix() @ np.asarray(b))


def hess_at(jet: "Jet3") -> HessianSample:
    return jet.hess


def laplacian_at(jet: "Jet3") -> float:
    return jet.hess.laplacian


def hess_det_at(jet: "Jet3") -> float:
    return jet.hess.det


def discriminant_at(jet: "Jet3") -> float:
    return jet.hess.discriminant


def jacobian_residual_at(jet: "Jet3") -> Tuple[float, float]:
    """
    J[Δu, H(u)] at a point from third-order data.

    Returns:
        (residual, scale) where scale = |∇Δu|·|∇H| bounds the two products
    """
    h = jet.hess
    uxxx, uxxy, uxyy, uyyy = jet.third
    lap_x, lap_y = uxxx + uxyy, uxxy + uyyy
    det_x = uxxx * h.uyy + h.uxx * uxyy - 2 * h.uxy * uxxy
    det_y = uxxy * h.uyy + h.uxx * uyyy - 2 * h.uxy * uxyy
    residual = lap_x * det_y - lap_y * det_x
    scale = math.hypot(lap_x, lap_y) * math.hypot(det_x, det_y)
    return residual, scale
