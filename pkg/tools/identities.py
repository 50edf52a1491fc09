"""Exact checks of the polynomial identities behind the classification and the radial argument.

Every verify_* function returns a bool that is an exact polynomial equality; nothing here
uses a tolerance.
"""
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Tuple

from tools.algebra import (BiPoly, PolarHomog, RationalLike, TrigPoly, as_rational, format_rational,
                           from_polar, polar_bracket, polar_laplacian, to_polar)
from tools.classify import decompose
from tools.errors import DegenerateSystem, InputError, NotPolynomial
from tools.operators import bracket, discriminant, hess_det, jacobian, laplacian
from tools.settings import Settings, get_settings
from tools.workers import parallel_map

logger = logging.getLogger(__name__)


def _polar_eta(m: int, c: TrigPoly) -> PolarHomog:
    eta = PolarHomog(m + 2, c)
    if not eta.is_polynomial():
        raise NotPolynomial(f"c(θ)ϱ^{m + 2} with harmonics {c.harmonics()} is not a polynomial")
    return eta


def _radial_w(n: int, a: RationalLike) -> BiPoly:
    if n < 0 or n % 2:
        raise NotPolynomial(f"aϱ^{n + 2} is a polynomial only for even n, got n = {n}")
    return BiPoly.radial((n + 2) // 2).scale(as_rational(a))


def verify_polar_laplacian(m: int, c: TrigPoly) -> bool:
    """Δ(cϱ^(m+2)) = (c'' + (m+2)²c)ϱ^m by the Cartesian and the polar route."""
    eta = _polar_eta(m, c)
    return to_polar(laplacian(from_polar(eta)), m) == polar_laplacian(eta)


def bracket_closed_form(n: int, m: int, a: RationalLike, c: TrigPoly) -> PolarHomog:
    """{aϱ^(n+2), cϱ^(m+2)} = a(n+2)ϱ^(n+m)[(n+1)c'' + (m+2)(m+n+2)c]."""
    a = as_rational(a)
    angular = (c.derive(2).scale(n + 1) + c.scale((m + 2) * (m + n + 2))).scale(a * (n + 2))
    return PolarHomog(n + m, angular)


def published_bracket_form(n: int, m: int, a: RationalLike, c: TrigPoly) -> PolarHomog:
    """(a/2)(n+2)ϱ^(n+m)((n+4)(c'' + (m+2)²c) - 2n(m+1)(m+2)c)."""
    a = as_rational(a)
    inner = (c.derive(2) + c.scale((m + 2) ** 2)).scale(n + 4) - c.scale(2 * n * (m + 1) * (m + 2))
    return PolarHomog(n + m, inner.scale(a * (n + 2) / 2))


def verify_bracket_formula(n: int, m: int, a: RationalLike, c: TrigPoly) -> bool:
    eta = _polar_eta(m, c)
    w = _radial_w(n, a)
    expected = bracket_closed_form(n, m, a, c)
    cartesian = to_polar(bracket(w, from_polar(eta)), n + m)
    polar = polar_bracket(to_polar(w), eta)
    return cartesian == expected and polar == expected


def published_bracket_agrees(n: int, m: int, a: RationalLike, c: TrigPoly) -> bool:
    eta = _polar_eta(m, c)
    return to_polar(bracket(_radial_w(n, a), from_polar(eta)), n + m) == published_bracket_form(n, m, a, c)


# --------------------------------------------------------------------------
# the third-order ODE for c(θ)
# --------------------------------------------------------------------------

def c3_expression(w: BiPoly, eta: BiPoly) -> BiPoly:
    """J[Δw, {w, η}] + J[Δη, H(w)]."""
    return jacobian(laplacian(w), bracket(w, eta)) + jacobian(laplacian(eta), hess_det(w))


@dataclass
class C3ODE:
    n: int
    m: int
    alpha1: Fraction
    alpha2: Fraction
    scale: Fraction
    periodic_modes: List[int] = field(default_factory=list)
    constant_vanishes: bool = True

    @property
    def positive(self) -> bool:
        return self.alpha1 > 0 and self.alpha2 > 0

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "alpha1": format_rational(self.alpha1),
                "alpha2": format_rational(self.alpha2), "scale": format_rational(self.scale),
                "positive": self.positive, "periodic_modes": self.periodic_modes,
                "constant_vanishes": self.constant_vanishes}


def _primitive(p: Fraction, q: Fraction) -> Tuple[Fraction, Fraction, Fraction]:
    """(p, q) = k·(P, Q) with coprime integers P > 0 (or P = 0, Q > 0)."""
    den = lcm(p.denominator, q.denominator)
    ip, iq = int(p * den), int(q * den)
    g = gcd(ip, iq) or 1
    if ip < 0 or (ip == 0 and iq < 0):
        g = -g
    return Fraction(ip // g), Fraction(iq // g), Fraction(g, den)


def periodic_modes(alpha1: Fraction, alpha2: Fraction, top: int) -> List[int]:
    """Modes j = 1..top with cos jθ, sin jθ solving α₁c''' = α₂c', i.e. α₁j² + α₂ = 0."""
    return [j for j in range(1, top + 1) if alpha1 * j * j + alpha2 == 0]


def derive_c3_ode(n: int, m: int, a: RationalLike = 1) -> C3ODE:
    """
    Fit J[Δw, {w, η}] + J[Δη, H(w)] = K(α₁c''' - α₂c') exactly over the basis cos jθ, sin jθ.

    Args:
        n: even degree offset of w = aϱ^(n+2)
        m: degree offset of η = c(θ)ϱ^(m+2), m > n
        a: amplitude of w

    Returns:
        normalized (α₁, α₂), the scale K and the periodic modes of the relation

    Raises:
        DegenerateSystem: the expression is not of the form Pc''' + Qc'
    """
    if m <= n:
        raise InputError(f"need m > n, got n = {n}, m = {m}")
    w = _radial_w(n, a)
    degree = 2 * n + m - 2
    rows: List[Tuple[int, int, Fraction]] = []
    constant_vanishes = True
    for j in range(m % 2, m + 3, 2):
        if j == 0:
            constant_vanishes = c3_expression(w, from_polar(PolarHomog(m + 2, TrigPoly.const(1)))).is_zero()
            continue
        for kind in ("cos", "sin"):
            c = TrigPoly.cos_k(j) if kind == "cos" else TrigPoly.sin_k(j)
            image = to_polar(c3_expression(w, from_polar(PolarHomog(m + 2, c))), degree).angular
            # cos jθ ↦ (Pj³ - Qj) sin jθ and sin jθ ↦ -(Pj³ - Qj) cos jθ
            if kind == "cos":
                value, stray = image.sin_coeff(j), image - TrigPoly.sin_k(j, image.sin_coeff(j))
                rows.append((j ** 3, -j, value))
            else:
                value, stray = image.cos_coeff(j), image - TrigPoly.cos_k(j, image.cos_coeff(j))
                rows.append((-(j ** 3), j, value))
            if not stray.is_zero():
                raise DegenerateSystem(f"mode {kind} {j}θ leaks into other harmonics for n = {n}, m = {m}")
    solution = None
    for i in range(len(rows)):
        for k in range(i + 1, len(rows)):
            (a1, b1, r1), (a2, b2, r2) = rows[i], rows[k]
            det = a1 * b2 - a2 * b1
            if det:
                solution = (Fraction(r1 * b2 - r2 * b1, det), Fraction(a1 * r2 - a2 * r1, det))
                break
        if solution:
            break
    if solution is None:
        raise DegenerateSystem(f"the fit for n = {n}, m = {m} is not rank 2")
    P, Q = solution
    bad = [(x, y, r) for x, y, r in rows if x * P + y * Q != r]
    if bad:
        raise DegenerateSystem(f"{len(bad)} modes disagree with P c''' + Q c' for n = {n}, m = {m}")
    alpha1, alpha2, scale = _primitive(P, -Q)
    logger.debug("n=%d m=%d: alpha1=%s alpha2=%s", n, m, alpha1, alpha2)
    return C3ODE(n, m, alpha1, alpha2, scale, periodic_modes(alpha1, alpha2, m + 2), constant_vanishes)


# --------------------------------------------------------------------------
# lines through C2 points and the Taylor bookkeeping
# --------------------------------------------------------------------------

def verify_case3_identity(n: int, a: RationalLike, eta: BiPoly) -> bool:
    """For w = a x^(n+2): J[Δw, {w, η}] + J[Δη, H(w)] = n a²(n+1)²(n+2)² x^(2n-1) η_yyy."""
    if n < 1:
        raise InputError(f"need n ≥ 1, got {n}")
    a = as_rational(a)
    w = BiPoly.monomial(n + 2, 0, a)
    rhs = (BiPoly.monomial(2 * n - 1, 0) * eta.derive("y", 3)).scale(n * a * a * (n + 1) ** 2 * (n + 2) ** 2)
    return c3_expression(w, eta) == rhs


def verify_lowest_term_expansion(u: BiPoly) -> bool:
    """
    About the origin, the discriminant of u and (Δu - 2λ)² start at degree 2n with the
    parts (Δw)² - 4H(w) and (Δw)², where w of degree n + 2 is the first part past the quadratic.
    """
    dec = decompose(u)
    disc = discriminant(u)
    shifted = laplacian(u) - BiPoly.const(2 * dec.lam)
    square = shifted * shifted
    if not dec.w:
        return disc.is_zero() and square.is_zero()
    top = 2 * dec.n
    for p, expected in ((disc, discriminant(dec.w)), (square, laplacian(dec.w) * laplacian(dec.w))):
        if any(d < top for d in p.homog_parts()) or p.homog_part(top) != expected:
            return False
    return True


def verify_jacobian_expansion(h: BiPoly, psi: BiPoly) -> bool:
    """J[Δ(h+ψ), H(h+ψ)] against its five-term expansion with H(h+ψ) = H(h) + H(ψ) + {h, ψ}."""
    lap_h, lap_psi = laplacian(h), laplacian(psi)
    H_h, H_psi, mixed = hess_det(h), hess_det(psi), bracket(h, psi)
    lhs = jacobian(laplacian(h + psi), hess_det(h + psi))
    rhs = (jacobian(lap_h, H_h) + jacobian(lap_h, mixed) + jacobian(lap_psi, H_h)
           + jacobian(lap_h, H_psi) + jacobian(lap_psi, H_psi + mixed))
    return lhs == rhs


# --------------------------------------------------------------------------
# random data and the sweep
# --------------------------------------------------------------------------

def cell_rng(seed: int, op: str, n: int, m: int) -> random.Random:
    return random.Random(f"{seed}:{op}:{n}:{m}")


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def random_nonzero(rng: random.Random) -> Fraction:
    while True:
        q = random_rational(rng)
        if q:
            return q


def random_trig(rng: random.Random, degree: int) -> TrigPoly:
    """Random c(θ) whose harmonics fit c(θ)ϱ^degree."""
    cos, sin = {}, {}
    const = Fraction(0)
    for k in range(degree % 2, degree + 1, 2):
        if k == 0:
            const = random_rational(rng)
        else:
            cos[k], sin[k] = random_rational(rng), random_rational(rng)
    c = TrigPoly(cos, sin) + TrigPoly.const(const)
    return c if not c.is_zero() else TrigPoly.cos_k(degree) if degree else TrigPoly.const(1)


def random_homog(rng: random.Random, degree: int) -> BiPoly:
    p = BiPoly({(i, degree - i): random_rational(rng) for i in range(degree + 1)})
    return p if p else BiPoly.monomial(degree, 0)


def random_poly(rng: random.Random, degree: int) -> BiPoly:
    return BiPoly({(i, j): random_rational(rng) for i in range(degree + 1) for j in range(degree + 1 - i)})


def random_decomposable(rng: random.Random, degree: int) -> BiPoly:
    """c₀ + ax + by + λ/2(x² + y²) + parts of degree 3..degree."""
    lam = random_rational(rng)
    u = BiPoly({(0, 0): random_rational(rng), (1, 0): random_rational(rng), (0, 1): random_rational(rng)})
    u = u + BiPoly.radial(1).scale(lam / 2)
    start = rng.randint(3, degree)
    for d in range(start, degree + 1):
        u = u + random_homog(rng, d)
    return u


@dataclass
class IdentitySuite:
    matrix: Dict[str, Dict[str, bool]]
    alpha_table: List[C3ODE]
    published_bracket: Dict[str, bool]
    trials: int
    seed: int

    @property
    def all_true(self) -> bool:
        return all(all(row.values()) for row in self.matrix.values()) and all(r.positive for r in self.alpha_table)

    def to_dict(self) -> dict:
        return {"matrix": self.matrix, "alpha_table": [r.to_dict() for r in self.alpha_table],
                "published_bracket_agrees": self.published_bracket, "all_true": self.all_true,
                "trials": self.trials, "seed": self.seed}


def _cells(max_n: int, max_m: int) -> List[Tuple[str, int, int]]:
    cells = [("polar_laplacian", 0, m) for m in range(0, max_m + 1)]
    even = [n for n in range(2, max_n + 1, 2)]
    cells += [("bracket_formula", n, m) for n in even for m in range(n + 1, max_m + 1)]
    cells += [("c3_ode", n, m) for n in even for m in range(n + 1, max_m + 1)]
    cells += [("case3_identity", n, m) for n in range(1, max_n + 1) for m in range(n + 2, max_m + 1)]
    cells += [("lowest_term_expansion", 0, d) for d in range(3, max(max_m, 3) + 1)]
    cells += [("jacobian_expansion", 0, d) for d in range(2, min(max_m, 8) + 1)]
    return cells


def _run_cell(cell: Tuple[str, int, int], trials: int, seed: int):
    op, n, m = cell
    rng = cell_rng(seed, op, n, m)
    if op == "c3_ode":
        return derive_c3_ode(n, m)
    if op == "polar_laplacian":
        return all(verify_polar_laplacian(m, random_trig(rng, m + 2)) for _ in range(trials))
    if op == "bracket_formula":
        results, published = [], []
        for _ in range(trials):
            a, c = random_nonzero(rng), random_trig(rng, m + 2)
            results.append(verify_bracket_formula(n, m, a, c))
            published.append(published_bracket_agrees(n, m, a, c))
        return all(results), all(published)
    if op == "case3_identity":
        return all(verify_case3_identity(n, random_nonzero(rng), random_homog(rng, m + 2)) for _ in range(trials))
    if op == "lowest_term_expansion":
        return all(verify_lowest_term_expansion(random_decomposable(rng, m)) for _ in range(trials))
    return all(verify_jacobian_expansion(random_poly(rng, m), random_poly(rng, m)) for _ in range(trials))


def run_identity_suite(max_n: int, max_m: int, trials: int, seed: int,
                       settings: Optional[Settings] = None) -> IdentitySuite:
    """
    Run every identity over its (n, m) grid with seeded random rational data.

    Each cell draws from its own generator seeded by "seed:operation:n:m", so the
    result does not depend on how the cells are scheduled.
    """
    settings = settings or get_settings()
    if max_n < 1 or max_m < 1 or trials < 1:
        raise InputError("max-n, max-m and trials must be positive")
    cells = _cells(max_n, max_m)
    results = parallel_map(lambda cell: _run_cell(cell, trials, seed), cells, settings.threads,
                           desc="identities", progress=settings.progress)
    matrix: Dict[str, Dict[str, bool]] = {}
    alphas: List[C3ODE] = []
    published: Dict[str, bool] = {}
    for (op, n, m), result in zip(cells, results):
        key = f"{n}:{m}" if op in ("bracket_formula", "c3_ode", "case3_identity") else str(m)
        if op == "c3_ode":
            alphas.append(result)
            result = result.positive and not result.periodic_modes and result.constant_vanishes
        elif op == "bracket_formula":
            result, published[key] = result
        matrix.setdefault(op, {})[key] = bool(result)
    logger.info("identity suite: %d cells, all true: %s", len(cells), all(all(r.values()) for r in matrix.values()))
    return IdentitySuite(matrix, alphas, published, trials, seed)
