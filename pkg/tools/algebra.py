"""Exact bivariate, trigonometric and polar-homogeneous polynomials.

All coefficients are fractions.Fraction; nothing in this module touches floating
point except the explicit float/numpy evaluators.
"""
import json
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

import numpy as np

from tools.errors import DegreeUnderflow, InputError, NotHomogeneous, NotPolynomial, PolyFormatError

Exponent = Tuple[int, int]
RationalLike = Union[Fraction, int, float, str]


def as_rational(value: RationalLike) -> Fraction:
    """Exact conversion; floats are converted bit-exactly, strings via parse_rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise InputError(f"not a rational number: {value!r}")


def parse_rational(text: str) -> Fraction:
    """Parse "num/den", an integer or a decimal string ("0.25" gives 1/4)."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            num, den = int(num), int(den)
            if den <= 0:
                raise InputError(f"denominator must be positive in {text!r}")
            return Fraction(num, den)
        return Fraction(Decimal(text))
    except (ValueError, InvalidOperation) as e:
        raise InputError(f"cannot parse rational {text!r}") from e


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


# --------------------------------------------------------------------------
# BiPoly
# --------------------------------------------------------------------------

class BiPoly:
    """Sparse exact polynomial in x and y: {(i, j): coefficient of x^i y^j}."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Exponent, RationalLike]] = None):
        clean: Dict[Exponent, Fraction] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise InputError(f"negative exponent ({i}, {j})")
            c = as_rational(c)
            if c:
                clean[(int(i), int(j))] = c
        self._terms = clean

    @classmethod
    def _raw(cls, terms: Dict[Exponent, Fraction]) -> "BiPoly":
        p = cls.__new__(cls)
        p._terms = {k: v for k, v in terms.items() if v}
        return p

    # constructors

    @classmethod
    def zero(cls) -> "BiPoly":
        return cls._raw({})

    @classmethod
    def const(cls, c: RationalLike) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c: RationalLike = 1) -> "BiPoly":
        return cls({(i, j): c})

    @classmethod
    def x(cls) -> "BiPoly":
        return cls.monomial(1, 0)

    @classmethod
    def y(cls) -> "BiPoly":
        return cls.monomial(0, 1)

    @classmethod
    def radial(cls, k: int) -> "BiPoly":
        """(x² + y²)^k."""
        return cls({(2 * (k - i), 2 * i): comb(k, i) for i in range(k + 1)})

    @classmethod
    def re_zeta_power(cls, n: int) -> "BiPoly":
        """Re (x + iy)^n."""
        return cls({(n - k, k): comb(n, k) * (-1) ** (k // 2) for k in range(0, n + 1, 2)})

    @classmethod
    def im_zeta_power(cls, n: int) -> "BiPoly":
        """Im (x + iy)^n."""
        return cls({(n - k, k): comb(n, k) * (-1) ** (k // 2) for k in range(1, n + 1, 2)})

    # basic protocol

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(sorted(self._terms.items()))

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == BiPoly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "BiPoly(0)"
        parts = []
        for (i, j), c in sorted(self._terms.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0])):
            mono = "".join(
                f"{v}^{e}" if e > 1 else v for v, e in (("x", i), ("y", j)) if e
            )
            parts.append(f"{c}{'*' + mono if mono else ''}")
        return f"BiPoly({' + '.join(parts)})"

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    @property
    def lowest_degree(self) -> int:
        return min((i + j for i, j in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({i + j for i, j in self._terms}) <= 1

    # arithmetic

    @staticmethod
    def _coerce(other) -> Optional["BiPoly"]:
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return BiPoly.const(other)
        return None

    def __add__(self, other) -> "BiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return BiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "BiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "BiPoly":
        return (-self) + other

    def scale(self, c: RationalLike) -> "BiPoly":
        c = as_rational(c)
        return BiPoly._raw({k: v * c for k, v in self._terms.items()})

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        out: Dict[Exponent, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return BiPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise InputError("negative polynomial power")
        result, base = BiPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # calculus and structure

    def derive(self, axis: str, order: int = 1) -> "BiPoly":
        """Exact partial derivative along "x" or "y"."""
        if axis not in ("x", "y"):
            raise InputError(f"unknown axis {axis!r}")
        p = self
        for _ in range(order):
            out = {}
            for (i, j), c in p._terms.items():
                if axis == "x" and i:
                    out[(i - 1, j)] = c * i
                elif axis == "y" and j:
                    out[(i, j - 1)] = c * j
            p = BiPoly._raw(out)
        return p

    def homog_part(self, d: int) -> "BiPoly":
        return BiPoly._raw({(i, j): c for (i, j), c in self._terms.items() if i + j == d})

    def homog_parts(self) -> Dict[int, "BiPoly"]:
        parts: Dict[int, Dict[Exponent, Fraction]] = {}
        for (i, j), c in self._terms.items():
            parts.setdefault(i + j, {})[(i, j)] = c
        return {d: BiPoly._raw(t) for d, t in sorted(parts.items())}

    def evaluate(self, x: RationalLike, y: RationalLike) -> Fraction:
        """Exact value at a rational point."""
        x, y = as_rational(x), as_rational(y)
        return sum((c * x ** i * y ** j for (i, j), c in self._terms.items()), Fraction(0))

    def __call__(self, xs, ys):
        """Float evaluation, vectorized over numpy arrays."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        out = np.zeros(np.broadcast(xs, ys).shape)
        for (i, j), c in self._terms.items():
            out = out + float(c) * xs ** i * ys ** j
        return out

    def translate(self, cx: RationalLike, cy: RationalLike) -> "BiPoly":
        """p(x + cx, y + cy)."""
        cx, cy = as_rational(cx), as_rational(cy)
        out: Dict[Exponent, Fraction] = {}
        for (i, j), c in self._terms.items():
            for a in range(i + 1):
                ca = c * comb(i, a) * cx ** (i - a)
                if not ca:
                    continue
                for b in range(j + 1):
                    k = (a, b)
                    out[k] = out.get(k, 0) + ca * comb(j, b) * cy ** (j - b)
        return BiPoly._raw(out)

    def compose_linear(self, a: RationalLike, b: RationalLike, c: RationalLike, d: RationalLike) -> "BiPoly":
        """p(a x + b y, c x + d y)."""
        X = BiPoly({(1, 0): a, (0, 1): b})
        Y = BiPoly({(1, 0): c, (0, 1): d})
        out = BiPoly.zero()
        xs = [BiPoly.const(1)]
        ys = [BiPoly.const(1)]
        for (i, j), coef in self.items():
            while len(xs) <= i:
                xs.append(xs[-1] * X)
            while len(ys) <= j:
                ys.append(ys[-1] * Y)
            out = out + (xs[i] * ys[j]).scale(coef)
        return out

    # serialization

    def to_json(self) -> dict:
        return {"terms": [[i, j, format_rational(c)] for (i, j), c in self.items()]}

    @classmethod
    def from_json(cls, data: Union[str, Mapping]) -> "BiPoly":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise PolyFormatError(f"invalid JSON: {e}") from e
        if not isinstance(data, Mapping) or not isinstance(data.get("terms"), list):
            raise PolyFormatError('expected an object with a "terms" list')
        terms: Dict[Exponent, Fraction] = {}
        for entry in data["terms"]:
            if not isinstance(entry, list) or len(entry) != 3:
                raise PolyFormatError(f"term must be [i, j, coefficient], got {entry!r}")
            i, j, c = entry
            if not (isinstance(i, int) and isinstance(j, int)) or isinstance(i, bool) or i < 0 or j < 0:
                raise PolyFormatError(f"exponents must be nonnegative integers, got {entry!r}")
            if (i, j) in terms:
                raise PolyFormatError(f"duplicate exponent pair ({i}, {j})")
            if isinstance(c, str):
                try:
                    c = parse_rational(c)
                except InputError as e:
                    raise PolyFormatError(str(e)) from e
            elif isinstance(c, int) and not isinstance(c, bool):
                c = Fraction(c)
            else:
                raise PolyFormatError(f"coefficient must be a \"num/den\" string, got {c!r}")
            terms[(i, j)] = c
        return cls(terms)


def poly_arith(p: BiPoly, q: BiPoly, op: str) -> BiPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise InputError(f"unknown polynomial operation {op!r}")


def poly_derive(p: BiPoly, axis: str) -> BiPoly:
    return p.derive(axis)


def homog_part(p: BiPoly, d: int) -> BiPoly:
    if d < 0:
        raise InputError("degree must be nonnegative")
    return p.homog_part(d)


# --------------------------------------------------------------------------
# TrigPoly
# --------------------------------------------------------------------------

class TrigPoly:
    """c(θ) = a₀ + Σ a_k cos kθ + b_k sin kθ with exact coefficients."""

    __slots__ = ("_cos", "_sin")

    def __init__(self, cos: Optional[Mapping[int, RationalLike]] = None,
                 sin: Optional[Mapping[int, RationalLike]] = None):
        self._cos: Dict[int, Fraction] = {}
        self._sin: Dict[int, Fraction] = {}
        for k, v in (cos or {}).items():
            self._acc_cos(k, as_rational(v))
        for k, v in (sin or {}).items():
            self._acc_sin(k, as_rational(v))
        self._trim()

    def _acc_cos(self, k: int, v: Fraction) -> None:
        k = abs(k)
        self._cos[k] = self._cos.get(k, 0) + v

    def _acc_sin(self, k: int, v: Fraction) -> None:
        if k == 0:
            return
        if k < 0:
            k, v = -k, -v
        self._sin[k] = self._sin.get(k, 0) + v

    def _trim(self) -> None:
        self._cos = {k: v for k, v in self._cos.items() if v}
        self._sin = {k: v for k, v in self._sin.items() if v}

    @classmethod
    def const(cls, c: RationalLike) -> "TrigPoly":
        return cls(cos={0: c})

    @classmethod
    def cos_k(cls, k: int, c: RationalLike = 1) -> "TrigPoly":
        return cls(cos={k: c})

    @classmethod
    def sin_k(cls, k: int, c: RationalLike = 1) -> "TrigPoly":
        return cls(sin={k: c})

    @property
    def constant(self) -> Fraction:
        return self._cos.get(0, Fraction(0))

    def cos_coeff(self, k: int) -> Fraction:
        return self._cos.get(k, Fraction(0))

    def sin_coeff(self, k: int) -> Fraction:
        return self._sin.get(k, Fraction(0))

    @property
    def max_harmonic(self) -> int:
        return max(list(self._cos) + list(self._sin), default=0)

    def harmonics(self) -> List[int]:
        return sorted(set(self._cos) | set(self._sin))

    def is_zero(self) -> bool:
        return not self._cos and not self._sin

    def is_constant(self) -> bool:
        return not self._sin and set(self._cos) <= {0}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self._cos == other._cos and self._sin == other._sin

    def __hash__(self) -> int:
        return hash((frozenset(self._cos.items()), frozenset(self._sin.items())))

    def __repr__(self) -> str:
        parts = [f"{v}" if k == 0 else f"{v}*cos{k}θ" for k, v in sorted(self._cos.items())]
        parts += [f"{v}*sin{k}θ" for k, v in sorted(self._sin.items())]
        return f"TrigPoly({' + '.join(parts) or '0'})"

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        out = TrigPoly(self._cos, self._sin)
        for k, v in other._cos.items():
            out._acc_cos(k, v)
        for k, v in other._sin.items():
            out._acc_sin(k, v)
        out._trim()
        return out

    def __neg__(self) -> "TrigPoly":
        return self.scale(-1)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-other)

    def scale(self, c: RationalLike) -> "TrigPoly":
        c = as_rational(c)
        return TrigPoly({k: v * c for k, v in self._cos.items()}, {k: v * c for k, v in self._sin.items()})

    def __mul__(self, other) -> "TrigPoly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, TrigPoly):
            return NotImplemented
        out = TrigPoly()
        half = Fraction(1, 2)
        for p, a in self._cos.items():
            for q, b in other._cos.items():
                out._acc_cos(p - q, half * a * b)
                out._acc_cos(p + q, half * a * b)
            for q, b in other._sin.items():
                # cos p sin q = (sin(p+q) - sin(p-q)) / 2
                out._acc_sin(p + q, half * a * b)
                out._acc_sin(p - q, -half * a * b)
        for p, a in self._sin.items():
            for q, b in other._cos.items():
                out._acc_sin(p + q, half * a * b)
                out._acc_sin(p - q, half * a * b)
            for q, b in other._sin.items():
                out._acc_cos(p - q, half * a * b)
                out._acc_cos(p + q, -half * a * b)
        out._trim()
        return out

    __rmul__ = __mul__

    def derive(self, order: int = 1) -> "TrigPoly":
        c, s = dict(self._cos), dict(self._sin)
        for _ in range(order):
            c, s = {k: k * v for k, v in s.items()}, {k: -k * v for k, v in c.items()}
        return TrigPoly(c, s)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape)
        for k, v in self._cos.items():
            out = out + float(v) * np.cos(k * theta)
        for k, v in self._sin.items():
            out = out + float(v) * np.sin(k * theta)
        return out


@lru_cache(maxsize=None)
def _cos_sin_power(i: int, j: int) -> TrigPoly:
    if i == 0 and j == 0:
        return TrigPoly.const(1)
    if i > 0:
        return _cos_sin_power(i - 1, j) * TrigPoly.cos_k(1)
    return _cos_sin_power(0, j - 1) * TrigPoly.sin_k(1)


# --------------------------------------------------------------------------
# Polar homogeneous forms
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PolarHomog:
    """angular(θ) · ϱ^degree."""
    degree: int
    angular: TrigPoly

    def is_zero(self) -> bool:
        return self.angular.is_zero()

    def __add__(self, other: "PolarHomog") -> "PolarHomog":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise NotHomogeneous(f"cannot add degrees {self.degree} and {other.degree}")
        return PolarHomog(self.degree, self.angular + other.angular)

    def __mul__(self, other) -> "PolarHomog":
        if isinstance(other, PolarHomog):
            return PolarHomog(self.degree + other.degree, self.angular * other.angular)
        return PolarHomog(self.degree, self.angular.scale(other))

    __rmul__ = __mul__

    def d_rho(self) -> "PolarHomog":
        if self.degree == 0:
            return PolarHomog(0, TrigPoly())
        return PolarHomog(self.degree - 1, self.angular.scale(self.degree))

    def d_theta(self) -> "PolarHomog":
        return PolarHomog(self.degree, self.angular.derive())

    def is_polynomial(self) -> bool:
        d = self.degree
        return all(k <= d and (d - k) % 2 == 0 for k in self.angular.harmonics())

    def __call__(self, rho, theta):
        return np.asarray(rho, dtype=float) ** self.degree * self.angular(theta)


def to_polar(w: BiPoly, degree: Optional[int] = None) -> PolarHomog:
    """
    Polar form of a homogeneous polynomial.

    Args:
        w: homogeneous polynomial
        degree: degree to report for the zero polynomial (default 0)

    Returns:
        PolarHomog with w(ϱcosθ, ϱsinθ) = angular(θ)·ϱ^d
    """
    if not w.is_homogeneous():
        raise NotHomogeneous(f"mixed degrees {sorted(w.homog_parts())}")
    if w.is_zero():
        return PolarHomog(degree or 0, TrigPoly())
    d = w.degree
    if degree is not None and degree != d:
        raise NotHomogeneous(f"polynomial has degree {d}, expected {degree}")
    angular = TrigPoly()
    for (i, j), c in w.items():
        angular = angular + _cos_sin_power(i, j).scale(c)
    return PolarHomog(d, angular)


def from_polar(h: PolarHomog) -> BiPoly:
    """Inverse of to_polar; ϱ^d cos kθ = Re ζ^k (x²+y²)^((d-k)/2)."""
    d = h.degree
    out = BiPoly.zero()
    for k in h.angular.harmonics():
        if k > d or (d - k) % 2:
            raise NotPolynomial(f"harmonic {k} cannot appear at degree {d}")
        radial = BiPoly.radial((d - k) // 2)
        a, b = h.angular.cos_coeff(k), h.angular.sin_coeff(k)
        if a:
            out = out + (BiPoly.re_zeta_power(k) * radial).scale(a)
        if b:
            out = out + (BiPoly.im_zeta_power(k) * radial).scale(b)
    return out


def polar_laplacian(h: PolarHomog) -> PolarHomog:
    """Δ(c ϱ^d) = (c'' + d² c) ϱ^(d-2)."""
    if h.degree < 2:
        raise DegreeUnderflow(f"degree {h.degree} < 2")
    return PolarHomog(h.degree - 2, h.angular.derive(2) + h.angular.scale(h.degree ** 2))


def polar_jacobian(f: PolarHomog, g: PolarHomog) -> PolarHomog:
    """J[f, g] = (f_ϱ g_θ - f_θ g_ϱ) / ϱ for homogeneous forms."""
    p, q = f.degree, g.degree
    if p + q < 2:
        raise DegreeUnderflow(f"degrees {p} + {q} < 2")
    F, G = f.angular, g.angular
    return PolarHomog(p + q - 2, (F * G.derive()).scale(p) - (F.derive() * G).scale(q))


def polar_bracket(f: PolarHomog, g: PolarHomog) -> PolarHomog:
    """{f, g} in the polar frame, using h_rr, h_tt, h_rt of each Hessian."""
    p, q = f.degree, g.degree
    if p + q < 4:
        raise DegreeUnderflow(f"degrees {p} + {q} < 4")
    F, G = f.angular, g.angular
    f_rr, f_tt, f_rt = F.scale(p * (p - 1)), F.scale(p) + F.derive(2), F.derive().scale(p - 1)
    g_rr, g_tt, g_rt = G.scale(q * (q - 1)), G.scale(q) + G.derive(2), G.derive().scale(q - 1)
    return PolarHomog(p + q - 4, f_rr * g_tt + f_tt * g_rr - (f_rt * g_rt).scale(2))


def lowest_homog(p: BiPoly) -> BiPoly:
    return p.homog_part(p.lowest_degree) if p else p
