"""Exact rational polynomial calculus.

Sparse multivariate polynomials over ``fractions.Fraction``, exact moment
integration over unit spheres and balls, and single-frequency
exponential-polynomial modes on the flat half space.  Everything in this
module is pure and hashable-free value arithmetic; results are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Q = Fraction


def _coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected a rational coefficient, got {type(c).__name__}")


class Poly:
    """Sparse polynomial in ``d`` variables with Fraction coefficients.

    ``terms`` maps exponent tuples of length ``d`` to nonzero coefficients.
    Instances are immutable by convention; all operations return new objects.
    """

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Mapping[tuple, Fraction] | None = None):
        self.d = d
        t = {}
        if terms:
            for e, c in terms.items():
                if c:
                    t[e] = c
        self.terms = t

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, d: int) -> "Poly":
        return cls(d)

    @classmethod
    def const(cls, d: int, c) -> "Poly":
        c = _coeff(c)
        return cls(d, {(0,) * d: c} if c else None)

    @classmethod
    def var(cls, d: int, i: int, power: int = 1) -> "Poly":
        e = [0] * d
        e[i] = power
        return cls(d, {tuple(e): Q(1)})

    @classmethod
    def monomial(cls, d: int, exps: Iterable[int], c=1) -> "Poly":
        return cls(d, {tuple(exps): _coeff(c)})

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        other = self._as_poly(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, Q(0)) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return Poly(self.d, t)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._as_poly(other))

    def __rsub__(self, other):
        return self._as_poly(other) + (-self)

    def __neg__(self):
        return Poly(self.d, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coeff(other)
            if not c:
                return Poly(self.d)
            return Poly(self.d, {e: c * v for e, v in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        if other.d != self.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, Q(0)) + c1 * c2
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        return Poly(self.d, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(self.d, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _as_poly(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.d != self.d:
                raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.d, other)
        return NotImplemented

    # -- calculus ------------------------------------------------------
    def diff(self, i: int) -> "Poly":
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return Poly(self.d, t)

    def set_var_zero(self, i: int) -> "Poly":
        """Substitute variable ``i`` = 0, keeping the dimension."""
        return Poly(self.d, {e: c for e, c in self.terms.items() if e[i] == 0})

    def drop_last(self) -> "Poly":
        """Restrict to the hyperplane where the last variable is 0."""
        t = {e[:-1]: c for e, c in self.terms.items() if e[-1] == 0}
        return Poly(self.d - 1, t)

    def lift(self, d: int) -> "Poly":
        """Embed into ``d`` variables by appending zero exponents."""
        pad = (0,) * (d - self.d)
        return Poly(d, {e + pad: c for e, c in self.terms.items()})

    def eval(self, point):
        """Evaluate at a point (Fractions give an exact result)."""
        total = 0
        for e, c in self.terms.items():
            v = c
            for xi, ei in zip(point, e):
                if ei:
                    v = v * xi**ei
            total = total + v
        return total

    # -- queries --------------------------------------------------------
    def iszero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.d, other)
        return isinstance(other, Poly) and self.d == other.d and self.terms == other.terms

    def __hash__(self):
        return hash((self.d, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i}^{p}" if p > 1 else f"x{i}" for i, p in enumerate(e) if p)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def laplacian(p: Poly) -> Poly:
    """Flat Laplacian sum of second partials in all variables of ``p``."""
    out = Poly.zero(p.d)
    for i in range(p.d):
        out = out + p.diff(i).diff(i)
    return out


def euler_op(p: Poly) -> Poly:
    """Euler operator sum x_i d/dx_i, i.e. r d/dr on homogeneous pieces."""
    out = Poly.zero(p.d)
    for i in range(p.d):
        out = out + Poly.var(p.d, i) * p.diff(i)
    return out


def gradient(p: Poly) -> list[Poly]:
    return [p.diff(i) for i in range(p.d)]


def grad_dot(p: Poly, q: Poly) -> Poly:
    out = Poly.zero(p.d)
    for i in range(p.d):
        out = out + p.diff(i) * q.diff(i)
    return out


def reduce_mod_sphere(p: Poly) -> Poly:
    """Canonical representative of ``p`` modulo the unit-sphere relation.

    Eliminates powers >= 2 of the last variable via
    x_last^2 = 1 - sum of the squares of the other variables, leaving a
    polynomial of degree <= 1 in the last variable.
    """
    d = p.d
    s = Poly.zero(d)
    for i in range(d - 1):
        s = s + Poly.var(d, i, 2)
    one_minus_s = Poly.const(d, 1) - s
    out = Poly.zero(d)
    cache: dict[int, Poly] = {0: Poly.const(d, 1)}

    def oms_pow(k: int) -> Poly:
        if k not in cache:
            cache[k] = oms_pow(k - 1) * one_minus_s
        return cache[k]

    for e, c in p.terms.items():
        k, r = divmod(e[-1], 2)
        if k == 0:
            out = out + Poly(d, {e: c})
        else:
            base = list(e)
            base[-1] = r
            out = out + Poly(d, {tuple(base): c}) * oms_pow(k)
    return out


# ---------------------------------------------------------------------------
# exact moments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentScalar:
    """Exact integral value, a rational multiple of a symbolic unit.

    ``unit`` is "pure" for dimensionless rationals or "vol_sn" for rational
    multiples of Vol(S^n); the volume is never expanded in exact arithmetic.
    """

    q: Fraction
    unit: str = "pure"
    n: int | None = None

    def _check(self, other: "MomentScalar"):
        if self.unit != other.unit or (self.unit == "vol_sn" and self.n != other.n):
            raise ValueError(f"unit mismatch: {self.unit}/{self.n} vs {other.unit}/{other.n}")

    def __add__(self, other: "MomentScalar") -> "MomentScalar":
        if self.q == 0 and self.unit == "pure" and other.unit != "pure":
            return other
        if other.q == 0 and other.unit == "pure" and self.unit != "pure":
            return self
        self._check(other)
        return MomentScalar(self.q + other.q, self.unit, self.n)

    def __sub__(self, other: "MomentScalar") -> "MomentScalar":
        return self + MomentScalar(-other.q, other.unit, other.n)

    def __neg__(self):
        return MomentScalar(-self.q, self.unit, self.n)

    def __mul__(self, c):
        return MomentScalar(self.q * _coeff(c), self.unit, self.n)

    __rmul__ = __mul__

    def iszero(self) -> bool:
        return self.q == 0

    def value(self) -> float:
        """Numeric value, expanding Vol(S^n) when present."""
        if self.unit == "pure":
            return float(self.q)
        return float(self.q) * vol_sphere(self.n)


def vol_sphere(n: int) -> float:
    """Volume of the unit n-sphere, 2 pi^((n+1)/2) / Gamma((n+1)/2)."""
    return 2.0 * math.pi ** ((n + 1) / 2.0) / math.gamma((n + 1) / 2.0)


def double_factorial_odd(a: int) -> int:
    """(2a-1)!! with the empty product equal to 1."""
    out = 1
    for k in range(1, 2 * a, 2):
        out *= k
    return out


def sphere_monomial_moment(exps: tuple, d: int) -> Fraction:
    """Integral of x^exps over S^(d-1), divided by Vol(S^(d-1)). Exact."""
    if any(e % 2 for e in exps):
        return Q(0)
    halves = [e // 2 for e in exps]
    total = sum(halves)
    num = Q(1)
    for a in halves:
        num *= Q(double_factorial_odd(a), 2**a)
    den = Q(1)
    for k in range(total):
        den *= Q(d, 2) + k
    return num / den


def sphere_integral(p: Poly) -> MomentScalar:
    """Exact integral of ``p`` over the unit sphere in R^d, d = p.d.

    Returns a rational multiple of Vol(S^(d-1)).
    """
    d = p.d
    q = Q(0)
    for e, c in p.terms.items():
        q += c * sphere_monomial_moment(e, d)
    return MomentScalar(q, "vol_sn", d - 1)


def ball_integral(p: Poly) -> MomentScalar:
    """Exact integral of ``p`` over the closed unit ball in R^d.

    Radial integration of each monomial contributes 1/(deg + d).
    """
    d = p.d
    q = Q(0)
    for e, c in p.terms.items():
        q += c * sphere_monomial_moment(e, d) / (sum(e) + d)
    return MomentScalar(q, "vol_sn", d - 1)


# ---------------------------------------------------------------------------
# exponential-polynomial half-space modes
# ---------------------------------------------------------------------------

class ExpPolyMode:
    """A mode e^(-t y) * profile on the half space {y >= 0}.

    The profile is a Poly whose last two variables are, by convention, the
    frequency symbol t and the normal coordinate y; remaining leading
    variables are free symbols (e.g. the boundary-data coefficients a, b, c).
    The class is closed under d/dy, the full flat Laplacian, and the
    tangential Laplacian, which acts as multiplication by -t^2.
    """

    __slots__ = ("profile",)

    def __init__(self, profile: Poly):
        if profile.d < 2:
            raise ValueError("profile needs at least the variables (t, y)")
        self.profile = profile

    @property
    def d(self):
        return self.profile.d

    @property
    def _it(self):
        return self.profile.d - 2

    @property
    def _iy(self):
        return self.profile.d - 1

    def _t(self) -> Poly:
        return Poly.var(self.profile.d, self._it)

    def d_dy(self) -> "ExpPolyMode":
        """d/dy, with the product rule against e^(-t y)."""
        return ExpPolyMode(self.profile.diff(self._iy) - self._t() * self.profile)

    def lap(self) -> "ExpPolyMode":
        """Full Laplacian: profile -> p'' - 2 t p' (tangential part cancels)."""
        p = self.profile
        iy = self._iy
        return ExpPolyMode(p.diff(iy).diff(iy) - 2 * self._t() * p.diff(iy))

    def lapbar(self) -> "ExpPolyMode":
        """Tangential Laplacian, multiplication by -t^2."""
        return ExpPolyMode(-(self._t() ** 2) * self.profile)

    def boundary(self) -> Poly:
        """Boundary value at y = 0 as a polynomial in the remaining symbols."""
        return self.profile.set_var_zero(self._iy).drop_last()

    def __add__(self, other):
        return ExpPolyMode(self.profile + other.profile)

    def __sub__(self, other):
        return ExpPolyMode(self.profile - other.profile)

    def __neg__(self):
        return ExpPolyMode(-self.profile)

    def __mul__(self, c):
        return ExpPolyMode(self.profile * c)

    __rmul__ = __mul__

    def iszero(self):
        return self.profile.iszero()


def mode_apply(op: str, m: ExpPolyMode) -> ExpPolyMode:
    """Apply one of the closed operations {"d/dy", "lap", "lapbar"}."""
    if op == "d/dy":
        return m.d_dy()
    if op == "lap":
        return m.lap()
    if op == "lapbar":
        return m.lapbar()
    raise ValueError(f"unsupported mode operation {op!r}")
