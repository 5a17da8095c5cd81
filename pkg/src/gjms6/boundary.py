"""The six conformally covariant boundary operators of the sixth-order
GJMS operator, with all curvature coefficients.

The scalar coefficients and the operator assembly are written once, generic
over an arithmetic kit, and instantiated three ways: with exact rational
curvature data on the four model geometries, with polynomial fields on the
flat models, and with the conformally-flat calculus ring used for the
covariance checks.  Zeroth-order blocks carry the factor (n-5)/2 and vanish
identically in the critical dimension n = 5.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fractional import sphere_eigenvalue
from .geometry import BoundaryGeometryData, GeometryKind, ModelGeometry, boundary_data

Q = Fraction


@dataclass(frozen=True)
class BoundaryOperatorId:
    """Normal order j in 0..5; the operator has conformal bidegree
    (-(n-5)/2, -(n+2j-5)/2)."""

    j: int

    def __post_init__(self):
        if not 0 <= self.j <= 5:
            raise ValueError("boundary operator index must lie in 0..5")

    def bidegree(self, n: int) -> tuple:
        return (-Q(n - 5, 2), -Q(n + 2 * self.j - 5, 2))


class CurvatureInputs:
    """Named curvature scalars entering the boundary operators.

    For model geometries every field is an exact Fraction (derivative fields
    vanish); the conformal engine fills the same slots with ring elements.
    """

    __slots__ = (
        "H", "Pnn", "Jb", "Pbar2", "etaJ", "lapJ", "hessJnn", "etaPnn",
        "etaPsq", "etaLapJ", "lapbarH", "lapbar2H", "lapbarJb", "lapbarPnn",
        "lapbar_etaJ", "gradH2", "PbarHessH", "pair_dH_dJb", "pair_dH_dPnn",
    )

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw.pop(name))
        if kw:
            raise TypeError(f"unexpected curvature fields {sorted(kw)}")


def model_curvature_inputs(geom: ModelGeometry) -> CurvatureInputs:
    d = boundary_data(geom)
    z = Q(0)
    return CurvatureInputs(
        H=d.H, Pnn=d.P_eta_eta, Jb=d.Jbar, Pbar2=d.Pbar_norm_sq,
        etaJ=d.eta_J, lapJ=d.delta_J, hessJnn=d.hess_J_eta_eta,
        etaPnn=d.eta_P_eta_eta, etaPsq=d.eta_P_norm_sq, etaLapJ=d.eta_delta_J,
        lapbarH=z, lapbar2H=z, lapbarJb=z, lapbarPnn=z, lapbar_etaJ=z,
        gradH2=z, PbarHessH=z, pair_dH_dJb=z, pair_dH_dPnn=z,
    )


# ---------------------------------------------------------------------------
# coefficient scalars
# ---------------------------------------------------------------------------

def t1_scalar(n, C):
    return Q(1, n) * C.H


def t2_scalar(n, C):
    return Q(1, 3) * C.Jb - C.Pnn + Q(n - 4, 2 * n**2) * (C.H * C.H)


def t3_scalar(n, C):
    return (
        -C.etaJ
        - Q(4, n) * C.lapbarH
        - Q(n - 9, 2 * n) * (C.H * C.Pnn)
        + Q(3 * n - 11, 2 * n) * (C.H * C.Jb)
        + Q(n**2 - 5 * n + 12, 4 * n**3) * (C.H * C.H * C.H)
    )


def s2_scalar(n, C):
    return (
        Q(3 * n - 7, 2) * C.Jb
        - Q(n - 13, 2) * C.Pnn
        + Q(3 * n**2 - 19 * n + 36, 4 * n**2) * (C.H * C.H)
    )


def s3_scalar(n, C):
    return (
        Q(n - 9) * C.etaJ
        + Q(16, n) * C.lapbarH
        + Q(3 * n**2 - 15 * n + 10, n) * (C.H * C.Jb)
        + Q(n**2 - 5 * n + 26, n) * (C.H * C.Pnn)
        - Q(n**3 - 7 * n**2 + 12 * n - 24, 2 * n**3) * (C.H * C.H * C.H)
    )


def t4_scalar(n, C):
    HH = C.H * C.H
    return (
        C.lapJ
        - 4 * C.lapbarJb
        + 4 * C.lapbarPnn
        - Q(4 * (n - 4), n**2) * (C.H * C.lapbarH)
        - Q(4, n) * (C.H * C.etaJ)
        - Q(3 * (n - 1)) * (C.Jb * C.Pnn)
        + Q(n**2 - 3 * n + 18, 2 * n**2) * (HH * C.Pnn)
        + Q(3 * n**2 - 13 * n + 2, 2 * n**2) * (HH * C.Jb)
        - Q(4 * (n - 6), n**2) * C.gradH2
        - 4 * C.Pbar2
        + Q(3 * (n - 1), 2) * (C.Jb * C.Jb)
        - Q(n - 9, 2) * (C.Pnn * C.Pnn)
        - Q(n**3 - 5 * n**2 + 4 * n - 24, 8 * n**4) * (HH * HH)
    )


def r13_scalar(n, C):
    return (
        Q(-2 * (n - 6)) * C.etaJ
        + Q(2 * (n - 9), 3 * n) * C.lapbarH
        - Q(5 * n**2 - 28 * n + 15, 6 * n) * (C.H * C.Jb)
        - Q(n**2 - 16 * n + 55, 2 * n) * (C.H * C.Pnn)
        + Q(n**3 - 6 * n**2 + 11 * n - 30, 4 * n**3) * (C.H * C.H * C.H)
    )


def r23_scalar(n, C):
    return (
        -Q(5 * n - 19, 3) * C.etaJ
        + Q(2 * (5 * n - 21), 3 * n) * C.lapbarH
        - Q(5 * n**2 - 20 * n + 7, 2 * n) * (C.H * C.Jb)
        - Q(5 * (n - 3) * (n - 5), 6 * n) * (C.H * C.Pnn)
        + Q(5 * n**3 - 26 * n**2 + 23 * n + 6, 12 * n**3) * (C.H * C.H * C.H)
    )


def s4_scalar(n, C):
    HH = C.H * C.H
    return (
        -Q(n - 5, 2) * C.lapJ
        - Q(2 * (3 * n - 11), 3) * C.lapbarJb
        - Q(n - 9) * C.hessJnn
        - Q(2 * (n - 13), 3) * C.lapbarPnn
        - Q(16, n) * (C.H * C.etaPnn)
        + Q(6 * n**2 - 38 * n + 72, 3 * n**2) * (C.H * C.lapbarH)
        + Q(6 * n**2 - 62 * n + 180, 3 * n**2) * C.gradH2
        - Q(3 * n**2 - 20 * n + 13, 2 * n) * (C.H * C.etaJ)
        - Q(3 * n**3 - 24 * n**2 + 103 * n - 130, 4 * n**2) * (HH * C.Pnn)
        - Q(15 * n**3 - 68 * n**2 - 5 * n + 42, 12 * n**2) * (HH * C.Jb)
        + Q(5 * n**2 - 54 * n + 49, 6) * (C.Jb * C.Pnn)
        + Q(5 * n**4 - 26 * n**3 + 17 * n**2 - 84 * n + 120, 16 * n**4) * (HH * HH)
        + Q(15 * n**2 - 50 * n - 29, 12) * (C.Jb * C.Jb)
        + Q(n**2 - 22 * n + 149, 4) * (C.Pnn * C.Pnn)
        - Q(2 * (3 * n - 11)) * C.Pbar2
    )


def t5_scalar(n, C):
    HH = C.H * C.H
    HHH = HH * C.H
    return (
        -C.etaLapJ
        - Q(4, 3) * C.lapbar_etaJ
        + Q(8, 3 * n) * C.lapbar2H
        + Q(4, n) * (C.H * C.hessJnn)
        - Q(n + 3, 2 * n) * (C.H * C.lapJ)
        - Q(2 * (3 * n - 7), 3 * n) * (C.H * C.lapbarJb)
        - Q(2 * (n - 9), 3 * n) * (C.H * C.lapbarPnn)
        - Q(4 * (n - 12), 3 * n) * C.pair_dH_dPnn
        - Q(4 * (3 * n - 16), 3 * n) * C.pair_dH_dJb
        + Q(5 * n - 1, 3) * (C.Jb * C.etaJ)
        + Q(n - 5) * (C.Pnn * C.etaJ)
        - Q(8, n**2) * (HH * C.etaPnn)
        - 4 * C.etaPsq
        - Q(n**2 - 7 * n - 6, 2 * n**2) * (HH * C.etaJ)
        - Q(2 * (n - 9), 3 * n) * (C.Pnn * C.lapbarH)
        + Q(n**2 - 5 * n + 12, n**3) * (HH * C.lapbarH)
        + Q(16, n) * C.PbarHessH
        - Q(10 * (n - 1), 3 * n) * (C.Jb * C.lapbarH)
        + Q(15 * n**2 - 10 * n - 37, 12 * n) * (C.H * C.Jb * C.Jb)
        + Q((n - 5) * (n - 9), 4 * n) * (C.H * C.Pnn * C.Pnn)
        - Q(6 * (n - 1), n) * (C.H * C.Pbar2)
        + Q((n - 5) * (5 * n + 3), 6 * n) * (C.H * C.Jb * C.Pnn)
        - Q(n**3 - 4 * n**2 + 33 * n - 30, 4 * n**3) * (HHH * C.Pnn)
        + Q(2 * (n - 2) * (n - 7), n**3) * (C.H * C.gradH2)
        - Q(5 * n**3 - 8 * n**2 - 19 * n - 42, 12 * n**3) * (HHH * C.Jb)
        + Q(n**4 - 2 * n**3 - 3 * n**2 - 52 * n + 24, 16 * n**5) * (HHH * HH)
    )


def coefficient_scalars(n, C) -> dict:
    """All coefficient scalars as a dict keyed T1..T5, S2..S4, R13, R23."""
    return {
        "T1": t1_scalar(n, C),
        "T2": t2_scalar(n, C),
        "T3": t3_scalar(n, C),
        "T4": t4_scalar(n, C),
        "T5": t5_scalar(n, C),
        "S2": s2_scalar(n, C),
        "S3": s3_scalar(n, C),
        "S4": s4_scalar(n, C),
        "R13": r13_scalar(n, C),
        "R23": r23_scalar(n, C),
    }


@dataclass(frozen=True)
class CurvatureCoefficients:
    """Exact coefficient scalars of a model geometry; the one-form block
    sigma4 vanishes on all models (constant curvature data)."""

    T1: Fraction
    T2: Fraction
    T3: Fraction
    T4c: Fraction
    T5: Fraction
    S2: Fraction
    S3: Fraction
    S4: Fraction
    R13: Fraction
    R23: Fraction
    sigma4_zero: bool = True


def coefficients(geom: ModelGeometry) -> CurvatureCoefficients:
    C = model_curvature_inputs(geom)
    s = coefficient_scalars(geom.n, C)
    return CurvatureCoefficients(
        T1=s["T1"], T2=s["T2"], T3=s["T3"], T4c=s["T4"], T5=s["T5"],
        S2=s["S2"], S3=s["S3"], S4=s["S4"], R13=s["R13"], R23=s["R23"],
    )


# ---------------------------------------------------------------------------
# operator assembly
# ---------------------------------------------------------------------------

class BoundaryOps:
    """Primitive operations a field representation must provide.

    Ambient objects are whatever the representation uses for functions on X;
    boundary objects support ring arithmetic with Fraction coefficients.
    The gradient-pairing hooks only matter for non-constant curvature (the
    conformal engine); representations on model geometries inherit zeros.
    """

    def bzero(self):
        raise NotImplementedError

    def restrict(self, u):
        raise NotImplementedError

    def eta(self, u):
        raise NotImplementedError

    def lap(self, u):
        raise NotImplementedError

    def hess_nn(self, u):
        raise NotImplementedError

    def lapbar(self, w):
        raise NotImplementedError

    def divPbar(self, w):
        """delta-bar(Pbar(grad-bar w))."""
        raise NotImplementedError

    def eta_P_hess(self, u):
        """eta of the full contraction <P, Hess u>."""
        raise NotImplementedError

    def pair(self, a, w):
        """<grad-bar a, grad-bar w> for a curvature scalar a."""
        return self.bzero()

    def hesspair_H(self, w):
        """<Hess-bar H, Hess-bar w>."""
        return self.bzero()

    def sigma4_pair(self, w):
        """<sigma4, grad-bar w> for the order-four one-form coefficient."""
        return self.bzero()


def apply_boundary_operator(j: int, n: int, C: CurvatureInputs, ops: BoundaryOps, u, coeffs: dict | None = None):
    """Apply the normal-order-j boundary operator to the field ``u``.

    Single source of truth for the six displayed formulas; everything else
    in the package (model closed forms, covariance engine) routes through
    this function.
    """
    if not 0 <= j <= 5:
        raise ValueError("boundary operator index must lie in 0..5")
    uM = ops.restrict(u)
    if j == 0:
        return uM
    if coeffs is None:
        coeffs = coefficient_scalars(n, C)
    half = Q(n - 5, 2)
    eta_u = ops.eta(u)
    if j == 1:
        return eta_u + half * (coeffs["T1"] * uM)

    lap_u = ops.lap(u)
    lap_u_M = ops.restrict(lap_u)
    if j == 2:
        return (
            lap_u_M
            - Q(4, 3) * ops.lapbar(uM)
            - Q(4, n) * (C.H * eta_u)
            + half * (coeffs["T2"] * uM)
        )

    if j == 3:
        return (
            ops.eta(lap_u)
            - 4 * ops.lapbar(eta_u)
            + Q(n - 9, 2 * n) * (C.H * ops.hess_nn(u))
            - Q(3 * n - 19, 2 * n) * (C.H * ops.lapbar(uM))
            - Q(4 * (n - 4), n) * ops.pair(C.H, uM)
            + coeffs["S2"] * eta_u
            + half * (coeffs["T3"] * uM)
        )

    lap2_u = ops.lap(lap_u)
    if j == 4:
        hess_nn_u = ops.hess_nn(u)
        lapbar_uM = ops.lapbar(uM)
        bracket_hess = (
            Q(3 * n - 5) * C.Jb
            + Q(n - 11) * C.Pnn
            - Q(n**2 - 5 * n + 18, 2 * n**2) * (C.H * C.H)
        )
        # The H^2 constant here is 34, pinned jointly by the ball
        # Dirichlet-to-Neumann identities and conformal covariance.
        bracket_lapbar = (
            Q(3 * (n - 3)) * C.Jb
            - Q(3 * n - 13) * C.Pnn
            + Q(3 * n**2 - 23 * n + 34, 2 * n**2) * (C.H * C.H)
        )
        grad_combo = (
            Q(3 * n - 11) * C.Jb
            - Q(5 * n - 29) * C.Pnn
            + Q(5 * n**2 - 53 * n + 128, 2 * n**2) * (C.H * C.H)
        )
        return (
            -ops.restrict(lap2_u)
            - 4 * ops.lapbar(lap_u_M)
            + 8 * ops.lapbar(lapbar_uM)
            + Q(4, n) * (C.H * ops.eta(lap_u))
            + Q(16, n) * (C.H * ops.lapbar(eta_u))
            + bracket_hess * hess_nn_u
            - bracket_lapbar * lapbar_uM
            + 8 * ops.divPbar(uM)
            + Q(48, n) * ops.pair(C.H, eta_u)
            - ops.pair(grad_combo, uM)
            + coeffs["S3"] * eta_u
            + half * (coeffs["T4"] * uM)
        )

    # j == 5
    eta_lap_u = ops.eta(lap_u)
    hess_nn_u = ops.hess_nn(u)
    lapbar_uM = ops.lapbar(uM)
    lapbar_eta_u = ops.lapbar(eta_u)
    bracket_eta_lap = (
        Q(5 * n - 7, 3) * C.Jb
        + Q(n - 7) * C.Pnn
        - Q(n**2 - 9 * n + 10, 2 * n**2) * (C.H * C.H)
    )
    bracket_lapbar_eta = (
        Q(2 * (5 * n - 9), 3) * C.Jb
        + Q(2 * (n - 13), 3) * C.Pnn
        - Q(3 * n**2 - 19 * n + 12, 3 * n**2) * (C.H * C.H)
    )
    grad_combo5 = (
        Q(15 * n - 47, 3) * C.Jb
        + Q(7 * n - 79, 3) * C.Pnn
        - Q(15 * n**2 - 139 * n + 168, 6 * n**2) * (C.H * C.H)
    )
    return (
        ops.eta(lap2_u)
        + Q(4, 3) * ops.lapbar(eta_lap_u)
        + Q(8, 3) * ops.lapbar(lapbar_eta_u)
        + Q(n + 3, 2 * n) * (C.H * ops.restrict(lap2_u))
        + Q(2 * (n - 9), 3 * n) * (C.H * ops.lapbar(hess_nn_u))
        - Q(4, n) * (C.H * ops.hess_nn(lap_u))
        + Q(2 * (3 * n - 11), 3 * n) * (C.H * ops.lapbar(lapbar_uM))
        - bracket_eta_lap * eta_lap_u
        - bracket_lapbar_eta * lapbar_eta_u
        + 8 * ops.eta_P_hess(u)
        + 16 * ops.divPbar(eta_u)
        + Q(4 * (n - 12), 3 * n) * ops.pair(C.H, hess_nn_u)
        + Q(4 * (5 * n - 28), 3 * n) * ops.pair(C.H, lapbar_uM)
        + coeffs["R13"] * hess_nn_u
        + Q(4 * (3 * n - 7), n) * (C.H * ops.divPbar(uM))
        + Q(8 * (2 * n - 14), 3 * n) * ops.hesspair_H(uM)
        + coeffs["R23"] * lapbar_uM
        - ops.pair(grad_combo5, eta_u)
        + ops.sigma4_pair(uM)
        + coeffs["S4"] * eta_u
        + half * (coeffs["T5"] * uM)
    )


# ---------------------------------------------------------------------------
# dispatch over field representations
# ---------------------------------------------------------------------------

def apply_B(j, geom: ModelGeometry, u):
    """Apply the boundary operator of normal order j on a model geometry.

    Accepts a BoundaryOperatorId or plain integer for j.  Supported field
    representations: Poly on the flat models, ExpPolyMode on the upper half
    space, and SeparatedMode on any model.  Exact for exact inputs.
    """
    from . import reps
    from .polys import ExpPolyMode, Poly

    if isinstance(j, BoundaryOperatorId):
        j = j.j
    if not 0 <= j <= 5:
        raise ValueError("boundary operator index must lie in 0..5")
    C = model_curvature_inputs(geom)
    if isinstance(u, reps.SeparatedMode):
        ops = reps.separated_ops(geom, u)
    elif isinstance(u, ExpPolyMode):
        if geom.kind is not GeometryKind.UPPER_HALF_SPACE:
            raise ValueError("exponential-polynomial modes live on the upper half space")
        ops = reps.HalfspaceModeOps(geom.n)
    elif isinstance(u, Poly):
        if geom.kind is GeometryKind.UPPER_HALF_SPACE:
            ops = reps.HalfspacePolyOps(geom.n)
        elif geom.kind is GeometryKind.EUCLIDEAN_BALL:
            ops = reps.BallPolyOps(geom.n)
        else:
            raise ValueError(f"polynomial fields are not supported on {geom.kind}")
    else:
        raise TypeError(f"unsupported field representation {type(u).__name__}")
    return apply_boundary_operator(j, geom.n, C, ops, u)


# ---------------------------------------------------------------------------
# specialized operator tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeodesicOperators:
    """Boundary operators of a geodesic compactification over a round
    conformal infinity, as normal-derivative stencils per boundary harmonic.

    apply(j, derivs, ell) takes the one-sided derivatives
    derivs[k] = (d/dr)^k u at r = 0 and returns the operator value; the
    outward normal is -d/dr.
    """

    n: int

    def _L2(self, s, lam):
        # -lapbar + s*Jbar on the mode, with Jbar = n/2
        return lam + Q(s) * Q(self.n, 2)

    def _L4(self, s, lam):
        # divbar((2 Pbar - Jbar gbar) dbar) + Jbar lapbar - s |Pbar|^2
        return -lam - Q(s) * Q(self.n, 4)

    def apply(self, j: int, derivs, ell: int):
        n = self.n
        lam = sphere_eigenvalue(n, ell)
        u0, u1, u2, u3, u4, u5 = (list(derivs) + [0] * 6)[:6]
        if j == 0:
            return u0
        if j == 1:
            return -u1
        if j == 2:
            return u2 + Q(1, 3) * self._L2(Q(n - 5, 2), lam) * u0
        if j == 3:
            return -u3 - 3 * self._L2(Q(n - 3, 2), lam) * u1
        if j == 4:
            a = self._L2(Q(n - 1, 2), lam)
            b = self._L2(Q(n - 5, 2), lam)
            return -u4 + 6 * a * u2 + 3 * a * b * u0 + 3 * self._L4(Q(n - 5, 2), lam) * u0
        if j == 5:
            a = self._L2(Q(n + 1, 2), lam)
            b = self._L2(Q(n - 3, 2), lam)
            return -u5 + Q(10, 3) * a * u3 - 5 * a * b * u1 - 15 * self._L4(Q(n - 3, 2), lam) * u1
        raise ValueError("boundary operator index must lie in 0..5")


def geodesic_forms(n: int) -> GeodesicOperators:
    """The six geodesic-compactification boundary operators."""
    if n < 5:
        raise ValueError("n >= 5 required")
    return GeodesicOperators(n)


@dataclass(frozen=True)
class NormalFormOperators:
    """The simplified boundary operators valid when the metric is conformally
    normalized at the boundary (H = 0, P(eta,eta) = Jbar/3, eta J = 0, ...).

    Terms are keyed by primitive name with Fraction coefficients; curvature
    factors appearing in a term are part of the key.  Flat boundary data
    collapses everything to the leading differential parts.
    """

    n: int

    def table(self, j: int) -> dict:
        n = self.n
        if j == 0:
            return {"u": Q(1)}
        if j == 1:
            return {"eta": Q(1)}
        if j == 2:
            return {"lap": Q(1), "lapbar": Q(-4, 3)}
        if j == 3:
            return {"eta_lap": Q(1), "lapbar_eta": Q(-4), "Jb*eta": Q(4 * (n - 1), 3)}
        if j == 4:
            return {
                "lap2": Q(-1),
                "lapbar_lap": Q(-4),
                "lapbar2": Q(8),
                "divPbar": Q(8),
                "Jb*lap": Q(2 * (5 * n - 13), 3),
                "Jb*lapbar": Q(-8 * (2 * n - 5), 3),
                "pair_dJb": Q(-4 * (n - 1), 3),
            }
        if j == 5:
            return {
                "eta_lap2": Q(1),
                "lapbar_eta_lap": Q(4, 3),
                "lapbar2_eta": Q(8, 3),
                "Jb*eta_lap": Q(-2 * (3 * n - 7), 3),
                "Jb*lapbar_eta": Q(-16 * (2 * n - 5), 9),
                "divPbar_eta": Q(16),
                "eta_P_hess": Q(8),
                "hessJnn*eta": Q(-(n - 9)),
                "pair_dJb_eta": Q(-4 * (13 * n - 55), 9),
                "lapbarJb*eta": Q(-8 * (4 * n - 19), 9),
                "Pbar2*eta": Q(-8 * (n - 4)),
                "Jb^2*eta": Q(8 * (2 * n**2 - 10 * n + 5), 9),
            }
        raise ValueError("boundary operator index must lie in 0..5")

    def apply_flat(self, j: int, u):
        """Evaluate on the flat upper half space, where the curvature factors
        vanish and the table reduces to its differential part."""
        from . import reps

        ops = reps.HalfspacePolyOps(self.n)
        table = self.table(j)
        out = ops.bzero()
        lap_u = ops.lap(u)
        prim = {
            "u": lambda: ops.restrict(u),
            "eta": lambda: ops.eta(u),
            "lap": lambda: ops.restrict(lap_u),
            "lapbar": lambda: ops.lapbar(ops.restrict(u)),
            "eta_lap": lambda: ops.eta(lap_u),
            "lapbar_eta": lambda: ops.lapbar(ops.eta(u)),
            "lap2": lambda: ops.restrict(ops.lap(lap_u)),
            "lapbar_lap": lambda: ops.lapbar(ops.restrict(lap_u)),
            "lapbar2": lambda: ops.lapbar(ops.lapbar(ops.restrict(u))),
            "eta_lap2": lambda: ops.eta(ops.lap(lap_u)),
            "lapbar_eta_lap": lambda: ops.lapbar(ops.eta(lap_u)),
            "lapbar2_eta": lambda: ops.lapbar(ops.lapbar(ops.eta(u))),
        }
        for key, coeff in table.items():
            if key in prim:
                out = out + coeff * prim[key]()
            # curvature-weighted terms vanish on the flat model
        return out


def normal_form_operators(n: int) -> NormalFormOperators:
    if n < 5:
        raise ValueError("n >= 5 required")
    return NormalFormOperators(n)


# ---------------------------------------------------------------------------
# leading symbol bookkeeping
# ---------------------------------------------------------------------------

LEADING_TERMS = {
    0: {"u": Q(1)},
    1: {"eta": Q(1)},
    2: {"lap": Q(1), "lapbar": Q(-4, 3)},
    3: {"eta_lap": Q(1), "lapbar_eta": Q(-4)},
    4: {"lap2": Q(-1), "lapbar_lap": Q(-4), "lapbar2": Q(8)},
    5: {"eta_lap2": Q(1), "lapbar_eta_lap": Q(4, 3), "lapbar2_eta": Q(8, 3)},
}


def leading_part(j: int, geom: ModelGeometry, u):
    """The universal leading part of the order-j operator applied to u."""
    from . import reps
    from .polys import ExpPolyMode, Poly

    C = model_curvature_inputs(geom)
    if isinstance(u, reps.SeparatedMode):
        ops = reps.separated_ops(geom, u)
    elif isinstance(u, ExpPolyMode):
        ops = reps.HalfspaceModeOps(geom.n)
    elif isinstance(u, Poly) and geom.kind is GeometryKind.UPPER_HALF_SPACE:
        ops = reps.HalfspacePolyOps(geom.n)
    elif isinstance(u, Poly) and geom.kind is GeometryKind.EUCLIDEAN_BALL:
        ops = reps.BallPolyOps(geom.n)
    else:
        raise TypeError("unsupported representation")
    lap_u = ops.lap(u)
    lap2_u = ops.lap(lap_u)
    prim = {
        "u": lambda: ops.restrict(u),
        "eta": lambda: ops.eta(u),
        "lap": lambda: ops.restrict(lap_u),
        "lapbar": lambda: ops.lapbar(ops.restrict(u)),
        "eta_lap": lambda: ops.eta(lap_u),
        "lapbar_eta": lambda: ops.lapbar(ops.eta(u)),
        "lap2": lambda: ops.restrict(lap2_u),
        "lapbar_lap": lambda: ops.lapbar(ops.restrict(lap_u)),
        "lapbar2": lambda: ops.lapbar(ops.lapbar(ops.restrict(u))),
        "eta_lap2": lambda: ops.eta(lap2_u),
        "lapbar_eta_lap": lambda: ops.lapbar(ops.eta(lap_u)),
        "lapbar2_eta": lambda: ops.lapbar(ops.lapbar(ops.eta(u))),
    }
    out = ops.bzero()
    for key, coeff in LEADING_TERMS[j].items():
        out = out + coeff * prim[key]()
    return out
