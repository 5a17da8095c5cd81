"""Conformal covariance machinery.

Finite covariance via truncated normal jets with tracked conformal-factor
weights, infinitesimal covariance via dual numbers, the critical-dimension
shift law for the zeroth-order coefficients, boundary-jet normalization of
the conformal factor, and Moebius transport of boundary data between the
model geometries.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .boundary import apply_B, model_curvature_inputs
from .confcalc import DualKit, HalfspaceConformalEngine, JetCtx
from .geometry import GeometryKind, ModelGeometry
from .polys import Poly
from .reps import SeparatedMode, separated_ops

Q = Fraction


@dataclass(frozen=True)
class VariationProbe:
    """A conformal direction sigma with a density weight and jet order."""

    sigma: Poly
    order: int = 6
    w: Fraction | None = None

    def weight(self, n: int) -> Fraction:
        if self.w is not None:
            return Q(self.w)
        return Q(n - 5, 2)


@dataclass
class BoundaryJet:
    """Normal jet of a function along the boundary: coefficients are the
    eta-direction derivatives (eta^k u)|_M up to the stated order."""

    coeffs: list
    order: int


def _require_halfspace(geom: ModelGeometry):
    if geom.kind is not GeometryKind.UPPER_HALF_SPACE:
        raise ValueError("covariance residuals are implemented on the upper half space")


def infinitesimal_covariance_residual(j: int, probe: VariationProbe, u: Poly, geom: ModelGeometry) -> Poly:
    """First conformal variation of the covariance relation; the result is a
    boundary polynomial that must vanish identically.

    Computes d/dt at 0 of
        B_j[e^(2t sigma) g](u) - e^(-(n+2j-5)/2 t sigma) B_j[g](e^((n-5)/2 t sigma) u)
    with exact dual-number arithmetic.
    """
    _require_halfspace(geom)
    n = geom.n
    if probe.w is not None and Q(probe.w) != Q(n - 5, 2):
        raise ValueError("the boundary operators act on weight (n-5)/2 densities")
    kit = DualKit(n, probe.sigma)
    hat = HalfspaceConformalEngine(kit, conformal=True)
    flat = HalfspaceConformalEngine(kit, conformal=False)
    lhs = hat.boundary_operator(j, kit.embed(u))
    rhs = kit.exp_boundary(-Q(n + 2 * j - 5, 2)) * flat.boundary_operator(
        j, kit.exp_ambient(Q(n - 5, 2)) * kit.embed(u)
    )
    res = lhs - rhs
    if not res.a.iszero():
        raise AssertionError("zeroth-order part of a covariance residual must vanish")
    return res.b


def finite_covariance_residual(j: int, sigma: Poly, u: Poly, geom: ModelGeometry, order: int = 6):
    """Exact residual of the covariance relation for the finite conformal
    change e^(2 sigma) g, computed on normal jets of the given truncation
    order.  Returns a weighted boundary polynomial; zero iff covariant.

    Requires order >= j + 1; too shallow a truncation raises TruncationError
    through the jet bookkeeping.
    """
    _require_halfspace(geom)
    n = geom.n
    if order < j + 1:
        raise ValueError("jet truncation order must exceed the operator's normal order")
    ctx = JetCtx(n, sigma, order)
    hat = HalfspaceConformalEngine(ctx, conformal=True)
    flat = HalfspaceConformalEngine(ctx, conformal=False)
    lhs = hat.boundary_operator(j, ctx.embed(u))
    rhs = ctx.exp_boundary(-Q(n + 2 * j - 5, 2)) * flat.boundary_operator(
        j, ctx.exp_ambient(Q(n - 5, 2)) * ctx.embed(u)
    )
    return lhs - rhs


def critical_T_shift(j: int, sigma: Poly, geom: ModelGeometry, order: int = 6):
    """Critical-dimension shift law for the zeroth-order coefficient scalars:
    e^(j sigma) T_j[e^(2 sigma) g] - T_j[g] - B_j[g](sigma), which must vanish
    when n = 5.  Returns a weighted boundary polynomial."""
    _require_halfspace(geom)
    n = geom.n
    if n != 5:
        raise ValueError("the coefficient shift law is a critical-dimension (n = 5) statement")
    if not 1 <= j <= 5:
        raise ValueError("the shift law concerns j in 1..5")
    ctx = JetCtx(n, sigma, order)
    hat = HalfspaceConformalEngine(ctx, conformal=True)
    lhs = ctx.exp_boundary(j) * hat.t_scalar(j)
    bj_sigma = apply_B(j, geom, sigma)  # flat T_j vanishes on the half space
    return lhs - ctx.embed_boundary(bj_sigma)


# ---------------------------------------------------------------------------
# boundary-jet normalization of the conformal factor
# ---------------------------------------------------------------------------

def normalize_jet(geom: ModelGeometry, order: int = 5) -> BoundaryJet:
    """Normal jet of the conformal factor that normalizes the metric at the
    boundary.

    For n > 5 solves B_0(u) = 1 and B_j(u) = 0, j = 1..order; in the critical
    dimension solves B_0(u) = 0 and T_j + B_j(u) = 0.  The system is
    triangular in the normal derivatives, so the jet is exact.  Coefficients
    are the eta-direction derivatives at the zero-frequency boundary mode.
    """
    n = geom.n
    from .boundary import coefficients

    co = coefficients(geom)
    t_vals = {1: co.T1, 2: co.T2, 3: co.T3, 4: co.T4c, 5: co.T5}
    # eta = eta_sign * d/dtau in the collar parametrization
    from .reps import collar_coefficients

    _, _, eta_sign, _ = collar_coefficients(geom.kind, n, 2)
    known = [Q(1) if n > 5 else Q(0)]  # eta^0 u
    for j in range(1, order + 1):
        x = Poly.var(1, 0)
        derivs = []
        for k in range(order + 3):
            if k < len(known):
                derivs.append(eta_sign**k * known[k])
            elif k == j:
                derivs.append(eta_sign**k * x)
            else:
                derivs.append(Q(0))
        mode = SeparatedMode.from_derivs(n, 0, derivs, order + 2)
        val = apply_B(j, geom, mode)
        target = Poly.zero(1) if n > 5 else Poly.const(1, -t_vals[j])
        rel = val - target if isinstance(val, Poly) else Poly.const(1, val) - target
        # rel = c1 * x + c0 must vanish
        c1 = rel.terms.get((1,), Q(0))
        c0 = rel.terms.get((0,), Q(0))
        if c1 == 0:
            raise ArithmeticError("normalization system unexpectedly degenerate")
        known.append(-c0 / c1)
    return BoundaryJet(coeffs=known, order=order)


# ---------------------------------------------------------------------------
# Moebius transport between model boundaries
# ---------------------------------------------------------------------------

def stereo_to_sphere(x):
    """R^n -> S^n (unit sphere in R^(n+1)), inverse stereographic projection
    from the south pole: x maps to ((2x, 1-|x|^2))/(1+|x|^2)."""
    import numpy as np

    x = np.asarray(x, dtype=float)
    r2 = float(np.dot(x, x))
    return np.append(2.0 * x, 1.0 - r2) / (1.0 + r2)


def sphere_to_stereo(X):
    """S^n -> R^n, stereographic projection from the south pole."""
    import numpy as np

    X = np.asarray(X, dtype=float)
    return X[:-1] / (1.0 + X[-1])


def conformal_factor_flat(x) -> float:
    """Omega with round = Omega^2 * flat under stereographic projection."""
    import numpy as np

    x = np.asarray(x, dtype=float)
    return 2.0 / (1.0 + float(np.dot(x, x)))


def cayley_transport_function(f_round, weight, to: str = "flat"):
    """Transport a boundary density of the given conformal weight between the
    round sphere and flat space: f_flat(x) = Omega(x)^w f_round(X(x)).

    ``f_round`` takes a point of S^n in R^(n+1); the returned callable takes
    a point of R^n (and conversely for to="round").
    """
    w = float(weight)
    if to == "flat":
        def f_flat(x):
            return conformal_factor_flat(x) ** w * f_round(stereo_to_sphere(x))

        return f_flat
    if to == "round":
        f_flat = f_round  # argument is flat data in this direction

        def f_round_out(X):
            x = sphere_to_stereo(X)
            return f_flat(x) / conformal_factor_flat(x) ** w

        return f_round_out
    raise ValueError("direction must be 'flat' or 'round'")


def flat_bubble_params(xi, amp=1.0):
    """Round bubble (1 + X.xi)^(-w) on S^n as the flat bubble
    a (eps + |x - x0|^2)^(-w): returns (a_factor_base, eps, x0) where the flat
    amplitude is amp * (2/(eps+1+|x0|^2))^(-w) ... expressed via
    m = 1 - xi_(n+1) = 2/(1 + eps + |x0|^2)."""
    import numpy as np

    xi = np.asarray(xi, dtype=float)
    m = 1.0 - xi[-1]
    x0 = -xi[:-1] / m
    eps = (1.0 - float(np.dot(xi, xi))) / m**2
    return m, eps, x0


def round_bubble_center(eps: float, x0, n: int):
    """Flat bubble (eps + |x-x0|^2)^(-w) corresponds to the round bubble with
    center xi in the open unit ball: inverse of flat_bubble_params."""
    import numpy as np

    x0 = np.asarray(x0, dtype=float)
    m = 2.0 / (1.0 + eps + float(np.dot(x0, x0)))
    xi = np.append(-m * x0, 1.0 - m)
    return xi
