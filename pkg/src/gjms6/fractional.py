"""Fractional conformally covariant boundary operators as mode multipliers.

On the two model boundaries (round n-sphere, flat R^n) the order-2*gamma
fractional operators act diagonally on boundary harmonics.  The round
multiplier is the intertwining eigenvalue Gamma(l + n/2 + gamma) /
Gamma(l + n/2 - gamma); the flat multiplier is t^(2*gamma).  Both are exact:
the Gamma ratio is a rising factorial of integer length 2*gamma, so all
square-root-of-pi factors cancel.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import GeometryKind, ModelGeometry

Q = Fraction

SUPPORTED_GAMMAS = (Q(1, 2), Q(1), Q(3, 2), Q(2), Q(5, 2), Q(3))


def rising(z: Fraction, k: int) -> Fraction:
    """Rising factorial z (z+1) ... (z+k-1), exact over rationals."""
    out = Q(1)
    for i in range(k):
        out *= z + i
    return out


def gamma_ratio(top: Fraction, bottom: Fraction) -> Fraction:
    """Gamma(top)/Gamma(bottom) for top - bottom a nonnegative integer.

    Zero numerators are allowed (a pole of Gamma in the denominator gives 0
    only when bottom is a nonpositive integer; that case is rejected unless
    it arises through rising-factorial zeros, which the product handles).
    """
    k = top - bottom
    if k.denominator != 1 or k < 0:
        raise ValueError("gamma_ratio needs top - bottom a nonnegative integer")
    return rising(bottom, int(k))


def sphere_eigenvalue(n: int, ell: int) -> int:
    """Eigenvalue of minus the boundary Laplacian on degree-l harmonics."""
    return ell * (ell + n - 1)


def round_multiplier(n: int, gamma, ell: int) -> Fraction:
    """Intertwining eigenvalue of the order-2*gamma operator on round S^n.

    gamma = n/2 is allowed: that is the critical operator, whose multiplier
    l (l+1) ... (l+n-1) kills constants.
    """
    gamma = Q(gamma)
    if not 0 < gamma <= Q(n, 2):
        raise ValueError(f"gamma must lie in (0, n/2], got {gamma}")
    two_gamma = 2 * gamma
    if two_gamma.denominator != 1:
        raise ValueError("only integer 2*gamma multipliers are implemented")
    return rising(ell + Q(n, 2) - gamma, int(two_gamma))


def flat_multiplier(gamma, t):
    """t^(2*gamma) for the flat boundary; exact when 2*gamma is integral."""
    gamma = Q(gamma)
    two_gamma = 2 * gamma
    if two_gamma.denominator == 1:
        return t ** int(two_gamma)
    return float(t) ** float(two_gamma)


def multiplier(boundary: str, n: int, gamma, mode):
    """Dispatch on boundary kind: "round" takes a harmonic degree, "flat" a
    frequency.  gamma must lie in (0, n/2)."""
    gamma = Q(gamma)
    if not 0 < gamma < Q(n, 2):
        raise ValueError(f"gamma must lie in (0, n/2), got {gamma}")
    if boundary == "round":
        return round_multiplier(n, gamma, mode)
    if boundary == "flat":
        return flat_multiplier(gamma, mode)
    raise ValueError(f"unknown boundary {boundary!r}")


def d_gamma(gamma) -> Fraction:
    """Normalization 2^(2 gamma) Gamma(gamma)/Gamma(-gamma) at half-integers.

    Exact values: -1 at 1/2, 3 at 3/2, -45 at 5/2 (the sqrt(pi) factors of
    the half-integer Gamma values cancel in the ratio).
    """
    gamma = Q(gamma)
    table = {Q(1, 2): Q(-1), Q(3, 2): Q(3), Q(5, 2): Q(-45)}
    if gamma not in table:
        raise ValueError(f"d_gamma implemented for gamma in {{1/2, 3/2, 5/2}}, got {gamma}")
    return table[gamma]


def scattering_multiplier(n: int, gamma, ell: int) -> Fraction:
    """Per-mode eigenvalue of the scattering operator at s = n/2 + gamma on
    the round sphere: the fractional multiplier divided by d_gamma."""
    return round_multiplier(n, gamma, ell) / d_gamma(gamma)


# ---------------------------------------------------------------------------
# expansion coefficients of the Poisson operator
# ---------------------------------------------------------------------------

def _jbar(boundary: str, n: int) -> Fraction:
    return Q(n, 2) if boundary == "round" else Q(0)


def _pbar_norm_sq(boundary: str, n: int) -> Fraction:
    return Q(n, 4) if boundary == "round" else Q(0)


def L2_mode(s, n: int, boundary: str, mode) -> Fraction:
    """Per-mode value of -lapbar + s*Jbar."""
    s = Q(s)
    if boundary == "round":
        return sphere_eigenvalue(n, mode) + s * _jbar(boundary, n)
    return Q(mode) ** 2 if isinstance(mode, (int, Fraction)) else mode**2


def L4_mode(s, n: int, boundary: str, mode) -> Fraction:
    """Per-mode value of divbar((2 Pbar - Jbar gbar) dbar) + Jbar lapbar - s |Pbar|^2.

    On the round boundary 2 Pbar - Jbar gbar = (1 - n/2) gbar, so the whole
    operator is the scalar -(eigenvalue) - s n/4; on the flat boundary it
    vanishes.
    """
    s = Q(s)
    if boundary == "round":
        lam = sphere_eigenvalue(n, mode)
        return (Q(1) - Q(n, 2)) * (-lam) + _jbar(boundary, n) * (-lam) - s * _pbar_norm_sq(boundary, n)
    return Q(0)


class ScatteringPoleError(ValueError):
    pass


def scattering_T2(n: int, s, boundary: str, mode) -> Fraction:
    """Second-order expansion coefficient of the Poisson solution."""
    s = Q(s)
    if 2 * s - n - 2 == 0:
        raise ScatteringPoleError("pole at 2s = n + 2")
    return -L2_mode(n - s, n, boundary, mode) / (2 * (2 * s - n - 2))


def scattering_T4(n: int, s, boundary: str, mode) -> Fraction:
    """Fourth-order expansion coefficient of the Poisson solution."""
    s = Q(s)
    if 2 * s - n - 2 == 0:
        raise ScatteringPoleError("pole at 2s = n + 2")
    if 2 * s - n - 4 == 0:
        raise ScatteringPoleError("pole at 2s = n + 4")
    inner = L2_mode(n - s + 2, n, boundary, mode) * L2_mode(n - s, n, boundary, mode)
    inner = inner / (2 * s - n - 2) + L4_mode(n - s, n, boundary, mode)
    return inner / (8 * (2 * s - n - 4))


def scattering_T2_T4(n: int, s, boundary: str, mode):
    """Both expansion coefficients; raises ScatteringPoleError at the poles."""
    return scattering_T2(n, s, boundary, mode), scattering_T4(n, s, boundary, mode)


@dataclass(frozen=True)
class FractionalMultiplier:
    """Order-2*gamma fractional operator on a model boundary, as a mode
    multiplier table."""

    gamma: Fraction
    boundary: str  # "round" | "flat"
    n: int

    def value(self, mode):
        return multiplier(self.boundary, self.n, self.gamma, mode)


def boundary_kind(geom: ModelGeometry) -> str:
    """Which model boundary a geometry induces ("round" or "flat")."""
    return "flat" if geom.kind is GeometryKind.UPPER_HALF_SPACE else "round"


# ---------------------------------------------------------------------------
# Dirichlet-to-Neumann verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DtNOperator:
    """Generalized Dirichlet-to-Neumann operator of odd order j: solve the
    extension problem with one nonzero Dirichlet slot and read the dual-slot
    boundary operator.  Realized as a per-mode multiplier table."""

    j: int  # 1, 3, or 5
    geom: ModelGeometry

    def gamma(self) -> Fraction:
        return Q(self.j, 2)

    def front_constant(self) -> Fraction:
        return {1: Q(3), 3: Q(8), 5: Q(8, 3)}[self.j]

    def multiplier_from_solve(self, ell: int):
        """Solve-then-apply route; exact on the ball and geodesic model."""
        from .boundary import apply_B
        from .solver import BoundaryTriple, ball_mode_solve, geodesic_mode_solve, hemisphere_mode_solve

        slot = {5: 0, 3: 1, 1: 2}[self.j]
        read = {5: 5, 3: 4, 1: 3}[self.j]
        data = [Q(0)] * 3
        data[slot] = Q(1)
        kind = self.geom.kind
        if kind is GeometryKind.EUCLIDEAN_BALL:
            res = ball_mode_solve(self.geom.n, ell, BoundaryTriple(*data))
            prof = res.profile.to_separated()
        elif kind is GeometryKind.ROUND_HEMISPHERE:
            res = hemisphere_mode_solve(self.geom.n, ell, BoundaryTriple(*[float(x) for x in data]))
            prof = res.profile.separated()
        elif kind is GeometryKind.HYPERBOLIC_GEODESIC:
            res = geodesic_mode_solve(self.geom.n, ell, BoundaryTriple(*data))
            prof = res.profile
        else:
            raise ValueError("per-mode multipliers live on the round-boundary models")
        return apply_B(read, self.geom, prof)

    def multiplier_expected(self, ell: int) -> Fraction:
        return self.front_constant() * round_multiplier(self.geom.n, self.gamma(), ell)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    residual: float
    tolerance: float
    exact: bool

    @property
    def passed(self) -> bool:
        if self.exact:
            return self.residual == 0
        return abs(self.residual) <= self.tolerance


def dtn_verify_halfspace_symbolic():
    """The three identities on the general decaying triharmonic mode, as
    polynomial identities in the data coefficients and the frequency.

    Returns the list of residual polynomials (each must be zero):
    B3 - 3 t B2, B4 - 8 t^3 B1, B5 - (8/3) t^5 B0.
    """
    from .boundary import apply_B
    from .geometry import halfspace
    from .polys import Poly
    from .solver import halfspace_symbolic_mode

    u = halfspace_symbolic_mode()
    n = 7  # the identities are dimension-independent on the flat model
    g = halfspace(n)
    B = [apply_B(j, g, u) for j in range(6)]
    t = Poly.var(4, 3)
    return [
        B[3] - 3 * t * B[2],
        B[4] - 8 * t**3 * B[1],
        B[5] - Q(8, 3) * t**5 * B[0],
    ]


def dtn_verify(geom: ModelGeometry, n: int, mode, data=None, tol: float = 1e-8):
    """Verify the three Dirichlet-to-Neumann identities on one mode.

    On the half space the check is the symbolic polynomial identity; on the
    round-boundary models the extension with the given (possibly mixed)
    data is solved and the three identities checked directly.
    Returns a list of CheckRecord.
    """
    if geom.kind is GeometryKind.UPPER_HALF_SPACE:
        res = dtn_verify_halfspace_symbolic()
        return [
            CheckRecord(f"dtn-halfspace-order-{j}", Q(0) if r.iszero() else Q(1), 0.0, True)
            for j, r in zip((1, 3, 5), res)
        ]
    from .boundary import apply_B
    from .solver import BoundaryTriple, ball_mode_solve, geodesic_mode_solve, hemisphere_mode_solve

    ell = mode if isinstance(mode, int) else mode.ell
    if data is None:
        data = (Q(1), Q(1), Q(1))
    kind = geom.kind
    exact = kind in (GeometryKind.EUCLIDEAN_BALL, GeometryKind.HYPERBOLIC_GEODESIC) and all(
        isinstance(v, (int, Fraction)) for v in data
    )
    if kind is GeometryKind.EUCLIDEAN_BALL:
        res = ball_mode_solve(n, ell, BoundaryTriple(*data))
        prof = res.profile.to_separated()
    elif kind is GeometryKind.ROUND_HEMISPHERE:
        res = hemisphere_mode_solve(n, ell, BoundaryTriple(*[float(x) for x in data]))
        prof = res.profile.separated()
        exact = False
    elif kind is GeometryKind.HYPERBOLIC_GEODESIC:
        res = geodesic_mode_solve(n, ell, BoundaryTriple(*data))
        prof = res.profile
    else:
        raise ValueError(kind)
    f, phi, psi = res.achieved.aslist()
    out = []
    for j, front, slot_val in (
        (1, Q(3), psi),
        (3, Q(8), phi),
        (5, Q(8, 3), f),
    ):
        read = {1: 3, 3: 4, 5: 5}[j]
        lhs = apply_B(read, geom, prof)
        rhs = front * round_multiplier(n, Q(j, 2), ell) * slot_val
        resid = lhs - rhs
        scale = max(abs(float(rhs)), 1.0)
        out.append(
            CheckRecord(
                f"dtn-{geom.kind.value}-order-{j}-ell-{ell}",
                resid if exact else abs(float(resid)) / scale,
                0.0 if exact else tol,
                exact,
            )
        )
    return out


def dtn_selfadjointness(geom: ModelGeometry, n: int, j: int, modes, tol: float = 1e-8):
    """Formal self-adjointness of the Dirichlet-to-Neumann operators.

    Per-mode multipliers are real (exact rationals); cross-degree pairings
    vanish by orthogonality, so symmetry reduces to the reality of the
    diagonal.  The solve-then-apply route must reproduce the multipliers.
    """
    op = DtNOperator(j, geom)
    out = []
    for ell in modes:
        got = op.multiplier_from_solve(ell)
        want = op.multiplier_expected(ell)
        if isinstance(got, Fraction):
            resid, exact = got - want, True
        else:
            resid, exact = abs(float(got) - float(want)) / max(abs(float(want)), 1.0), False
        out.append(
            CheckRecord(
                f"dtn-selfadjoint-{geom.kind.value}-j{j}-ell{ell}",
                resid,
                0.0 if exact else tol,
                exact,
            )
        )
    return out
