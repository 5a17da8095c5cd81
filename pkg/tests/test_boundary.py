"""The six boundary operators: coefficients, model closed forms, stencils."""

from fractions import Fraction as Q

import pytest

from gjms6.boundary import (
    BoundaryOperatorId,
    LEADING_TERMS,
    apply_B,
    coefficients,
    geodesic_forms,
    leading_part,
    normal_form_operators,
)
from gjms6.fractional import rising, sphere_eigenvalue
from gjms6.geometry import ball, halfspace, hemisphere, hyperbolic_geodesic
from gjms6.polys import ExpPolyMode, Poly
from gjms6.reps import RadialProfile, SeparatedMode


def test_bidegree():
    b = BoundaryOperatorId(3)
    assert b.bidegree(7) == (-1, -4)
    with pytest.raises(ValueError):
        BoundaryOperatorId(6)


def test_coefficients_halfspace_all_zero():
    co = coefficients(halfspace(9))
    assert all(
        getattr(co, f) == 0
        for f in ("T1", "T2", "T3", "T4c", "T5", "S2", "S3", "S4", "R13", "R23")
    )
    assert co.sigma4_zero


@pytest.mark.parametrize("n", [6, 7, 9])
def test_coefficients_ball_closed_forms(n):
    co = coefficients(ball(n))
    assert co.T1 == 1
    assert co.T2 == Q(2 * n - 6, 3)
    assert co.T3 == (n - 1) * (n - 3)
    assert co.T4c == (n + 1) * (n - 1) * (n - 3)
    # the boundary-value coefficient of the order-5 operator recovers the
    # Gamma-ratio constant of the explicit ball operator list
    assert Q(n - 5, 2) * co.T5 == Q(8, 3) * rising(Q(n - 5, 2), 5)
    assert co.S2 == Q(3 * n**2 - 13 * n + 18, 2)


def test_halfspace_symbolic_operator_table():
    # general decaying triharmonic mode e^{-ty}(a + by + cy^2)
    d = 5
    a, b, c, t, y = (Poly.var(d, i) for i in range(5))
    u = ExpPolyMode(a + b * y + c * y**2)
    g = halfspace(7)
    B = [apply_B(j, g, u) for j in range(6)]
    # boundary values live in the remaining symbols (a, b, c, t)
    a, b, c, t = (Poly.var(4, i) for i in range(4))
    assert B[0] == a
    assert B[1] == t * a - b
    assert B[2] == Q(4, 3) * t**2 * a - 2 * t * b + 2 * c
    assert B[3] == 4 * t**3 * a - 6 * t**2 * b + 6 * t * c
    assert B[4] == 8 * t**4 * a - 8 * t**3 * b
    assert B[5] == Q(8, 3) * t**5 * a


def test_halfspace_poly_example():
    n = 7
    d = n + 1
    y = Poly.var(d, d - 1)
    assert apply_B(3, halfspace(n), y**3) == Poly.const(n, -6)
    one = Poly.const(d, 1)
    assert apply_B(0, halfspace(n), one) == Poly.const(n, 1)


def test_ball_poly_examples():
    n = 7
    d = n + 1
    x1 = Poly.var(d, 0)
    vals = [apply_B(j, ball(n), x1) for j in range(6)]
    assert vals == [c * x1 for c in (1, 2, 8, 96, 960, 1920)]
    one = Poly.const(d, 1)
    assert apply_B(1, ball(n), one) == Poly.const(d, 1)
    assert apply_B(2, ball(n), one) == Poly.const(d, Q(8, 3))


def test_ball_mode_matches_poly_route():
    n = 7
    d = n + 1
    h2 = Poly.var(d, 0) * Poly.var(d, 1)
    r2 = sum((Poly.var(d, i) ** 2 for i in range(d)), Poly.zero(d))
    u_poly = (3 * Poly.const(d, 1) - 5 * r2) * h2  # (3 - 5 r^2) x0 x1
    prof = RadialProfile(n, 2, {0: Q(3), 1: Q(-5)})
    from gjms6.reps import BallPolyOps

    ops = BallPolyOps(n)
    h2_b = ops.restrict(h2)
    for j in range(6):
        poly_val = apply_B(j, ball(n), u_poly)
        mode_val = apply_B(j, ball(n), prof.to_separated())
        assert (poly_val - mode_val * h2_b).iszero()


def test_hemisphere_closed_forms_symbolically():
    """The generic assembly with hemisphere curvature equals the explicit
    round-hemisphere operator list, as an identity in the normal jet."""
    n = 7
    D = 6
    syms = [Poly.var(D, k) for k in range(6)]
    g = hemisphere(n)
    for ell in (0, 1, 2, 4):
        lam = sphere_eigenvalue(n, ell)
        mode = SeparatedMode.from_derivs(n, lam, syms, 7)
        from gjms6.reps import SeparatedOps

        ops = SeparatedOps(g, lam, order=7)
        u0 = ops.restrict(mode)
        eta_u = ops.eta(mode)
        lap_u = ops.lap(mode)
        lapM = ops.restrict(lap_u)
        eta_lap = ops.eta(lap_u)
        lap2M = ops.restrict(ops.lap(lap_u))
        eta_lap2 = ops.eta(ops.lap(lap_u))
        lb = lambda w: -lam * w
        gr = rising  # Gamma ratios
        closed = {
            0: u0,
            1: eta_u,
            2: lapM - Q(4, 3) * lb(u0) + Q((n - 3) * (n - 5), 12) * u0,
            3: eta_lap - 4 * lb(eta_u) + Q(3 * n**2 - 8 * n + 13, 4) * eta_u,
            4: -lap2M - 4 * lb(lapM) + 8 * lb(lb(u0))
               + Q(3 * n**2 - 4 * n - 11, 2) * lapM
               - Q((3 * n + 1) * (n - 3)) * lb(u0)
               + Q(3 * (n + 1) * (n - 1) * (n - 3) * (n - 5), 16) * u0,
            5: eta_lap2 + Q(4, 3) * lb(eta_lap) + Q(8, 3) * lb(lb(eta_u))
               - Q(5 * n**2 - 4 * n - 45, 6) * eta_lap
               - Q(5 * n**2 - 8 * n - 37, 3) * lb(eta_u)
               + Q((n + 3) * (n + 1) * (15 * n**2 - 100 * n + 149), 48) * eta_u,
        }
        for j in range(6):
            got = apply_B(j, g, mode)
            assert (got - closed[j]).iszero(), (ell, j)


def test_geodesic_stencils_symbolically():
    n = 7
    D = 6
    syms = [Poly.var(D, k) for k in range(6)]
    g = hyperbolic_geodesic(n)
    gf = geodesic_forms(n)
    for ell in (0, 1, 2, 5):
        lam = sphere_eigenvalue(n, ell)
        mode = SeparatedMode.from_derivs(n, lam, syms, 7)
        for j in range(6):
            got = apply_B(j, g, mode)
            want = gf.apply(j, mode.derivs(5), ell)
            diff = got - want
            assert diff == 0 or diff.iszero(), (ell, j)


def test_geodesic_forms_examples():
    gf = geodesic_forms(7)
    # constant mode: B2(1) = (1/3)(n-5)/2 * Jbar = 7/6 at n = 7
    assert gf.apply(2, [Q(1), 0, 0, 0, 0, 0], 0) == Q(7, 6)
    # operators of order 3 annihilate radially constant modes
    assert gf.apply(3, [Q(1), 0, 0, 0, 0, 0], 4) == 0
    assert gf.apply(0, [Q(5), 0, 0, 0, 0, 0], 2) == 5


def test_normal_form_operators():
    nf = normal_form_operators(7)
    assert nf.table(3)["Jb*eta"] == 8  # 4(n-1)/3 at n = 7
    assert nf.table(5)["Pbar2*eta"] == -24  # -8(n-4) at n = 7
    # flat collapse: the tables reduce to the half-space operators
    n = 7
    d = n + 1
    u = Poly.var(d, 0, 2) * Poly.var(d, d - 1) + Poly.var(d, d - 1, 3)
    g = halfspace(n)
    for j in range(6):
        assert (nf.apply_flat(j, u) - apply_B(j, g, u)).iszero()


def test_leading_symbol():
    """The top-order parts match the universal leading terms: the remainder
    of each operator has lower normal order (degree counting on symbols)."""
    n = 7
    D = 6
    syms = [Poly.var(D, k) for k in range(6)]
    for geom in (ball(n), hemisphere(n), hyperbolic_geodesic(n)):
        for ell in (0, 2):
            lam = sphere_eigenvalue(n, ell)
            mode = SeparatedMode.from_derivs(n, lam, syms, 7)
            for j in range(6):
                rem = apply_B(j, geom, mode) - leading_part(j, geom, mode)
                if isinstance(rem, Poly):
                    # remainder must not involve the top normal derivative
                    for e in rem.terms:
                        top = max(k for k in range(6) if e[k]) if any(e) else 0
                        assert top <= max(j - 1, 0), (geom.kind, j, e)


def test_critical_collapse():
    # at n = 5 the zeroth-order blocks vanish although the coefficient
    # scalars themselves do not
    co = coefficients(ball(5))
    assert co.T1 != 0
    one = RadialProfile(5, 0, {0: Q(1)}).to_separated()
    assert apply_B(1, ball(5), one) == 0
    assert apply_B(1, ball(7), RadialProfile(7, 0, {0: Q(1)}).to_separated()) == 1
