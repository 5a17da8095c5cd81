"""Exact polynomial calculus: derivatives, moments, half-space modes."""

import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gjms6.polys import (
    ExpPolyMode,
    MomentScalar,
    Poly,
    ball_integral,
    laplacian,
    mode_apply,
    reduce_mod_sphere,
    sphere_integral,
)


def radial_sq(d):
    return sum((Poly.var(d, i) ** 2 for i in range(d)), Poly.zero(d))


def test_laplacian_monomials():
    d = 6
    assert laplacian(Poly.var(d, 0, 2)) == Poly.const(d, 2)
    # x1 * y is harmonic
    assert laplacian(Poly.var(d, 0) * Poly.var(d, 5)).iszero()
    r2 = radial_sq(d)
    assert laplacian(r2**3) == 60 * r2**2


def test_triple_laplacian_sixth_power():
    d = 6
    p = radial_sq(d) ** 3
    out = laplacian(laplacian(laplacian(p)))
    assert out == Poly.const(d, 23040)


@st.composite
def sparse_polys(draw, d=4, deg=4):
    terms = draw(st.integers(1, 3))
    p = Poly.zero(d)
    for _ in range(terms):
        e = [draw(st.integers(0, deg)) for _ in range(d)]
        while sum(e) > deg:
            e[e.index(max(e))] -= 1
        c = draw(st.integers(-4, 4))
        p = p + Poly.monomial(d, e, c)
    return p


@settings(max_examples=25, deadline=None)
@given(sparse_polys(), st.permutations(list(range(3))))
def test_laplacian_commutes_with_boundary_permutations(p, perm):
    # permute the first three (boundary) coordinates of a 4-variable poly
    full = list(perm) + [3]

    def permute(q):
        return Poly(q.d, {tuple(e[full[i]] for i in range(q.d)): c for e, c in q.terms.items()})

    assert laplacian(permute(p)) == permute(laplacian(p))


@settings(max_examples=20, deadline=None)
@given(sparse_polys(d=4, deg=3), sparse_polys(d=4, deg=3))
def test_green_identity_on_ball(p, q):
    # int_B (lap p) q - p (lap q) = boundary integral of (dp/dr q - p dq/dr)
    from gjms6.polys import euler_op

    lhs = ball_integral(laplacian(p) * q) - ball_integral(p * laplacian(q))
    rhs = sphere_integral(euler_op(p) * q - p * euler_op(q))
    assert (lhs - rhs).iszero()


def test_sphere_moments():
    d = 8  # S^7
    assert sphere_integral(Poly.const(d, 1)) == MomentScalar(Q(1), "vol_sn", 7)
    assert sphere_integral(Poly.var(d, 0, 2)).q == Q(1, 8)
    assert sphere_integral(Poly.var(d, 0)).q == 0  # odd moment
    assert ball_integral(Poly.const(d, 1)).q == Q(1, 8)


def test_moment_unit_discipline():
    a = sphere_integral(Poly.const(8, 1))
    b = ball_integral(Poly.const(6, 1))
    with pytest.raises(ValueError):
        _ = a + b  # different sphere dimensions


def test_mode_apply_examples():
    d = 2  # (t, y)
    t, y = Poly.var(d, 0), Poly.var(d, 1)
    one = Poly.const(d, 1)
    assert mode_apply("lap", ExpPolyMode(one)).iszero()
    dy = mode_apply("d/dy", ExpPolyMode(y))
    assert dy.profile == one - t * y
    lap_y2 = mode_apply("lap", ExpPolyMode(y**2))
    assert lap_y2.profile == Poly.const(d, 2) - 4 * t * y


def test_triple_laplacian_annihilates_quadratic_profiles():
    d = 2
    t, y = Poly.var(d, 0), Poly.var(d, 1)
    for profile in (Poly.const(d, 1), y, y**2, 3 * y**2 - 2 * y + 5):
        m = ExpPolyMode(profile)
        out = m.lap().lap().lap()
        assert out.iszero()


def test_reduce_mod_sphere():
    d = 3
    x, y, z = (Poly.var(d, i) for i in range(3))
    # z^2 -> 1 - x^2 - y^2
    assert reduce_mod_sphere(z**2) == Poly.const(d, 1) - x**2 - y**2
    # the reduction is a sphere-identity: integrals agree
    p = z**4 * x**2
    assert (sphere_integral(p) - sphere_integral(reduce_mod_sphere(p))).iszero()


def test_random_reduce_consistency():
    rng = random.Random(0)
    d = 4
    for _ in range(10):
        p = Poly.zero(d)
        for _ in range(3):
            e = tuple(rng.randint(0, 3) for _ in range(d))
            p = p + Poly.monomial(d, e, rng.randint(-3, 3))
        assert (sphere_integral(p) - sphere_integral(reduce_mod_sphere(p))).iszero()
