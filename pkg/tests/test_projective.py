from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import naive_val
from padicmap.errors import InvalidInput, PrecisionExhausted
from padicmap.padic_core import PadicScalar, from_rational
from padicmap.projective import (
    INFINITY,
    DiskKind,
    PDisk,
    ProjPoint,
    contains,
    disk,
    disks_disjoint,
    point,
    rho,
    sphere_members_sample,
    spherical_distance,
)

PRIMES = st.sampled_from([3, 5, 7])
rationals = st.builds(lambda n, d: Fraction(n, d), st.integers(-10**6, 10**6), st.integers(1, 10**6))
proj_points = st.one_of(st.just(INFINITY), rationals.map(ProjPoint))


def homogeneous_rho_exponent(P, Q, p):
    """|x1 y2 - x2 y1| / (max(|x1|,|x2|) max(|y1|,|y2|)) from homogeneous coordinates."""
    def coords(R):
        return (Fraction(1), Fraction(0)) if R.is_infinity else (R.value, Fraction(1))

    (x1, x2), (y1, y2) = coords(P), coords(Q)
    num = x1 * y2 - x2 * y1
    if num == 0:
        return float("-inf")

    def absexp(z):  # exponent of |z|_p
        return float("-inf") if z == 0 else -naive_val(z, p)

    return absexp(num) - max(absexp(x1), absexp(x2)) - max(absexp(y1), absexp(y2))


def test_distance_examples():
    assert rho(ProjPoint(Fraction(0)), INFINITY, 3) == 1
    assert rho(point(3), point(Fraction(1, 3)), 3) == 1
    assert rho(point(7), point(7), 3) == 0
    assert rho(INFINITY, INFINITY, 5) == 0
    assert rho(point(1), point(10), 3) == Fraction(1, 9)


def test_disk_examples():
    assert disk(3, 0, -1).contains(point(3))
    assert PDisk(3, point(0), 0, DiskKind.COMPLEMENT).contains(INFINITY)
    assert disk(5, Fraction(1, 5), -1).contains(point(Fraction(1, 5) + 25))
    assert not disk(5, 0, -1).contains(INFINITY)
    assert not disk(5, 0, -1).contains(point(1))


def test_point_parsing():
    assert point("inf").is_infinity and point("oo").is_infinity
    assert point((1, 0)).is_infinity
    assert point((3, 6)).value == Fraction(1, 2)
    assert point("2/4").value == Fraction(1, 2)
    with pytest.raises(InvalidInput):
        point((0, 0))
    with pytest.raises(InvalidInput):
        point([1, 2])


def test_disk_needs_finite_center():
    with pytest.raises(InvalidInput):
        PDisk(3, INFINITY, 0)


def test_contains_uses_cancellation_bound():
    # the difference cancels completely, but to a depth past the radius
    x = ProjPoint(from_rational(1, 5, 6))
    d = disk(5, from_rational(1, 5, 10), -3)
    assert contains(d, x)
    with pytest.raises(PrecisionExhausted):
        contains(disk(5, from_rational(1, 5, 10), -8), x)


def test_disjointness():
    assert disks_disjoint(disk(3, 0, -1), disk(3, 1, -1))
    assert not disks_disjoint(disk(3, 0, -1), disk(3, 9, -2))
    with pytest.raises(InvalidInput):
        disks_disjoint(disk(3, 0, 0), PDisk(3, point(0), 0, DiskKind.COMPLEMENT))


@pytest.mark.parametrize("i,p,seed", [(0, 3, 1), (1, 3, 7), (-2, 5, 9)])
def test_sphere_samples(i, p, seed):
    pts = sphere_members_sample(i, 3, seed, p)
    assert all(naive_val(P.value, p) == -i for P in pts)
    assert pts == sphere_members_sample(i, 3, seed, p)
    inexact = sphere_members_sample(i, 2, seed, p, exact=False, precision=10)
    assert all(isinstance(P.value, PadicScalar) and P.value.valuation == -i for P in inexact)


def test_json_round_trip():
    for P in (INFINITY, point(Fraction(-3, 7)), ProjPoint(from_rational(Fraction(2, 9), 3, 5))):
        assert ProjPoint.from_json(P.to_json(3)) == P
    d = disk(5, Fraction(1, 5), -1)
    assert PDisk.from_json(d.to_json(), 5) == d


@given(PRIMES, proj_points, proj_points)
def test_matches_homogeneous_formula(p, P, Q):
    assert spherical_distance(P, Q, p) == homogeneous_rho_exponent(P, Q, p)


@given(PRIMES, proj_points, proj_points, proj_points)
def test_strong_triangle_bound_symmetry(p, P, Q, R):
    d = spherical_distance
    assert d(P, R, p) <= max(d(P, Q, p), d(Q, R, p))
    assert d(P, Q, p) <= 0
    assert d(P, Q, p) == d(Q, P, p)


@given(PRIMES, st.integers(0, 10**9), st.integers(0, 10**9))
def test_equals_absolute_value_on_integers(p, x, y):
    if x == y:
        return
    assert spherical_distance(point(x), point(y), p) == -naive_val(x - y, p)


@given(PRIMES, rationals, rationals)
def test_inversion_is_an_isometry(p, x, y):
    def inv(z):
        return INFINITY if z == 0 else point(1 / z)

    assert spherical_distance(point(x), point(y), p) == spherical_distance(inv(x), inv(y), p)


@given(PRIMES, rationals, rationals)
def test_padic_backend_agrees_with_exact(p, x, y):
    if x == y or x == 0 or y == 0:
        return
    P, Q = ProjPoint(from_rational(x, p, 40)), ProjPoint(from_rational(y, p, 40))
    assert spherical_distance(P, Q, p) == spherical_distance(point(x), point(y), p)
