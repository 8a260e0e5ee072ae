import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_cycles, naive_val
from padicmap.decomposition import (
    BallId,
    LevelGraph,
    all_balls,
    core_domain,
    cycles_at_level,
    decompose_report,
    default_kmax,
    induced_map,
    label_chain,
    lift_tree,
    reduce_point,
)
from padicmap.dynamics import MapParams, apply
from padicmap.errors import InvalidInput, WrongRegime
from padicmap.padic_core import from_rational
from padicmap.projective import INFINITY, ProjPoint, point, spherical_distance

rationals = st.builds(lambda n, d: Fraction(n, d), st.integers(-10**6, 10**6), st.integers(1, 10**6))


def A(k, r):
    return BallId(k, "A", r)


def I(k, y):
    return BallId(k, "I", y)


def test_reduce_examples():
    assert reduce_point(INFINITY, 2, 3) == I(2, 0)
    assert reduce_point(4, 2, 3) == A(2, 4)
    assert reduce_point(Fraction(1, 3), 1, 3) == I(1, 0)
    assert reduce_point(Fraction(1, 3), 2, 3) == I(2, 1)
    assert reduce_point(Fraction(-1, 2), 1, 3) == A(1, 1)
    with pytest.raises(InvalidInput):
        reduce_point(1, 0, 3)


def test_ball_counts_and_parents():
    for p, k in ((3, 1), (3, 4), (5, 3)):
        balls = all_balls(p, k)
        assert len(balls) == len(set(balls)) == p**k + p ** (k - 1)
        if k > 1:
            parents = {b.parent(p) for b in balls}
            assert parents == set(all_balls(p, k - 1))
    with pytest.raises(InvalidInput):
        A(1, 0).parent(3)


@given(st.sampled_from([3, 5, 7]), st.integers(1, 4), st.one_of(st.just(None), rationals))
def test_reduce_lands_in_the_ball_of_its_representative(p, k, x):
    P = INFINITY if x is None else point(x)
    b = reduce_point(P, k, p)
    assert b in set(all_balls(p, k))
    assert reduce_point(b.representative(p), k, p) == b
    assert reduce_point(b.sample(p, random.Random(k)), k, p) == b
    assert spherical_distance(P, b.representative(p), p) <= -k


@given(st.sampled_from([3, 5]), st.integers(1, 4), rationals, rationals)
def test_same_ball_iff_close(p, k, x, y):
    same = reduce_point(x, k, p) == reduce_point(y, k, p)
    assert same == (spherical_distance(point(x), point(y), p) <= -k)


@given(st.sampled_from([3, 5]), st.integers(1, 5), rationals.filter(bool))
def test_padic_backend_reduces_like_exact(p, k, x):
    assert reduce_point(ProjPoint(from_rational(x, p, 30)), k, p) == reduce_point(x, k, p)


def test_core_domain_spheres():
    params = MapParams(3, 9)  # core spheres |x| = 1/3, 1, 3
    for b in core_domain(params, 3):
        assert b.sphere_valuation(3) in (-1, 0, 1)
    assert len(core_domain(params, 1)) == 2  # residues 1, 2; the finer spheres appear at k >= 2
    assert len(core_domain(params, 3)) == 18 + 6 + 6  # units mod 27, 3*units mod 27, y units mod 9


def test_induced_map_small_case():
    g = induced_map(MapParams(3, 1), 1)
    assert g.iterate_order == 1
    assert g.mapping == {A(1, 0): I(1, 0), A(1, 1): A(1, 2), A(1, 2): A(1, 1), I(1, 0): I(1, 0)}


def test_cycles_small_case():
    lc = cycles_at_level(induced_map(MapParams(3, 1), 1))
    cycles = sorted(lc.cycles)
    assert cycles == [(A(1, 1), A(1, 2)), (I(1, 0),)]
    d, idx = lc.transients[A(1, 0)]
    assert d == 1 and lc.cycles[idx] == (I(1, 0),)


def test_cycles_trivial_graphs():
    nodes = [A(2, r) for r in range(9)]
    ident = cycles_at_level(LevelGraph(2, 1, {b: b for b in nodes}))
    assert len(ident.cycles) == 9 and not ident.transients
    ring = cycles_at_level(LevelGraph(2, 1, {b: nodes[(i + 1) % 9] for i, b in enumerate(nodes)}))
    assert len(ring.cycles) == 1 and len(ring.cycles[0]) == 9 and not ring.transients


@given(st.lists(st.integers(0, 11), min_size=12, max_size=12))
def test_cycles_match_naive_oracle(targets):
    nodes = [A(3, r) for r in range(12)]
    mapping = {b: nodes[t] for b, t in zip(nodes, targets)}
    lc = cycles_at_level(LevelGraph(3, 1, mapping))
    cyclic, dist = naive_cycles(mapping)
    assert set(lc.cycle_of) == cyclic
    assert {b: d for b, (d, _) in lc.transients.items()} == {b: d for b, d in dist.items() if d}
    for b, (d, idx) in lc.transients.items():
        y = b
        for _ in range(d):
            y = mapping[y]
        assert lc.cycle_of[y] == idx
    for cyc in lc.cycles:
        assert cyc[0] == min(cyc)
        for u, v in zip(cyc, cyc[1:] + cyc[:1]):
            assert mapping[u] == v


@pytest.mark.parametrize("p,a", [(3, 1), (5, 2), (7, Fraction(3, 2))])
def test_good_reduction_commutation(p, a):
    params = MapParams(p, a)
    rng = random.Random(p)
    for k in (1, 2, 3):
        g = induced_map(params, k)
        for _ in range(100):
            x = Fraction(rng.randrange(-10**6, 10**6), rng.randrange(1, 10**6))
            if x == 0:
                continue
            assert reduce_point(apply(params, x), k, p) == g.mapping[reduce_point(x, k, p)]


@settings(max_examples=30)
@given(st.integers(-1, 1), st.integers(1, 10**6))
def test_minimal_off_origin_commutation(i, u):
    params = MapParams(3, 9)
    if u % 3 == 0:
        return
    x = Fraction(3) ** (-i) * u
    for k in (1, 2, 3):
        g = induced_map(params, k)
        b = reduce_point(x, k, 3)
        if b in g.mapping:
            assert reduce_point(apply(params, apply(params, x)), k, 3) == g.mapping[b]


def test_lift_tree_divisibility():
    for params, kmax in ((MapParams(3, 9), 5), (MapParams(3, 1), 4), (MapParams(5, 3), 3)):
        forest = lift_tree(params, kmax)
        assert not forest.divisibility_failures
        for k in range(2, kmax + 1):
            for rec in forest.records[k]:
                if rec.parent is not None:
                    parent = forest.records[k - 1][rec.parent]
                    assert rec.length % parent.length == 0
                    assert rec.members[0].parent(params.p) in parent.members
    with pytest.raises(InvalidInput):
        lift_tree(MapParams(3, 1), 1)


def test_labels():
    assert label_chain({1: 2, 2: 6, 3: 18}) == "MinimalComponentCandidate"
    assert label_chain({1: 1, 2: 1, 3: 1}) == "PeriodicOrbitCandidate"
    assert label_chain({3: 4}) == "Undetermined"


def test_default_kmax():
    assert default_kmax(3) == 6
    for p in (5, 7, 11, 101):
        k = default_kmax(p)
        assert k >= 1 and (k == 1 or p**k + p ** (k - 1) <= 1_000_000)


def test_report_minimal_off_origin():
    rep = decompose_report(MapParams(3, 9), k_max=5, samples=200)
    assert rep.partition_ok and rep.divisibility_ok and rep.landing_ok
    assert len(rep.landing_table) == 200
    for lv in rep.levels:
        k = lv["level"]
        assert lv["balls_total"] == 3**k + 3 ** (k - 1)
        assert lv["cyclic"] + lv["transient"] + lv["outside_domain"] == lv["balls_total"]
    js = rep.to_json()
    assert js["regime"] == "MinimalOffOrigin" and js["map"] == "phi^2 on core spheres"
    assert all(c["label"] in {"PeriodicOrbitCandidate", "MinimalComponentCandidate", "Undetermined"}
               for c in js["chains"])
    assert any("candidates" in n for n in js["notes"])


def test_report_good_reduction_routes_zero_to_infinity():
    rep = decompose_report(MapParams(3, 1), k_max=4, samples=10)
    assert rep.partition_ok and rep.divisibility_ok and rep.landing_table == []
    forest = lift_tree(MapParams(3, 1), 4)
    lc = forest.levels[4]
    _, idx = lc.transients[A(4, 0)]
    assert lc.cycles[idx] == (I(4, 0),)
    assert all(r["label"] == "BasinCandidate" for r in rep.routing)
    assert sum(r["balls"] for r in rep.routing) == rep.transients


def test_report_wrong_regime():
    for a in (Fraction(1, 3), Fraction(1, 25), -25):
        with pytest.raises(WrongRegime):
            decompose_report(MapParams(3 if a == Fraction(1, 3) else 5, a))


def test_sphere_valuation():
    assert A(3, 9).sphere_valuation(3) == 2
    assert A(3, 0).sphere_valuation(3) is None
    assert I(3, 1).sphere_valuation(3) == -1
    assert I(3, 3).sphere_valuation(3) == -2
    for b in all_balls(3, 3):
        w = b.sphere_valuation(3)
        if w is not None:
            assert naive_val(b.representative(3).value, 3) == w
