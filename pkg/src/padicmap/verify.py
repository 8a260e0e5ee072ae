"""Randomized verification suites.

Each suite samples points with a seeded generator, checks an exact
valuation-level statement about the map and returns a :class:`VerdictReport`.
A suite passes when it records zero failures; failures keep up to
``MAX_WITNESSES`` concrete counterexamples.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import decomposition as dec
from . import symbolic as sym
from .dynamics import (
    MapParams,
    Regime,
    apply,
    classify,
    escape_test,
    finite_fixed_points,
    fixed_points,
    preimages,
    qp_sqrt,
    taylor_coeffs,
)
from .errors import PrecisionExhausted
from .padic_core import (
    INF,
    PadicScalar,
    diff_valuation,
    from_rational,
    is_square_rational,
    sqrt,
    unit_residue,
    valuation,
)
from .projective import INFINITY, ProjPoint, disks_disjoint, spherical_distance

MAX_WITNESSES = 5

CANONICAL = {
    (3, Fraction(1, 3)): Regime.ESCAPE_ALL,
    (5, Fraction(1, 25)): Regime.FULL_SHIFT_TWO,
    (5, Fraction(-25)): Regime.CHAOTIC_SFT,
    (3, Fraction(9)): Regime.MINIMAL_OFF_ORIGIN,
    (7, Fraction(3)): Regime.GOOD_REDUCTION,
}


@dataclass
class VerdictReport:
    suite: str
    cases: int = 0
    failures: int = 0
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    wall_time: float | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.cases > 0

    def check(self, ok: bool, witness=None):
        """Count one case; ``witness`` may be a zero-argument callable, built
        only on failure."""
        self.cases += 1
        if not ok:
            self.fail(witness)

    def fail(self, witness):
        self.failures += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness() if callable(witness) else witness)

    def to_json(self, timing: bool = False) -> dict:
        out = {"suite": self.suite, "cases": self.cases, "failures": self.failures,
               "passed": self.passed, "witnesses": self.witnesses, "details": self.details}
        if timing and self.wall_time is not None:
            out["wall_time_s"] = round(self.wall_time, 3)
        return out


def _rng(seed, suite: str) -> random.Random:
    return random.Random(f"{seed}:{suite}")


def _unit(rng: random.Random, p: int, digits: int) -> int:
    return rng.randrange(1, p) + p * rng.randrange(p ** (digits - 1))


def _scalar(rng, p, val, precision):
    return PadicScalar(p, val, _unit(rng, p, precision), precision)


def _in_disk(rng, p, center, radius_exponent, digits=24):
    """Random point of D(center, p^radius_exponent) as center + p^-r * integer."""
    offset = Fraction(p) ** (-radius_exponent) * rng.randrange(p**digits)
    return center + offset


def _s(x) -> str:
    if isinstance(x, ProjPoint):
        x = x.value
    if x is None:
        return "inf"
    if isinstance(x, PadicScalar):
        return repr(x)
    if max(abs(x.numerator), x.denominator).bit_length() > 512:
        return f"<rational of height 2^{max(abs(x.numerator), x.denominator).bit_length()}>"
    return str(x)


# -- independent oracles --------------------------------------------------------


def brute_force_square(q: Fraction, p: int) -> bool:
    """Squareness in Q_p by enumerating the unit squares mod p^3."""
    if q == 0:
        return True
    num, den, v = q.numerator, q.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    if v % 2:
        return False
    m = p**3
    u = num * pow(den, -1, m) % m
    return u in {x * x % m for x in range(m) if x % p}


def brute_force_regime(p: int, a: Fraction) -> Regime:
    num, den, v = a.numerator, a.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    if v == 0:
        return Regime.GOOD_REDUCTION
    if v < 0:
        return Regime.FULL_SHIFT_TWO if brute_force_square(1 - a, p) else Regime.ESCAPE_ALL
    return Regime.CHAOTIC_SFT if brute_force_square(-a, p) else Regime.MINIMAL_OFF_ORIGIN


def random_parameter(rng: random.Random, primes=(3, 5, 7, 11, 13)) -> tuple[int, Fraction]:
    p = rng.choice(primes)
    e = rng.randint(-5, 5)
    while True:
        num, den = rng.randrange(1, 10**4), rng.randrange(1, 10**4)
        if num % p and den % p:
            break
    return p, rng.choice((1, -1)) * Fraction(p) ** e * Fraction(num, den)


# -- suites -----------------------------------------------------------------


def suite_classification(seed=0, n_random: int = 20, **_) -> VerdictReport:
    rep = VerdictReport("classification")
    for (p, a), want in CANONICAL.items():
        got = classify(MapParams(p, a))
        rep.check(got is want, {"p": p, "a": str(a), "expected": str(want), "got": str(got)})
    rng = _rng(seed, "classification")
    for _ in range(n_random):
        p, a = random_parameter(rng)
        got, want = classify(MapParams(p, a)), brute_force_regime(p, a)
        rep.check(got is want, {"p": p, "a": str(a), "oracle": str(want), "got": str(got)})
    return rep


FULL_SHIFT_PARAMS = ((3, Fraction(-1, 9)), (5, Fraction(1, 25)))


def suite_scaling(seed=0, pairs: int = 1000, **_) -> VerdictReport:
    """|phi(x) - phi(y)| = |x - y| / |a| on each branch disk."""
    rep = VerdictReport("scaling")
    rng = _rng(seed, "scaling")
    for p, a in FULL_SHIFT_PARAMS:
        params = MapParams(p, a, precision=64)
        for idx, d in enumerate(sym.shift_disks(params), start=1):
            c = d.center.value
            done = 0
            while done < pairs:
                x = _in_disk(rng, p, c, d.radius_exponent)
                y = _in_disk(rng, p, c, d.radius_exponent)
                dv = diff_valuation(x, y, p)
                if dv == INF:
                    continue
                done += 1
                fx, fy = apply(params, ProjPoint(x)).value, apply(params, ProjPoint(y)).value
                got = diff_valuation(fx, fy, p) - dv
                rep.check(got == params.v, {"p": p, "a": str(a), "disk": idx, "x": _s(x),
                                            "y": _s(y), "difference": got})
    return rep


def suite_fullshift(seed=0, depth: int = 8, **_) -> VerdictReport:
    """Cylinders of the full 2-shift at one depth: nonempty, disjoint, nested,
    correctly sized, and recoded by their centers."""
    rep = VerdictReport("fullshift")
    params = MapParams(5, Fraction(1, 25), precision=4 * depth + 20)
    cyl = {}
    for n in range(1, depth + 1):
        for c in sym.all_cylinders(params, n):
            cyl[c.word.symbols] = c
    deepest = [c for w, c in cyl.items() if len(w) == depth]
    rep.details["cylinders"] = len(deepest)
    rep.check(len(deepest) == 2**depth, {"expected": 2**depth, "got": len(deepest)})
    want_r = sym.cylinder_radius_exponent(params, depth)
    for c in deepest:
        w = c.word.symbols
        rep.check(c.disk.radius_exponent == want_r,
                  {"word": list(w), "radius_exponent": c.disk.radius_exponent, "expected": want_r})
        it = sym.itinerary2(params, c.disk.center, depth)
        rep.check(it.word.symbols == w and not it.escaped,
                  {"word": list(w), "itinerary": it.to_json()})
        parent = cyl[w[:-1]] if len(w) > 1 else None
        if parent is not None:
            rep.check(parent.disk.contains(c.disk.center), {"word": list(w), "reason": "not nested"})
    for c1, c2 in combinations(deepest, 2):
        rep.check(disks_disjoint(c1.disk, c2.disk),
                  {"words": [list(c1.word.symbols), list(c2.word.symbols)]})
    return rep


SFT_PARAMS = (5, Fraction(-25))


def _sft_sample(rng, params, regions, deep_word_len, precision):
    """A uniform point of a random region, or a point pulled back along a
    random admissible word so that its orbit stays in the coding region.

    Points are fixed-precision p-adic numbers so long orbits stay cheap.
    """
    P = _sft_sample_raw(rng, params, regions, deep_word_len, precision)
    if P.is_infinity or isinstance(P.value, PadicScalar):
        return P
    return ProjPoint(from_rational(P.value, params.p, precision))


def _sft_sample_raw(rng, params, regions, deep_word_len, precision):
    p, v = params.p, params.v
    A = sym.transition_matrix4()
    kind = rng.random()
    if kind < 0.25:
        s = rng.randint(1, 4)
        if s in (1, 2):
            c = regions[s - 1].center.value
            return ProjPoint(c + Fraction(p) * _unit(rng, p, 30) * p ** rng.randint(0, 4))
        if s == 3:
            return ProjPoint(_scalar(rng, p, rng.randint(v + 1, v + 8), precision))
        return ProjPoint(_scalar(rng, p, -rng.randint(v + 1, v + 8), precision))
    if kind < 0.35:
        # sphere-level noise: points of the intermediate spheres
        return ProjPoint(_scalar(rng, p, rng.randint(-(v + 1), v + 1), precision))
    # deep point: backward along an admissible word ending in region 3 or 4
    word = [rng.choice((3, 4))]
    while len(word) < deep_word_len:
        preds = [s for s in range(1, 5) if A.allows(s, word[-1])]
        word.append(rng.choice(preds))
    word.reverse()
    end = word[-1]
    y = ProjPoint(_scalar(rng, p, v + 1 + rng.randint(0, 3) if end == 3 else -(v + 1) - rng.randint(0, 3),
                          precision))
    for s in reversed(word[:-1]):
        nxt = None
        for pre in preimages(params, y):
            if sym.region_index(regions, pre, params) == s:
                nxt = pre
                break
        if nxt is None:
            break
        y = nxt
    return y


def suite_sft(seed=0, samples: int = 10_000, steps: int = 50, matrix=None,
              precision: int = 100, **_) -> VerdictReport:
    """Empirical region transitions of the ChaoticSFT map against A."""
    rep = VerdictReport("sft")
    A = matrix or sym.transition_matrix4()
    params = MapParams(*SFT_PARAMS, precision=precision)
    regions = sym.sft_regions(params)
    rng = _rng(seed, "sft")
    observed = [[0] * 4 for _ in range(4)]
    exits = [0] * 4
    truncated = 0
    for _ in range(samples):
        P = _sft_sample(rng, params, regions, rng.randint(2, steps), precision)
        try:
            s = sym.region_index(regions, P, params)
            for _ in range(steps):
                if s is None:
                    break
                Q = apply(params, P)
                t = sym.region_index(regions, Q, params)
                if t is None:
                    exits[s - 1] += 1
                    if s <= 3:
                        rep.fail({"from": s, "to": None, "x": _s(P)})
                    break
                observed[s - 1][t - 1] += 1
                rep.check(A.allows(s, t), lambda: {"from": s, "to": t, "x": _s(P)})
                P, s = Q, t
        except PrecisionExhausted:
            truncated += 1
    for s in range(3):
        succ = [t + 1 for t in range(4) if observed[s][t]]
        rep.check(len(succ) == 1, {"row": s + 1, "observed_successors": succ})
    rep.details.update({"observed": observed, "exits": exits, "truncated_orbits": truncated,
                        "matrix": A.to_json()})
    return rep


def suite_entropy(**_) -> VerdictReport:
    rep = VerdictReport("entropy")
    er = sym.entropy(sym.transition_matrix4(), tol=1e-13)
    lam = er.lam
    rep.check(abs(lam - 1.69562) <= 1e-4, {"lambda": lam, "reference": 1.69562})
    rep.check(abs(lam**3 - lam**2 - 2) <= 1e-8, {"lambda": lam, "residual": lam**3 - lam**2 - 2})
    ratio = er.word_counts[-1] / er.word_counts[-2]
    rep.check(abs(ratio - lam) < 1e-2, {"word_count_ratio": ratio, "lambda": lam})
    rep.details = er.to_json()
    return rep


def _random_point(rng, p, precision=32, span=6):
    if rng.random() < 0.03:
        return INFINITY
    return ProjPoint(_scalar(rng, p, rng.randint(-span, span), precision))


def suite_good_reduction(seed=0, samples: int = 500, k_max: int = 5, **_) -> VerdictReport:
    """reduce(phi(x)) = induced(reduce(x)) for unit parameters."""
    rep = VerdictReport("good_reduction")
    rng = _rng(seed, "good_reduction")
    for p in (3, 5, 7):
        while True:
            a = Fraction(rng.randrange(1, 10**3), rng.randrange(1, 10**3))
            if a.numerator % p and a.denominator % p:
                break
        for a_ in (Fraction(1), a):
            params = MapParams(p, a_, precision=32)
            for k in range(1, k_max + 1):
                graph = dec.induced_map(params, k, seed)
                for _ in range(samples):
                    x = _random_point(rng, p)
                    lhs = dec.reduce_point(apply(params, x), k, p)
                    rhs = graph.mapping[dec.reduce_point(x, k, p)]
                    rep.check(lhs == rhs, {"p": p, "a": str(a_), "k": k, "x": _s(x),
                                           "reduce_phi": lhs.to_json(), "induced": rhs.to_json()})
    return rep


MINIMAL_PARAMS = (3, Fraction(9))


def _sphere_point(rng, p, i, digits=20):
    return ProjPoint(Fraction(p) ** (-i) * _unit(rng, p, digits))


def suite_sphere_swap(seed=0, samples: int = 300, **_) -> VerdictReport:
    """phi swaps S(0, p^i) and S(0, p^-i); phi^2 is 1-Lipschitz on their union."""
    rep = VerdictReport("sphere_swap")
    params = MapParams(*MINIMAL_PARAMS)
    p, h = params.p, params.half_v
    rng = _rng(seed, "sphere_swap")

    def phi2(x):
        return apply(params, apply(params, x))

    for i in range(-h, h + 1):
        for _ in range(samples):
            x = _sphere_point(rng, p, i)
            w = valuation(apply(params, x).value, p)
            rep.check(w == i, {"i": i, "x": _s(x), "image_valuation": w})
        for _ in range(samples):
            x = _sphere_point(rng, p, rng.choice((i, -i)))
            y = _sphere_point(rng, p, rng.choice((i, -i)))
            if x == y:
                continue
            dv = diff_valuation(x.value, y.value, p)
            d2 = diff_valuation(phi2(x).value, phi2(y).value, p)
            rep.check(d2 >= dv, {"i": i, "x": _s(x), "y": _s(y), "v_diff": dv, "v_diff_phi2": d2})
    return rep


def suite_ball_stability(seed=0, samples: int = 300, **_) -> VerdictReport:
    """|phi^2(x) - phi^2(x0)| <= |x - x0| on D(x0, |x0|/p) for core x0."""
    rep = VerdictReport("ball_stability")
    params = MapParams(*MINIMAL_PARAMS)
    p, h = params.p, params.half_v
    rng = _rng(seed, "ball_stability")

    def phi2(x):
        return apply(params, apply(params, ProjPoint(x))).value

    for _ in range(samples):
        i = rng.randint(-h, h)
        x0 = _sphere_point(rng, p, i).value
        x = _in_disk(rng, p, x0, i - 1)
        if x == x0:
            continue
        rep.check(diff_valuation(phi2(x), phi2(x0), p) >= diff_valuation(x, x0, p),
                  {"x0": _s(x0), "x": _s(x)})
    return rep


def suite_gotozero(seed=0, pairs: int = 500, **_) -> VerdictReport:
    """|phi(x) - phi(y)| = |a||x - y| near the zeros +-1/sqrt(-a)."""
    rep = VerdictReport("gotozero")
    params = MapParams(*SFT_PARAMS, precision=64)
    p, v = params.p, params.v
    zeta = 1 / qp_sqrt(-params.a, p, params.precision)
    r = v // 2 - 1  # radius 1 / (p sqrt|a|)
    rng = _rng(seed, "gotozero")
    for z in (zeta, -zeta):
        done = 0
        while done < pairs:
            x, y = _in_disk(rng, p, z, r), _in_disk(rng, p, z, r)
            dv = diff_valuation(x, y, p)
            if dv == INF:
                continue
            done += 1
            got = diff_valuation(apply(params, ProjPoint(x)).value,
                                 apply(params, ProjPoint(y)).value, p) - dv
            rep.check(got == v, {"x": _s(x), "y": _s(y), "difference": got})
    return rep


ESCAPE_PARAMS = (3, Fraction(1, 3))


def suite_monotone_escape(seed=0, samples: int = 100, steps: int = 10, **_) -> VerdictReport:
    """For |a| > 1 and |x| >= 1 the valuation drops by -v_p(a) every step."""
    rep = VerdictReport("monotone_escape")
    params = MapParams(*ESCAPE_PARAMS, precision=32)
    p = params.p
    rng = _rng(seed, "monotone_escape")
    for _ in range(samples):
        x = ProjPoint(_scalar(rng, p, -rng.randint(0, 6), 32))
        cur = x
        vals = [valuation(cur.value, p)]
        for _ in range(steps):
            cur = apply(params, cur)
            vals.append(valuation(cur.value, p))
        ok = all(vals[j + 1] - vals[j] == params.v for j in range(steps))
        rep.check(ok, {"x": _s(x), "valuations": vals})
        verdict = escape_test(params, x)
        rep.check(verdict.escapes and verdict.step == 0, {"x": _s(x), "verdict": verdict.to_json()})
    for fp in fixed_points(params):
        if fp.point.is_infinity:
            rep.check(fp.kind == "attracting", {"fixed_point": "inf", "kind": fp.kind})
    return rep


def suite_taylor(seed=0, samples: int = 20, order: int = 8, **_) -> VerdictReport:
    """|alpha_i| <= (p / |x0|)^(i-1) for the expansion of phi^2 at core x0."""
    rep = VerdictReport("taylor")
    params = MapParams(*MINIMAL_PARAMS)
    p, h = params.p, params.half_v
    rng = _rng(seed, "taylor")
    for _ in range(samples):
        i = rng.randint(-h, h)
        x0 = _sphere_point(rng, p, i, digits=6).value
        tc = taylor_coeffs(params, 2, x0, order)
        # (p/|x0|)^(i-1) = p^((i-1)(1 + v(x0)))  =>  v(alpha_i) >= -(i-1)(1 + v(x0))
        vx = valuation(x0, p)
        for n, c in enumerate(tc.coefficients, start=1):
            vc = valuation(c, p)
            rep.check(vc >= -(n - 1) * (1 + vx), {"x0": _s(x0), "order": n, "valuation": vc,
                                                   "bound": -(n - 1) * (1 + vx)})
    return rep


def suite_landing(seed=0, samples: int = 200, **_) -> VerdictReport:
    rep = VerdictReport("landing")
    params = MapParams(*MINIMAL_PARAMS)
    for row in dec.landing_table(params, samples, seed):
        rep.check(row["ok"], row)
    return rep


def suite_decomposition(seed=0, samples: int = 200, **_) -> VerdictReport:
    """Partition, divisibility and landing for the two desk-scale runs."""
    rep = VerdictReport("decomposition")
    for (p, a), k_max in (((3, Fraction(9)), 5), ((3, Fraction(1)), 4)):
        report = dec.decompose_report(MapParams(p, a), k_max, samples=samples, seed=seed)
        tag = {"p": p, "a": str(a), "k_max": k_max}
        for lv in report.levels:
            rep.check(lv["partition_ok"], {**tag, "level": lv})
        rep.check(report.divisibility_ok, {**tag, "divisibility_failures": report.divisibility_failures})
        for row in report.landing_table:
            rep.check(row["ok"], {**tag, "landing": row})
        rep.details[f"{p},{a}"] = {
            "chains": len(report.chains),
            "labels": sorted({c["label"] for c in report.chains}),
            "transients": report.transients,
        }
        if a == 1:
            # the ball of 0 must drain into the chain of infinity
            lc = dec.lift_tree(MapParams(p, a), k_max, seed).levels[k_max]
            zero, inf = dec.BallId(k_max, "A", 0), dec.BallId(k_max, "I", 0)
            ok = zero in lc.transients and lc.transients[zero][1] == lc.cycle_of.get(inf)
            rep.check(ok, {**tag, "reason": "0 does not route to the infinity chain"})
    return rep


def suite_padic(seed=0, samples: int = 500, **_) -> VerdictReport:
    """Ultrametric law, multiplicativity, sqrt round trip, squares vs brute force."""
    rep = VerdictReport("padic")
    rng = _rng(seed, "padic")
    for p in (3, 5, 7):
        for _ in range(samples):
            x = _scalar(rng, p, rng.randint(-5, 5), 24)
            y = _scalar(rng, p, rng.randint(-5, 5), 24)
            vx, vy = x.valuation, y.valuation
            try:
                vs = (x + y).valuation
                ok = vs >= min(vx, vy) and (vx == vy or vs == min(vx, vy))
            except PrecisionExhausted:
                ok = vx == vy
            rep.check(ok, {"x": _s(x), "y": _s(y), "law": "ultrametric"})
            rep.check((x * y).valuation == vx + vy, {"x": _s(x), "y": _s(y), "law": "multiplicative"})
            r = sqrt(x * x)
            rep.check(r == x or r == -x, {"x": _s(x), "sqrt": _s(r)})
            q = Fraction(rng.choice((1, -1)) * rng.randrange(1, 10**6), rng.randrange(1, 10**6))
            rep.check(is_square_rational(q, p) == brute_force_square(q, p), {"p": p, "q": str(q)})
    return rep


def suite_projective(seed=0, samples: int = 1000, **_) -> VerdictReport:
    """Strong triangle inequality, bound, symmetry; agreement with |x - y| on Z_p."""
    rep = VerdictReport("projective")
    rng = _rng(seed, "projective")
    for p in (3, 5):
        for _ in range(samples):
            P, Q, R = (_random_point(rng, p, 16, 4) for _ in range(3))
            dpq, dqr, dpr = (spherical_distance(P, Q, p), spherical_distance(Q, R, p),
                             spherical_distance(P, R, p))
            rep.check(dpr <= max(dpq, dqr), {"points": [_s(P), _s(Q), _s(R)]})
            rep.check(dpq <= 0 and dpq == spherical_distance(Q, P, p), {"points": [_s(P), _s(Q)]})
            x = Fraction(rng.randrange(p**8), rng.randrange(1, 10**4) * p + 1)
            y = Fraction(rng.randrange(p**8))
            if x != y:
                rep.check(spherical_distance(ProjPoint(x), ProjPoint(y), p) == -diff_valuation(x, y, p),
                          {"x": str(x), "y": str(y)})
    return rep


def suite_symbolic(seed=0, samples: int = 300, depth: int = 8, **_) -> VerdictReport:
    """Shift equivariance and separation of itineraries; escape off J."""
    rep = VerdictReport("symbolic")
    rng = _rng(seed, "symbolic")
    params = MapParams(5, Fraction(1, 25), precision=48)
    p = params.p
    d1, d2 = sym.shift_disks(params)
    pts = []
    for _ in range(samples):
        c = rng.choice((d1, d2)).center.value
        x = ProjPoint(c + Fraction(p) ** rng.randint(2, 2 * depth) * _unit(rng, p, 20))
        pts.append(x)
        it = sym.itinerary2(params, x, depth)
        if len(it.word) >= 2:
            nxt = sym.itinerary2(params, apply(params, x), depth - 1)
            rep.check(nxt.word.symbols[: len(it.word) - 1] == it.word.symbols[1:],
                      {"x": _s(x), "word": it.word.to_json(), "shifted": nxt.word.to_json()})
        if it.escaped:
            verdict = escape_test(params, x, max_steps=depth + 40)
            rep.check(verdict.escapes, {"x": _s(x), "verdict": verdict.to_json()})
    r = sym.cylinder_radius_exponent(params, depth)
    words = [(x, sym.itinerary2(params, x, depth)) for x in pts]
    full = [(x, it.word.symbols) for x, it in words if not it.escaped]
    for (x, w), (y, u) in combinations(full[:80], 2):
        if x == y:
            continue
        e = spherical_distance(x, y, p)
        rep.check((e <= r) if w == u else (e > r), {"x": _s(x), "y": _s(y), "words": [list(w), list(u)]})
    sft = MapParams(*SFT_PARAMS, precision=96)
    regions = sym.sft_regions(sft)
    for _ in range(samples // 3):
        x = _sft_sample(rng, sft, regions, 8, 96)
        try:
            it = sym.itinerary4(sft, x, 8)
            if len(it.word) >= 2:
                nxt = sym.itinerary4(sft, apply(sft, x), 7)
                rep.check(nxt.word.symbols[: len(it.word) - 1] == it.word.symbols[1:],
                          {"x": _s(x), "word": it.word.to_json()})
        except PrecisionExhausted:
            continue
    return rep


SUITES = {
    "classification": suite_classification,
    "padic": suite_padic,
    "projective": suite_projective,
    "scaling": suite_scaling,
    "fullshift": suite_fullshift,
    "symbolic": suite_symbolic,
    "sft": suite_sft,
    "entropy": suite_entropy,
    "good_reduction": suite_good_reduction,
    "sphere_swap": suite_sphere_swap,
    "ball_stability": suite_ball_stability,
    "gotozero": suite_gotozero,
    "monotone_escape": suite_monotone_escape,
    "taylor": suite_taylor,
    "landing": suite_landing,
    "decomposition": suite_decomposition,
}


def run_suite(name: str, seed=0, inject_fault: bool = False, **opts) -> VerdictReport:
    fn = SUITES[name]
    if name == "sft" and inject_fault:
        opts["matrix"] = sym.transition_matrix4().flipped(4, 1)
    opts = {k: v for k, v in opts.items() if v is not None}
    t0 = time.perf_counter()
    rep = fn(seed=seed, **opts)
    rep.wall_time = time.perf_counter() - t0
    if name == "sft" and inject_fault:
        rep.details["injected_fault"] = "A[4][1] flipped to 0"
    return rep


def run_all(names=None, seed=0, inject_fault: bool = False, **opts) -> list[VerdictReport]:
    return [run_suite(n, seed, inject_fault, **opts) for n in (names or SUITES)]
