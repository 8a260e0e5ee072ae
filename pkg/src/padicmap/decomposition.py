"""Finite-level exploration of minimal decompositions.

At level k the projective line splits into p^k + p^(k-1) balls of spherical
radius p^-k: the affine balls ``x = r mod p^k`` (|x| <= 1) and the balls at
infinity ``1/x = p*y mod p^k`` (|x| > 1). A 1-Lipschitz map induces a map on
these balls; its cycles, followed across levels, are the finite shadows of
periodic orbits and minimal components.

The labels produced here are candidates at the deepest explored level. They
are signatures of how cycle lengths grow, not proofs of minimality.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .dynamics import MapParams, Regime, apply, classify, derivative, escape_test, landing_bound
from .errors import InvalidInput, PrecisionExhausted, WellDefinednessViolation, WrongRegime
from .padic_core import INF, PadicScalar, from_rational, unit_residue, valuation
from .projective import INFINITY, ProjPoint, point

SUPPORTED = (Regime.GOOD_REDUCTION, Regime.MINIMAL_OFF_ORIGIN)


@dataclass(frozen=True, order=True)
class BallId:
    level: int
    chart: str  # "A": x = residue mod p^k;  "I": 1/x = p * residue mod p^k
    residue: int

    def parent(self, p: int) -> BallId:
        if self.level < 2:
            raise InvalidInput("level-1 balls have no parent")
        k = self.level - 1
        mod = p**k if self.chart == "A" else p ** (k - 1)
        return BallId(k, self.chart, self.residue % mod)

    def representative(self, p: int) -> ProjPoint:
        if self.chart == "A":
            return ProjPoint(Fraction(self.residue))
        if self.residue == 0:
            return INFINITY
        return ProjPoint(Fraction(1, p * self.residue))

    def sample(self, p: int, rng: random.Random, digits: int = 8) -> ProjPoint:
        """A second interior point, at a random offset from the representative."""
        z = rng.randrange(1, p**digits)
        if self.chart == "A":
            return ProjPoint(Fraction(self.residue + p**self.level * z))
        return ProjPoint(Fraction(1, p * (self.residue + p ** (self.level - 1) * z)))

    def sphere_valuation(self, p: int):
        """Common valuation of the ball's points, or None if it meets several spheres."""
        if self.chart == "A":
            if self.residue == 0:
                return None
            v = _int_val(self.residue, p)
            return v if v < self.level else None
        if self.residue == 0:
            return None
        v = _int_val(self.residue, p)
        return -(1 + v) if v < self.level - 1 else None

    def to_json(self) -> dict:
        return {"level": self.level, "chart": "affine" if self.chart == "A" else "infinity",
                "residue": self.residue}


def _int_val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def reduce_point(x, k: int, p: int) -> BallId:
    """The level-k ball containing x."""
    if k < 1:
        raise InvalidInput("level must be at least 1")
    x = point(x)
    if x.is_infinity:
        return BallId(k, "I", 0)
    val = x.value
    w = valuation(val, p)
    if w >= 0:
        if isinstance(val, PadicScalar):
            return BallId(k, "A", val.residue(k))
        if w >= k:
            return BallId(k, "A", 0)
        mod = p**k
        return BallId(k, "A", val.numerator * pow(val.denominator, -1, mod) % mod)
    # |x| > 1: 1/x = p*y with y integral
    inv = 1 / val
    if isinstance(inv, PadicScalar):
        return BallId(k, "I", (inv.residue(k) // p) if k > 1 else 0)
    mod = p ** (k - 1)
    if -w - 1 >= k - 1:
        return BallId(k, "I", 0)
    y = inv / p
    return BallId(k, "I", y.numerator * pow(y.denominator, -1, mod) % mod)


def all_balls(p: int, k: int) -> list[BallId]:
    return [BallId(k, "A", r) for r in range(p**k)] + [BallId(k, "I", y) for y in range(p ** (k - 1))]


def core_domain(params: MapParams, k: int) -> list[BallId]:
    """Level-k balls contained in the core spheres |x| = p^i, |i| <= floor(v/2)."""
    h = params.half_v
    out = []
    for b in all_balls(params.p, k):
        w = b.sphere_valuation(params.p)
        if w is not None and -h <= w <= h:
            out.append(b)
    return out


# -- level graphs ------------------------------------------------------------


@dataclass
class LevelGraph:
    level: int
    iterate_order: int  # the graph is induced by phi**iterate_order
    mapping: dict

    def __len__(self):
        return len(self.mapping)


def _induced_fn(params: MapParams):
    regime = classify(params)
    if regime not in SUPPORTED:
        raise WrongRegime(SUPPORTED, regime)
    if regime is Regime.GOOD_REDUCTION:
        return 1, lambda x: apply(params, x)
    return 2, lambda x: apply(params, apply(params, x))


def induced_map(params: MapParams, k: int, seed: int = 0) -> LevelGraph:
    """The map induced on level-k balls by phi (good reduction) or by phi^2 on
    the core spheres (MinimalOffOrigin).

    Each ball is probed at its representative and at a second random interior
    point; disagreement raises :class:`WellDefinednessViolation`.
    """
    order, g = _induced_fn(params)
    p = params.p
    domain = all_balls(p, k) if order == 1 else core_domain(params, k)
    domain_set = set(domain)
    rng = random.Random(seed * 1_000_003 + k)
    mapping = {}
    for b in domain:
        x1, x2 = b.representative(p), b.sample(p, rng)
        t1, t2 = reduce_point(g(x1), k, p), reduce_point(g(x2), k, p)
        if t1 != t2:
            raise WellDefinednessViolation(b, {"points": [str(x1.value), str(x2.value)],
                                               "images": [t1, t2]})
        if t1 not in domain_set:
            raise WellDefinednessViolation(b, {"points": [str(x1.value)], "image_outside": t1})
        mapping[b] = t1
    return LevelGraph(k, order, mapping)


@dataclass
class LevelCycles:
    level: int
    cycles: list  # tuples of BallIds, each starting at its least member
    cycle_of: dict  # cyclic ball -> cycle index
    transients: dict  # transient ball -> (distance to cycle, cycle index)


def cycles_at_level(graph: LevelGraph) -> LevelCycles:
    mapping = graph.mapping
    cycles, cycle_of, transients = [], {}, {}

    def settled(n):
        return n in cycle_of or n in transients

    for start in sorted(mapping):
        if settled(start):
            continue
        path, pos, node = [], {}, start
        while not settled(node) and node not in pos:
            pos[node] = len(path)
            path.append(node)
            node = mapping[node]
        if node in pos and not settled(node):
            cyc = path[pos[node]:]
            lead = cyc.index(min(cyc))
            cyc = cyc[lead:] + cyc[:lead]
            idx = len(cycles)
            cycles.append(tuple(cyc))
            for c in cyc:
                cycle_of[c] = idx
            tail = path[: pos[node]]
        else:
            tail = path
        for n in reversed(tail):
            nxt = mapping[n]
            if nxt in cycle_of:
                transients[n] = (1, cycle_of[nxt])
            else:
                d, idx = transients[nxt]
                transients[n] = (d + 1, idx)
    return LevelCycles(graph.level, cycles, cycle_of, transients)


# -- lifting across levels ---------------------------------------------------


@dataclass
class CycleRecord:
    level: int
    index: int
    length: int
    members: tuple
    parent: int | None  # index of the parent cycle one level up, if resolved there


@dataclass
class CycleForest:
    params: MapParams
    iterate_order: int
    levels: dict  # level -> LevelCycles
    graphs: dict  # level -> LevelGraph
    records: dict  # level -> list[CycleRecord]
    divisibility_failures: list = field(default_factory=list)

    def chain(self, level: int, index: int) -> dict:
        """Cycle lengths along the ancestry of one cycle."""
        lengths = {}
        rec = self.records[level][index]
        while True:
            lengths[rec.level] = rec.length
            if rec.parent is None:
                break
            rec = self.records[rec.level - 1][rec.parent]
        return dict(sorted(lengths.items()))


def lift_tree(params: MapParams, k_max: int, seed: int = 0) -> CycleForest:
    if k_max < 2:
        raise InvalidInput("k_max must be at least 2")
    p = params.p
    order, _ = _induced_fn(params)
    graphs, levels, records, failures = {}, {}, {}, []
    for k in range(1, k_max + 1):
        g = induced_map(params, k, seed)
        lc = cycles_at_level(g)
        graphs[k], levels[k] = g, lc
        recs = []
        for idx, cyc in enumerate(lc.cycles):
            parent = None
            if k > 1:
                pb = cyc[0].parent(p)
                prev = levels[k - 1]
                if pb in prev.cycle_of:
                    parent = prev.cycle_of[pb]
                    plen = len(prev.cycles[parent])
                    if len(cyc) % plen:
                        failures.append({"level": k, "cycle": idx, "length": len(cyc),
                                         "parent_length": plen})
                elif pb in prev.transients:
                    failures.append({"level": k, "cycle": idx, "reason": "parent ball is transient"})
            recs.append(CycleRecord(k, idx, len(cyc), cyc, parent))
        records[k] = recs
    return CycleForest(params, order, levels, graphs, records, failures)


def _multiplier_valuation(params: MapParams, order: int, cyc: tuple, n_digits: int = 40):
    """Valuation of (phi^(order*len))' along a representative of the cycle, or None."""
    p, steps = params.p, order * len(cyc)
    if steps > 512:
        return None
    members = [b for b in cyc if b.chart == "A"] or list(cyc)
    rep = members[0].representative(p)
    if rep.is_infinity:
        return -params.v * steps
    x = ProjPoint(from_rational(rep.value, p, n_digits))
    total = 0
    try:
        for _ in range(steps):
            if x.is_infinity or x.value == 0:
                return None
            d = derivative(params, x.value)
            if d == 0:
                return None
            total += d.valuation
            x = apply(params, x)
    except PrecisionExhausted:
        return None
    return total


def label_chain(lengths: dict) -> str:
    ks = sorted(lengths)
    if len(ks) < 2:
        return "Undetermined"
    if lengths[ks[-1]] > lengths[ks[-2]]:
        return "MinimalComponentCandidate"
    return "PeriodicOrbitCandidate"


# -- reports -----------------------------------------------------------------


def default_kmax(p: int) -> int:
    k = 1
    while k < 6 and p ** (k + 1) + p**k <= 1_000_000:
        k += 1
    return k


@dataclass
class DecompositionReport:
    regime: Regime
    p: int
    a: Fraction
    iterate_order: int
    k_max: int
    levels: list
    chains: list
    transients: int
    routing: list
    divisibility_failures: list
    landing_table: list
    notes: list

    @property
    def partition_ok(self) -> bool:
        return all(lv["partition_ok"] for lv in self.levels)

    @property
    def divisibility_ok(self) -> bool:
        return not self.divisibility_failures

    @property
    def landing_ok(self) -> bool:
        return all(row["ok"] for row in self.landing_table)

    def to_json(self) -> dict:
        return {
            "regime": str(self.regime), "p": self.p, "a": str(self.a),
            "map": "phi" if self.iterate_order == 1 else "phi^2 on core spheres",
            "k_max": self.k_max,
            "levels": self.levels,
            "chains": self.chains,
            "transients": self.transients,
            "routing": self.routing,
            "partition_ok": self.partition_ok,
            "divisibility_ok": self.divisibility_ok,
            "divisibility_failures": self.divisibility_failures,
            "landing_table": self.landing_table,
            "landing_ok": self.landing_ok,
            "notes": self.notes,
        }


def landing_table(params: MapParams, samples: int, seed: int = 0, follow: int = 8,
                  precision: int = 64) -> list:
    """For sampled x != 0, the step at which the orbit enters the core spheres,
    checked against the a priori bound, plus the alternation afterwards."""
    p, h = params.p, params.half_v
    rng = random.Random(seed)
    span = 3 * params.v + 6
    rows = []
    for _ in range(samples):
        w = rng.randint(-span, span)
        unit = rng.randrange(1, p) + p * rng.randrange(p ** (precision - 1))
        x = ProjPoint(PadicScalar(p, w, unit, precision))
        verdict = escape_test(params, x, max_steps=4 * span + 4)
        bound = landing_bound(params, x)
        row = {"valuation": w, "bound": bound, "verdict": verdict.kind}
        ok = verdict.kind == "InCoreRegion"
        if ok:
            n, i = verdict.step, verdict.descriptor["sphere_index"]
            row.update({"landing_step": n, "sphere_index": i})
            ok = n <= bound
            cur = x
            for _ in range(n):
                cur = apply(params, cur)
            vals = [valuation(cur.value, p)]
            for _ in range(follow):
                cur = apply(params, cur)
                vals.append(valuation(cur.value, p))
            alternates = all(vals[j + 1] == -vals[j] for j in range(follow)) and abs(vals[0]) <= h
            row["alternates"] = alternates
            ok = ok and alternates
        row["ok"] = ok
        rows.append(row)
    return rows


def decompose_report(params: MapParams, k_max: int | None = None, samples: int = 200,
                     seed: int = 0) -> DecompositionReport:
    regime = classify(params)
    if regime not in SUPPORTED:
        raise WrongRegime(SUPPORTED, regime)
    p = params.p
    k_max = k_max or default_kmax(p)
    forest = lift_tree(params, k_max, seed)
    levels = []
    for k in range(1, k_max + 1):
        lc = forest.levels[k]
        everything = all_balls(p, k)
        cyclic, trans = set(lc.cycle_of), set(lc.transients)
        outside = [b for b in everything if b not in cyclic and b not in trans]
        covered = Counter(list(cyclic) + list(trans) + outside)
        levels.append({
            "level": k,
            "balls_total": len(everything),
            "expected_total": p**k + p ** (k - 1),
            "domain": len(forest.graphs[k]),
            "cyclic": len(cyclic),
            "transient": len(trans),
            "outside_domain": len(outside),
            "cycles": len(lc.cycles),
            "cycle_lengths": {str(n): c for n, c in sorted(Counter(len(c) for c in lc.cycles).items())},
            "partition_ok": (len(everything) == p**k + p ** (k - 1)
                             and all(c == 1 for c in covered.values())
                             and set(covered) == set(everything)
                             and not (cyclic & trans)),
        })
    deepest = forest.levels[k_max]
    chains = []
    for rec in forest.records[k_max]:
        lengths = forest.chain(k_max, rec.index)
        label = label_chain(lengths)
        entry = {"label": label, "lengths_by_level": {str(k): n for k, n in lengths.items()},
                 "sample_ball": rec.members[0].to_json(), "length": rec.length}
        if label == "PeriodicOrbitCandidate":
            entry["multiplier_valuation_estimate"] = _multiplier_valuation(
                params, forest.iterate_order, rec.members)
        chains.append(entry)
    basin = Counter(idx for _, idx in deepest.transients.values())
    routing = [{"label": "BasinCandidate", "chain": idx, "balls": n,
                "max_distance": max(d for d, i in deepest.transients.values() if i == idx)}
               for idx, n in sorted(basin.items())]
    landing = landing_table(params, samples, seed) if regime is Regime.MINIMAL_OFF_ORIGIN else []
    notes = ["labels are candidates at level k_max from cycle-length growth; "
             "exact minimal components are not decided at finite depth"]
    if regime is Regime.MINIMAL_OFF_ORIGIN:
        notes.append("domain: level-k balls inside the spheres |x| = p^i, |i| <= floor(v_p(a)/2); "
                     "other balls are counted as outside_domain")
    return DecompositionReport(regime, p, params.a, forest.iterate_order, k_max, levels, chains,
                               len(deepest.transients), routing, forest.divisibility_failures,
                               landing, notes)
