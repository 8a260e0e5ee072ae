"""The map x -> a*x + 1/x on P^1(Q_p).

Covers evaluation and orbits, the five-way parameter classification, fixed
and period-two points with their multipliers, certified escape tests and
Taylor coefficients of the first two iterates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import InvalidInput, PoleTooClose, PrecisionExhausted, Unsupported
from .padic_core import (
    DEFAULT_PRECISION,
    INF,
    PadicScalar,
    check_prime,
    from_rational,
    is_square,
    is_square_rational,
    parse_rational,
    rational_sqrt,
    sqrt,
    unit_residue,
    valuation,
    vp,
)
from .projective import INFINITY, ProjPoint, point


class Regime(str, enum.Enum):
    GOOD_REDUCTION = "GoodReduction"
    ESCAPE_ALL = "EscapeAll"
    FULL_SHIFT_TWO = "FullShiftTwo"
    MINIMAL_OFF_ORIGIN = "MinimalOffOrigin"
    CHAOTIC_SFT = "ChaoticSFT"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class MapParams:
    """Parameters of phi(x) = a*x + 1/x; ``precision`` is the digit budget
    used whenever an irrational quantity (a square root) is needed."""

    p: int
    a: Fraction
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        check_prime(self.p)
        a = parse_rational(self.a)
        if a == 0:
            raise InvalidInput("a must be nonzero")
        if self.precision < 1:
            raise InvalidInput("precision must be at least 1")
        object.__setattr__(self, "a", a)

    @property
    def v(self) -> int:
        """Valuation of ``a``."""
        return vp(self.a, self.p)

    @property
    def half_v(self) -> int:
        """floor(v_p(a) / 2)."""
        return self.v // 2

    def a_padic(self, n: int | None = None) -> PadicScalar:
        return from_rational(self.a, self.p, n or self.precision)

    @cached_property
    def regime(self) -> Regime:
        return classify(self)


# -- evaluation -------------------------------------------------------------


def _phi(a: Fraction, x):
    return a * x + 1 / x


def apply(params: MapParams, x) -> ProjPoint:
    """phi(x); phi(0) = phi(inf) = inf."""
    x = point(x)
    if x.is_infinity or x.value == 0:
        return INFINITY
    return ProjPoint(_phi(params.a, x.value))


def orbit(params: MapParams, x, n: int) -> list[ProjPoint]:
    """``[x, phi(x), ..., phi^n(x)]``."""
    if n < 0:
        raise InvalidInput("n must be nonnegative")
    out = [point(x)]
    for step in range(1, n + 1):
        try:
            out.append(apply(params, out[-1]))
        except PrecisionExhausted as exc:
            exc.step = step
            raise
    return out


def iterate(params: MapParams, x, n: int) -> ProjPoint:
    x = point(x)
    for step in range(1, n + 1):
        try:
            x = apply(params, x)
        except PrecisionExhausted as exc:
            exc.step = step
            raise
    return x


def derivative(params: MapParams, x):
    """phi'(x) = a - 1/x**2 at a finite nonzero x."""
    return params.a - 1 / (x * x)


# -- classification ---------------------------------------------------------


def classify(params: MapParams) -> Regime:
    """Regime from the valuation of a and the square classes of 1-a or -a.

    Works on the exact rational ``a`` only.
    """
    v = params.v
    if v == 0:
        return Regime.GOOD_REDUCTION
    if v < 0:
        if is_square_rational(1 - params.a, params.p):
            return Regime.FULL_SHIFT_TWO
        return Regime.ESCAPE_ALL
    if is_square_rational(-params.a, params.p):
        return Regime.CHAOTIC_SFT
    return Regime.MINIMAL_OFF_ORIGIN


def classify_reasons(params: MapParams) -> dict:
    p, v = params.p, params.v
    out = {"p": p, "a": str(params.a), "valuation_a": v}
    if v == 0:
        out["abs_a"] = "1"
    else:
        tested = 1 - params.a if v < 0 else -params.a
        tv = vp(tested, p)
        residue = unit_residue(tested, p, 1)
        out.update({
            "abs_a": ">1" if v < 0 else "<1",
            "tested": "1-a" if v < 0 else "-a",
            "tested_value": str(tested),
            "tested_valuation": tv,
            "valuation_parity": "even" if tv % 2 == 0 else "odd",
            "unit_residue_mod_p": residue,
            "residue_is_qr": pow(residue, (p - 1) // 2, p) == 1,
        })
        out["square"] = out["valuation_parity"] == "even" and out["residue_is_qr"]
    out["regime"] = str(classify(params))
    return out


# -- fixed and periodic points ----------------------------------------------


@dataclass(frozen=True)
class FixedPointInfo:
    point: ProjPoint
    multiplier: Fraction
    kind: str
    multiplier_computed: Fraction | PadicScalar | None = None

    def to_json(self, p: int) -> dict:
        return {"point": self.point.to_json(p), "multiplier": str(self.multiplier),
                "multiplier_valuation": "inf" if self.multiplier == 0 else vp(self.multiplier, p),
                "class": self.kind}


def classify_multiplier(m: Fraction, p: int) -> str:
    if m == 0:
        return "superattracting"
    v = vp(m, p)
    if v > 0:
        return "attracting"
    if v == 0:
        return "indifferent"
    return "repelling"


def qp_sqrt(q: Fraction, p: int, n: int):
    """A square root of the rational q in Q_p: exact when rational, else Hensel."""
    r = rational_sqrt(q)
    if r is not None:
        return r
    return sqrt(from_rational(q, p, n))


def _agree(x, y) -> bool:
    """x == y exactly (rationals) or at every certified digit (p-adic)."""
    if isinstance(x, PadicScalar) or isinstance(y, PadicScalar):
        try:
            return (x - y).is_zero()
        except PrecisionExhausted:
            return True
    return x == y


def finite_fixed_points(params: MapParams) -> list:
    """The finite fixed points +-1/sqrt(1-a) when they exist in Q_p."""
    q = 1 - params.a
    if q == 0 or not is_square_rational(q, params.p):
        return []
    s = qp_sqrt(q, params.p, params.precision)
    x1 = 1 / s
    return [x1, -x1]


def fixed_points(params: MapParams) -> list[FixedPointInfo]:
    """Infinity (multiplier 1/a) and, when 1-a is a square, +-1/sqrt(1-a).

    The finite multipliers are computed as phi'(x0) and checked against the
    closed form 2a - 1.
    """
    a = params.a
    infos = [FixedPointInfo(INFINITY, 1 / a, classify_multiplier(1 / a, params.p), 1 / a)]
    expected = 2 * a - 1
    for x0 in finite_fixed_points(params):
        m = derivative(params, x0)
        if not _agree(m, expected):
            raise ArithmeticError(f"multiplier check failed at {x0!r}: {m!r} != {expected}")
        infos.append(FixedPointInfo(ProjPoint(x0), expected,
                                    classify_multiplier(expected, params.p), m))
    return infos


def period_two_points(params: MapParams) -> list:
    """Points of exact period two, +-1/sqrt(-(a+1)), when they lie in Q_p.

    phi(x) = -x on them, so each is swapped with its negative.
    """
    q = -(params.a + 1)
    if q == 0 or not is_square_rational(q, params.p):
        return []
    s = qp_sqrt(q, params.p, params.precision)
    x1 = 1 / s
    return [x1, -x1]


def preimages(params: MapParams, y) -> list[ProjPoint]:
    """All Q_p-rational solutions of phi(x) = y, i.e. of a*x^2 - y*x + 1 = 0."""
    y = point(y)
    if y.is_infinity:
        return [ProjPoint(Fraction(0)), INFINITY]
    a, yv = params.a, y.value
    disc = yv * yv - 4 * a
    if disc == 0:
        return [ProjPoint(yv / (2 * a))]
    if isinstance(disc, PadicScalar):
        if not is_square(disc):
            return []
        s = sqrt(disc)
    else:
        if not is_square_rational(disc, params.p):
            return []
        s = qp_sqrt(disc, params.p, params.precision)
    half = 1 / (2 * a)
    if not isinstance(s, PadicScalar) and not isinstance(yv, PadicScalar):
        return [ProjPoint((yv + s) * half), ProjPoint((yv - s) * half)]
    # y +- s may cancel; the roots multiply to 1/a, so the stable one gives the other
    sums = []
    for t in (s, -s):
        try:
            sums.append(yv + t)
        except PrecisionExhausted:
            sums.append(None)
    u, w = sums
    if u is not None and w is not None and u.precision == w.precision:
        return [ProjPoint(u * half), ProjPoint(w * half)]
    if u is None or (w is not None and w.precision > u.precision):
        r2 = w * half
        return [ProjPoint(1 / (a * r2)), ProjPoint(r2)]
    r1 = u * half
    return [ProjPoint(r1), ProjPoint(1 / (a * r1))]


# -- escape certificates ----------------------------------------------------


@dataclass(frozen=True)
class EscapeVerdict:
    kind: str  # "EscapesToInfinity" | "InCoreRegion" | "Undecided"
    step: int | None
    descriptor: dict = field(default_factory=dict)

    @property
    def escapes(self) -> bool:
        return self.kind == "EscapesToInfinity"

    def to_json(self) -> dict:
        return {"verdict": self.kind, "step": self.step, "descriptor": self.descriptor}


def _escapes(step, reason):
    return EscapeVerdict("EscapesToInfinity", step, {"reason": reason})


def escape_test(params: MapParams, x, max_steps: int = 64) -> EscapeVerdict:
    """Follow the orbit until a proven criterion decides its fate.

    * EscapeAll / FullShiftTwo: escape is certified once |phi^t(x)| >= 1,
      after which |phi| = |a| |x| grows monotonically.
    * MinimalOffOrigin: the landing step and sphere index once the orbit
      enters the core spheres |x| in [p^-h, p^h], h = floor(v_p(a)/2).
    * FullShiftTwo / ChaoticSFT: residence in the coding region for the whole
      horizon is reported as ``InCoreRegion``.
    * ChaoticSFT: only landing exactly on infinity certifies escape; an orbit
      leaving the coding region is ``Undecided``.
    """
    if max_steps < 1:
        raise InvalidInput("max_steps must be positive")
    from . import symbolic

    regime = classify(params)
    h = params.half_v
    cur = point(x)
    in_omega = None
    if regime is Regime.FULL_SHIFT_TWO:
        d1, d2 = symbolic.shift_disks(params)

        def in_omega(P):
            return d1.contains(P) or d2.contains(P)
    elif regime is Regime.CHAOTIC_SFT:
        regions = symbolic.sft_regions(params)

        def in_omega(P):
            return symbolic.region_index(regions, P, params) is not None

    for t in range(max_steps + 1):
        if cur.is_infinity:
            return _escapes(t, "orbit reached infinity")
        val = valuation(cur.value, params.p)
        try:
            if regime in (Regime.ESCAPE_ALL, Regime.FULL_SHIFT_TWO) and val <= 0:
                return _escapes(t, "|x| >= 1 and |a| > 1: |phi(x)| = |a||x|")
            if regime is Regime.MINIMAL_OFF_ORIGIN and val != INF and -h <= val <= h:
                return EscapeVerdict("InCoreRegion", t,
                                     {"sphere_index": abs(val), "landing_step": t,
                                      "valuation": val})
            if regime is Regime.CHAOTIC_SFT and not in_omega(cur):
                return EscapeVerdict("Undecided", t,
                                     {"reason": "left the coding region without an escape certificate"})
        except PrecisionExhausted:
            return EscapeVerdict("Undecided", t, {"reason": "precision exhausted"})
        if t == max_steps:
            break
        try:
            cur = apply(params, cur)
        except PrecisionExhausted:
            return EscapeVerdict("Undecided", t + 1, {"reason": "precision exhausted"})

    if regime is Regime.GOOD_REDUCTION:
        return EscapeVerdict("InCoreRegion", max_steps, {"reason": "good reduction"})
    if regime in (Regime.FULL_SHIFT_TWO, Regime.CHAOTIC_SFT):
        try:
            # residence in the coding region at every step up to the horizon
            path = orbit(params, x, max_steps)
            if all(in_omega(P) for P in path):
                return EscapeVerdict("InCoreRegion", max_steps,
                                     {"reason": "stayed in the coding region", "depth": max_steps})
        except PrecisionExhausted:
            return EscapeVerdict("Undecided", max_steps, {"reason": "precision exhausted"})
    return EscapeVerdict("Undecided", max_steps, {"reason": "horizon reached"})


def landing_bound(params: MapParams, x) -> int:
    """Upper bound on the number of steps before a nonzero x reaches the core
    spheres (MinimalOffOrigin)."""
    h, v = params.half_v, params.v
    w = valuation(point(x).value, params.p)
    steps = 0
    if w > h:
        # |phi(x)| = 1/|x| below the core
        w, steps = -w, 1
    if w < -h:
        steps += -(-(-h - w) // v)
    return steps


# -- Taylor coefficients ----------------------------------------------------


def _series_mul(f, g, order):
    out = [0] * (order + 1)
    for i, fi in enumerate(f[: order + 1]):
        if fi == 0:
            continue
        for j, gj in enumerate(g[: order + 1 - i]):
            out[i + j] = out[i + j] + fi * gj
    return out


def _compose(f, s, order):
    """f(s(t)) for a series s with zero constant term."""
    out = [f[order]] + [0] * order
    for j in range(order - 1, -1, -1):
        out = _series_mul(out, s, order)
        out[0] = out[0] + f[j]
    return out


def phi_series(a: Fraction, c, order: int) -> list:
    """Coefficients of phi(c + t) in powers of t up to t**order."""
    inv = 1 / c
    coeffs = [a * c + inv, a - inv * inv]
    term = -inv * inv
    for _ in range(2, order + 1):
        term = -term * inv
        coeffs.append(term)
    return coeffs[: order + 1]


@dataclass(frozen=True)
class TaylorCoeffs:
    center: Fraction | PadicScalar
    iterate_order: int
    value: Fraction | PadicScalar
    coefficients: tuple  # alpha_1, ..., alpha_I

    def to_json(self, p: int) -> dict:
        def enc(c):
            if isinstance(c, PadicScalar):
                return c.to_json()
            return {"rational": str(c), "valuation": "inf" if c == 0 else vp(c, p)}
        return {"center": enc(self.center), "k": self.iterate_order, "value": enc(self.value),
                "coefficients": [enc(c) for c in self.coefficients]}


def taylor_coeffs(params: MapParams, k: int, x0, I: int = 8,
                  radius_exponent: int | None = None) -> TaylorCoeffs:
    """Expansion of phi^k about x0 in powers of the displacement ``x - x0``.

    ``radius_exponent`` (default: that of |x0|/p) is the disk on which the
    expansion must converge; a pole of phi^k in that closed disk over C_p
    raises :class:`PoleTooClose`.
    """
    if k not in (1, 2):
        raise InvalidInput("only k = 1 and k = 2 are supported")
    if I < 1:
        raise InvalidInput("need at least one coefficient")
    x0 = point(x0).value
    if x0 is None or x0 == 0:
        raise PoleTooClose("phi has a pole at the expansion point")
    p, a = params.p, params.a
    vx = valuation(x0, p)
    r = -vx - 1 if radius_exponent is None else radius_exponent
    if -vx <= r:
        raise PoleTooClose("0 lies in the expansion disk")
    s1 = phi_series(a, x0, I)
    if k == 1:
        return TaylorCoeffs(x0, 1, s1[0], tuple(s1[1:]))
    y0 = s1[0]
    # zeros +-z of phi satisfy |x0 - z||x0 + z| = |x0 phi(x0)| / |a|, so one
    # lies in B(x0, p^r) iff |phi(x0)| <= p^r |a|
    if y0 == 0 or valuation(y0, p) >= params.v - r:
        raise PoleTooClose("a zero of phi lies in the expansion disk")
    f = phi_series(a, y0, I)
    s = [0] + list(s1[1:])
    composed = _compose(f, s, I)
    return TaylorCoeffs(x0, 2, composed[0], tuple(composed[1:]))


# -- general family ax + b/x -----------------------------------------------


@dataclass(frozen=True)
class NormalizedMap:
    """ax + b/x rewritten as ax + 1/x via x -> conjugacy_scalar * x."""

    params: MapParams
    b: Fraction
    conjugacy_scalar: Fraction | PadicScalar

    def conjugate(self, x) -> ProjPoint:
        x = point(x)
        if x.is_infinity:
            return x
        return ProjPoint(self.conjugacy_scalar * x.value)

    def to_json(self) -> dict:
        c = self.conjugacy_scalar
        return {"p": self.params.p, "a": str(self.params.a), "b": str(self.b),
                "conjugacy_scalar": c.to_json() if isinstance(c, PadicScalar) else {"rational": str(c)}}


def normalize_general(a, b, p: int, precision: int = DEFAULT_PRECISION) -> NormalizedMap:
    """Conjugate ax + b/x to ax + 1/x when sqrt(b) exists in Q_p.

    Raises :class:`Unsupported` otherwise.
    """
    check_prime(p)
    b = parse_rational(b)
    if b == 0:
        raise InvalidInput("b must be nonzero")
    params = MapParams(p, parse_rational(a), precision)
    if not is_square_rational(b, p):
        raise Unsupported(f"sqrt({b}) is not in Q_{p}")
    s = qp_sqrt(b, p, precision)
    return NormalizedMap(params, b, 1 / s)
