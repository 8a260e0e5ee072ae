"""Points, the spherical metric and closed disks of P^1(Q_p).

Finite points carry either an exact :class:`~fractions.Fraction` or a
:class:`~padicmap.padic_core.PadicScalar`. Distances and radii are reported
as integer exponents ``e`` meaning ``p**e``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import InvalidInput, PrecisionExhausted
from .padic_core import (
    INF,
    PadicScalar,
    check_prime,
    diff_valuation,
    parse_rational,
    valuation,
)

NEG_INF = -INF


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^1(Q_p); ``value is None`` encodes infinity = [1:0]."""

    value: Fraction | PadicScalar | None = None

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    @property
    def is_exact(self) -> bool:
        return not isinstance(self.value, PadicScalar)

    def __repr__(self):
        if self.value is None:
            return "ProjPoint(inf)"
        return f"ProjPoint({self.value!r})"

    def to_json(self, p: int | None = None) -> dict:
        if self.value is None:
            return {"inf": True}
        if isinstance(self.value, PadicScalar):
            return self.value.to_json()
        out = {"rational": str(self.value)}
        if p is not None:
            out["valuation"] = "inf" if self.value == 0 else valuation(self.value, p)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> ProjPoint:
        if obj.get("inf"):
            return INFINITY
        if "rational" in obj:
            return cls(parse_rational(obj["rational"]))
        return cls(PadicScalar.from_json(obj))


INFINITY = ProjPoint(None)


def point(x) -> ProjPoint:
    """Normalize a number, homogeneous pair or string to a :class:`ProjPoint`.

    Strings ``"inf"``/``"oo"`` give infinity; pairs ``(x1, x2)`` are
    homogeneous coordinates.
    """
    if isinstance(x, ProjPoint):
        return x
    if x is None:
        return INFINITY
    if isinstance(x, str) and x.strip().lower() in ("inf", "oo", "infinity", "∞"):
        return INFINITY
    if isinstance(x, tuple):
        x1, x2 = x
        if x2 == 0:
            if x1 == 0:
                raise InvalidInput("[0:0] is not a point")
            return INFINITY
        if isinstance(x1, PadicScalar) or isinstance(x2, PadicScalar):
            return ProjPoint(x1 / x2)
        return ProjPoint(Fraction(x1) / Fraction(x2))
    if isinstance(x, PadicScalar):
        return ProjPoint(x)
    if isinstance(x, (str, Rational)):
        return ProjPoint(parse_rational(x))
    raise InvalidInput(f"cannot interpret {x!r} as a point of P^1")


def spherical_distance(P: ProjPoint, Q: ProjPoint, p: int):
    """Exponent ``e`` with rho(P, Q) = p**e; ``-inf`` when the points coincide."""
    check_prime(p)
    P, Q = point(P), point(Q)
    if P.is_infinity and Q.is_infinity:
        return NEG_INF
    if Q.is_infinity:
        P, Q = Q, P
    if P.is_infinity:
        vz = valuation(Q.value, p)
        return 0 if vz >= 0 else vz
    vd = diff_valuation(P.value, Q.value, p)
    if vd == INF:
        return NEG_INF
    v1, v2 = valuation(P.value, p), valuation(Q.value, p)
    return -vd + min(v1, 0) + min(v2, 0)


def rho(P: ProjPoint, Q: ProjPoint, p: int) -> Fraction:
    """The spherical distance as an exact rational."""
    e = spherical_distance(P, Q, p)
    return Fraction(0) if e == NEG_INF else Fraction(p) ** e


class DiskKind(enum.Enum):
    STANDARD = "standard"
    COMPLEMENT = "complement"


@dataclass(frozen=True)
class PDisk:
    """A closed disk of P^1(Q_p).

    ``STANDARD``: {x in Q_p : |x - center| <= p**radius_exponent}.
    ``COMPLEMENT``: infinity together with {x : |x - center| >= p**radius_exponent},
    the complement of an open disk.
    """

    p: int
    center: ProjPoint
    radius_exponent: int
    kind: DiskKind = DiskKind.STANDARD

    def __post_init__(self):
        check_prime(self.p)
        if self.center.is_infinity:
            raise InvalidInput("disks need a finite center")

    def contains(self, P) -> bool:
        return contains(self, P)

    def to_json(self) -> dict:
        return {"center": self.center.to_json(self.p), "radius_exponent": self.radius_exponent,
                "kind": self.kind.value}

    @classmethod
    def from_json(cls, obj: dict, p: int) -> PDisk:
        return cls(p, ProjPoint.from_json(obj["center"]), int(obj["radius_exponent"]),
                   DiskKind(obj.get("kind", "standard")))


def disk(p: int, center, radius_exponent: int, kind: DiskKind = DiskKind.STANDARD) -> PDisk:
    return PDisk(p, point(center), radius_exponent, kind)


def contains(d: PDisk, P) -> bool:
    """Exact membership; falls back on the cancellation lower bound when needed."""
    P = point(P)
    if P.is_infinity:
        return d.kind is DiskKind.COMPLEMENT
    need = -d.radius_exponent
    try:
        v = diff_valuation(P.value, d.center.value, d.p)
    except PrecisionExhausted as exc:
        # the difference is known to have valuation >= lower_bound
        if exc.lower_bound is not None and exc.lower_bound >= need:
            if d.kind is DiskKind.STANDARD:
                return True
            if exc.lower_bound > need:
                return False
        raise
    if d.kind is DiskKind.STANDARD:
        return v >= need
    return v <= need


def disks_disjoint(d1: PDisk, d2: PDisk) -> bool:
    """Disjointness of two standard disks (ultrametric: disjoint or nested)."""
    if d1.kind is not DiskKind.STANDARD or d2.kind is not DiskKind.STANDARD:
        raise InvalidInput("only standard disks are compared")
    r = max(d1.radius_exponent, d2.radius_exponent)
    try:
        v = diff_valuation(d1.center.value, d2.center.value, d1.p)
    except PrecisionExhausted as exc:
        if exc.lower_bound is not None and exc.lower_bound >= -r:
            return False
        raise
    return v < -r


def sphere_members_sample(i: int, n: int, seed, p: int, digits: int = 24,
                          exact: bool = True, precision: int | None = None) -> list[ProjPoint]:
    """Sample ``n`` points of the sphere S(0, p**i), i.e. valuation ``-i``.

    The unit part is a uniformly random ``digits``-digit prefix with nonzero
    leading digit. With ``exact=False`` the points are PadicScalars of the
    given ``precision`` (default: ``digits``).
    """
    check_prime(p)
    if n < 1:
        raise InvalidInput("need at least one sample")
    rng = random.Random(seed)
    out = []
    bound = p ** (digits - 1)
    for _ in range(n):
        u = rng.randrange(1, p) + p * rng.randrange(bound)
        if exact:
            out.append(ProjPoint(Fraction(p) ** (-i) * u))
        else:
            prec = precision or digits
            out.append(ProjPoint(PadicScalar(p, -i, u, prec)))
    return out
