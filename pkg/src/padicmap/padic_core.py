"""Exact p-adic scalars with relative precision tracking.

Two representations live side by side:

* exact rationals (:class:`fractions.Fraction`), used wherever orbits are
  short enough for the growth of numerators and denominators to be harmless;
* :class:`PadicScalar`, an element ``p**v * u`` of Q_p where the unit ``u`` is
  known modulo ``p**precision``.

Absolute values are never materialized as floats; everything is phrased in
terms of integer valuations.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import InvalidInput, InvalidPrime, NotASquare, PrecisionExhausted

INF = math.inf
DEFAULT_PRECISION = 64


@lru_cache(maxsize=None)
def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not _is_odd_prime(p):
        raise InvalidPrime(p)
    return p


@lru_cache(maxsize=4096)
def _ppow(p: int, n: int) -> int:
    return p**n


def parse_rational(s) -> Fraction:
    """Parse ``"num/den"``, ``"num"``, an int or a Fraction."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, Rational):
        return Fraction(s)
    if isinstance(s, str):
        text = s.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                den_i = int(den)
                if den_i == 0:
                    raise InvalidInput(f"zero denominator in {s!r}")
                return Fraction(int(num), den_i)
            return Fraction(int(text))
        except ValueError as exc:
            raise InvalidInput(f"not a rational number: {s!r}") from exc
    raise InvalidInput(f"not a rational number: {s!r}")


def _int_val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(q, p: int):
    """p-adic valuation of a rational; ``INF`` for zero."""
    check_prime(p)
    q = parse_rational(q)
    if q == 0:
        return INF
    return _int_val(q.numerator, p) - _int_val(q.denominator, p)


def unit_part(q: Fraction, p: int) -> tuple[int, Fraction]:
    """Split nonzero ``q`` as ``p**v * u`` with ``u`` a p-adic unit."""
    v = vp(q, p)
    if v == INF:
        raise InvalidInput("zero has no unit part")
    return v, q / Fraction(p) ** v


def unit_residue(q: Fraction, p: int, k: int = 1) -> int:
    """Unit part of ``q`` reduced modulo ``p**k``."""
    _, u = unit_part(q, p)
    mod = _ppow(p, k)
    return u.numerator * pow(u.denominator, -1, mod) % mod


def is_qr(r: int, p: int) -> bool:
    """Euler's criterion for a residue prime to p."""
    r %= p
    return r != 0 and pow(r, (p - 1) // 2, p) == 1


def is_square_rational(q, p: int) -> bool:
    """Whether the nonzero rational ``q`` is a square in Q_p."""
    q = parse_rational(q)
    if q == 0:
        raise InvalidInput("zero is excluded from the square test")
    v, _ = unit_part(q, p)
    return v % 2 == 0 and is_qr(unit_residue(q, p, 1), p)


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Positive square root of ``q`` in Q, or ``None``."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_mod_p(u: int, p: int) -> int:
    """Square root of a quadratic residue modulo p, chosen in [1, (p-1)/2]."""
    u %= p
    if not is_qr(u, p):
        raise NotASquare(f"{u} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        r = pow(u, (p + 1) // 4, p)
    else:
        # Tonelli-Shanks
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while is_qr(z, p):
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(u, q, p), pow(u, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


class PadicScalar:
    """An element ``p**valuation * unit`` of Q_p, unit known mod ``p**precision``.

    Zero is a distinct exact value with ``valuation == INF``, ``unit == 0``
    and ``precision == 0``. Instances are immutable.
    """

    __slots__ = ("p", "valuation", "unit", "precision")

    def __init__(self, p: int, valuation, unit: int, precision: int):
        check_prime(p)
        if valuation == INF:
            if unit != 0:
                raise InvalidInput("zero must have unit 0")
            precision = 0
        else:
            if precision < 1:
                raise InvalidInput("precision must be at least 1")
            unit %= _ppow(p, precision)
            if unit % p == 0:
                raise InvalidInput("unit part must be prime to p")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, name, value):
        raise AttributeError("PadicScalar is immutable")

    @classmethod
    def zero(cls, p: int) -> PadicScalar:
        return cls(p, INF, 0, 0)

    @classmethod
    def _raw(cls, p, valuation, unit, precision):
        # trusted constructor for results of internal arithmetic
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "valuation", valuation)
        object.__setattr__(obj, "unit", unit)
        object.__setattr__(obj, "precision", precision)
        return obj

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.valuation == INF

    @property
    def abs_precision(self):
        """Exponent ``k`` such that the value is known modulo ``p**k``."""
        return INF if self.is_zero() else self.valuation + self.precision

    @property
    def digits(self) -> tuple[int, ...]:
        out = []
        u = self.unit
        for _ in range(self.precision):
            u, r = divmod(u, self.p)
            out.append(r)
        return tuple(out)

    def leading_digit(self) -> int:
        return self.unit % self.p

    def residue(self, k: int) -> int:
        """Value modulo ``p**k`` for an integral scalar."""
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise InvalidInput("residue of a non-integral scalar")
        if self.valuation >= k:
            return 0
        if self.abs_precision < k:
            raise PrecisionExhausted(
                f"need {k} absolute digits, have {self.abs_precision}",
                lower_bound=self.abs_precision,
            )
        return _ppow(self.p, self.valuation) * self.unit % _ppow(self.p, k)

    def with_precision(self, n: int) -> PadicScalar:
        if self.is_zero():
            return self
        if n > self.precision:
            raise PrecisionExhausted("cannot raise precision of an inexact scalar")
        return PadicScalar._raw(self.p, self.valuation, self.unit % _ppow(self.p, n), n)

    def to_fraction_approx(self) -> Fraction:
        """The truncated expansion as a rational number."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.p) ** self.valuation * self.unit

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> PadicScalar:
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise InvalidInput("mixed primes")
            return other
        if isinstance(other, Rational):
            q = Fraction(other)
            if q == 0:
                return PadicScalar.zero(self.p)
            if self.is_zero():
                return from_rational(q, self.p, DEFAULT_PRECISION)
            if abs(q.numerator) < 1 << 64 and q.denominator < 1 << 64:
                # map constants recur on every step; expand them once
                return _coerce_small(q, self.p, self.valuation, self.precision)
            v = vp(q, self.p)
            n = max(self.precision, self.valuation + self.precision - v, 1)
            return from_rational(q, self.p, n)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicScalar._raw(self.p, self.valuation, (-self.unit) % _ppow(self.p, self.precision),
                                self.precision)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        p = self.p
        vx, vy = self.valuation, other.valuation
        vmin = min(vx, vy)
        absprec = min(vx + self.precision, vy + other.precision)
        width = absprec - vmin
        mod = _ppow(p, width)
        s = (self.unit * _ppow(p, vx - vmin) + other.unit * _ppow(p, vy - vmin)) % mod
        if s == 0:
            # agreement at every certified digit says nothing about the rest
            raise PrecisionExhausted("cancellation consumed every certified digit",
                                     lower_bound=absprec)
        shift = 0
        while s % p == 0:
            s //= p
            shift += 1
        return PadicScalar._raw(p, vmin + shift, s, width - shift)

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            return PadicScalar.zero(self.p)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return PadicScalar.zero(self.p)
        n = min(self.precision, other.precision)
        return PadicScalar._raw(self.p, self.valuation + other.valuation,
                                self.unit * other.unit % _ppow(self.p, n), n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by p-adic zero")
        if self.is_zero():
            return self
        n = min(self.precision, other.precision)
        mod = _ppow(self.p, n)
        return PadicScalar._raw(self.p, self.valuation - other.valuation,
                                self.unit * pow(other.unit, -1, mod) % mod, n)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return PadicScalar._one_like(self) / (self ** (-k))
        if self.is_zero():
            return self if k else PadicScalar._one_like(self)
        mod = _ppow(self.p, self.precision)
        return PadicScalar._raw(self.p, self.valuation * k, pow(self.unit, k, mod), self.precision)

    @staticmethod
    def _one_like(x):
        return PadicScalar._raw(x.p, 0, 1, max(x.precision, 1))

    # -- comparisons and hashing -----------------------------------------

    def _key(self):
        return (self.p, self.valuation, self.unit, self.precision)

    def __eq__(self, other):
        if isinstance(other, PadicScalar):
            return self._key() == other._key()
        if isinstance(other, Rational) and other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.is_zero():
            return f"PadicScalar(0, p={self.p})"
        return (f"PadicScalar(p={self.p}, valuation={self.valuation}, "
                f"digits={self.digits[:8]}{'...' if self.precision > 8 else ''}, "
                f"precision={self.precision})")

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        if self.is_zero():
            return {"p": self.p, "valuation": "inf", "digits": [], "precision": 0}
        return {"p": self.p, "valuation": self.valuation, "digits": list(self.digits),
                "precision": self.precision}

    @classmethod
    def from_json(cls, obj: dict) -> PadicScalar:
        p = check_prime(int(obj["p"]))
        if obj["valuation"] == "inf":
            return cls.zero(p)
        digits = [int(d) for d in obj["digits"]]
        if any(d < 0 or d >= p for d in digits):
            raise InvalidInput("digit out of range")
        precision = int(obj.get("precision", len(digits)))
        if precision != len(digits):
            raise InvalidInput("precision does not match digit count")
        unit = sum(d * p**i for i, d in enumerate(digits))
        return cls(p, int(obj["valuation"]), unit, precision)


def from_rational(q, p: int, N: int = DEFAULT_PRECISION) -> PadicScalar:
    """Expand a rational in base p, keeping ``N`` digits of its unit part."""
    check_prime(p)
    if N < 1:
        raise InvalidInput("precision must be at least 1")
    q = parse_rational(q)
    if q == 0:
        return PadicScalar.zero(p)
    v, _ = unit_part(q, p)
    return PadicScalar._raw(p, v, unit_residue(q, p, N), N)


@lru_cache(maxsize=8192)
def _coerce_small(q: Fraction, p: int, valuation: int, precision: int) -> PadicScalar:
    n = max(precision, valuation + precision - vp(q, p), 1)
    return from_rational(q, p, n)


def to_padic(x, p: int, N: int = DEFAULT_PRECISION) -> PadicScalar:
    if isinstance(x, PadicScalar):
        return x
    return from_rational(x, p, N)


def valuation(x, p: int):
    """Valuation of a Fraction/int or PadicScalar."""
    if isinstance(x, PadicScalar):
        return x.valuation
    return vp(x, p)


def diff_valuation(x, y, p: int):
    """Certified valuation of ``x - y``.

    Raises :class:`PrecisionExhausted` (carrying ``lower_bound``) when the
    digits cancel completely.
    """
    if isinstance(x, PadicScalar) or isinstance(y, PadicScalar):
        if not isinstance(x, PadicScalar):
            x, y = y, x
        return (x - y).valuation
    return vp(Fraction(x) - Fraction(y), p)


def is_square(x: PadicScalar) -> bool:
    """Square test: even valuation and quadratic-residue leading digit."""
    if isinstance(x, Rational):
        raise InvalidInput("use is_square_rational for exact rationals")
    if x.is_zero():
        raise InvalidInput("zero is excluded from the square test")
    return x.valuation % 2 == 0 and is_qr(x.leading_digit(), x.p)


def sqrt(x: PadicScalar) -> PadicScalar:
    """Hensel square root; the branch with leading digit in [1, (p-1)/2]."""
    if not is_square(x):
        raise NotASquare(f"{x!r} is not a square in Q_{x.p}")
    p, n = x.p, x.precision
    r = sqrt_mod_p(x.unit, p)
    k = 1
    while k < n:
        k = min(2 * k, n)
        mod = _ppow(p, k)
        r = (r - (r * r - x.unit) * pow(2 * r, -1, mod)) % mod
    return PadicScalar._raw(p, x.valuation // 2, r, n)
