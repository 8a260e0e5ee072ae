"""Symbolic coding of the two expanding regimes.

FullShiftTwo: the two disks around the repelling fixed points code a full
2-shift; cylinders are built from inverse branches.
ChaoticSFT: four disks code a subshift of finite type with the constant
matrix :func:`transition_matrix4`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .dynamics import MapParams, Regime, apply, classify, finite_fixed_points, preimages, qp_sqrt
from .errors import InvalidInput, NonConvergence, PrecisionExhausted, WrongRegime
from .padic_core import INF, PadicScalar, valuation
from .projective import DiskKind, PDisk, ProjPoint, disk, point


@dataclass(frozen=True)
class Word:
    """A finite word over {1, ..., alphabet_size}."""

    symbols: tuple = ()
    alphabet_size: int = 2

    def __post_init__(self):
        syms = tuple(int(s) for s in self.symbols)
        if any(s < 1 or s > self.alphabet_size for s in syms):
            raise InvalidInput(f"symbols must lie in 1..{self.alphabet_size}: {syms}")
        object.__setattr__(self, "symbols", syms)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def shift(self) -> Word:
        """Drop the first symbol."""
        return Word(self.symbols[1:], self.alphabet_size)

    def to_json(self) -> list:
        return list(self.symbols)


@dataclass(frozen=True)
class Itinerary:
    """Symbols visited before the horizon or before the orbit left the coding
    region; ``escape_step`` is the first step outside it (or None)."""

    word: Word
    escape_step: int | None = None

    @property
    def escaped(self) -> bool:
        return self.escape_step is not None

    def to_json(self) -> dict:
        return {"word": self.word.to_json(), "escape_step": self.escape_step}


@dataclass(frozen=True)
class TransitionMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(e) for e in r) for r in self.rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InvalidInput("transition matrix must be square and nonempty")
        if any(e not in (0, 1) for r in rows for e in r):
            raise InvalidInput("entries must be 0 or 1")
        if any(not any(r) for r in rows):
            raise InvalidInput("every state needs a successor")
        object.__setattr__(self, "rows", rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    def allows(self, s: int, t: int) -> bool:
        """Whether symbol ``s`` may be followed by ``t`` (1-based)."""
        return self.rows[s - 1][t - 1] == 1

    def flipped(self, s: int, t: int) -> TransitionMatrix:
        rows = [list(r) for r in self.rows]
        rows[s - 1][t - 1] ^= 1
        return TransitionMatrix(rows)

    def to_json(self) -> list:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class CylinderDisk:
    word: Word
    disk: PDisk

    def to_json(self) -> dict:
        return {"word": self.word.to_json(), "disk": self.disk.to_json()}


def _require(params: MapParams, regime: Regime):
    got = classify(params)
    if got is not regime:
        raise WrongRegime(regime, got)


# -- full 2-shift -----------------------------------------------------------


def branch_radius_exponent(params: MapParams) -> int:
    return params.v // 2 - 1


def shift_disks(params: MapParams) -> tuple[PDisk, PDisk]:
    """D(x_1, p^(v/2 - 1)) and D(x_2, p^(v/2 - 1)) around the fixed points."""
    _require(params, Regime.FULL_SHIFT_TWO)
    x1, x2 = finite_fixed_points(params)
    m = branch_radius_exponent(params)
    return disk(params.p, x1, m), disk(params.p, x2, m)


def shift_target_disk(params: MapParams) -> PDisk:
    """D(0, p^(-v/2 - 1)), the common image of both branch disks."""
    _require(params, Regime.FULL_SHIFT_TWO)
    return disk(params.p, Fraction(0), -(params.v // 2) - 1)


def _branch_of(disks, P):
    for s, d in enumerate(disks, start=1):
        if d.contains(P):
            return s
    return None


def itinerary2(params: MapParams, x, n: int) -> Itinerary:
    if n < 1:
        raise InvalidInput("n must be positive")
    disks = shift_disks(params)
    P = point(x)
    symbols = []
    for t in range(n):
        try:
            s = None if P.is_infinity else _branch_of(disks, P)
            if s is None:
                return Itinerary(Word(symbols, 2), t)
            symbols.append(s)
            if t + 1 < n:
                P = apply(params, P)
        except PrecisionExhausted as exc:
            exc.step = t
            raise
    return Itinerary(Word(symbols, 2))


def inverse_branch(params: MapParams, y, s: int) -> ProjPoint:
    """The unique x in the branch disk ``s`` with phi(x) = y."""
    if s not in (1, 2):
        raise InvalidInput("branch must be 1 or 2")
    disks = shift_disks(params)
    y = point(y)
    if not shift_target_disk(params).contains(y):
        raise InvalidInput("y must lie in the common image disk")
    for x in preimages(params, y):
        if disks[s - 1].contains(x):
            return x
    raise ArithmeticError("no preimage in the branch disk; inconsistent inputs")


def cylinder_radius_exponent(params: MapParams, n: int) -> int:
    return branch_radius_exponent(params) + (n - 1) * params.v


def cylinder(params: MapParams, w) -> CylinderDisk:
    """The disk of points whose itinerary starts with ``w``.

    Its center is the image of the last fixed point under the inverse branches
    of the earlier symbols, applied right to left.
    """
    w = w if isinstance(w, Word) else Word(tuple(w), 2)
    if len(w) == 0:
        raise InvalidInput("cylinders need a nonempty word")
    disks = shift_disks(params)
    c = disks[w[-1] - 1].center
    for s in reversed(w.symbols[:-1]):
        c = inverse_branch(params, c, s)
    r = cylinder_radius_exponent(params, len(w))
    if isinstance(c.value, PadicScalar) and c.value.abs_precision < -r:
        raise PrecisionExhausted(
            f"cylinder of depth {len(w)} needs about {len(w) * abs(params.v) + 1} digits",
            lower_bound=c.value.abs_precision)
    return CylinderDisk(w, disk(params.p, c, r))


def all_cylinders(params: MapParams, n: int) -> list[CylinderDisk]:
    return [cylinder(params, Word(w, 2)) for w in product((1, 2), repeat=n)]


# -- subshift of finite type -------------------------------------------------


def sft_regions(params: MapParams) -> tuple[PDisk, PDisk, PDisk, PDisk]:
    """D1 = D(z, 1/p), D2 = D(-z, 1/p), D3 = D(0, |a|/p), D4 = P^1 minus D(0, 1/|a|),
    where z = 1/sqrt(-a).

    D4 is stored as the complement of the open disk of radius p/|a|.
    """
    _require(params, Regime.CHAOTIC_SFT)
    p, v = params.p, params.v
    zeta = 1 / qp_sqrt(-params.a, p, params.precision)
    return (disk(p, zeta, -1), disk(p, -zeta, -1), disk(p, Fraction(0), -v - 1),
            PDisk(p, ProjPoint(Fraction(0)), v + 1, DiskKind.COMPLEMENT))


def region_index(regions, P, params: MapParams) -> int | None:
    """Index 1..4 of the region containing P, or None."""
    P = point(P)
    if P.is_infinity:
        return 4
    v = params.v
    w = valuation(P.value, params.p)
    if w == INF or w >= v + 1:
        return 3
    if w <= -(v + 1):
        return 4
    if w == -(v // 2):
        if regions[0].contains(P):
            return 1
        if regions[1].contains(P):
            return 2
    return None


def itinerary4(params: MapParams, x, n: int) -> Itinerary:
    if n < 1:
        raise InvalidInput("n must be positive")
    regions = sft_regions(params)
    P = point(x)
    symbols = []
    for t in range(n):
        try:
            s = region_index(regions, P, params)
            if s is None:
                return Itinerary(Word(symbols, 4), t)
            symbols.append(s)
            if t + 1 < n:
                P = apply(params, P)
        except PrecisionExhausted as exc:
            exc.step = t
            raise
    return Itinerary(Word(symbols, 4))


def transition_matrix4() -> TransitionMatrix:
    return TransitionMatrix(((0, 0, 1, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 0, 1)))


def is_admissible(w, A: TransitionMatrix) -> bool:
    syms = list(w)
    if any(s < 1 or s > A.size for s in syms):
        raise InvalidInput("symbol outside the matrix alphabet")
    return all(A.allows(s, t) for s, t in zip(syms, syms[1:]))


def count_admissible_words(A: TransitionMatrix, L: int) -> list[int]:
    """Exact number of admissible words of each length 1..L."""
    counts = []
    vec = [1] * A.size  # number of admissible words ending at each state
    for n in range(1, L + 1):
        if n > 1:
            vec = [sum(vec[s] * A.rows[s][t] for s in range(A.size)) for t in range(A.size)]
        counts.append(sum(vec))
    return counts


@dataclass(frozen=True)
class EntropyReport:
    lam: float
    log_lambda: float
    word_counts: tuple
    iterations: int

    def to_json(self) -> dict:
        return {"lambda": self.lam, "log_lambda": self.log_lambda,
                "word_counts": list(self.word_counts), "iterations": self.iterations}


def spectral_radius(A: TransitionMatrix, tol: float = 1e-12, max_iter: int = 10_000) -> tuple[float, int]:
    """Perron root by power iteration on A + I.

    The shift makes the iteration aperiodic; the Collatz-Wielandt quotients
    bracket the root, and iteration stops once the bracket is below ``tol``
    relative.
    """
    B = np.asarray(A.rows, dtype=float) + np.eye(A.size)
    x = np.ones(A.size)
    for it in range(1, max_iter + 1):
        y = B @ x
        ratios = y / x
        lo, hi = ratios.min(), ratios.max()
        if hi - lo <= tol * hi:
            return float(0.5 * (lo + hi)) - 1.0, it
        x = y / y.sum()
    raise NonConvergence(f"power iteration did not converge in {max_iter} steps")


def entropy(A: TransitionMatrix, tol: float = 1e-12, max_iter: int = 10_000,
            word_lengths: int = 12) -> EntropyReport:
    lam, it = spectral_radius(A, tol, max_iter)
    return EntropyReport(lam, math.log(lam) if lam > 0 else -math.inf,
                         tuple(count_admissible_words(A, word_lengths)), it)
