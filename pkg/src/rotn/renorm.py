"""The renormalization tower of return maps and its substitution words.

For an admissible rotation number (continued fraction [0;a1,a2,...] with
a1 odd and >= 5, every later coefficient even and >= 6) there is a
nested sequence of half-open intervals I_1 = [0,1) > I_2 > ... , each
symmetric about 1/2, on which the first-return map of the rotation is
again a rotation: by beta_i = +alpha_i on odd levels and -alpha_i on
even levels in the local coordinate of I_i, where alpha_1 = alpha and
alpha_(i+1) = G(alpha_i)/(1 - G(alpha_i)) (G the Gauss map; on
coefficients, drop the head and decrement the new head).

Each level carries three return words over {+1,-1}: the sign sequences
F_plus, F_minus, F_zero that the orbit of x writes between visits,
depending on which of three subintervals of I_i (in local coordinates)
x falls in.  One renormalization step rewrites them by a substitution
with exponent n = (b-1)/2, b the leading CF coefficient of |beta|:

    beta > 0:  F+' = F+ F-^n F0 F+^n          beta < 0:  F+' = F+^(n+1) F0 F-^n
               F-' = F-^(n+1) F0 F+^n                    F-' = F- F+^n F0 F-^n
               F0' = F+ F-^(n+1) F0 F+^n                 F0' = F- F+^(n+1) F0 F-^n

Totals are always (+1, -1, 0); lengths are the return times.  The word
DAG keeps all of this O(1) per level, so prefix extrema of return words
at level 40 (length ~ 10^28) are a few integer operations.

``oracle_first_return`` is the dual route: simulate the rotation point
by point in exact arithmetic until it re-enters I_i and record what it
did.  It shares no code with the substitution side, which is exactly
why their agreement is evidence.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .exactreal import CFNumber, SurdReal, alpha_next, gauss_step
from .words import SignWord, concat, concat_all, empty, power, prefix_sum_at
from .words import MINUS, PLUS, iter_letters

__all__ = [
    "ExactInterval",
    "RenormLevel",
    "ReturnRecord",
    "BoundsCheck",
    "base_level",
    "step",
    "tower",
    "verify_bounds",
    "verify_chains",
    "oracle_first_return",
    "predicted_return_word",
    "fast_birkhoff",
    "rationals_strictly_between",
]

_HALF = SurdReal(1, 0, 2)
_ZERO = SurdReal(0)
_ONE = SurdReal(1)


@dataclass(frozen=True)
class ExactInterval:
    """Half-open [left, right) with exact endpoints, symmetric about 1/2."""

    left: SurdReal
    right: SurdReal

    def __post_init__(self):
        if not (self.left < self.right):
            raise ValueError("empty interval")
        if self.left + self.right != SurdReal(1):
            raise ValueError(
                "interval [%s, %s) is not symmetric about 1/2"
                % (self.left.exact_str(), self.right.exact_str())
            )

    @property
    def length(self) -> SurdReal:
        return self.right - self.left

    def contains(self, x: SurdReal) -> bool:
        return self.left <= x < self.right

    def to_local(self, x: SurdReal) -> SurdReal:
        """Affine chart sending [left, right) to [0, 1)."""
        return (x - self.left) / self.length

    def from_local(self, y: SurdReal) -> SurdReal:
        return self.left + y * self.length


@dataclass(frozen=True)
class RenormLevel:
    """One floor of the tower.

    beta is the signed rotation number of the first-return map in the
    local chart of ``interval``: positive on odd levels, negative on
    even ones.  beta_cf is the continued fraction of |beta|, and
    n_half = (b - 1)/2 for its leading coefficient b, the exponent the
    next substitution uses.  base_alpha is the rotation being
    renormalized (level 1's beta), kept so the simulation oracle can
    run without extra context.
    """

    index: int
    interval: ExactInterval
    beta: SurdReal
    beta_cf: CFNumber
    n_half: int
    f_plus: SignWord
    f_minus: SignWord
    f_zero: SignWord
    base_alpha: SurdReal

    def __post_init__(self):
        sign = 1 if self.index % 2 == 1 else -1
        if self.beta.sign() != sign:
            raise ValueError(
                "level %d must have beta of sign %+d" % (self.index, sign)
            )
        if not (self.f_plus.total == 1 and self.f_minus.total == -1):
            raise ValueError("return words must have totals +1/-1")
        if self.f_zero.length and self.f_zero.total != 0:
            raise ValueError("F_zero must have total 0")

    @property
    def stats(self) -> dict:
        """The four prefix extrema that verify_bounds checks level to level."""
        return {
            "max_plus": self.f_plus.max_prefix,
            "min_plus": self.f_plus.min_prefix,
            "max_minus": self.f_minus.max_prefix,
            "min_minus": self.f_minus.min_prefix,
        }

    def return_map(self, x: SurdReal) -> SurdReal:
        """The first-return map: rotation by beta in the local chart."""
        if not self.interval.contains(x):
            raise ValueError("%s is not in level %d" % (x.exact_str(), self.index))
        return self.interval.from_local((self.interval.to_local(x) + self.beta).frac())


def _check_admissible(alpha: CFNumber) -> None:
    """The tower hypothesis: a1 odd >= 5, everything after even >= 6."""
    a1 = alpha.coefficient(1)
    if a1 % 2 == 0 or a1 < 5:
        raise ValueError(
            "coefficient a1 = %d of %s must be odd and >= 5" % (a1, alpha)
        )
    # two periods past the preperiod covers every distinct position,
    # including a period head that recycles into position 1's slot
    horizon = len(alpha.preperiod) + 2 * len(alpha.period)
    for i in range(2, horizon + 1):
        c = alpha.coefficient(i)
        if c % 2 == 1 or c < 6:
            raise ValueError(
                "coefficient a%d = %d of %s must be even and >= 6" % (i, c, alpha)
            )


def base_level(alpha: CFNumber) -> RenormLevel:
    """Level 1: the rotation itself on I_1 = [0, 1), one-letter words."""
    _check_admissible(alpha)
    value = alpha.value
    return RenormLevel(
        index=1,
        interval=ExactInterval(_ZERO, _ONE),
        beta=value,
        beta_cf=alpha,
        n_half=(alpha.coefficient(1) - 1) // 2,
        f_plus=PLUS,
        f_minus=MINUS,
        f_zero=empty(),
        base_alpha=value,
    )


def step(level: RenormLevel) -> RenormLevel:
    """One renormalization: I_(i+1) inside I_i and the rewritten words."""
    n = level.n_half
    beta_abs = level.beta if level.beta.sign() > 0 else -level.beta
    g = gauss_step(beta_abs)
    scale = beta_abs * (SurdReal(1) - g)
    new_len = scale * level.interval.length
    half_len = new_len / 2
    interval = ExactInterval(_HALF - half_len, _HALF + half_len)
    if not (new_len <= beta_abs * level.interval.length):
        raise AssertionError("contraction failed at level %d" % (level.index,))

    new_beta_abs = g / (SurdReal(1) - g)
    new_cf = alpha_next(level.beta_cf)
    if new_cf.value != new_beta_abs:
        raise AssertionError(
            "coefficient surgery and Gauss map disagree at level %d" % (level.index,)
        )
    b = new_cf.coefficient(1)
    if b % 2 == 0 or b < 5:
        raise ValueError(
            "next level needs an odd leading coefficient >= 5, got %d" % (b,)
        )

    fp, fm, f0 = level.f_plus, level.f_minus, level.f_zero
    if level.beta.sign() > 0:
        new_plus = concat_all([fp, power(fm, n), f0, power(fp, n)])
        new_minus = concat_all([power(fm, n + 1), f0, power(fp, n)])
        new_zero = concat_all([fp, power(fm, n + 1), f0, power(fp, n)])
        new_beta = -new_beta_abs
    else:
        new_plus = concat_all([power(fp, n + 1), f0, power(fm, n)])
        new_minus = concat_all([fm, power(fp, n), f0, power(fm, n)])
        new_zero = concat_all([fm, power(fp, n + 1), f0, power(fm, n)])
        new_beta = new_beta_abs

    return RenormLevel(
        index=level.index + 1,
        interval=interval,
        beta=new_beta,
        beta_cf=new_cf,
        n_half=(b - 1) // 2,
        f_plus=new_plus,
        f_minus=new_minus,
        f_zero=new_zero,
        base_alpha=level.base_alpha,
    )


_tower_cache: dict[CFNumber, list[RenormLevel]] = {}


def tower(alpha: CFNumber, depth: int) -> list[RenormLevel]:
    """Levels 1..depth.  Levels are deterministic, so they are cached."""
    if depth < 1:
        raise ValueError("depth must be >= 1, got %r" % (depth,))
    levels = _tower_cache.get(alpha)
    if levels is None:
        levels = [base_level(alpha)]
        _tower_cache[alpha] = levels
    while len(levels) < depth:
        levels.append(step(levels[-1]))
    return levels[:depth]


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class BoundsCheck:
    """One verified inequality between word stats."""

    level: int
    name: str
    lhs: int
    rhs: int
    ok: bool


def _ineq(level: int, name: str, lhs: int, relation: str, rhs: int) -> BoundsCheck:
    ok = lhs >= rhs if relation == ">=" else lhs <= rhs
    return BoundsCheck(level, "%s %s %s" % (name, relation, rhs), lhs, rhs, ok)


def verify_bounds(
    parent: RenormLevel, child: RenormLevel, *, strict: bool = True
) -> list[BoundsCheck]:
    """The per-step growth/decay inequalities of the prefix extrema.

    With n = parent.n_half and primes on the child:

        parent beta > 0:   M+' >= M+          m+' <= m- - (n - 2)
                           M-' >= M-          m-' <= m- - n
        parent beta < 0:   M+' >= M+ + n      m+' <= m+
                           M-' >= M+ + n - 2  m-' <= m-
    """
    if child.index != parent.index + 1:
        raise ValueError("levels %d and %d are not consecutive" % (parent.index, child.index))
    n = parent.n_half
    Mp, mp = parent.f_plus.max_prefix, parent.f_plus.min_prefix
    Mm, mm = parent.f_minus.max_prefix, parent.f_minus.min_prefix
    cMp, cmp_ = child.f_plus.max_prefix, child.f_plus.min_prefix
    cMm, cmm = child.f_minus.max_prefix, child.f_minus.min_prefix
    lvl = child.index
    if parent.beta.sign() > 0:
        rows = [
            _ineq(lvl, "max_plus'", cMp, ">=", Mp),
            _ineq(lvl, "min_plus'", cmp_, "<=", mm - (n - 2)),
            _ineq(lvl, "max_minus'", cMm, ">=", Mm),
            _ineq(lvl, "min_minus'", cmm, "<=", mm - n),
        ]
    else:
        rows = [
            _ineq(lvl, "max_plus'", cMp, ">=", Mp + n),
            _ineq(lvl, "min_plus'", cmp_, "<=", mp),
            _ineq(lvl, "max_minus'", cMm, ">=", Mp + (n - 2)),
            _ineq(lvl, "min_minus'", cmm, "<=", mm),
        ]
    bad = [r for r in rows if not r.ok]
    if strict and bad:
        raise AssertionError(
            "bounds violated at level %d: %s"
            % (lvl, "; ".join("%s (lhs=%d)" % (r.name, r.lhs) for r in bad))
        )
    return rows


def verify_chains(levels: list[RenormLevel], *, strict: bool = True) -> list[BoundsCheck]:
    """Cross-level consequences that force divergence of the extrema.

    For every level i with i + 2 in range: min_minus drops by at least
    2 from level i to i + 2.  Across each odd/even pair:
    max_minus(2i+2) >= max_minus(2i+1) >= max_plus(2i) + (n_(2i) - 2).
    """
    rows = []
    for i in range(len(levels) - 2):
        a, c = levels[i], levels[i + 2]
        rows.append(
            _ineq(c.index, "min_minus drop", c.f_minus.min_prefix, "<=",
                  a.f_minus.min_prefix - 2)
        )
    for i in range(1, len(levels) - 2, 2):  # levels[i] has even index 2, 4, ...
        even, odd, nxt = levels[i], levels[i + 1], levels[i + 2]
        rows.append(
            _ineq(odd.index, "max_minus riser", odd.f_minus.max_prefix, ">=",
                  even.f_plus.max_prefix + (even.n_half - 2))
        )
        rows.append(
            _ineq(nxt.index, "max_minus keeps", nxt.f_minus.max_prefix, ">=",
                  odd.f_minus.max_prefix)
        )
        rows.append(
            _ineq(nxt.index, "max_minus two-step", nxt.f_minus.max_prefix, ">=",
                  even.f_plus.max_prefix)
        )
    bad = [r for r in rows if not r.ok]
    if strict and bad:
        raise AssertionError(
            "chain inequalities violated: %s"
            % ("; ".join("level %d %s" % (r.level, r.name) for r in bad))
        )
    return rows


# ---------------------------------------------------------------------------
# the two routes to the first return


@dataclass(frozen=True)
class ReturnRecord:
    """What the simulated orbit did between visits to the interval."""

    start: SurdReal
    time: int
    word: tuple
    landing: SurdReal


def oracle_first_return(level: RenormLevel, x: SurdReal) -> ReturnRecord:
    """Simulate the rotation in exact arithmetic until it re-enters I_i.

    Records the sign word written along the way.  The step budget is
    10 * (len(F_minus) + len(F_zero)); a correct tower returns well
    within it, so exceeding it is a hard error, not a longer wait.
    """
    interval = level.interval
    if not interval.contains(x):
        raise ValueError(
            "oracle start %s is outside level %d" % (x.exact_str(), level.index)
        )
    alpha = level.base_alpha
    budget = 10 * (level.f_minus.length + level.f_zero.length)
    word = []
    y = x
    for _ in range(budget):
        word.append(1 if y < _HALF else -1)
        y = (y + alpha).frac()
        if interval.contains(y):
            return ReturnRecord(start=x, time=len(word), word=tuple(word), landing=y)
    raise RuntimeError(
        "no return to level %d within %d steps from %s"
        % (level.index, budget, x.exact_str())
    )


def predicted_return_word(level: RenormLevel, x: SurdReal) -> SignWord:
    """The return word the substitution rules predict for x in I_i.

    The case is read off the local coordinate y of x:

        beta > 0:  [0, 1/2) -> F+   [1/2, 1-beta) -> F-   [1-beta, 1) -> F- F0
        beta < 0:  [0, |beta|) -> F+ F0   [|beta|, 1/2) -> F+   [1/2, 1) -> F-

    Landing exactly on the interior case boundary (1 - beta or |beta|)
    is refused; those x are measure zero and the caller should perturb.
    """
    interval = level.interval
    if not interval.contains(x):
        raise ValueError(
            "%s is outside level %d" % (x.exact_str(), level.index)
        )
    y = interval.to_local(x)
    if level.beta.sign() > 0:
        split = SurdReal(1) - level.beta
        if y < _HALF:
            return level.f_plus
        if y == split:
            raise ValueError("local coordinate sits exactly on the case boundary")
        if y < split:
            return level.f_minus
        return concat(level.f_minus, level.f_zero)
    gamma = -level.beta
    if y == gamma:
        raise ValueError("local coordinate sits exactly on the case boundary")
    if y < gamma:
        return concat(level.f_plus, level.f_zero)
    if y < _HALF:
        return level.f_plus
    return level.f_minus


def fast_birkhoff(alpha: CFNumber, n: int) -> int:
    """S_n(1/2) in O(tower depth), via prefix sums of the return words.

    1/2 sits at local coordinate 1/2 of every level, so the orbit of
    1/2 writes F_minus of each level as its opening letters; the words
    are nested prefixes of one another and any S_n(1/2) is a prefix sum
    of a deep enough F_minus.
    """
    if n < 0:
        raise ValueError("fast_birkhoff needs n >= 0, got %d" % (n,))
    if n == 0:
        return 0
    levels = _tower_cache.get(alpha)
    if levels is None:
        levels = tower(alpha, 1)
    while levels[-1].f_minus.length < n:
        tower(alpha, len(levels) + 1)
    return prefix_sum_at(levels[-1].f_minus, n)


def rationals_strictly_between(
    lo: SurdReal, hi: SurdReal, count: int, rng: random.Random
) -> list[Fraction]:
    """Random dyadic rationals strictly inside (lo, hi), exactness-checked.

    Proposes uniform floats inside a certified inner window and keeps
    the (exact) dyadic values that pass the exact comparison.  Used to
    sample oracle start points inside case regions with surd endpoints.
    """
    clo, chi = lo.certified(), hi.certified()
    a = clo.value + clo.radius
    b = chi.value - chi.radius
    if not (a < b):
        raise ValueError("window (%r, %r) too narrow to sample" % (a, b))
    out: list[Fraction] = []
    for _ in range(count * 20):
        if len(out) >= count:
            break
        q = Fraction(rng.uniform(a, b))
        if lo < SurdReal.from_fraction(q) < hi:
            out.append(q)
    if len(out) < count:
        raise RuntimeError("sampling (%s, %s) kept failing" % (lo, hi))
    return out
