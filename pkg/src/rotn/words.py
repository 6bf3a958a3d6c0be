"""Sign words as hash-consed DAGs with O(1) composition of prefix stats.

A sign word is a finite sequence over {+1, -1}.  The substitution rules
of the renormalization tower build words whose expanded length grows
geometrically with the level, so words are kept as DAGs: atoms, binary
concatenations, and powers, with shared subterms.  Every node carries
four numbers that compose without expansion:

    length      number of letters
    total       sum of all letters
    max_prefix  max over NONEMPTY prefixes of the prefix sum
    min_prefix  min over nonempty prefixes

The composition laws are the usual monoid of (sum, running-extrema)
summaries:

    concat(A, B):  total = tA + tB
                   max_prefix = max(maxA, tA + maxB)
    power(A, n):   total = n * tA
                   max_prefix = maxA + max(0, (n - 1) * tA)

(min is the mirror image).  Nodes are interned, so structurally equal
words are the same object and the memoized stats are shared.  All
counters are Python ints: a depth-40 tower has word lengths around
10^28 and that must not overflow.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

__all__ = [
    "SignWord",
    "atom",
    "empty",
    "concat",
    "concat_all",
    "power",
    "expand",
    "prefix_sum_at",
    "to_sexpr",
    "PLUS",
    "MINUS",
    "EMPTY",
]

_ATOM, _EMPTY, _CONCAT, _POWER = "atom", "empty", "concat", "power"

# the intern table holds strong references, so node uids are stable keys
_interned: dict = {}
_next_uid = 0


class SignWord:
    """One DAG node.  Construct only via atom/empty/concat/power."""

    __slots__ = (
        "kind",
        "sign",
        "left",
        "right",
        "base",
        "exp",
        "length",
        "total",
        "_maxp",
        "_minp",
        "uid",
    )

    def __init__(self, kind, *, sign=0, left=None, right=None, base=None, exp=0):
        global _next_uid
        self.kind = kind
        self.sign = sign
        self.left = left
        self.right = right
        self.base = base
        self.exp = exp
        self.uid = _next_uid
        _next_uid += 1
        if kind == _ATOM:
            self.length = 1
            self.total = sign
            self._maxp = sign
            self._minp = sign
        elif kind == _EMPTY:
            self.length = 0
            self.total = 0
            self._maxp = None
            self._minp = None
        elif kind == _CONCAT:
            self.length = left.length + right.length
            self.total = left.total + right.total
            self._maxp = max(left._maxp, left.total + right._maxp)
            self._minp = min(left._minp, left.total + right._minp)
        elif kind == _POWER:
            self.length = exp * base.length
            self.total = exp * base.total
            tail = (exp - 1) * base.total
            self._maxp = base._maxp + max(0, tail)
            self._minp = base._minp + min(0, tail)
        else:  # pragma: no cover
            raise AssertionError(kind)

    @property
    def max_prefix(self) -> int:
        if self._maxp is None:
            raise ValueError("max_prefix is undefined for the empty word")
        return self._maxp

    @property
    def min_prefix(self) -> int:
        if self._minp is None:
            raise ValueError("min_prefix is undefined for the empty word")
        return self._minp

    def __iter__(self) -> Iterator[int]:
        return iter_letters(self)

    def __repr__(self):
        return "SignWord[%s len=%d total=%d]" % (to_sexpr(self), self.length, self.total)


def _intern(key, make) -> SignWord:
    node = _interned.get(key)
    if node is None:
        node = make()
        _interned[key] = node
    return node


def atom(sign: int) -> SignWord:
    """The one-letter word (+1) or (-1)."""
    if sign not in (1, -1):
        raise ValueError("atom sign must be +1 or -1, got %r" % (sign,))
    return _intern((_ATOM, sign), lambda: SignWord(_ATOM, sign=sign))


def empty() -> SignWord:
    return _intern((_EMPTY,), lambda: SignWord(_EMPTY))


def concat(a: SignWord, b: SignWord) -> SignWord:
    """The word a followed by b."""
    if a.kind == _EMPTY:
        return b
    if b.kind == _EMPTY:
        return a
    return _intern(
        (_CONCAT, a.uid, b.uid), lambda: SignWord(_CONCAT, left=a, right=b)
    )


def concat_all(parts: Iterable[SignWord]) -> SignWord:
    out = empty()
    for part in parts:
        out = concat(out, part)
    return out


def power(base: SignWord, exp: int) -> SignWord:
    """The word repeated exp times, exp >= 1 (use empty() for nothing)."""
    if exp < 1:
        raise ValueError("power exponent must be >= 1, got %r" % (exp,))
    if base.kind == _EMPTY:
        return base
    if exp == 1:
        return base
    if base.kind == _POWER:
        base, exp = base.base, exp * base.exp
    return _intern((_POWER, base.uid, exp), lambda: SignWord(_POWER, base=base, exp=exp))


PLUS = atom(1)
MINUS = atom(-1)
EMPTY = empty()


def intern_size() -> int:
    """Number of live interned nodes (for dedup tests)."""
    return len(_interned)


def prefix_sum_at(w: SignWord, k: int) -> int:
    """Sum of the first k letters, 0 <= k <= length; k = 0 gives 0.

    Descends the DAG, so the cost is the depth, not k.
    """
    if not (0 <= k <= w.length):
        raise ValueError("prefix length %d outside [0, %d]" % (k, w.length))
    acc = 0
    while k > 0:
        kind = w.kind
        if kind == _ATOM:
            return acc + w.sign
        if kind == _POWER:
            copies, k = divmod(k, w.base.length)
            acc += copies * w.base.total
            if k == 0:
                return acc
            w = w.base
        else:  # concat
            if k <= w.left.length:
                w = w.left
            else:
                acc += w.left.total
                k -= w.left.length
                w = w.right
    return acc


def iter_letters(w: SignWord) -> Iterator[int]:
    """Yield the letters left to right without materializing the word."""
    stack = [(w, 1)]
    while stack:
        node, reps = stack.pop()
        kind = node.kind
        if kind == _ATOM:
            for _ in range(reps):
                yield node.sign
        elif kind == _EMPTY:
            continue
        elif kind == _POWER:
            stack.append((node.base, reps * node.exp))
        else:
            if reps > 1:
                # unroll one level: (AB)^r = AB AB ... AB
                stack.append((node, reps - 1))
            stack.append((node.right, 1))
            stack.append((node.left, 1))


def expand(w: SignWord, cap: int = 10**7) -> list[int]:
    """Materialize the word as a list of +-1, refusing lengths above cap."""
    if w.length > cap:
        raise ValueError(
            "expansion of length %d exceeds cap %d" % (w.length, cap)
        )
    return list(iter_letters(w))


def to_sexpr(w: SignWord) -> str:
    """Debug form: atoms as +/-, powers as (w^n), concats flattened."""
    kind = w.kind
    if kind == _ATOM:
        return "+" if w.sign > 0 else "-"
    if kind == _EMPTY:
        return "()"
    if kind == _POWER:
        return "(%s^%d)" % (to_sexpr(w.base), w.exp)
    parts = []
    stack = [w]
    while stack:
        node = stack.pop()
        if node.kind == _CONCAT:
            stack.append(node.right)
            stack.append(node.left)
        else:
            parts.append(to_sexpr(node))
    return "(" + " ".join(parts) + ")"
