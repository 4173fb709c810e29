"""
Elements of S_n, B_n and D_n, their descent sets, lengths and the small maps
used by the bijections and involutions.

Positions are 1-based. A `Perm` is stored in one-line notation, a
`SignedPerm` in window notation; D_n membership is the predicate
`SignedPerm.in_D`.

>>> s = SignedPerm.parse("[-2,5,3,1,-4]")
>>> sorted(descent_set_B(s)), sorted(neg_set(s))
([0, 2, 3, 4], [1, 5])
>>> length_B(s), length_D(s)
(13, 11)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "MAX_RANK", "ParseError", "Perm", "SignedPerm", "IndexSet",
    "descent_set", "descent_set_A", "descent_set_B", "descent_set_D",
    "neg_set", "length_A", "length_B", "length_D",
    "star", "star_transpose", "flatten", "abs_last", "abs_all",
    "evens", "odds", "shift", "scale", "star_set",
    "parse_element",
]

MAX_RANK = 12

IndexSet = frozenset  # sets of positions; the ambient interval is implied by use


class ParseError(ValueError):
    """Malformed element literal; `position` is the 0-based column of the problem."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


def _check_rank(n: int) -> None:
    if not 1 <= n <= MAX_RANK:
        raise ValueError(f"rank {n} outside 1..{MAX_RANK}")


@dataclass(frozen=True)
class Perm:
    """A permutation of [n] in one-line notation."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(v) for v in self.entries)
        object.__setattr__(self, "entries", entries)
        _check_rank(len(entries))
        if sorted(entries) != list(range(1, len(entries) + 1)):
            raise ValueError(f"not a permutation of [{len(entries)}]: {entries}")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __call__(self, i: int) -> int:
        return self.entries[i - 1]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def inverse(self) -> Perm:
        inv = [0] * self.n
        for pos, v in enumerate(self.entries, 1):
            inv[v - 1] = pos
        return Perm(tuple(inv))

    def position(self, value: int) -> int:
        """sigma^{-1}(value)."""
        return self.entries.index(value) + 1

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> Perm:
        values = _parse_ints(text, allow_compact=True)
        if any(v <= 0 for v in values):
            raise ParseError("negative entry in an unsigned permutation", text, 0)
        try:
            return cls(tuple(values))
        except ValueError as exc:
            raise ParseError(str(exc), text, 0) from None

    def __str__(self):
        return "[" + ",".join(map(str, self.entries)) + "]"


@dataclass(frozen=True)
class SignedPerm:
    """A signed permutation of [n] in window notation."""

    window: tuple[int, ...]

    def __post_init__(self):
        window = tuple(int(v) for v in self.window)
        object.__setattr__(self, "window", window)
        _check_rank(len(window))
        if sorted(abs(v) for v in window) != list(range(1, len(window) + 1)):
            raise ValueError(f"not a signed permutation of [{len(window)}]: {window}")

    @property
    def n(self) -> int:
        return len(self.window)

    def __call__(self, i: int) -> int:
        # sigma(-i) = -sigma(i); sigma(0) = 0 (type B convention)
        if i == 0:
            return 0
        if i > 0:
            return self.window[i - 1]
        return -self.window[-i - 1]

    def __len__(self):
        return len(self.window)

    def __iter__(self):
        return iter(self.window)

    @property
    def in_D(self) -> bool:
        return sum(1 for v in self.window if v < 0) % 2 == 0

    def position(self, value: int) -> int:
        """Signed sigma^{-1}(value), a member of [+-n]."""
        for pos, v in enumerate(self.window, 1):
            if v == value:
                return pos
            if v == -value:
                return -pos
        raise ValueError(f"{value} not in [+-{self.n}]")

    def inverse(self) -> SignedPerm:
        inv = [0] * self.n
        for pos, v in enumerate(self.window, 1):
            inv[abs(v) - 1] = pos if v > 0 else -pos
        return SignedPerm(tuple(inv))

    @classmethod
    def identity(cls, n: int) -> SignedPerm:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> SignedPerm:
        values = _parse_ints(text, allow_compact=True)
        try:
            return cls(tuple(values))
        except ValueError as exc:
            raise ParseError(str(exc), text, 0) from None

    def __str__(self):
        return "[" + ",".join(map(str, self.window)) + "]"


Element = Union[Perm, SignedPerm]

_INT = re.compile(r"\s*(-?\d+)\s*")


def _parse_ints(text: str, allow_compact: bool) -> list[int]:
    body = text.strip()
    offset = len(text) - len(text.lstrip())
    if body.startswith("["):
        if not body.endswith("]"):
            raise ParseError("missing closing bracket", text, offset + len(body))
        body = body[1:-1]
        offset += 1
    elif allow_compact and body.isdigit():
        if len(body) > 9:
            raise ParseError("compact notation only covers n <= 9", text, offset + 9)
        return [int(c) for c in body]
    if not body.strip():
        raise ParseError("empty element", text, offset)
    values = []
    pos = 0
    for piece in body.split(","):
        m = _INT.fullmatch(piece)
        if m is None:
            raise ParseError("expected an integer", text, offset + pos)
        values.append(int(m.group(1)))
        pos += len(piece) + 1
    return values


def parse_element(text: str, family: str | None = None) -> Element:
    """Parse a literal as a Perm (family A) or SignedPerm (B/D).

    Without a family, literals with a negative entry are signed.
    """
    values = _parse_ints(text, allow_compact=True)
    if family is None:
        family = "B" if any(v < 0 for v in values) else "A"
    if family == "A":
        return Perm.parse(text)
    if family not in ("B", "D"):
        raise ValueError(f"unknown family {family!r}")
    s = SignedPerm.parse(text)
    if family == "D" and not s.in_D:
        raise ValueError(f"{s} has an odd number of negative entries, not in D_{s.n}")
    return s


def descent_set(values: Sequence[int]) -> IndexSet:
    """{i in [n-1] : a_i > a_{i+1}} for any integer sequence."""
    return frozenset(i for i in range(1, len(values)) if values[i - 1] > values[i])


def descent_set_A(p: Perm) -> IndexSet:
    return descent_set(p.entries)


def descent_set_B(s: SignedPerm) -> IndexSet:
    # shift by one so that sigma(0) = 0 sits at index 0
    return frozenset(i - 1 for i in descent_set((0,) + s.window))


def descent_set_D(s: SignedPerm) -> IndexSet:
    if s.n < 2:
        raise ValueError("type D descents need rank >= 2")
    padded = (-s.window[1],) + s.window
    return frozenset(i - 1 for i in descent_set(padded))


def neg_set(s: SignedPerm) -> IndexSet:
    return frozenset(i for i, v in enumerate(s.window, 1) if v < 0)


def _inversions(values: Sequence[int]) -> int:
    n = len(values)
    return sum(1 for i in range(n) for j in range(i + 1, n) if values[i] > values[j])


def length_A(x: Element) -> int:
    return _inversions(tuple(x))


def length_B(s: SignedPerm) -> int:
    return _inversions(s.window) - sum(v for v in s.window if v < 0)


def length_D(s: SignedPerm) -> int:
    if not s.in_D:
        raise ValueError(f"{s} is not in D_{s.n}")
    return length_B(s) - len(neg_set(s))


def star(i: int, n: int) -> int:
    """The partner i* of i in [+-n]: 1<->2, 3<->4, ..., with odd n fixed at +-n."""
    if i == 0 or abs(i) > n:
        raise ValueError(f"{i} not in [+-{n}]")
    sgn = 1 if i > 0 else -1
    if i % 2 == 0:
        return i - sgn
    if abs(i + sgn) <= n:
        return i + sgn
    return i


def star_transpose(i: int, x: Element) -> Element:
    """Left multiplication by (i, i*) (and (-i, -i*) for signed elements)."""
    n = len(x)
    if not 1 <= i <= n - 1:
        raise ValueError(f"index {i} outside [1, {n - 1}]")
    j = star(i, n)
    swap = {i: j, j: i}
    if isinstance(x, Perm):
        return Perm(tuple(swap.get(v, v) for v in x.entries))
    return SignedPerm(tuple(
        (swap.get(abs(v), abs(v))) * (1 if v > 0 else -1) for v in x.window))


def flatten(values: Iterable[int]) -> Perm:
    """The permutation with the same relative order as `values`."""
    values = tuple(values)
    if len(set(values)) != len(values):
        raise ValueError(f"repeated entries in {values}")
    rank = {v: r for r, v in enumerate(sorted(values), 1)}
    return Perm(tuple(rank[v] for v in values))


def abs_last(s: SignedPerm) -> SignedPerm:
    """|s|_n: the window with its last entry made positive."""
    return SignedPerm(s.window[:-1] + (abs(s.window[-1]),))


def abs_all(s: SignedPerm) -> SignedPerm:
    return SignedPerm(tuple(abs(v) for v in s.window))


# operators on index sets

def evens(J: Iterable[int]) -> IndexSet:
    return frozenset(j for j in J if j % 2 == 0)


def odds(J: Iterable[int]) -> IndexSet:
    return frozenset(j for j in J if j % 2 == 1)


def shift(J: Iterable[int], i: int, n: int) -> IndexSet:
    """J + i, intersected with [n]."""
    return frozenset(j + i for j in J if 1 <= j + i <= n)


def scale(J: Iterable[int], factor) -> IndexSet:
    """factor * J; the result must consist of integers (use Fraction(1, 2) to halve)."""
    factor = Fraction(factor)
    out = set()
    for j in J:
        v = factor * j
        if v.denominator != 1:
            raise ValueError(f"{factor} * {j} is not an integer")
        out.add(int(v))
    return frozenset(out)


def star_set(S: Iterable[int], n: int) -> IndexSet:
    return frozenset(star(i, n) for i in S)
