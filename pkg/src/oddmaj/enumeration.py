"""
Streams over S_n, B_n, D_n and their filtered subsets, domino permutations
and their bijections, the sign-reversing involutions, and overpartitions.

Streams are lexicographic in one-line/window notation. Lexicographic order on
signed windows is mixed-radix counting: at position k the element picks one
of the 2(n-k+1) still available signed values, smallest first.
"""

from __future__ import annotations

import contextlib
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .perms import (
    Perm, SignedPerm, descent_set, descent_set_A, descent_set_B, length_A,
    length_B, neg_set, star, star_transpose,
)

__all__ = [
    "CEILINGS", "CeilingExceeded", "ceilings_lifted", "GroupSpec", "enumerate_group", "count",
    "chunk_bounds", "rank_A", "unrank_A", "rank_B", "unrank_B",
    "is_domino_A", "is_domino_B", "domino_A", "domino_B",
    "domino_bij_A", "domino_inv_A", "domino_bij_B", "domino_inv_B",
    "iota_A", "phi_B", "psi_B", "tilde_neg", "first_pair_B",
    "check_pairing", "Overpartition", "overpartitions", "overpartition_poly",
]

CEILINGS = {"A": 10, "B": 8, "D": 8}


class CeilingExceeded(ValueError):
    pass


_OVERRIDE = False


@contextlib.contextmanager
def ceilings_lifted():
    """Within this block every GroupSpec behaves as if built with force=True."""
    global _OVERRIDE
    saved, _OVERRIDE = _OVERRIDE, True
    try:
        yield
    finally:
        _OVERRIDE = saved


def _fs(x):
    return None if x is None else frozenset(x)


@dataclass(frozen=True)
class GroupSpec:
    """A group together with optional filters.

    quotient      J: keep sigma with sigma(i) < sigma(i+1) for i in J (type A only)
    neg           keep sigma with Neg(sigma) exactly this set
    neg_parity    keep sigma with neg(sigma) congruent to this mod 2
    neg_odd/even  keep sigma with Neg(sigma)_o (resp. _e) exactly this set
    signs         ((position, +1 or -1), ...) sign of chosen window entries
    magnitudes    ((position, value), ...) |sigma(position)| == value
    domino        True: only domino elements, False: only non-domino ones
    abs_descent_free  "o" (resp. "e"): odes(|sigma|) == 0 (resp. edes)
    """

    family: str
    n: int
    quotient: frozenset = frozenset()
    neg: Optional[frozenset] = None
    neg_parity: Optional[int] = None
    neg_odd: Optional[frozenset] = None
    neg_even: Optional[frozenset] = None
    signs: tuple = ()
    magnitudes: tuple = ()
    domino: Optional[bool] = None
    abs_descent_free: Optional[str] = None
    force: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "quotient", frozenset(self.quotient))
        object.__setattr__(self, "neg", _fs(self.neg))
        object.__setattr__(self, "neg_odd", _fs(self.neg_odd))
        object.__setattr__(self, "neg_even", _fs(self.neg_even))
        object.__setattr__(self, "signs", tuple(sorted(dict(self.signs).items())))
        object.__setattr__(self, "magnitudes", tuple(sorted(dict(self.magnitudes).items())))
        if self.family not in CEILINGS:
            raise ValueError(f"unknown family {self.family!r}")
        n = self.n
        if n < 1:
            raise ValueError(f"rank must be positive, got {n}")
        if n > CEILINGS[self.family] and not (self.force or _OVERRIDE):
            raise CeilingExceeded(
                f"{self.family}_{n} exceeds the ceiling n <= {CEILINGS[self.family]}; "
                "lift it with force=True (--force on the command line)")
        if not self.quotient <= set(range(1, n)):
            raise ValueError(f"quotient {sorted(self.quotient)} not inside [1, {n - 1}]")
        if self.quotient and self.family != "A":
            raise ValueError("parabolic quotients are only supported for type A")
        signed = self.family != "A"
        if not signed and (self.neg is not None or self.neg_parity is not None or self.signs
                           or self.neg_odd is not None or self.neg_even is not None
                           or self.abs_descent_free):
            raise ValueError("sign filters need family B or D")
        for S in (self.neg, self.neg_odd, self.neg_even):
            if S is not None and not S <= set(range(1, n + 1)):
                raise ValueError(f"position set {sorted(S)} not inside [{n}]")
        for pos, sgn in self.signs:
            if not 1 <= pos <= n or sgn not in (1, -1):
                raise ValueError(f"bad sign condition ({pos}, {sgn})")
        for pos, val in self.magnitudes:
            if not 1 <= pos <= n or not 1 <= val <= n:
                raise ValueError(f"bad magnitude condition ({pos}, {val})")
        if self.abs_descent_free not in (None, "o", "e"):
            raise ValueError("abs_descent_free must be 'o', 'e' or None")

    @property
    def order(self) -> int:
        """Size of the unfiltered group."""
        f = math.factorial(self.n)
        return {"A": f, "B": 2 ** self.n * f, "D": 2 ** (self.n - 1) * f}[self.family]

    def sign_pattern(self) -> dict[int, int]:
        """Positions whose sign is forced, as position -> +1/-1."""
        forced = dict(self.signs)
        if self.neg is not None:
            for pos in range(1, self.n + 1):
                want = -1 if pos in self.neg else 1
                if forced.get(pos, want) != want:
                    return {0: 0}  # contradictory: empty set
                forced[pos] = want
        for S, parity in ((self.neg_odd, 1), (self.neg_even, 0)):
            if S is None:
                continue
            for pos in range(1, self.n + 1):
                if pos % 2 != parity:
                    continue
                want = -1 if pos in S else 1
                if forced.get(pos, want) != want:
                    return {0: 0}
                forced[pos] = want
        return forced

    def accepts(self, x) -> bool:
        """Post-construction filters shared by the stream and batch paths."""
        vals = tuple(x)
        if self.family == "D" and sum(1 for v in vals if v < 0) % 2:
            return False
        if self.neg_parity is not None and sum(1 for v in vals if v < 0) % 2 != self.neg_parity % 2:
            return False
        if any(vals[i - 1] > vals[i] for i in self.quotient):
            return False
        if self.domino is not None:
            dom = is_domino_A(x) if self.family == "A" else is_domino_B(x)
            if dom != self.domino:
                return False
        if self.abs_descent_free:
            parity = 1 if self.abs_descent_free == "o" else 0
            a = [abs(v) for v in vals]
            if any(i % 2 == parity for i in descent_set(a)):
                return False
        return True


def chunk_bounds(total: int, k: int) -> list[tuple[int, int]]:
    """Split range(total) into k contiguous pieces of near-equal size."""
    if k < 1:
        raise ValueError("need at least one chunk")
    q, r = divmod(total, k)
    bounds, start = [], 0
    for i in range(k):
        stop = start + q + (1 if i < r else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def rank_A(p) -> int:
    vals = list(p)
    n = len(vals)
    avail = sorted(vals)
    r = 0
    for k, v in enumerate(vals):
        d = avail.index(v)
        r += d * math.factorial(n - 1 - k)
        avail.pop(d)
    return r


def unrank_A(n: int, r: int) -> Perm:
    avail = list(range(1, n + 1))
    out = []
    for k in range(n):
        d, r = divmod(r, math.factorial(n - 1 - k))
        out.append(avail.pop(d))
    return Perm(tuple(out))


def _signed_avail(avail_abs: list[int]) -> list[int]:
    return [-v for v in reversed(avail_abs)] + list(avail_abs)


def rank_B(s) -> int:
    vals = list(s)
    n = len(vals)
    avail = list(range(1, n + 1))
    r = 0
    for k, v in enumerate(vals):
        rest = n - 1 - k
        d = _signed_avail(avail).index(v)
        r += d * (2 ** rest) * math.factorial(rest)
        avail.remove(abs(v))
    return r


def unrank_B(n: int, r: int) -> SignedPerm:
    avail = list(range(1, n + 1))
    out = []
    for k in range(n):
        rest = n - 1 - k
        d, r = divmod(r, (2 ** rest) * math.factorial(rest))
        v = _signed_avail(avail)[d]
        out.append(v)
        avail.remove(abs(v))
    return SignedPerm(tuple(out))


def _lex_signed(n: int, forced_sign: dict[int, int], forced_abs: dict[int, int]):
    window: list[int] = []

    def rec(avail: list[int]):
        pos = len(window) + 1
        if pos > n:
            yield tuple(window)
            return
        for v in _signed_avail(avail):
            if forced_sign.get(pos, 0) * v < 0:
                continue
            if pos in forced_abs and abs(v) != forced_abs[pos]:
                continue
            window.append(v)
            rest = [a for a in avail if a != abs(v)]
            yield from rec(rest)
            window.pop()

    yield from rec(list(range(1, n + 1)))


def enumerate_group(spec: GroupSpec, chunk: tuple[int, int] | None = None) -> Iterator:
    """Yield the elements of `spec` once each, in lexicographic order.

    With chunk=(i, k) only the i-th of k contiguous lexicographic rank
    ranges of the unfiltered group is visited.
    """
    n = spec.n
    forced_abs = dict(spec.magnitudes)
    if chunk is not None:
        i, k = chunk
        start, stop = chunk_bounds(spec.order if spec.family == "A" else 2 ** n * math.factorial(n), k)[i]
        unrank = (lambda r: unrank_A(n, r)) if spec.family == "A" else (lambda r: unrank_B(n, r))
        forced = spec.sign_pattern() if spec.family != "A" else {}
        for r in range(start, stop):
            x = unrank(r)
            if spec.family != "A":
                if any(p == 0 or (x(p) > 0) != (s > 0) for p, s in forced.items()):
                    continue
            if any(abs(x(p)) != v for p, v in forced_abs.items()):
                continue
            if spec.accepts(x):
                yield x
        return
    if spec.family == "A":
        for vals in itertools.permutations(range(1, n + 1)):
            if any(vals[p - 1] != v for p, v in forced_abs.items()):
                continue
            p = Perm(vals)
            if spec.accepts(p):
                yield p
        return
    forced = spec.sign_pattern()
    if 0 in forced:
        return
    for w in _lex_signed(n, forced, forced_abs):
        s = SignedPerm(w)
        if spec.accepts(s):
            yield s


def count(spec: GroupSpec) -> int:
    from .batch import count_spec
    return count_spec(spec)


# domino permutations

def is_domino_A(p) -> bool:
    p = p if isinstance(p, Perm) else Perm(tuple(p))
    n = p.n
    return all(abs(p.position(i) - p.position(star(i, n))) <= 1 for i in range(1, n))


def is_domino_B(s) -> bool:
    s = s if isinstance(s, SignedPerm) else SignedPerm(tuple(s))
    n = s.n
    return all(abs(s.position(i) - s.position(star(i, n))) <= 1 for i in range(1, n))


def domino_A(n: int) -> Iterator[Perm]:
    return enumerate_group(GroupSpec("A", n, domino=True))


def domino_B(n: int) -> Iterator[SignedPerm]:
    return enumerate_group(GroupSpec("B", n, domino=True))


def domino_bij_A(sigma, S: Iterable[int]) -> Perm:
    """(sigma, S) in S_m x P([m]) -> u in D(S_2m); j in S reverses the j-th pair."""
    sigma = tuple(sigma)
    S = frozenset(S)
    m = len(sigma)
    if not S <= set(range(1, m + 1)):
        raise ValueError(f"{sorted(S)} not inside [{m}]")
    u = []
    for j, v in enumerate(sigma, 1):
        pair = (2 * v - 1, 2 * v)
        u.extend(reversed(pair) if j in S else pair)
    return Perm(tuple(u))


def domino_inv_A(u) -> tuple[Perm, frozenset]:
    vals = tuple(u)
    if len(vals) % 2 or not is_domino_A(vals):
        raise ValueError(f"{list(vals)} is not a domino permutation of even rank")
    sigma, S = [], set()
    for j in range(len(vals) // 2):
        a, b = vals[2 * j], vals[2 * j + 1]
        sigma.append((max(a, b)) // 2)
        if a > b:
            S.add(j + 1)
    return Perm(tuple(sigma)), frozenset(S)


def domino_bij_B(sigma, S: Iterable[int]) -> SignedPerm:
    """(sigma, S) in B_m x P([m]) -> u in D(B_2m)."""
    sigma = tuple(sigma)
    S = frozenset(S)
    m = len(sigma)
    if not S <= set(range(1, m + 1)):
        raise ValueError(f"{sorted(S)} not inside [{m}]")
    u = []
    for j, v in enumerate(sigma, 1):
        if v > 0:
            u.extend((2 * v, 2 * v - 1) if j in S else (2 * v - 1, 2 * v))
        else:
            u.extend((2 * v + 1, 2 * v) if j in S else (2 * v, 2 * v + 1))
    return SignedPerm(tuple(u))


def domino_inv_B(u) -> tuple[SignedPerm, frozenset]:
    vals = tuple(u)
    if len(vals) % 2 or not is_domino_B(vals):
        raise ValueError(f"{list(vals)} is not a signed domino permutation of even rank")
    sigma, S = [], set()
    for j in range(len(vals) // 2):
        a, b = vals[2 * j], vals[2 * j + 1]
        k = max(abs(a), abs(b)) // 2
        sgn = 1 if a > 0 else -1
        sigma.append(sgn * k)
        # reversed pair: larger magnitude first for positive, smaller first for negative
        if (sgn > 0 and a > b) or (sgn < 0 and a > b):
            S.add(j + 1)
    return SignedPerm(tuple(sigma)), frozenset(S)


# sign-reversing involutions; each raises outside its domain

def _first_split_pair(x) -> int | None:
    n = len(x)
    for i in range(1, n):
        if abs(x.position(i) - x.position(star(i, n))) >= 2:
            return i
    return None


def iota_A(sigma: Perm) -> Perm:
    """(r, r*) sigma for the least r whose pair is not adjacent; domain S_n minus D(S_n)."""
    r = _first_split_pair(sigma)
    if r is None:
        raise ValueError(f"{sigma} is a domino permutation, outside the domain of iota")
    return star_transpose(r, sigma)


def phi_B(sigma: SignedPerm) -> SignedPerm:
    """s_r^* sigma for the least split pair r; domain B_n minus D(B_n)."""
    r = _first_split_pair(sigma)
    if r is None:
        raise ValueError(f"{sigma} is a signed domino permutation, outside the domain of phi")
    return star_transpose(r, sigma)


def psi_B(sigma: SignedPerm, parity: str = "o") -> SignedPerm:
    """s_r^* sigma with r = |sigma(n)| ("o") or r = |sigma(1)| ("e"), n odd.

    Domain: |sigma(n)| != n (resp. |sigma(1)| != n).
    """
    n = sigma.n
    if n % 2 == 0:
        raise ValueError("psi is defined on odd rank only")
    r = abs(sigma(n) if parity == "o" else sigma(1))
    if r == n:
        raise ValueError(f"{sigma} is outside the domain of psi")
    return star_transpose(r, sigma)


def tilde_neg(sigma: SignedPerm, parity: str = "o") -> SignedPerm:
    """Flip the sign of sigma(i+1) at the first odd (resp. even) i with |sigma(i)| > |sigma(i+1)|.

    Domain: odes(|sigma|) > 0 (resp. edes(|sigma|) > 0 at a position >= 2).
    """
    want = 1 if parity == "o" else 0
    w = list(sigma.window)
    for i in range(1, len(w)):
        if i % 2 == want and abs(w[i - 1]) > abs(w[i]):
            w[i] = -w[i]
            return SignedPerm(tuple(w))
    raise ValueError(f"{sigma} is outside the domain of the neg-flip involution")


def first_pair_B(sigma: SignedPerm) -> SignedPerm:
    """s_r^* sigma with r = |sigma(1)|, on B_n with n even; preserves emaj and edes."""
    if sigma.n % 2:
        raise ValueError("defined on even rank only")
    return star_transpose(abs(sigma(1)), sigma) if abs(sigma(1)) < sigma.n else \
        star_transpose(sigma.n - 1, sigma)


def check_pairing(domain: Iterable, involution: Callable, sign: Callable, key: Callable) -> list[tuple]:
    """Validate that `involution` pairs `domain` into 2-cycles of opposite sign and equal key.

    Returns the list of pairs (each listed once); raises AssertionError on the
    first violation.
    """
    elems = list(domain)
    members = set(elems)
    pairs, seen = [], set()
    for x in elems:
        if x in seen:
            continue
        y = involution(x)
        if y == x:
            raise AssertionError(f"fixed point {x}")
        if y not in members:
            raise AssertionError(f"{x} -> {y} leaves the domain")
        if involution(y) != x:
            raise AssertionError(f"{x} -> {y} -> {involution(y)} is not an involution")
        if sign(x) != -sign(y):
            raise AssertionError(f"{x} and {y} have the same sign")
        if key(x) != key(y):
            raise AssertionError(f"{x} and {y} carry different monomials")
        seen.update((x, y))
        pairs.append((x, y))
    return pairs


# overpartitions

@dataclass(frozen=True)
class Overpartition:
    """Weakly decreasing parts; `overlined` holds the part values whose last occurrence is overlined."""

    parts: tuple[int, ...]
    overlined: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "overlined", frozenset(self.overlined))
        if any(a < b for a, b in zip(self.parts, self.parts[1:])) or any(p <= 0 for p in self.parts):
            raise ValueError(f"parts must be positive and weakly decreasing: {self.parts}")
        if not self.overlined <= set(self.parts):
            raise ValueError(f"overlined values {sorted(self.overlined)} are not parts")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __str__(self):
        out = []
        for k, p in enumerate(self.parts):
            last = k + 1 == len(self.parts) or self.parts[k + 1] != p
            out.append(f"{p}̄" if last and p in self.overlined else str(p))
        return "(" + ",".join(out) + ")"


def _partitions(max_part: int, length: int | None, max_length: int | None,
                weight: int | None, max_weight: int | None):
    cap_len = length if length is not None else max_length
    cap_w = weight if weight is not None else max_weight
    if cap_len is None and cap_w is None:
        raise ValueError("give a length or a weight bound; the stream is otherwise infinite")
    parts: list[int] = []

    def rec(limit: int, total: int):
        if (length is None or len(parts) == length) and (weight is None or total == weight):
            yield tuple(parts)
        if cap_len is not None and len(parts) >= cap_len:
            return
        for p in range(min(limit, max_part), 0, -1):
            if cap_w is not None and total + p > cap_w:
                continue
            parts.append(p)
            yield from rec(p, total + p)
            parts.pop()

    yield from rec(max_part, 0)


def overpartitions(max_part: int, length: int | None = None, max_length: int | None = None,
                   weight: int | None = None, max_weight: int | None = None) -> Iterator[Overpartition]:
    """Overpartitions with largest part <= max_part under the given length/weight constraints."""
    if max_part < 0:
        raise ValueError("max_part must be non-negative")
    for parts in _partitions(max_part, length, max_length, weight, max_weight):
        distinct = sorted(set(parts), reverse=True)
        for r in range(len(distinct) + 1):
            for over in itertools.combinations(distinct, r):
                yield Overpartition(parts, frozenset(over))


def overpartition_poly(max_part: int, length: int):
    """P(q) = sum of q^|lambda| over overpartitions with lambda_1 <= max_part and exactly `length` parts."""
    from .poly import MultiPoly
    counts: dict[int, int] = {}
    for lam in overpartitions(max_part, length=length):
        counts[lam.weight] = counts.get(lam.weight, 0) + 1
    return MultiPoly(("q",), {(w,): c for w, c in counts.items()})
