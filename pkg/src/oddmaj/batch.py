"""
Vectorized sweeps: build blocks of windows as integer arrays, evaluate
statistics column-wise and tally monomials with np.unique.

A signed block is the outer product of |sigma| patterns (lexicographic
unranking of S_n) with the admissible sign masks, so sign-constrained sets
are built directly rather than filtered out of B_n.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from .enumeration import GroupSpec, chunk_bounds
from .perms import star

__all__ = [
    "Request", "perm_rows", "sign_masks", "blocks", "stat_columns",
    "character_parity", "cell_column", "tally", "sweep", "count_spec",
    "CHARACTERS", "CELLS",
]

BLOCK_ROWS = 1 << 20

CHARACTERS = ("trivial", "sign_length", "sign_neg", "sign_length_neg")
CELLS = ("desc", "neg", "neg_odd", "neg_even", "last_sign", "neg_parity", "corner")


@dataclass(frozen=True)
class Request:
    """One tally over a sweep: exponent statistics, a character and an optional cell key."""

    stats: tuple = ()
    character: str = "trivial"
    cell: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "stats", tuple(str(s) for s in self.stats))
        if self.character not in CHARACTERS:
            raise ValueError(f"unknown character {self.character!r}")
        if self.cell is not None and self.cell not in CELLS:
            raise ValueError(f"unknown cell key {self.cell!r}")


def perm_rows(n: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of S_n in lexicographic order, as an int8 array."""
    ranks = np.arange(start, stop, dtype=np.int64)
    N = len(ranks)
    avail = np.tile(np.arange(1, n + 1, dtype=np.int8), (N, 1))
    out = np.empty((N, n), dtype=np.int8)
    rows = np.arange(N)
    for k in range(n):
        f = math.factorial(n - 1 - k)
        d = (ranks // f) % (n - k)
        out[:, k] = avail[rows, d]
        if k < n - 1:
            keep = np.ones(avail.shape, dtype=bool)
            keep[rows, d] = False
            avail = avail[keep].reshape(N, n - 1 - k)
    return out


def sign_masks(spec: GroupSpec) -> np.ndarray:
    """All +-1 sign vectors allowed by the sign filters of a signed spec."""
    n = spec.n
    forced = spec.sign_pattern()
    if 0 in forced:
        return np.empty((0, n), dtype=np.int8)
    choices = [(forced[p],) if p in forced else (1, -1) for p in range(1, n + 1)]
    masks = np.array(list(product(*choices)), dtype=np.int8).reshape(-1, n)
    negs = (masks < 0).sum(axis=1)
    keep = np.ones(len(masks), dtype=bool)
    if spec.family == "D":
        keep &= negs % 2 == 0
    if spec.neg_parity is not None:
        keep &= negs % 2 == spec.neg_parity % 2
    return masks[keep]


def _descents_A(W: np.ndarray) -> np.ndarray:
    N, n = W.shape
    d = np.zeros((N, n), dtype=bool)
    d[:, 1:] = W[:, :-1] > W[:, 1:]
    return d


def _descents_B(W: np.ndarray) -> np.ndarray:
    prev = np.zeros_like(W)
    prev[:, 1:] = W[:, :-1]
    return prev > W


def _pattern_filter(spec: GroupSpec, P: np.ndarray) -> np.ndarray:
    keep = np.ones(len(P), dtype=bool)
    for pos, val in spec.magnitudes:
        keep &= P[:, pos - 1] == val
    if spec.abs_descent_free:
        d = _descents_A(P)
        cols = d[:, 1::2] if spec.abs_descent_free == "o" else d[:, 2::2]
        keep &= ~cols.any(axis=1)
    return P[keep]


def _is_domino(W: np.ndarray) -> np.ndarray:
    N, n = W.shape
    pos = np.empty((N, n), dtype=np.int16)
    rows = np.arange(N)
    a = np.abs(W).astype(np.int16)
    for j in range(n):
        sgn = np.where(W[:, j] > 0, 1, -1).astype(np.int16)
        pos[rows, a[:, j] - 1] = sgn * (j + 1)
    ok = np.ones(N, dtype=bool)
    for i in range(1, n):
        j = star(i, n)
        ok &= np.abs(pos[:, i - 1] - pos[:, j - 1]) <= 1
    return ok


def _window_filter(spec: GroupSpec, W: np.ndarray) -> np.ndarray:
    keep = np.ones(len(W), dtype=bool)
    for i in spec.quotient:
        keep &= W[:, i - 1] < W[:, i]
    if spec.domino is not None:
        dom = _is_domino(W)
        keep &= dom if spec.domino else ~dom
    return W[keep]


def _pattern_range(spec: GroupSpec, chunk: tuple[int, int] | None) -> tuple[int, int]:
    total = math.factorial(spec.n)
    if chunk is None:
        return 0, total
    i, k = chunk
    return chunk_bounds(total, k)[i]


def blocks(spec: GroupSpec, chunk: tuple[int, int] | None = None, rows: int = BLOCK_ROWS):
    """Yield int8 arrays whose rows are the elements of `spec` (each once overall)."""
    n = spec.n
    start, stop = _pattern_range(spec, chunk)
    masks = None if spec.family == "A" else sign_masks(spec)
    if masks is not None and len(masks) == 0:
        return
    per = max(1, rows // (1 if masks is None else len(masks)))
    for s in range(start, stop, per):
        P = _pattern_filter(spec, perm_rows(n, s, min(s + per, stop)))
        if not len(P):
            continue
        if masks is None:
            W = P
        else:
            W = (P[:, None, :] * masks[None, :, :]).reshape(-1, n)
        W = _window_filter(spec, W)
        if len(W):
            yield W


class _Columns:
    """Lazily computed statistic columns for one block."""

    def __init__(self, W: np.ndarray, signed: bool):
        self.W = W
        self.signed = signed
        self._cache: dict[str, np.ndarray] = {}

    def _desc(self, key: str) -> np.ndarray:
        if key not in self._cache:
            if key == "D":
                W2 = self.W.copy()
                W2[:, -1] = np.abs(W2[:, -1])
                self._cache[key] = _descents_B(W2)
            else:
                self._cache[key] = _descents_B(self.W) if self.signed else _descents_A(self.W)
        return self._cache[key]

    def _inv(self, odd_only: bool = False) -> np.ndarray:
        W = self.W
        n = W.shape[1]
        out = np.zeros(len(W), dtype=np.int64)
        for i in range(n):
            for j in range(i + 1, n):
                if odd_only and (j - i) % 2 == 0:
                    continue
                out += W[:, i] > W[:, j]
        return out

    def get(self, name: str) -> np.ndarray:
        if name in self._cache:
            return self._cache[name]
        v = self._compute(name)
        self._cache[name] = v
        return v

    def _parity(self, name: str, d: np.ndarray) -> np.ndarray:
        n = d.shape[1]
        if name == "odes":
            return d[:, 1::2].sum(axis=1, dtype=np.int64)
        if name == "edes":
            return d[:, 0::2].sum(axis=1, dtype=np.int64)
        if name == "omaj":
            w = np.array([(i + 1) // 2 for i in range(1, n, 2)], dtype=np.int64)
            return d[:, 1::2] @ w
        if name == "emaj":
            w = np.array([i // 2 for i in range(0, n, 2)], dtype=np.int64)
            return d[:, 0::2] @ w
        if name == "des":
            return d.sum(axis=1, dtype=np.int64)
        if name == "maj":
            return d @ np.arange(n, dtype=np.int64)
        raise KeyError(name)

    def _negs(self, W: np.ndarray, which: str) -> np.ndarray:
        neg = W < 0
        if which == "neg":
            return neg.sum(axis=1, dtype=np.int64)
        if which == "oneg":
            return neg[:, 0::2].sum(axis=1, dtype=np.int64)
        return neg[:, 1::2].sum(axis=1, dtype=np.int64)

    def _compute(self, name: str) -> np.ndarray:
        W = self.W
        if name in ("odes", "edes", "omaj", "emaj", "des", "maj"):
            return self._parity(name, self._desc("W"))
        if name in ("neg", "oneg", "eneg"):
            return self._negs(W, name)
        if name in ("fmaj", "ofmaj", "efmaj"):
            base = {"fmaj": ("maj", "neg"), "ofmaj": ("omaj", "oneg"), "efmaj": ("emaj", "eneg")}[name]
            return 2 * self.get(base[0]) + self.get(base[1])
        if name in ("odesD", "edesD"):
            return self._parity(name[:-1], self._desc("D"))
        if name in ("onegD", "enegD"):
            W2 = W.copy()
            W2[:, -1] = np.abs(W2[:, -1])
            return self._negs(W2, name[:-1])
        if name in ("dmaj", "odmaj", "edmaj"):
            d = self._desc("D")
            major = {"dmaj": "maj", "odmaj": "omaj", "edmaj": "emaj"}[name]
            negs = {"dmaj": "neg", "odmaj": "oneg", "edmaj": "eneg"}[name]
            W2 = W.copy()
            W2[:, -1] = np.abs(W2[:, -1])
            return 2 * self._parity(major, d) + self._negs(W2, negs)
        if name == "lenA":
            return self._inv()
        if name == "oddlenA":
            return self._inv(odd_only=True)
        if name == "lenB":
            return self.get("lenA") - np.where(W < 0, W, 0).sum(axis=1, dtype=np.int64)
        if name == "lenD":
            if (self.get("neg") % 2).any():
                raise ValueError("lenD needs an even number of negative entries")
            return self.get("lenB") - self.get("neg")
        if name == "oddlenB":
            n = W.shape[1]
            out = self._inv(odd_only=True) + self.get("oneg")
            Wi = W.astype(np.int16)
            for a in range(n):
                for b in range(a + 1, n, 2):
                    out += (Wi[:, a] + Wi[:, b]) < 0
            return out
        raise KeyError(f"unknown statistic {name!r}")


def stat_columns(W: np.ndarray, names, signed: bool) -> dict[str, np.ndarray]:
    cols = _Columns(W, signed)
    return {name: cols.get(name) for name in names}


def character_parity(cols: _Columns, character: str, family: str) -> np.ndarray | None:
    """0/1 array with 1 where the character is -1; None for the trivial character."""
    if character == "trivial":
        return None
    length = {"A": "lenA", "B": "lenB", "D": "lenD"}[family]
    if character == "sign_length":
        return cols.get(length) % 2
    if family != "B":
        raise ValueError(f"character {character} needs family B")
    if character == "sign_neg":
        return cols.get("neg") % 2
    return (cols.get("lenB") + cols.get("neg")) % 2


def _bits(M: np.ndarray, offset: int) -> np.ndarray:
    w = np.left_shift(np.int64(1), np.arange(offset, offset + M.shape[1], dtype=np.int64))
    return M.astype(np.int64) @ w


def cell_column(cols: _Columns, cell: str) -> np.ndarray:
    """Integer cell label per row.

    desc        descent set as a bit mask (bit i for position i)
    neg         Neg(sigma) as a bit mask (bit j for position j)
    neg_odd/even  the odd (even) positions of Neg(sigma), as a bit mask
    last_sign   0 if sigma(n) > 0 else 1
    neg_parity  neg(sigma) mod 2
    corner      2 * last_sign + neg_parity
    """
    W = cols.W
    if cell == "desc":
        return _bits(cols._desc("W"), 0)
    neg = W < 0
    if cell == "neg":
        return _bits(neg, 1)
    if cell in ("neg_odd", "neg_even"):
        masked = neg.copy()
        masked[:, (1 if cell == "neg_odd" else 0)::2] = False
        return _bits(masked, 1)
    last = (W[:, -1] < 0).astype(np.int64)
    par = cols.get("neg") % 2
    if cell == "last_sign":
        return last
    if cell == "neg_parity":
        return par
    if cell == "corner":
        return 2 * last + par
    raise KeyError(cell)


def tally(columns: list[np.ndarray], parity: np.ndarray | None, N: int) -> dict[tuple, int]:
    """Signed counts of distinct rows of the given integer columns (N rows)."""
    if not columns:
        if parity is None:
            return {(): N} if N else {}
        plus = int(N - parity.sum())
        return {(): plus - int(parity.sum())}
    bases = [int(c.max()) + 1 for c in columns]
    if any(int(c.min()) < 0 for c in columns):
        raise ValueError("negative exponent in tally")
    if math.prod(bases) < (1 << 61):
        key = np.zeros(N, dtype=np.int64)
        for c, b in zip(columns, bases):
            key = key * b + c
        if parity is not None:
            key = key * 2 + parity
        uniq, counts = np.unique(key, return_counts=True)
        out: dict[tuple, int] = {}
        for k, c in zip(uniq.tolist(), counts.tolist()):
            sgn = 1
            if parity is not None:
                k, p = divmod(k, 2)
                sgn = -1 if p else 1
            digits = []
            for b in reversed(bases):
                k, r = divmod(k, b)
                digits.append(r)
            t = tuple(reversed(digits))
            out[t] = out.get(t, 0) + sgn * c
        return out
    stack = np.stack(columns + ([parity] if parity is not None else []), axis=1)
    uniq, counts = np.unique(stack, axis=0, return_counts=True)
    out = {}
    for row, c in zip(uniq.tolist(), counts.tolist()):
        if parity is not None:
            t, sgn = tuple(row[:-1]), (-1 if row[-1] else 1)
        else:
            t, sgn = tuple(row), 1
        out[t] = out.get(t, 0) + sgn * c
    return out


def _merge(into: dict, other: dict) -> None:
    for k, v in other.items():
        into[k] = into.get(k, 0) + v


def _sweep_chunk(spec: GroupSpec, requests: tuple, chunk) -> tuple[list[dict], int]:
    signed = spec.family != "A"
    results: list[dict] = [{} for _ in requests]
    total = 0
    for W in blocks(spec, chunk):
        total += len(W)
        cols = _Columns(W, signed)
        for slot, req in zip(results, requests):
            exps = [cols.get(s) for s in req.stats]
            if req.cell is not None:
                exps = [cell_column(cols, req.cell)] + exps
            _merge(slot, tally(exps, character_parity(cols, req.character, spec.family), len(W)))
    return results, total


def default_jobs() -> int:
    return os.cpu_count() or 1


def sweep(spec: GroupSpec, requests, jobs: int = 1) -> tuple[list[dict], int]:
    """Run every request over the elements of `spec`.

    Each result maps (cell?, e_1, ..., e_k) -> signed count, zero entries
    dropped. Chunk results are merged in chunk order, so the output does not
    depend on `jobs`.
    """
    requests = tuple(requests)
    if jobs <= 1 or math.factorial(spec.n) < 5040:
        results, total = _sweep_chunk(spec, requests, None)
    else:
        k = jobs * 4
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_sweep_chunk, [spec] * k, [requests] * k,
                                  [(i, k) for i in range(k)]))
        results = [{} for _ in requests]
        total = 0
        for part, count in parts:
            total += count
            for slot, res in zip(results, part):
                _merge(slot, res)
    return [{k: v for k, v in r.items() if v} for r in results], total


def count_spec(spec: GroupSpec) -> int:
    return sum(len(W) for W in blocks(spec))
