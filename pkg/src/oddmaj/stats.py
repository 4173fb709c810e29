"""
Permutation statistics, addressable by name.

Every statistic is a pure function of one group element. `eval_stat` is the
reference implementation; `oddmaj.batch` computes the same values on whole
arrays of elements and is tested against this module.
"""

from __future__ import annotations

from enum import Enum

from .perms import (
    Perm, SignedPerm, abs_last, descent_set_A, descent_set_B, length_A,
    length_B, length_D, neg_set,
)

__all__ = [
    "StatName", "CARRIERS", "eval_stat", "check_carrier", "all_stats",
    "odd_length_A", "odd_length_B", "parity_stats",
]


class StatName(str, Enum):
    des = "des"
    maj = "maj"
    odes = "odes"
    edes = "edes"
    omaj = "omaj"
    emaj = "emaj"
    neg = "neg"
    oneg = "oneg"
    eneg = "eneg"
    fmaj = "fmaj"
    ofmaj = "ofmaj"
    efmaj = "efmaj"
    dmaj = "dmaj"
    odmaj = "odmaj"
    edmaj = "edmaj"
    odesD = "odesD"
    edesD = "edesD"
    onegD = "onegD"
    enegD = "enegD"
    lenA = "lenA"
    lenB = "lenB"
    lenD = "lenD"
    oddlenA = "oddlenA"
    oddlenB = "oddlenB"

    def __str__(self):
        return self.value


_A_ONLY = {"oddlenA"}
_SHARED = {"des", "maj", "odes", "edes", "omaj", "emaj", "lenA"}
_SIGNED = {
    "neg", "oneg", "eneg", "fmaj", "ofmaj", "efmaj", "dmaj", "odmaj", "edmaj",
    "odesD", "edesD", "onegD", "enegD", "lenB", "oddlenB",
}

# family letters whose elements carry the statistic; lenD needs an even neg count
CARRIERS: dict[StatName, frozenset[str]] = {}
for _s in StatName:
    if _s.value in _A_ONLY:
        CARRIERS[_s] = frozenset("A")
    elif _s.value in _SHARED:
        CARRIERS[_s] = frozenset("ABD")
    elif _s.value == "lenD":
        CARRIERS[_s] = frozenset("D")
    else:
        CARRIERS[_s] = frozenset("BD")


def check_carrier(name, family: str) -> StatName:
    stat = StatName(name)
    if family not in CARRIERS[stat]:
        raise ValueError(f"statistic {stat} is not defined on family {family}")
    return stat


def parity_stats(D, N=()) -> dict[str, int]:
    """odes, edes, omaj, emaj, oneg, eneg from a descent set and a negative set.

    A descent at position 0 counts towards edes and adds 0 to emaj.
    """
    D_o = [i for i in D if i % 2 == 1]
    D_e = [i for i in D if i % 2 == 0]
    return {
        "odes": len(D_o),
        "edes": len(D_e),
        "omaj": sum((i + 1) // 2 for i in D_o),
        "emaj": sum(i // 2 for i in D_e),
        "oneg": sum(1 for i in N if i % 2 == 1),
        "eneg": sum(1 for i in N if i % 2 == 0),
    }


def _flag_stats(s: SignedPerm) -> dict[str, int]:
    D = descent_set_B(s)
    N = neg_set(s)
    out = parity_stats(D, N)
    out["des"] = len(D)
    out["maj"] = sum(D)
    out["neg"] = len(N)
    out["fmaj"] = 2 * out["maj"] + out["neg"]
    out["ofmaj"] = 2 * out["omaj"] + out["oneg"]
    out["efmaj"] = 2 * out["emaj"] + out["eneg"]
    return out


def odd_length_A(p) -> int:
    """Inversions (i, j) with i and j of different parity."""
    v = tuple(p)
    n = len(v)
    return sum(1 for i in range(n) for j in range(i + 1, n)
               if v[i] > v[j] and (j - i) % 2 == 1)


def odd_length_B(s: SignedPerm, include_zero: bool = True) -> int:
    """Half the number of mixed-parity inversions of s viewed on [+-n].

    With `include_zero` the index 0 (where s(0) = 0) joins the range, which
    adds oneg(s) to the value obtained on [+-n] proper.
    """
    n = s.n
    idx = [i for i in range(-n, n + 1) if include_zero or i != 0]
    vals = {i: s(i) for i in idx}
    count = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx))
                if vals[idx[a]] > vals[idx[b]] and (idx[b] - idx[a]) % 2 == 1)
    return count // 2


def all_stats(x) -> dict[str, int]:
    """Every statistic defined on x, keyed by StatName value."""
    if isinstance(x, Perm):
        D = descent_set_A(x)
        out = parity_stats(D)
        del out["oneg"], out["eneg"]
        out["des"] = len(D)
        out["maj"] = sum(D)
        out["lenA"] = length_A(x)
        out["oddlenA"] = odd_length_A(x)
        return out
    if not isinstance(x, SignedPerm):
        raise TypeError(f"expected Perm or SignedPerm, got {type(x).__name__}")
    out = _flag_stats(x)
    dstats = _flag_stats(abs_last(x))
    out["dmaj"] = dstats["fmaj"]
    out["odmaj"] = dstats["ofmaj"]
    out["edmaj"] = dstats["efmaj"]
    out["odesD"] = dstats["odes"]
    out["edesD"] = dstats["edes"]
    out["onegD"] = dstats["oneg"]
    out["enegD"] = dstats["eneg"]
    out["lenA"] = length_A(x)
    out["lenB"] = length_B(x)
    out["oddlenB"] = odd_length_B(x)
    if x.in_D:
        out["lenD"] = length_D(x)
    return out


def eval_stat(name, x) -> int:
    stat = StatName(name)
    if isinstance(x, Perm):
        family = "A"
    elif isinstance(x, SignedPerm):
        family = "D" if (stat is StatName.lenD and x.in_D) else "B"
        if stat is StatName.lenD and not x.in_D:
            raise ValueError(f"lenD needs an even number of negative entries, got {x}")
    else:
        raise TypeError(f"expected Perm or SignedPerm, got {type(x).__name__}")
    check_carrier(stat, family)
    return all_stats(x)[stat.value]
