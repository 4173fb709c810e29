"""
Registry of identities: each entry knows how to enumerate its left side,
build its right side, and over which ranks and parameters to check it.

Reports are plain data with a fixed JSON shape; everything except the
elapsed time is deterministic.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import enumeration as en
from .enumeration import GroupSpec
from .genfun import (
    S5_SIGNED_BIVARIATE, closed_form, descent_set_genfun, genfun_many,
    overpartition_series, twisted_genfun, twisted_genfun_cells,
)
from .perms import (
    Perm, SignedPerm, descent_set_B, neg_set, odds, evens,
)
from .poly import MultiPoly, geometric_series, substitute
from .stats import all_stats, odd_length_B

__all__ = [
    "IdentitySpec", "IdentityReport", "REGISTRY", "get", "verify", "verify_rank",
    "verify_id", "verify_all", "pairing_dump", "search_descent_major_A",
    "search_descent_neg_major_B", "distribution", "OVERPARTITION_CAPS",
]

OVERPARTITION_CAPS = {"x": 6, "q": 21}


@dataclass
class IdentityReport:
    id: str
    rank: int
    params: dict
    equal: bool
    lhs: str
    rhs: str
    count: int
    ms: int

    def to_dict(self, include_ms: bool = True) -> dict:
        d = {"id": self.id, "rank": self.rank, "params": self.params, "equal": self.equal,
             "lhs": self.lhs, "rhs": self.rhs, "count": self.count}
        if include_ms:
            d["ms"] = self.ms
        return d

    def to_json(self, include_ms: bool = True) -> str:
        return json.dumps(self.to_dict(include_ms), sort_keys=False)

    def line(self) -> str:
        tag = "PASS" if self.equal else "FAIL"
        params = " ".join(f"{k}={_fmt(v)}" for k, v in self.params.items())
        return f"{tag} {self.id} rank={self.rank}{' ' + params if params else ''} count={self.count}"


def _fmt(v) -> str:
    if isinstance(v, list):
        return "{" + ",".join(map(str, v)) + "}"
    return str(v)


@dataclass(frozen=True)
class IdentitySpec:
    """One registered identity.

    rank_label  "n" for the group rank, "m" where the group is S_2m or B_2m
    ranks       desk-scale ranks checked by verify --all
    valid       predicate for ranks accepted by verify
    domain      rank -> list of parameter dicts
    run         (rank, params, jobs) -> (lhs, rhs, equal, count)
    """

    id: str
    family: str
    formula: str
    check_mode: str
    ranks: tuple
    run: Callable = field(repr=False, compare=False)
    domain: Callable = field(default=lambda r: [{}], repr=False, compare=False)
    valid: Callable = field(default=lambda r: r >= 1, repr=False, compare=False)
    rank_label: str = "n"


REGISTRY: dict[str, IdentitySpec] = {}


def _register(spec: IdentitySpec) -> None:
    REGISTRY[spec.id] = spec


def get(identity_id: str) -> IdentitySpec:
    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise KeyError(f"unknown identity {identity_id!r}") from None


def _subsets(universe) -> list[list[int]]:
    u = sorted(universe)
    return [list(c) for r in range(len(u) + 1) for c in itertools.combinations(u, r)]


def _mask(J) -> int:
    return sum(1 << j for j in J)


def _sum_cells(cells: dict[int, MultiPoly], keep) -> MultiPoly:
    out = MultiPoly.const(0)
    for label, poly in cells.items():
        if keep(label):
            out = out + poly
    return out


def _direct(lhs: MultiPoly, rhs: MultiPoly, count: int):
    return lhs, rhs, lhs == rhs, count


def _cross(lhs: MultiPoly, cf, count: int):
    """Compare lhs * den against num."""
    if cf.den is None:
        return _direct(lhs, cf.num, count)
    left = lhs * cf.den
    return left, cf.num, left == cf.num, count


# type A

EULERIAN_BINDING = {"o": "lenA:y,omaj:q,odes:x", "e": "lenA:y,emaj:q,edes:x"}


def _run_eulerian(form):
    def run(n, params, jobs):
        (lhs,), count = genfun_many(GroupSpec("A", n), [("trivial", EULERIAN_BINDING[form], None)], jobs)
        return _cross(lhs, closed_form("thm-odd-eulerian" if form == "o" else "thm-even-eulerian", n), count)
    return run


def _run_overpartition(form):
    def run(n, params, jobs):
        caps = OVERPARTITION_CAPS
        b = "omaj:q,odes:x" if form == "o" else "emaj:q,edes:x"
        (gf,), count = genfun_many(GroupSpec("A", n), [("trivial", b, None)], jobs)
        top = n // 2 if form == "o" else (n - 1) // 2
        lhs = gf.truncate(caps)
        for i in range(1, top + 1):
            lhs = lhs.mul_truncated(geometric_series(MultiPoly.monomial({"x": 1, "q": i}), caps), caps)
        rhs = closed_form(f"cor-overpartition-{'odd' if form == 'o' else 'even'}", n, caps).num
        return _direct(lhs, rhs, count)
    return run


def _run_gessel_simion(form):
    def run(n, params, jobs):
        b = "omaj:q" if form == "o" else "emaj:q"
        (lhs,), count = genfun_many(GroupSpec("A", n), [("sign_length", b, None)], jobs)
        return _direct(lhs, closed_form(f"cor-gessel-simion-{'odd' if form == 'o' else 'even'}", n).num, count)
    return run


def _run_unimodal(n, params, jobs):
    form = params["form"]
    (lhs,), count = genfun_many(GroupSpec("A", n), [("trivial", f"{form}maj:q", None)], jobs)
    rhs = closed_form("cor-unimodal", n, form).num
    return lhs, rhs, lhs == rhs and lhs.is_symmetric() and lhs.is_unimodal(), count


def _run_overpartition_unimodal(n, params, jobs):
    m = params["m"]
    P = en.overpartition_poly(n, m)
    count = sum(P.terms.values())
    top = (n + 1) * m
    mirror = MultiPoly(("q",), {(top - e[0],): c for e, c in P.terms.items()}) if P.terms else P
    ok = P == mirror and P.is_symmetric(center=(m * (n + 1)) / 2) and P.is_unimodal() and P.degree() == n * m
    return P, mirror, ok, count


FOUR_A = "omaj:q1,emaj:q2,odes:x1,edes:x2"


def _quotient_cells(n: int, domino: bool | None, binding: str, jobs: int):
    (cells,), count = genfun_many(GroupSpec("A", n, domino=domino), [("sign_length", binding, "desc")], jobs)
    return cells, count


def _count_quotient(n: int, J, domino: bool | None) -> int:
    # exact size of the enumerated set; a cheap pass over the descent-mask cells
    (cells,), _ = genfun_many(GroupSpec("A", n, domino=domino), [("trivial", (), "desc")])
    jm = _mask(J)
    return sum(p.coeff({}) for label, p in cells.items() if not label & jm)


def _pairing_iota(n: int, J) -> bool:
    domain = en.enumerate_group(GroupSpec("A", n, quotient=frozenset(J), domino=False))
    key = lambda s: frozenset(i for i in range(1, n) if s(i) > s(i + 1))
    en.check_pairing(domain, en.iota_A, lambda s: (-1) ** all_stats(s)["lenA"], key)
    return True


def _run_domino_A(n, params, jobs):
    J = params["J"]
    full, _ = _quotient_cells(n, None, FOUR_A, jobs)
    dom, _ = _quotient_cells(n, True, FOUR_A, jobs)
    jm = _mask(J)
    lhs = _sum_cells(full, lambda c: not c & jm)
    rhs = _sum_cells(dom, lambda c: not c & jm)
    ok = lhs == rhs
    if ok and n <= 6:
        try:
            _pairing_iota(n, J)
        except AssertionError:
            ok = False
    return lhs, rhs, ok, _count_quotient(n, J, None)


def _stat_mono(stats: dict, binding: dict) -> dict:
    return {var: stats[name] for name, var in binding.items()}


def _run_atranslate(m, params, jobs):
    binding = {"lenA": "y", "odes": "x1", "edes": "x2", "omaj": "q1", "emaj": "q2"}
    left, right = Counter(), Counter()
    images = set()
    ok = True
    for sigma in en.enumerate_group(GroupSpec("A", m)):
        st = all_stats(sigma)
        for S in _subsets(range(1, m + 1)):
            u = en.domino_bij_A(sigma, S)
            images.add(u)
            su = all_stats(u)
            pred = {"lenA": 4 * st["lenA"] + len(S), "odes": len(S), "edes": st["des"],
                    "omaj": sum(S), "emaj": st["maj"]}
            ok &= all(su[k] == pred[k] for k in pred)
            ok &= en.is_domino_A(u) and en.domino_inv_A(u) == (sigma, frozenset(S))
            left[tuple(sorted(_stat_mono(su, binding).items()))] += 1
            right[tuple(sorted(_stat_mono(pred, binding).items()))] += 1
    ok &= len(images) == 2 ** m * math.factorial(m) == sum(1 for _ in en.domino_A(2 * m))
    lhs = MultiPoly.from_dicts((dict(k), c) for k, c in left.items())
    rhs = MultiPoly.from_dicts((dict(k), c) for k, c in right.items())
    return lhs, rhs, ok and lhs == rhs, len(images)


def _run_parabolic_signed(m, params, jobs):
    J = params["J"]
    cells, _ = _quotient_cells(2 * m, None, FOUR_A, jobs)
    lhs = _sum_cells(cells, lambda c: not c & _mask(J))
    rhs = closed_form("thm-parabolic-signed", m, J).num
    return _direct(lhs, rhs, _count_quotient(2 * m, J, None))


def _run_bivariate_even_rank(m, params, jobs):
    (lhs,), count = genfun_many(GroupSpec("A", 2 * m), [("sign_length", "omaj:q1,emaj:q2", None)], jobs)
    return _direct(lhs, closed_form("cor-bivariate-even-rank", m).num, count)


def _run_signed_maj_des(m, params, jobs):
    J = params["J"]
    cells, _ = _quotient_cells(2 * m, None, "maj:q,des:x", jobs)
    lhs = _sum_cells(cells, lambda c: not c & _mask(J))
    return _direct(lhs, closed_form("cor-signed-maj-des", m, J).num, _count_quotient(2 * m, J, None))


def _run_odd_quotient(m, params, jobs):
    J = frozenset(range(1, 2 * m, 2))
    (lhs,), count = genfun_many(GroupSpec("A", 2 * m, quotient=J), [("sign_length", FOUR_A, None)], jobs)
    return _direct(lhs, closed_form("cor-odd-quotient", m).num, count)


def _run_s5_signed(n, params, jobs):
    (gf,), count = genfun_many(GroupSpec("A", 5), [("sign_length", "omaj:q1,emaj:q2,odes:x1", None)], jobs)
    # x^(2 omaj - odes) y^(2 emaj)
    lhs = substitute(gf, {"q1": MultiPoly.var("x", 2), "x1": {"x": -1}, "q2": MultiPoly.var("y", 2)})
    return _direct(lhs, S5_SIGNED_BIVARIATE, count)


def _run_regression(identity_id, spec, chi, binding):
    def run(n, params, jobs):
        (lhs,), count = genfun_many(spec, [(chi, binding, None)], jobs)
        return _direct(lhs, closed_form(identity_id).num, count)
    return run


# type B and D

TRIVIAL_BINDING = {
    "B-odd": ("B", "ofmaj:x,odes:y,oneg:z"), "B-even": ("B", "efmaj:x,edes:y,eneg:z"),
    "D-odd": ("D", "odmaj:x,odesD:y,onegD:z"), "D-even": ("D", "edmaj:x,edesD:y,enegD:z"),
}


def _run_trivial(key):
    family, binding = TRIVIAL_BINDING[key]

    def run(n, params, jobs):
        (lhs,), count = genfun_many(GroupSpec(family, n), [("trivial", binding, None)], jobs)
        return _direct(lhs, closed_form(f"thm-trivial-{key}", n).num, count)
    return run


FOUR_B = "omaj:x1,emaj:x2,odes:y1,edes:y2"


def _run_bdominored(n, params, jobs):
    S = frozenset(params["S"])
    (lhs,), count = genfun_many(GroupSpec("B", n, neg=S), [("sign_length", FOUR_B, None)], jobs)
    (rhs,), _ = genfun_many(GroupSpec("B", n, neg=S, domino=True), [("sign_length", FOUR_B, None)], jobs)
    ok = lhs == rhs
    if ok and n <= 5:
        try:
            domain = en.enumerate_group(GroupSpec("B", n, neg=S, domino=False))
            en.check_pairing(domain, en.phi_B, lambda s: (-1) ** all_stats(s)["lenB"],
                             lambda s: (descent_set_B(s), neg_set(s)))
        except AssertionError:
            ok = False
    return lhs, rhs, ok, count


def _run_btranslate(m, params, jobs):
    names = ["neg", "oneg", "eneg", "odes", "edes", "omaj", "emaj", "lenA", "lenB"]
    binding = {k: f"v_{k}" for k in names}
    left, right = Counter(), Counter()
    images = set()
    ok = True
    for sigma in en.enumerate_group(GroupSpec("B", m)):
        st = all_stats(sigma)
        for S in _subsets(range(1, m + 1)):
            u = en.domino_bij_B(sigma, S)
            images.add(u)
            su = all_stats(u)
            pred = {"neg": 2 * st["neg"], "oneg": st["neg"], "eneg": st["neg"], "odes": len(S),
                    "edes": st["des"], "omaj": sum(S), "emaj": st["maj"],
                    "lenA": 4 * st["lenA"] + len(S), "lenB": 4 * st["lenB"] + len(S) - st["neg"]}
            ok &= all(su[k] == pred[k] for k in pred)
            ok &= en.is_domino_B(u) and en.domino_inv_B(u) == (sigma, frozenset(S))
            left[tuple(sorted(_stat_mono(su, binding).items()))] += 1
            right[tuple(sorted(_stat_mono(pred, binding).items()))] += 1
    ok &= len(images) == 4 ** m * math.factorial(m)
    if m <= 3:
        ok &= len(images) == sum(1 for _ in en.domino_B(2 * m))
    lhs = MultiPoly.from_dicts((dict(k), c) for k, c in left.items())
    rhs = MultiPoly.from_dicts((dict(k), c) for k, c in right.items())
    return lhs, rhs, ok and lhs == rhs, len(images)


SIGMA_BINDING = {"o": "omaj:x,odes:y", "e": "emaj:x,edes:y"}


def _run_bmaxred(n, params, jobs):
    S, form = frozenset(params["S"]), params["form"]
    pos = n if form == "o" else 1
    b = SIGMA_BINDING[form]
    (lhs,), count = genfun_many(GroupSpec("B", n, neg=S), [("sign_length", b, None)], jobs)
    (rhs,), _ = genfun_many(GroupSpec("B", n, neg=S, magnitudes=((pos, n),)), [("sign_length", b, None)], jobs)
    ok = lhs == rhs
    if ok and n <= 5:
        par = 1 if form == "o" else 0
        domain = [s for s in en.enumerate_group(GroupSpec("B", n, neg=S)) if abs(s(pos)) != n]
        try:
            en.check_pairing(domain, lambda s: en.psi_B(s, form), lambda s: (-1) ** all_stats(s)["lenB"],
                             lambda s: (frozenset(i for i in descent_set_B(s) if i % 2 == par), neg_set(s)))
        except AssertionError:
            ok = False
    return lhs, rhs, ok, count


def _run_evenneg(n, params, jobs):
    S, form = frozenset(params["S"]), params["form"]
    (lhs,), count = genfun_many(GroupSpec("B", n, neg=S), [("sign_length", SIGMA_BINDING[form], None)], jobs)
    return _direct(lhs, closed_form("lemma-evenneg", n // 2, S, form).num, count)


def _run_even_odd_neg(n, params, jobs):
    S = frozenset(params["S"])
    (lhs,), count = genfun_many(GroupSpec("B", n, neg=S), [("sign_length", SIGMA_BINDING["e"], None)], jobs)
    return _direct(lhs, closed_form("lemma-even-odd-neg", n // 2, S).num, count)


CORNER_BINDING = {"o": "omaj:x,odes:y,oneg:z1,eneg:z2", "e": "emaj:x,edes:y,oneg:z1,eneg:z2"}


def _corner_cell(params) -> int:
    return 2 * (1 if params["sign"] == "-" else 0) + params["eps"]


def _run_fourcorners(form):
    def run(n, params, jobs):
        cells = twisted_genfun_cells(GroupSpec("B", n), "sign_length", CORNER_BINDING[form], "corner", jobs)
        lhs = cells.get(_corner_cell(params), MultiPoly.const(0))
        count = _corner_count(n, params)
        sign = 1 if params["sign"] == "+" else -1
        if form == "o":
            return _direct(lhs, closed_form("thm-fourcorners", n, sign, params["eps"]).num, count)
        return _cross(lhs, closed_form("thm-efourcorners", n, sign, params["eps"]), count)
    return run


def _corner_count(n: int, params) -> int:
    # sigma(n) sign and neg parity each split B_n evenly for n >= 2
    return 2 ** n * math.factorial(n) // 4


SIGNED_B = {
    "cor-ell-odd": ("B", "sign_length", "ofmaj:x,odes:y,oneg:z"),
    "cor-ell-even": ("B", "sign_length", "efmaj:x,edes:y,eneg:z"),
    "cor-ell-omaj-zero": ("B", "sign_length", "omaj:x,odes:y"),
    "cor-odmaj-odd": ("D", "sign_length", "odmaj:x,odesD:y,onegD:z"),
    "cor-odmaj-even": ("D", "sign_length", "edmaj:x,edesD:y,enegD:z"),
    "cor-ell-neg-odd": ("B", "sign_length_neg", "ofmaj:x,odes:y,oneg:z"),
    "cor-ell-neg-even": ("B", "sign_length_neg", "efmaj:x,edes:y,eneg:z"),
    "thm-neg-char-odd": ("B", "sign_neg", "ofmaj:x,odes:y,oneg:z"),
    "thm-neg-char-even": ("B", "sign_neg", "efmaj:x,edes:y,eneg:z"),
}


def _run_signed_B(identity_id):
    family, chi, binding = SIGNED_B[identity_id]

    def run(n, params, jobs):
        (lhs,), count = genfun_many(GroupSpec(family, n), [(chi, binding, None)], jobs)
        return _direct(lhs, closed_form(identity_id, n).num, count)
    return run


def _run_prop_neg(n, params, jobs):
    S, form = frozenset(params["S"]), params["form"]
    cell = "neg_odd" if form == "o" else "neg_even"
    b = SIGMA_BINDING[form]
    full = twisted_genfun_cells(GroupSpec("B", n), "sign_neg", b, cell, jobs)
    red = twisted_genfun_cells(GroupSpec("B", n, abs_descent_free=form), "sign_neg", b, cell, jobs)
    zero = MultiPoly.const(0)
    lhs, rhs = full.get(_mask(S), zero), red.get(_mask(S), zero)
    kw = {"neg_odd": S} if form == "o" else {"neg_even": S}
    count = en.count(GroupSpec("B", n, **kw))
    ok = lhs == rhs
    if ok and n <= 5:
        par = 1 if form == "o" else 0
        domain = [s for s in en.enumerate_group(GroupSpec("B", n, **kw))
                  if any(i % 2 == par for i in _abs_descents(s))]
        try:
            en.check_pairing(domain, lambda s: en.tilde_neg(s, form), lambda s: (-1) ** len(neg_set(s)),
                             lambda s: (frozenset(i for i in descent_set_B(s) if i % 2 == par),
                                        frozenset(i for i in neg_set(s) if i % 2 == par)))
        except AssertionError:
            ok = False
    return lhs, rhs, ok, count


def _abs_descents(s: SignedPerm):
    a = [abs(v) for v in s]
    return [i for i in range(1, len(a)) if a[i - 1] > a[i]]


# domains

def _J_domain(n):
    return [{"J": J} for J in _subsets(range(1, n))]


def _J_domain_m(m):
    return [{"J": J} for J in _subsets(range(1, 2 * m))]


def _S_domain(n):
    return [{"S": S} for S in _subsets(range(1, n + 1))]


def _S_form_domain(n):
    return [{"S": S, "form": f} for f in ("o", "e") for S in _subsets(range(1, n + 1))]


def _neg_part_domain(n):
    return ([{"S": S, "form": "o"} for S in _subsets(odds(range(1, n + 1)))]
            + [{"S": S, "form": "e"} for S in _subsets(evens(range(1, n + 1)))])


def _corner_domain(n):
    return [{"sign": s, "eps": e} for s in ("+", "-") for e in (0, 1)]


def _build_registry() -> None:
    at_least = lambda k: (lambda r: r >= k)
    _register(IdentitySpec("thm-odd-eulerian", "A",
                           "sum_{S_n} y^lenA q^omaj x^odes * (1+y)^floor(n/2) = [n]_y! prod_{i<=floor(n/2)} (1 + y x q^i)",
                           "cross_multiplied", tuple(range(1, 10)), _run_eulerian("o")))
    _register(IdentitySpec("thm-even-eulerian", "A",
                           "sum_{S_n} y^lenA q^emaj x^edes * (1+y)^floor((n-1)/2) = [n]_y! prod_{i<=floor((n-1)/2)} (1 + y x q^i)",
                           "cross_multiplied", tuple(range(1, 10)), _run_eulerian("e")))
    _register(IdentitySpec("cor-overpartition-odd", "A",
                           "sum_{S_n} q^omaj x^odes / prod_{i<=floor(n/2)} (1 - x q^i) = n!/2^floor(n/2) sum_{overpartitions, part<=floor(n/2)} q^|l| x^len(l), truncated x<=6, q<=21",
                           "direct", tuple(range(1, 9)), _run_overpartition("o")))
    _register(IdentitySpec("cor-overpartition-even", "A",
                           "sum_{S_n} q^emaj x^edes / prod_{i<=floor((n-1)/2)} (1 - x q^i) = n!/2^floor((n-1)/2) sum_{overpartitions, part<=floor((n-1)/2)} q^|l| x^len(l), truncated x<=6, q<=21",
                           "direct", tuple(range(1, 9)), _run_overpartition("e")))
    _register(IdentitySpec("cor-gessel-simion-odd", "A",
                           "sum_{S_n} (-1)^lenA q^omaj = floor(n/2)! prod_{i<=floor(n/2)} (1 - q^i)",
                           "direct", tuple(range(1, 10)), _run_gessel_simion("o")))
    _register(IdentitySpec("cor-gessel-simion-even", "A",
                           "sum_{S_n} (-1)^lenA q^emaj = p_{n+1} floor(n/2)! prod_{i<=floor((n-1)/2)} (1 - q^i)",
                           "direct", tuple(range(1, 10)), _run_gessel_simion("e")))
    _register(IdentitySpec("cor-unimodal", "A",
                           "sum_{S_n} q^omaj and q^emaj equal n!/2^k prod_{i<=k} (1 + q^i) and are symmetric and unimodal",
                           "shape", tuple(range(1, 11)), _run_unimodal,
                           domain=lambda n: [{"form": "o"}, {"form": "e"}]))
    _register(IdentitySpec("prop-overpartition-unimodal", "overpartitions",
                           "P_{n,m}(q) = sum over overpartitions with part<=n and m parts of q^|l| is symmetric about m(n+1)/2 and unimodal",
                           "shape", tuple(range(1, 7)), _run_overpartition_unimodal,
                           domain=lambda n: [{"m": m} for m in range(1, 7)]))
    _register(IdentitySpec("prop-domino-reduction-A", "A",
                           "signed sum of q1^omaj q2^emaj x1^odes x2^edes over S_n^J equals the same sum over domino permutations in S_n^J",
                           "reduction", tuple(range(1, 9)), _run_domino_A, domain=_J_domain))
    _register(IdentitySpec("lemma-atranslate", "A",
                           "u=(sigma,S) in D(S_2m): lenA(u)=4 lenA(sigma)+|S|, odes(u)=|S|, edes(u)=des(sigma), omaj(u)=sum S, emaj(u)=maj(sigma)",
                           "elementwise", tuple(range(1, 5)), _run_atranslate, rank_label="m"))
    _register(IdentitySpec("thm-parabolic-signed", "A",
                           "signed sum over S_2m^J of q1^omaj q2^emaj x1^odes x2^edes = prod_{i in [m], 2i-1 not in J} (1 - x1 q1^i) sum_{S_m^{J_e/2}} q2^maj x2^des",
                           "direct", tuple(range(1, 5)), _run_parabolic_signed, domain=_J_domain_m, rank_label="m"))
    _register(IdentitySpec("cor-bivariate-even-rank", "A",
                           "sum_{S_2m} (-1)^lenA q1^omaj q2^emaj = [m]_{q2}! prod_{i<=m} (1 - q1^i)",
                           "direct", tuple(range(1, 5)), _run_bivariate_even_rank, rank_label="m"))
    _register(IdentitySpec("cor-signed-maj-des", "A",
                           "sum_{S_2m^J} (-1)^lenA q^maj x^des = prod_{i in [m], 2i-1 not in J} (1 - x q^(2i-1)) sum_{S_m^{J_e/2}} q^(2 maj) x^des",
                           "direct", tuple(range(1, 5)), _run_signed_maj_des, domain=_J_domain_m, rank_label="m"))
    _register(IdentitySpec("cor-odd-quotient", "A",
                           "signed sum of q1^omaj q2^emaj x1^odes x2^edes over S_2m^{1,3,...,2m-1} = sum_{S_m} q2^maj x2^des",
                           "direct", tuple(range(1, 5)), _run_odd_quotient, rank_label="m"))
    _register(IdentitySpec("thm-trivial-B-odd", "B",
                           "sum_{B_n} x^ofmaj y^odes z^oneg = n!/2^floor(n/2) (1+xz)^{p_{n+1}} prod_{j<=floor(n/2)} (1+3xz+3yx^2j+yzx^(2j+1))",
                           "direct", tuple(range(2, 9)), _run_trivial("B-odd"), valid=at_least(2)))
    _register(IdentitySpec("thm-trivial-B-even", "B",
                           "sum_{B_n} x^efmaj y^edes z^eneg = n!/2^floor((n-1)/2) (1+y)(1+xz)^{p_n} prod_{j<=floor((n-1)/2)} (1+3xz+3yx^2j+yzx^(2j+1))",
                           "direct", tuple(range(2, 9)), _run_trivial("B-even"), valid=at_least(2)))
    _register(IdentitySpec("thm-trivial-D-odd", "D",
                           "sum_{D_n} x^odmaj y^odesD z^onegD = n!/2^floor(n/2) (1+2zx+yx^n)^{p_n} prod_{j<=floor((n-1)/2)} (1+3xz+3yx^2j+yzx^(2j+1))",
                           "direct", tuple(range(2, 9)), _run_trivial("D-odd"), valid=at_least(2)))
    _register(IdentitySpec("thm-trivial-D-even", "D",
                           "sum_{D_n} x^edmaj y^edesD z^enegD = n!/2^floor((n-1)/2) (1+y)(1+2zx+yx^(n-1))^{p_{n+1}} prod_{j<=floor((n-2)/2)} (1+3xz+3yx^2j+yzx^(2j+1))",
                           "direct", tuple(range(2, 9)), _run_trivial("D-even"), valid=at_least(2)))
    _register(IdentitySpec("prop-bdominored", "B",
                           "for each S, signed sum over Neg(sigma)=S of x1^omaj x2^emaj y1^odes y2^edes equals the sum over signed domino permutations with Neg=S",
                           "reduction", tuple(range(1, 7)), _run_bdominored, domain=_S_domain))
    _register(IdentitySpec("lemma-btranslate", "B",
                           "u=(sigma,S) in D(B_2m): neg(u)=2neg, oneg(u)=eneg(u)=neg(sigma), odes(u)=|S|, edes(u)=des, omaj(u)=sum S, emaj(u)=maj, lenA(u)=4lenA+|S|, lenB(u)=4lenB+|S|-neg",
                           "elementwise", tuple(range(1, 4)), _run_btranslate, rank_label="m"))
    _register(IdentitySpec("lemma-bmaxred", "B",
                           "odd n, each S: signed sum of x^omaj y^odes over Neg=S equals the part with |sigma(n)|=n; for emaj/edes the part with |sigma(1)|=n",
                           "reduction", (3, 5, 7), _run_bmaxred, domain=_S_form_domain,
                           valid=lambda n: n % 2 == 1 and n >= 3))
    _register(IdentitySpec("lemma-evenneg", "B",
                           "n=2m, each S: signed sum of x^omaj y^odes over Neg=S is (-1)^(|S|/2) m! prod_{i<=m}(1-yx^i) if S*=S else 0; the emaj/edes sum is 0",
                           "direct", (2, 4, 6), _run_evenneg, domain=_S_form_domain,
                           valid=lambda n: n % 2 == 0 and n >= 2))
    _register(IdentitySpec("lemma-even-odd-neg", "B",
                           "n=2m+1, each S: signed sum of x^emaj y^edes over Neg=S is y(-1)^((|S|+1)/2) m! prod(1-yx^i) if 1 in S and (S-{1})-1 is *-closed, (-1)^(|S|/2) m! prod(1-yx^i) if 1 not in S and S-1 is *-closed, else 0",
                           "direct", (3, 5, 7), _run_even_odd_neg, domain=_S_domain,
                           valid=lambda n: n % 2 == 1 and n >= 3))
    _register(IdentitySpec("thm-fourcorners", "B",
                           "signed sum of x^omaj y^odes z1^oneg z2^eneg over sigma(n)>0, neg=eps mod 2 is p_eps O_n; over sigma(n)<0 it is -z1 z2^(1-eps) p_{n+eps} O_n",
                           "direct", tuple(range(2, 8)), _run_fourcorners("o"), domain=_corner_domain,
                           valid=at_least(2)))
    _register(IdentitySpec("thm-efourcorners", "B",
                           "signed sum of x^emaj y^edes z1^oneg z2^eneg over sigma(n)>0, neg=eps mod 2 is (-yz1)^eps p_{n+1} O_n/(1-z1z2); the sigma(n)<0 cell carries an extra -z1z2",
                           "cross_multiplied", tuple(range(2, 8)), _run_fourcorners("e"), domain=_corner_domain,
                           valid=at_least(2)))
    _register(IdentitySpec("cor-ell-odd", "B",
                           "sum_{B_n} (-1)^lenB x^ofmaj y^odes z^oneg = floor(n/2)! (1-xz)^ceil(n/2) prod_{i<=floor(n/2)} (1-yx^2i)",
                           "direct", tuple(range(2, 9)), _run_signed_B("cor-ell-odd"), valid=at_least(2)))
    _register(IdentitySpec("cor-ell-even", "B",
                           "sum_{B_n} (-1)^lenB x^efmaj y^edes z^eneg = p_{n+1} floor(n/2)! (1-xz)^floor(n/2) prod_{0<=i<=floor(n/2)} (1-yx^2i)",
                           "direct", tuple(range(2, 9)), _run_signed_B("cor-ell-even"), valid=at_least(2)))
    _register(IdentitySpec("cor-ell-omaj-zero", "B",
                           "sum_{B_n} (-1)^lenB x^omaj y^odes = 0",
                           "direct", tuple(range(2, 9)), _run_signed_B("cor-ell-omaj-zero"), valid=at_least(2)))
    _register(IdentitySpec("cor-odmaj-odd", "D",
                           "sum_{D_n} (-1)^lenD x^odmaj y^odesD z^onegD = floor(n/2)! (1-xz)^floor((n-1)/2) prod_{i<=floor(n/2)} (1-yx^2i)",
                           "direct", tuple(range(2, 9)), _run_signed_B("cor-odmaj-odd"), valid=at_least(2)))
    _register(IdentitySpec("cor-odmaj-even", "D",
                           "sum_{D_n} (-1)^lenD x^edmaj y^edesD z^enegD = p_{n+1} floor(n/2)! (1+y)(1-xz)^floor((n-2)/2) prod_{i<=floor(n/2)} (1-yx^2i)",
                           "direct", tuple(range(2, 9)), _run_signed_B("cor-odmaj-even"), valid=at_least(2)))
    _register(IdentitySpec("cor-ell-neg-odd", "B",
                           "sum_{B_n} (-1)^(lenB+neg) x^ofmaj y^odes z^oneg = floor(n/2)! (1+xz)^{p_{n+1}} (1-xz)^floor(n/2) prod_{i<=floor(n/2)} (1-yx^2i)",
                           "direct", tuple(range(2, 9)), _run_signed_B("cor-ell-neg-odd"), valid=at_least(2)))
    _register(IdentitySpec("cor-ell-neg-even", "B",
                           "sum_{B_n} (-1)^(lenB+neg) x^efmaj y^edes z^eneg = p_{n+1} floor(n/2)! (1+y)(1-xz)^floor(n/2) prod_{i<=floor(n/2)} (1-yx^2i)",
                           "direct", tuple(range(2, 9)), _run_signed_B("cor-ell-neg-even"), valid=at_least(2)))
    _register(IdentitySpec("prop-neg-reduction", "B",
                           "for S among the odd (even) positions: sum over Neg(sigma)_o=S of (-1)^neg x^omaj y^odes equals the part with odes(|sigma|)=0; likewise for the even statistics",
                           "reduction", tuple(range(2, 9)), _run_prop_neg, domain=_neg_part_domain,
                           valid=at_least(2)))
    _register(IdentitySpec("thm-neg-char-odd", "B",
                           "sum_{B_n} (-1)^neg x^ofmaj y^odes z^oneg = n!/2^floor(n/2) (1-xz)^ceil(n/2) prod_{i<=floor(n/2)} (1-yx^2i)",
                           "direct", tuple(range(2, 9)), _run_signed_B("thm-neg-char-odd"), valid=at_least(2)))
    _register(IdentitySpec("thm-neg-char-even", "B",
                           "sum_{B_n} (-1)^neg x^efmaj y^edes z^eneg = n!/2^floor((n-1)/2) (1-xz)^floor(n/2) prod_{0<=i<=floor((n-1)/2)} (1-yx^2i)",
                           "direct", tuple(range(2, 9)), _run_signed_B("thm-neg-char-even"), valid=at_least(2)))
    fixed = lambda k: (lambda r: r == k)
    _register(IdentitySpec("s5-signed-bivariate", "A",
                           "sum_{S_5} (-1)^lenA x^(2omaj-odes) y^(2emaj) = (1+y^2)(1+x^3+xy^4+x^4y^4-2x^3y^2-2xy^2)",
                           "direct", (5,), _run_s5_signed, valid=fixed(5)))
    _register(IdentitySpec("b5-signed-bivariate", "B",
                           "sum_{B_5} (-1)^lenB x1^ofmaj x2^efmaj = (1-x1)(1-x1x2)^2(1+x2^2)(x1^6x2^4-2x1^4x2^2+x1^2x2^4+x1^4-2x1^2x2^2+1)",
                           "direct", (5,), _run_regression("b5-signed-bivariate", GroupSpec("B", 5), "sign_length", "ofmaj:x1,efmaj:x2"),
                           valid=fixed(5)))
    _register(IdentitySpec("s4-quotient-omaj", "A", "sum over S_4^{2} of q^omaj = 1 + 3q + 3q^2 + 5q^3",
                           "direct", (4,), _run_regression("s4-quotient-omaj", GroupSpec("A", 4, quotient={2}), "trivial", "omaj:q"),
                           valid=fixed(4)))
    _register(IdentitySpec("s5-quotient-emaj", "A", "sum over S_5^{1,3} of q^emaj = 1 + 9q + 4q^2 + 16q^3",
                           "direct", (5,), _run_regression("s5-quotient-emaj", GroupSpec("A", 5, quotient={1, 3}), "trivial", "emaj:q"),
                           valid=fixed(5)))
    _register(IdentitySpec("s3-bivariate", "A", "sum_{S_3} q1^omaj q2^emaj = 1 + 2q1 + 2q2 + q1q2",
                           "direct", (3,), _run_regression("s3-bivariate", GroupSpec("A", 3), "trivial", "omaj:q1,emaj:q2"),
                           valid=fixed(3)))


_build_registry()


def _canonical_params(spec: IdentitySpec, rank: int, params: dict | None) -> dict:
    domain = spec.domain(rank)
    if params is None:
        if len(domain) != 1:
            raise ValueError(f"{spec.id} needs parameters; domain keys {sorted(domain[0])}")
        return domain[0]
    norm = {}
    for k, v in params.items():
        if k in ("J", "S"):
            v = sorted(int(t) for t in v)
        norm[k] = v
    if norm not in domain:
        raise ValueError(f"parameters {norm} are outside the domain of {spec.id} at rank {rank}")
    return next(d for d in domain if d == norm)


def verify(identity_id: str, rank: int, params: dict | None = None, jobs: int = 1) -> IdentityReport:
    """Check one identity at one rank and parameter choice."""
    spec = get(identity_id)
    if not spec.valid(rank):
        raise ValueError(f"rank {rank} is outside the domain of {identity_id}")
    params = _canonical_params(spec, rank, params)
    t0 = time.perf_counter()
    lhs, rhs, equal, count = spec.run(rank, params, jobs)
    ms = int(round((time.perf_counter() - t0) * 1000))
    return IdentityReport(identity_id, rank, dict(params), bool(equal), str(lhs), str(rhs), int(count), ms)


def verify_rank(identity_id: str, rank: int, jobs: int = 1) -> list[IdentityReport]:
    spec = get(identity_id)
    return [verify(identity_id, rank, p, jobs) for p in spec.domain(rank)]


def verify_id(identity_id: str, n_max: int | None = None, jobs: int = 1) -> Iterator[IdentityReport]:
    spec = get(identity_id)
    ranks = spec.ranks if n_max is None else tuple(r for r in spec.ranks if r <= n_max)
    if n_max is not None and n_max > max(spec.ranks):
        ranks = ranks + tuple(r for r in range(max(spec.ranks) + 1, n_max + 1) if spec.valid(r))
    for r in ranks:
        yield from verify_rank(identity_id, r, jobs)


def verify_all(n_max: int | None = None, jobs: int = 1) -> Iterator[IdentityReport]:
    for identity_id in REGISTRY:
        yield from verify_id(identity_id, n_max if n_max is None else min(n_max, max(REGISTRY[identity_id].ranks)), jobs)


# pairing dumps for the reduction identities

def pairing_dump(identity_id: str, rank: int, params: dict | None = None) -> list[tuple]:
    """The 2-cycles of the involution that cancels the terms a reduction identity drops."""
    spec = get(identity_id)
    params = _canonical_params(spec, rank, params)
    n = rank
    if identity_id == "prop-domino-reduction-A":
        domain = en.enumerate_group(GroupSpec("A", n, quotient=frozenset(params["J"]), domino=False))
        key = lambda s: frozenset(i for i in range(1, n) if s(i) > s(i + 1))
        return en.check_pairing(domain, en.iota_A, lambda s: (-1) ** all_stats(s)["lenA"], key)
    if identity_id == "prop-bdominored":
        domain = en.enumerate_group(GroupSpec("B", n, neg=params["S"], domino=False))
        return en.check_pairing(domain, en.phi_B, lambda s: (-1) ** all_stats(s)["lenB"],
                                lambda s: (descent_set_B(s), neg_set(s)))
    if identity_id == "lemma-bmaxred":
        form = params["form"]
        pos, par = (n, 1) if form == "o" else (1, 0)
        domain = [s for s in en.enumerate_group(GroupSpec("B", n, neg=params["S"])) if abs(s(pos)) != n]
        return en.check_pairing(domain, lambda s: en.psi_B(s, form), lambda s: (-1) ** all_stats(s)["lenB"],
                                lambda s: frozenset(i for i in descent_set_B(s) if i % 2 == par))
    if identity_id == "prop-neg-reduction":
        form = params["form"]
        par = 1 if form == "o" else 0
        kw = {"neg_odd": params["S"]} if form == "o" else {"neg_even": params["S"]}
        domain = [s for s in en.enumerate_group(GroupSpec("B", n, **kw))
                  if any(i % 2 == par for i in _abs_descents(s))]
        return en.check_pairing(domain, lambda s: en.tilde_neg(s, form), lambda s: (-1) ** len(neg_set(s)),
                                lambda s: frozenset(i for i in descent_set_B(s) if i % 2 == par))
    if identity_id == "lemma-evenneg" and params["form"] == "e":
        domain = en.enumerate_group(GroupSpec("B", n, neg=params["S"]))
        return en.check_pairing(domain, en.first_pair_B, lambda s: (-1) ** all_stats(s)["lenB"],
                                lambda s: frozenset(i for i in descent_set_B(s) if i % 2 == 0))
    raise ValueError(f"{identity_id} has no pairing dump")


# weight searches

def distribution(family: str, n: int, stat: str, include_zero: bool = True) -> MultiPoly:
    """sum over the group of x^stat."""
    if stat == "oddlenB" and not include_zero:
        counts = Counter(odd_length_B(s, include_zero=False) for s in en.enumerate_group(GroupSpec("B", n)))
        return MultiPoly(("x",), {(k,): c for k, c in counts.items()})
    return twisted_genfun(GroupSpec(family, n), "trivial", f"{stat}:x")


def _univariate(target: MultiPoly) -> list[int]:
    if len(target.variables) > 1:
        raise ValueError("target must be a polynomial in one variable")
    coeffs = target.coefficients()
    if any(c < 0 for c in coeffs):
        raise ValueError("target must have nonnegative coefficients")
    return coeffs


def _grid_search(classes: np.ndarray, counts: np.ndarray, target: list[int], width: int):
    """First weight vector w (lexicographic in {0..deg}^width) with sum counts * x^(classes @ w) == target."""
    deg = len(target) - 1
    tvec = np.array(target + [0], dtype=np.int64)
    axes = [np.arange(deg + 1, dtype=np.int64)] * width
    total = (deg + 1) ** width
    step = max(1, (1 << 22) // max(1, len(classes)))
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        grid = np.empty((len(idx), width), dtype=np.int64)
        rest = idx.copy()
        for k in range(width - 1, -1, -1):
            grid[:, k] = rest % (deg + 1)
            rest //= deg + 1
        E = np.minimum(grid @ classes.T, deg + 1)
        hist = np.zeros((len(idx), deg + 2), dtype=np.int64)
        rows = np.repeat(np.arange(len(idx)), classes.shape[0])
        np.add.at(hist, (rows, E.ravel()), np.tile(counts, len(idx)))
        hit = np.nonzero((hist == tvec).all(axis=1))[0]
        if len(hit):
            return tuple(int(v) for v in grid[hit[0]])
    return None


def search_descent_major_A(n: int, target: MultiPoly):
    """Weights j_1..j_{n-1} in {0..deg target} with sum_{S_n} x^(sum_{i in D} j_i) == target, or None."""
    if not 1 <= n <= 6:
        raise ValueError("search_descent_major_A covers 1 <= n <= 6")
    coeffs = _univariate(target)
    if not coeffs:
        return None
    F = descent_set_genfun(n)
    names = [f"x{i}" for i in range(1, n)]
    classes, counts = [], []
    for e, c in F.exponent_dicts():
        classes.append([e.get(v, 0) for v in names])
        counts.append(c)
    if n == 1:
        return () if coeffs == [math.factorial(n)] else None
    return _grid_search(np.array(classes, dtype=np.int64), np.array(counts, dtype=np.int64), coeffs, n - 1)


def search_descent_neg_major_B(n: int, target: MultiPoly):
    """Weights (j_0..j_{n-1}) on descent positions and (k_1..k_n) on negative positions, or None.

    Matches sum_{B_n} x^(sum_{i in D} j_i + sum_{i in Neg} k_i) against target.
    """
    if not 1 <= n <= 3:
        raise ValueError("search_descent_neg_major_B covers 1 <= n <= 3")
    coeffs = _univariate(target)
    if not coeffs:
        return None
    tally = Counter()
    for s in en.enumerate_group(GroupSpec("B", n)):
        D, N = descent_set_B(s), neg_set(s)
        tally[tuple(int(i in D) for i in range(n)) + tuple(int(i in N) for i in range(1, n + 1))] += 1
    classes = np.array(list(tally), dtype=np.int64)
    counts = np.array(list(tally.values()), dtype=np.int64)
    hit = _grid_search(classes, counts, coeffs, 2 * n)
    return None if hit is None else (hit[:n], hit[n:])
