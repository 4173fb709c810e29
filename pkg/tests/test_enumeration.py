import itertools
import math

import pytest

from oddmaj import enumeration as en
from oddmaj.batch import blocks
from oddmaj.enumeration import (
    CeilingExceeded, GroupSpec, Overpartition, ceilings_lifted, check_pairing, count,
    domino_A, domino_B, domino_bij_A, domino_bij_B, domino_inv_A, domino_inv_B,
    enumerate_group, first_pair_B, iota_A, is_domino_A, is_domino_B, overpartition_poly,
    overpartitions, phi_B, psi_B, rank_A, rank_B, tilde_neg, unrank_A, unrank_B,
)
from oddmaj.perms import Perm, SignedPerm, descent_set_A, descent_set_B, neg_set, star
from oddmaj.poly import MultiPoly
from oddmaj.stats import all_stats


def _all_B(n):
    for p in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            yield SignedPerm(tuple(s * v for s, v in zip(signs, p)))


def test_group_orders():
    assert count(GroupSpec("A", 3)) == 6
    assert count(GroupSpec("B", 2)) == 8
    assert count(GroupSpec("D", 3)) == 24
    assert count(GroupSpec("A", 4, quotient={2})) == 12
    assert count(GroupSpec("B", 2, signs=((2, 1),), neg_parity=0)) == 2
    assert sum(1 for _ in enumerate_group(GroupSpec("B", 2, signs=((2, 1),), neg_parity=0))) == 2


def test_stream_is_lexicographic():
    for spec in (GroupSpec("A", 4), GroupSpec("B", 3), GroupSpec("D", 3)):
        xs = [tuple(x) for x in enumerate_group(spec)]
        assert xs == sorted(xs)
        assert len(xs) == len(set(xs)) == spec.order


@pytest.mark.parametrize("n", range(1, 7))
def test_quotient_matches_descent_definition(n):
    group = list(enumerate_group(GroupSpec("A", n)))
    for r in range(n):
        for J in itertools.combinations(range(1, n), r):
            got = list(enumerate_group(GroupSpec("A", n, quotient=J)))
            assert got == [p for p in group if not descent_set_A(p) & set(J)]
            assert count(GroupSpec("A", n, quotient=J)) == len(got)


def _brute(n, pred):
    return sorted(tuple(s) for s in _all_B(n) if pred(s))


@pytest.mark.parametrize("n", range(1, 5))
def test_signed_filters_match_brute_force(n):
    cases = [
        (dict(neg={1}), lambda s: neg_set(s) == {1}),
        (dict(neg_parity=1), lambda s: len(neg_set(s)) % 2 == 1),
        (dict(neg_odd={1}), lambda s: {i for i in neg_set(s) if i % 2} == {1}),
        (dict(neg_even=set()), lambda s: not {i for i in neg_set(s) if i % 2 == 0}),
        (dict(signs=((n, -1),)), lambda s: s(n) < 0),
        (dict(magnitudes=((1, n),)), lambda s: abs(s(1)) == n),
        (dict(domino=True), is_domino_B),
        (dict(abs_descent_free="o"),
         lambda s: not any(i % 2 and abs(s(i)) > abs(s(i + 1)) for i in range(1, n))),
    ]
    for kw, pred in cases:
        spec = GroupSpec("B", n, **kw)
        want = _brute(n, pred)
        assert [tuple(s) for s in enumerate_group(spec)] == want
        assert count(spec) == len(want)
        got = sorted(tuple(int(v) for v in row) for W in blocks(spec) for row in W)
        assert got == want


def test_rank_unrank():
    for n in range(1, 6):
        for r, p in enumerate(enumerate_group(GroupSpec("A", n))):
            assert rank_A(p) == r and unrank_A(n, r) == p
    for n in range(1, 4):
        for r, s in enumerate(enumerate_group(GroupSpec("B", n))):
            assert rank_B(s) == r and unrank_B(n, r) == s


@pytest.mark.parametrize("spec", [GroupSpec("A", 5, quotient={2}), GroupSpec("B", 3, neg_parity=0),
                                  GroupSpec("D", 4), GroupSpec("B", 3, domino=False)])
def test_chunks_concatenate_to_stream(spec):
    full = list(enumerate_group(spec))
    for k in (1, 3, 7):
        assert [x for i in range(k) for x in enumerate_group(spec, chunk=(i, k))] == full


def test_ceilings():
    with pytest.raises(CeilingExceeded):
        GroupSpec("B", 9)
    with pytest.raises(CeilingExceeded):
        GroupSpec("A", 11)
    assert GroupSpec("B", 9, force=True).order == 2 ** 9 * math.factorial(9)
    with ceilings_lifted():
        GroupSpec("D", 9)
    with pytest.raises(CeilingExceeded):
        GroupSpec("D", 9)


def test_spec_validation():
    with pytest.raises(ValueError):
        GroupSpec("B", 3, quotient={1})
    with pytest.raises(ValueError):
        GroupSpec("A", 3, neg={1})
    with pytest.raises(ValueError):
        GroupSpec("A", 3, quotient={3})
    with pytest.raises(ValueError):
        GroupSpec("C", 3)


# domino permutations

def _domino_oracle(x):
    n = len(x)
    pos = {abs(v): i for i, v in enumerate(x, 1)}
    sgn = {abs(v): (1 if v > 0 else -1) for v in x}
    return all(abs(sgn[i] * pos[i] - sgn[star(i, n)] * pos[star(i, n)]) <= 1 for i in range(1, n + 1))


def test_domino_examples():
    assert is_domino_A(Perm.parse("21534"))
    assert not is_domino_A(Perm.parse("23541"))
    assert sum(1 for _ in domino_A(5)) == 24
    assert is_domino_B(SignedPerm.parse("[-3,-4,5,2,1]"))
    assert not is_domino_B(SignedPerm.parse("[3,-4,1,2]"))
    for n in range(1, 9):
        assert is_domino_A(Perm.identity(n))


@pytest.mark.parametrize("n", range(1, 8))
def test_domino_A_count_and_oracle(n):
    got = list(domino_A(n))
    assert len(got) == 2 ** (n // 2) * math.factorial((n + 1) // 2)
    assert got == [p for p in enumerate_group(GroupSpec("A", n)) if _domino_oracle(tuple(p))]


@pytest.mark.parametrize("n", range(1, 6))
def test_domino_B_oracle(n):
    got = list(domino_B(n))
    assert got == [s for s in enumerate_group(GroupSpec("B", n)) if _domino_oracle(tuple(s))]


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_domino_value_side_equivalence(n):
    for p in enumerate_group(GroupSpec("A", n)):
        value_side = all(abs(p(i) - p(star(i, n))) <= 1 for i in range(1, n + 1))
        assert is_domino_A(p) == value_side


def test_domino_bijection_examples():
    assert domino_bij_A(Perm.parse("4213"), {2, 3}) == Perm.parse("78432156")
    assert domino_bij_B(SignedPerm.parse("[3,-1,-2,5,-4]"), {1, 4, 5}) == \
        SignedPerm.parse("[6,5,-2,-1,-4,-3,10,9,-7,-8]")
    for m in range(1, 4):
        assert domino_bij_A(Perm.identity(m), ()) == Perm.identity(2 * m)
        assert domino_bij_B(SignedPerm.identity(m), ()) == SignedPerm.identity(2 * m)


@pytest.mark.parametrize("m", range(1, 5))
def test_domino_bijection_A_is_onto(m):
    image = {}
    for sigma in enumerate_group(GroupSpec("A", m)):
        for r in range(m + 1):
            for S in itertools.combinations(range(1, m + 1), r):
                u = domino_bij_A(sigma, S)
                assert domino_inv_A(u) == (sigma, frozenset(S))
                st_s, st_u = all_stats(sigma), all_stats(u)
                assert st_u["lenA"] == 4 * st_s["lenA"] + len(S)
                assert (st_u["odes"], st_u["edes"]) == (len(S), st_s["des"])
                assert (st_u["omaj"], st_u["emaj"]) == (sum(S), st_s["maj"])
                image[u] = (sigma, S)
    assert set(image) == set(domino_A(2 * m))


@pytest.mark.parametrize("m", range(1, 4))
def test_domino_bijection_A_restricts_to_quotients(m):
    n = 2 * m
    for r in range(n):
        for J in itertools.combinations(range(1, n), r):
            half = {j // 2 for j in J if j % 2 == 0}
            free = [i for i in range(1, m + 1) if 2 * i - 1 not in J]
            image = {domino_bij_A(sigma, S)
                     for sigma in enumerate_group(GroupSpec("A", m, quotient=half))
                     for k in range(len(free) + 1) for S in itertools.combinations(free, k)}
            assert image == set(enumerate_group(GroupSpec("A", n, quotient=J, domino=True)))


@pytest.mark.parametrize("m", range(1, 4))
def test_domino_bijection_B_is_onto(m):
    image = set()
    for sigma in enumerate_group(GroupSpec("B", m)):
        for r in range(m + 1):
            for S in itertools.combinations(range(1, m + 1), r):
                u = domino_bij_B(sigma, S)
                assert domino_inv_B(u) == (sigma, frozenset(S))
                s, t = all_stats(sigma), all_stats(u)
                assert t["neg"] == 2 * s["neg"] and t["oneg"] == t["eneg"] == s["neg"]
                assert (t["odes"], t["edes"], t["omaj"], t["emaj"]) == (len(S), s["des"], sum(S), s["maj"])
                assert t["lenB"] == 4 * s["lenB"] + len(S) - s["neg"]
                image.add(u)
    assert image == set(domino_B(2 * m))
    assert len(image) == 2 ** m * 2 ** m * math.factorial(m)


# involutions

def _lenA_sign(x):
    return (-1) ** all_stats(x)["lenA"]


def _lenB_sign(x):
    return (-1) ** all_stats(x)["lenB"]


@pytest.mark.parametrize("n", range(1, 7))
def test_iota_pairs_non_domino_elements(n):
    domain = [p for p in enumerate_group(GroupSpec("A", n)) if not is_domino_A(p)]
    pairs = check_pairing(domain, iota_A, _lenA_sign, descent_set_A)
    assert 2 * len(pairs) == len(domain)
    if domain:
        with pytest.raises(ValueError):
            iota_A(Perm.identity(n))


def test_iota_cancels_the_signed_sum_on_S5():
    total = {}
    for p in enumerate_group(GroupSpec("A", 5, domino=False)):
        k = all_stats(p)["omaj"]
        total[k] = total.get(k, 0) + _lenA_sign(p)
    assert not any(total.values())


@pytest.mark.parametrize("n", range(1, 6))
def test_phi_pairs_non_domino_signed(n):
    domain = [s for s in enumerate_group(GroupSpec("B", n)) if not is_domino_B(s)]
    check_pairing(domain, phi_B, _lenB_sign, lambda s: (descent_set_B(s), neg_set(s)))
    with pytest.raises(ValueError):
        phi_B(SignedPerm.identity(n))


@pytest.mark.parametrize("n", [1, 3, 5])
@pytest.mark.parametrize("form", ["o", "e"])
def test_psi_pairs(n, form):
    pos, parity = (n, 1) if form == "o" else (1, 0)
    domain = [s for s in enumerate_group(GroupSpec("B", n)) if abs(s(pos)) != n]
    check_pairing(domain, lambda s: psi_B(s, form), _lenB_sign,
                  lambda s: (neg_set(s), {i for i in descent_set_B(s) if i % 2 == parity}))
    outside = SignedPerm.identity(n) if form == "o" else SignedPerm(tuple(range(n, 0, -1)))
    with pytest.raises(ValueError):
        psi_B(outside, form)
    if n > 1:
        with pytest.raises(ValueError):
            psi_B(SignedPerm.identity(n - 1), form)


@pytest.mark.parametrize("n", range(2, 6))
@pytest.mark.parametrize("form", ["o", "e"])
def test_tilde_neg_pairs(n, form):
    parity = 1 if form == "o" else 0

    def in_domain(s):
        return any(i % 2 == parity and abs(s(i)) > abs(s(i + 1)) for i in range(1, n))

    domain = [s for s in enumerate_group(GroupSpec("B", n)) if in_domain(s)]
    check_pairing(domain, lambda s: tilde_neg(s, form), lambda s: (-1) ** len(neg_set(s)),
                  lambda s: ({i for i in neg_set(s) if i % 2 == parity},
                             {i for i in descent_set_B(s) if i % 2 == parity}))
    with pytest.raises(ValueError):
        tilde_neg(SignedPerm.identity(n), form)


@pytest.mark.parametrize("n", [2, 4])
def test_first_pair_pairs(n):
    check_pairing(list(enumerate_group(GroupSpec("B", n))), first_pair_B, _lenB_sign,
                  lambda s: (neg_set(s), {i for i in descent_set_B(s) if i % 2 == 0}))
    with pytest.raises(ValueError):
        first_pair_B(SignedPerm.identity(3))


def test_check_pairing_rejects_fixed_points():
    with pytest.raises(AssertionError):
        check_pairing([Perm.identity(2)], lambda p: p, _lenA_sign, descent_set_A)


# overpartitions

def _overpartition_count(max_part, weight):
    """Partitions of `weight` into parts <= max_part, each weighted by 2^(distinct parts)."""
    def parts(w, cap):
        if w == 0:
            yield ()
            return
        for p in range(min(w, cap), 0, -1):
            for rest in parts(w - p, p):
                yield (p,) + rest
    return sum(2 ** len(set(lam)) for lam in parts(weight, max_part))


def test_overpartitions_of_three():
    small = list(overpartitions(2, weight=3))
    assert len(small) == 6
    assert {str(o) for o in small} == {"(2,1)", "(2̄,1)", "(2,1̄)", "(2̄,1̄)", "(1,1,1)", "(1,1,1̄)"}
    assert len(list(overpartitions(3, weight=3))) == 8 == _overpartition_count(3, 3)


def test_overpartition_counts_against_oracle():
    for max_part in range(0, 5):
        for w in range(0, 9):
            assert sum(1 for _ in overpartitions(max_part, weight=w)) == _overpartition_count(max_part, w)


def test_overpartition_edge_cases():
    assert [o.parts for o in overpartitions(0, max_length=3)] == [()]
    with pytest.raises(ValueError):
        list(overpartitions(2))
    with pytest.raises(ValueError):
        Overpartition((1, 2))
    with pytest.raises(ValueError):
        Overpartition((2, 1), {3})


def test_overpartition_poly():
    P22 = overpartition_poly(2, 2)
    assert P22 == MultiPoly.parse("2*q^2 + 4*q^3 + 2*q^4")
    assert P22.is_symmetric(3)
