import json

import pytest

from oddmaj.enumeration import GroupSpec, enumerate_group
from oddmaj.genfun import twisted_genfun
from oddmaj.identities import (
    REGISTRY, distribution, get, pairing_dump, search_descent_major_A,
    search_descent_neg_major_B, verify, verify_id, verify_rank,
)
from oddmaj.perms import descent_set_B, neg_set
from oddmaj.poly import MultiPoly

P = MultiPoly.parse


def test_registry_size_and_lookup():
    assert len(REGISTRY) >= 30
    with pytest.raises(KeyError, match="unknown identity"):
        get("bogus-id")
    with pytest.raises(KeyError):
        verify("bogus-id", 3)


def test_odd_eulerian_base_case():
    r = verify("thm-odd-eulerian", 2)
    assert r.equal
    assert twisted_genfun(GroupSpec("A", 2), "trivial", "lenA:y,omaj:q,odes:x") == P("1 + q*x*y")
    assert r.lhs == str(P("1 + q*x*y") * P("1 + y"))


def test_ell_odd_base_case():
    r = verify("cor-ell-odd", 2)
    assert r.equal
    assert r.lhs == r.rhs == str(P("1 - x*z") * P("1 - x^2*y"))


def test_fourcorners_zero_cell():
    r = verify("thm-fourcorners", 3, {"sign": "+", "eps": 1})
    assert r.equal and r.lhs == r.rhs == "0"


def test_evenneg_even_form_vanishes():
    reports = [r for r in verify_rank("lemma-evenneg", 4) if r.params["form"] == "e"]
    assert len(reports) == 16
    assert all(r.equal and r.lhs == "0" for r in reports)


def test_parameters_are_validated():
    with pytest.raises(ValueError):
        verify("thm-fourcorners", 3)
    with pytest.raises(ValueError):
        verify("thm-fourcorners", 3, {"sign": "+", "eps": 2})
    with pytest.raises(ValueError):
        verify("lemma-evenneg", 3, {"S": [], "form": "o"})
    r = verify("prop-domino-reduction-A", 4, {"J": {3, 1}})
    assert r.params == {"J": [1, 3]} and r.equal


def test_reports_are_deterministic():
    a = [r.to_json(include_ms=False) for r in verify_id("thm-trivial-B-odd", 5)]
    b = [r.to_json(include_ms=False) for r in verify_id("thm-trivial-B-odd", 5)]
    assert a == b
    d = json.loads(a[0])
    assert list(d) == ["id", "rank", "params", "equal", "lhs", "rhs", "count"]
    assert [r.rank for r in verify_id("thm-trivial-B-odd", 6)] == [2, 3, 4, 5, 6]
    assert verify("s3-bivariate", 3).line() == "PASS s3-bivariate rank=3 count=6"


def test_failed_report_carries_both_sides():
    r = verify("thm-trivial-D-even", 3)
    assert r.equal
    from oddmaj.identities import IdentityReport
    bad = IdentityReport("x", 1, {}, False, "1", "2", 1, 0)
    assert bad.line().startswith("FAIL") and bad.to_dict()["lhs"] == "1"


@pytest.mark.parametrize("identity_id,rank,params", [
    ("prop-domino-reduction-A", 5, {"J": []}),
    ("prop-domino-reduction-A", 6, {"J": [2, 3]}),
    ("prop-bdominored", 4, {"S": [1, 4]}),
    ("lemma-bmaxred", 5, {"S": [2], "form": "o"}),
    ("lemma-bmaxred", 3, {"S": [1, 3], "form": "e"}),
    ("prop-neg-reduction", 5, {"S": [1, 3], "form": "o"}),
    ("prop-neg-reduction", 4, {"S": [2], "form": "e"}),
    ("lemma-evenneg", 4, {"S": [3], "form": "e"}),
])
def test_pairing_dumps_are_perfect_matchings(identity_id, rank, params):
    pairs = pairing_dump(identity_id, rank, params)
    assert pairs
    flat = [x for pair in pairs for x in pair]
    assert len(flat) == len(set(flat))


def test_pairing_dump_unsupported():
    with pytest.raises(ValueError):
        pairing_dump("cor-ell-odd", 3)


def test_search_descent_major_A():
    assert search_descent_major_A(5, distribution("A", 5, "oddlenA")) is None
    assert distribution("A", 5, "oddlenA") == P("1 + 12*x + 23*x^2 + 48*x^3 + 23*x^4 + 12*x^5 + x^6")
    assert search_descent_major_A(2, P("1 + x")) == (1,)
    assert search_descent_major_A(3, P("1 + 2*q + 2*q^2 + q^3")) == (1, 2)
    with pytest.raises(ValueError):
        search_descent_major_A(7, P("1 + x"))
    with pytest.raises(ValueError):
        search_descent_major_A(3, P("1 + x*y"))


def test_search_descent_neg_major_B():
    assert search_descent_neg_major_B(1, P("1 + x")) == ((0,), (1,))
    hit = search_descent_neg_major_B(2, distribution("B", 2, "fmaj"))
    assert hit is not None


def _weighted(n, j, k):
    items = [({"x": sum(j[i] for i in descent_set_B(s)) + sum(k[i - 1] for i in neg_set(s))}, 1)
             for s in enumerate_group(GroupSpec("B", n))]
    return MultiPoly.from_dicts(items)


def test_odd_length_B_is_reachable_on_B2():
    """On B_2 the odd length is equidistributed with a descent-plus-negative weighting.

    With the index 0 included it matches [1 in Des] + neg; counted on [+-n]
    alone it matches neg.
    """
    with_zero = distribution("B", 2, "oddlenB")
    without = distribution("B", 2, "oddlenB", include_zero=False)
    assert with_zero == P("1 + 3*x + 3*x^2 + x^3")
    assert without == P("2 + 4*x + 2*x^2")
    assert with_zero == _weighted(2, (0, 1), (1, 1))
    assert without == _weighted(2, (0, 0), (1, 1))
    assert search_descent_neg_major_B(2, with_zero) == ((0, 1), (1, 1))
    assert search_descent_neg_major_B(2, without) == ((0, 0), (1, 1))


def test_odd_length_B_on_B3():
    with_zero = distribution("B", 3, "oddlenB")
    assert search_descent_neg_major_B(3, with_zero) == ((0, 2, 3), (1, 0, 0))
    assert with_zero == _weighted(3, (0, 2, 3), (1, 0, 0))
    without = distribution("B", 3, "oddlenB", include_zero=False)
    assert without == P("2 + 16*x + 12*x^2 + 16*x^3 + 2*x^4")
    assert search_descent_neg_major_B(3, without) is None
