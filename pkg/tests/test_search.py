from __future__ import annotations

import json
import time

import pytest

import oracles
from linsets.errors import BadDims, InternalContradiction, NotPrime, TooLarge
from linsets.field import make_field
from linsets.search import (
    SearchReport,
    _finish,
    enumerate_subspaces,
    gaussian_binomial,
    iter_subspaces,
    probe_critpair_minsize,
    verify_bridge_exhaustive,
    verify_bridge_random,
    verify_kneser_exhaustive,
    verify_min_size_type2,
    verify_prime_complementary,
    verify_vosper_exhaustive,
)


def test_gaussian_binomial_against_counts():
    for n in range(0, 7):
        for k in range(0, n + 1):
            for q in (2, 3):
                assert gaussian_binomial(n, k, q) == oracles.count_subspaces(q, n, k)
    for n, k in ((4, 2), (5, 2), (5, 3)):
        assert gaussian_binomial(n, k, 2) == oracles.brute_subspace_count(2, n, k)
    assert gaussian_binomial(3, 5, 2) == 0


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (2, 5, 3), (3, 3, 1), (3, 3, 2), (2, 4, 0), (2, 4, 4)])
def test_iter_subspaces_is_complete_and_distinct(q, n, k):
    ctx = make_field(q, 1, n)
    subs = list(iter_subspaces(ctx, n, k))
    assert len(subs) == gaussian_binomial(n, k, q)
    assert len({S.rows for S in subs}) == len(subs)
    assert all(S.dim == k for S in subs)
    # ranges concatenate to the full stream
    total = len(subs)
    cut = total // 3
    parts = list(iter_subspaces(ctx, n, k, 0, cut)) + list(iter_subspaces(ctx, n, k, cut, total))
    assert [S.rows for S in parts] == [S.rows for S in subs]


def test_shifted_enumeration_contains_one():
    ctx = make_field(2, 1, 5)
    subs = list(iter_subspaces(ctx, 4, 2, shift=1))
    assert len(subs) == gaussian_binomial(4, 2, 2)
    assert all(S.dim == 3 and S.contains(1) for S in subs)
    assert len({S.rows for S in subs}) == len(subs)


def test_enumerate_subspaces_guard(f16):
    assert len(list(enumerate_subspaces(f16, 4, 2))) == 35
    with pytest.raises(TooLarge):
        enumerate_subspaces(f16, 4, 2, limit=10)


def test_report_serialization_and_checksum():
    r = SearchReport("demo", {"x": 1}, 3, hits=[{"a": 1}])
    _finish(r, time.perf_counter() - 5, False)
    d = r.to_dict()
    assert d["schema"] == "report-v1" and d["kind"] == "search" and d["search"] == "demo" and d["ok"]
    assert d["elapsed"] >= 5
    r2 = SearchReport("demo", {"x": 1}, 3, hits=[{"a": 1}])
    _finish(r2, time.perf_counter(), False)
    assert r.checksum == r2.checksum  # elapsed time is not hashed
    assert r.csv_rows() == [{"a": 1}]
    bad = SearchReport("demo", {}, 1, discrepancies=[{"why": "planted"}])
    with pytest.raises(InternalContradiction) as exc:
        _finish(bad, time.perf_counter(), True)
    assert isinstance(exc.value, AssertionError)
    json.dumps(r.to_dict())


def test_type2_search_small():
    ctx = make_field(2, 1, 4)
    rep = verify_min_size_type2(ctx, ctx.subfield_generator(2), 2)
    assert rep.candidates == 35 and rep.discrepancies == []
    skipped = verify_min_size_type2(ctx, ctx.gen, 1)
    assert skipped.counters == {"skipped": 1}
    with pytest.raises(BadDims):
        verify_min_size_type2(ctx, 1, 2)
    with pytest.raises(TooLarge):
        verify_min_size_type2(ctx, ctx.gen, 2, limit=5)


def test_prime_complementary_guards():
    with pytest.raises(NotPrime):
        verify_prime_complementary(make_field(2, 1, 4), 4, 2)
    with pytest.raises(BadDims):
        verify_prime_complementary(make_field(2, 1, 5), 3, 2)


def test_weight_r_bound_over_all_pairs_in_prime_degree():
    # j <= k - 2r + 1 for every (S, T) with dims (3, 2) at q = 2, n = 5
    rep = verify_prime_complementary(make_field(2, 1, 5), 5, 2)
    assert rep.counters["pairs"] == 155 * 155
    assert rep.discrepancies == []
    assert all(h["size"] == 2**4 + 1 for h in rep.hits)


def test_vosper_small_counts():
    rep = verify_vosper_exhaustive(make_field(2, 1, 5))
    assert rep.candidates == 225
    assert rep.counters["2x2_pairs"] == 225
    assert rep.discrepancies == [] and rep.hits
    with pytest.raises(NotPrime):
        verify_vosper_exhaustive(make_field(2, 1, 6))


def test_kneser_prime_degree_has_no_deficient_pairs():
    rep = verify_kneser_exhaustive(make_field(2, 1, 5), 3)
    assert rep.discrepancies == [] and rep.hits == []


def test_bridge_harness_guards_and_defaults():
    ctx = make_field(2, 1, 6)
    rep = verify_bridge_random(ctx, 2, 40, seed=1)
    assert rep.params["ks"] == [4, 5, 6, 7]
    assert rep.counters["pairs"] == 40 and rep.discrepancies == []
    with pytest.raises(BadDims):
        verify_bridge_random(ctx, 2, 10, ks=[3])
    with pytest.raises(BadDims):
        verify_bridge_exhaustive(ctx, 8, 2)
    a = verify_bridge_random(ctx, 2, 30, seed=7)
    b = verify_bridge_random(ctx, 2, 30, seed=7)
    assert a.checksum == b.checksum


def test_critprobe_reports_findings_without_failing():
    rep = probe_critpair_minsize(make_field(2, 1, 6), 4, 2)
    assert rep.counters["pairs"] == rep.candidates
    assert rep.counters["critical"] == rep.counters.get("minimum_size", 0) + len(rep.findings)
    assert rep.discrepancies == []
