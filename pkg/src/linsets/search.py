"""Exhaustive subspace enumeration and batch verification harnesses.

Subspaces are generated in canonical order: pivot patterns in lexicographic
order, then free entries counted in base q with the first free position most
significant.  Work is split into index ranges of that order, so any number of
worker processes produces the same merged report.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from linsets.analysis import (
    GEOMETRIC,
    classify_min_size_type2,
    common_ratio,
    critical_pair_check,
    critpair_linset_bridge,
    kneser_check,
    size_formula_type2,
    weight_r_space,
)
from linsets.errors import BadDims, InternalContradiction, NotPrime, TooLarge
from linsets.field import FieldCtx, is_prime
from linsets.linear_set import enumerate_linear_set
from linsets.subspace import LINE, Subspace, direct_product, product_space, span, trace_dual

SUBSPACE_LIMIT = 10**7
PAIR_LIMIT = 10**8


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n (product formula)."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _patterns(N: int, k: int):
    """(pivots, free positions) for every pivot pattern, in lexicographic order."""
    for piv in itertools.combinations(range(N), k):
        pset = set(piv)
        free = [(i, c) for i, p in enumerate(piv) for c in range(p + 1, N) if c not in pset]
        yield piv, free


def iter_subspaces(ctx: FieldCtx, N: int, k: int, start: int = 0, stop: int | None = None, shift: int = 0):
    """Yield k-dim subspaces of F_q^N in canonical order, indices [start, stop).

    With shift = 1 the subspaces live in coordinates 1..N and the row for
    the element 1 is prepended: this enumerates subspaces of F_{q^n} that
    contain 1 (pass N = n - 1 and k = dim - 1).
    """
    q = ctx.q
    idx = 0
    for piv, free in _patterns(N, k):
        size = q ** len(free)
        if stop is not None and idx >= stop:
            return
        if idx + size <= start:
            idx += size
            continue
        lo = max(start - idx, 0)
        hi = size if stop is None else min(size, stop - idx)
        base = [q ** (p + shift) for p in piv]
        weights = [q ** (c + shift) for _, c in free]
        rows_of = [i for i, _ in free]
        nf = len(free)
        for x in range(lo, hi):
            rows = list(base)
            y = x
            for pos in range(nf - 1, -1, -1):
                y, d = divmod(y, q)
                if d:
                    rows[rows_of[pos]] += d * weights[pos]
            if shift:
                rows.insert(0, 1)
            yield Subspace(ctx, LINE, tuple(rows))
        idx += size


def enumerate_subspaces(ctx: FieldCtx, ambient_dim: int, k: int, limit: int = SUBSPACE_LIMIT):
    """Every k-dim F_q-subspace of F_q^ambient_dim (ambient_dim <= n) exactly once."""
    if not 0 <= k <= ambient_dim or ambient_dim > ctx.n:
        raise BadDims("need 0 <= k <= ambient_dim <= n")
    count = gaussian_binomial(ambient_dim, k, ctx.q)
    if count > limit:
        raise TooLarge(f"{count} subspaces exceed the limit {limit}")
    return iter_subspaces(ctx, ambient_dim, k)


def _stratum(ctx: FieldCtx, dim: int, contains_one: bool):
    """(N, k, shift, count) describing the enumerated dim-subspaces of F_{q^n}."""
    if contains_one:
        return ctx.n - 1, dim - 1, 1, gaussian_binomial(ctx.n - 1, dim - 1, ctx.q)
    return ctx.n, dim, 0, gaussian_binomial(ctx.n, dim, ctx.q)


def _stratum_list(ctx: FieldCtx, dim: int, contains_one: bool) -> list[Subspace]:
    N, k, shift, _ = _stratum(ctx, dim, contains_one)
    return list(iter_subspaces(ctx, N, k, shift=shift))


@dataclass
class SearchReport:
    kind: str
    params: dict
    candidates: int
    hits: list[dict] = field(default_factory=list)
    counters: dict = field(default_factory=dict)
    discrepancies: list[dict] = field(default_factory=list)
    findings: list[dict] = field(default_factory=list)
    elapsed: float = 0.0
    checksum: str = ""

    def payload(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "candidates": self.candidates,
            "hits": self.hits,
            "counters": self.counters,
            "discrepancies": self.discrepancies,
            "findings": self.findings,
        }

    def seal(self):
        blob = json.dumps(self.payload(), sort_keys=True, separators=(",", ":"))
        self.checksum = hashlib.sha256(blob.encode()).hexdigest()
        return self

    def to_dict(self) -> dict:
        body = self.payload()
        body.pop("kind")
        d = {"schema": "report-v1", "kind": "search", "search": self.kind, **body}
        d["elapsed"] = round(self.elapsed, 3)
        d["checksum"] = self.checksum
        d["ok"] = not self.discrepancies
        return d

    def csv_rows(self) -> list[dict]:
        rows = []
        for h in self.hits:
            rows.append({k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v) for k, v in h.items()})
        return rows


def _chunks(total: int, workers: int) -> list[tuple[int, int]]:
    if total == 0:
        return []
    n = max(1, min(total, workers * 4))
    step = -(-total // n)
    return [(s, min(s + step, total)) for s in range(0, total, step)]


def _run(worker, args: tuple, total: int, workers: int) -> list[dict]:
    """Apply worker(*args, start, stop) over index ranges; partial results in range order."""
    ranges = _chunks(total, workers)
    if workers <= 1 or len(ranges) <= 1:
        return [worker(*args, s, e) for s, e in ranges]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(worker, *args, s, e) for s, e in ranges]
        return [f.result() for f in futures]


def _merge(report: SearchReport, parts: list[dict], key=None):
    counters = Counter()
    for part in parts:
        report.hits.extend(part.get("hits", []))
        report.discrepancies.extend(part.get("discrepancies", []))
        report.findings.extend(part.get("findings", []))
        counters.update(part.get("counters", {}))
    sort_key = key or (lambda h: json.dumps(h, sort_keys=True))
    report.hits.sort(key=sort_key)
    report.discrepancies.sort(key=lambda h: json.dumps(h, sort_keys=True))
    report.findings.sort(key=lambda h: json.dumps(h, sort_keys=True))
    report.counters = dict(sorted(counters.items()))


def _finish(report: SearchReport, t0: float, strict: bool) -> SearchReport:
    report.elapsed = time.perf_counter() - t0
    report.seal()
    if strict and report.discrepancies:
        raise InternalContradiction(f"{report.kind}: {len(report.discrepancies)} discrepancies", report)
    return report


def _guard(count: int, limit: int, what: str):
    if count > limit:
        raise TooLarge(f"{count} {what} exceed the limit {limit}")


# -- minimum size with a point of weight k' -----------------------------------


def _type2_worker(ctx: FieldCtx, mu: int, kp: int, start: int, stop: int) -> dict:
    out = {"hits": [], "discrepancies": [], "counters": Counter()}
    prime = is_prime(ctx.n)
    for S in iter_subspaces(ctx, ctx.n, kp, start, stop):
        v = classify_min_size_type2(S, mu)
        dec = v.decomposition
        out["counters"]["case_" + dec.case] += 1
        if v.size != size_formula_type2(S, mu, verify=False):
            out["discrepancies"].append({"S": S.text(), "issue": "size formula"})
        if not v.consistent:
            out["discrepancies"].append({"S": S.text(), "minimum_size": v.minimum_size, "case": dec.case})
        if v.minimum_size:
            out["counters"]["minimum_size"] += 1
            hit = {"S": S.text(), "size": v.size}
            hit.update(dec.to_dict())
            if prime and dec.case != GEOMETRIC:
                out["discrepancies"].append({"S": S.text(), "issue": "non-geometric hit in prime degree"})
            out["hits"].append(hit)
    return out


def verify_min_size_type2(
    ctx: FieldCtx, mu: int, kp: int, workers: int = 1, limit: int = SUBSPACE_LIMIT, strict: bool = False
) -> SearchReport:
    """For every k'-dim S: L_{S×⟨1,μ⟩} has minimum size iff the power
    decomposition of S is geometric with t > k' or mixed with m > 0."""
    t0 = time.perf_counter()
    total = gaussian_binomial(ctx.n, kp, ctx.q) if 0 <= kp <= ctx.n else 0
    report = SearchReport("thm36", {"field": ctx.spec_string(), "mu": mu, "k_prime": kp}, total)
    if kp < 2:
        report.counters = {"skipped": 1}
        report.findings.append({"note": "k' < 2: the decomposition needs dim S >= 2"})
        return _finish(report, t0, False)
    if ctx.in_base(mu):
        raise BadDims("μ must lie outside F_q")
    _guard(total, limit, "subspaces")
    parts = _run(_type2_worker, (ctx, mu, kp), total, workers)
    _merge(report, parts, key=lambda h: h["S"])
    return _finish(report, t0, strict)


# -- prime degree, complementary weights (k - r, r) ---------------------------


def _prime_comp_worker(ctx: FieldCtx, k: int, r: int, start: int, stop: int) -> dict:
    out = {"hits": [], "discrepancies": [], "counters": Counter()}
    q = ctx.q
    Ts = _stratum_list(ctx, r, False)
    threshold = q ** (k - 2 * r) + 1
    bound = k - 2 * r + 1
    for S in iter_subspaces(ctx, ctx.n, k - r, start, stop):
        for T in Ts:
            j = weight_r_space(S, T).dim
            out["counters"]["pairs"] += 1
            if j > bound:
                out["discrepancies"].append({"S": S.text(), "T": T.text(), "issue": f"j={j} exceeds {bound}"})
            if q**j < threshold:
                continue
            out["counters"]["qualifying"] += 1
            rep = enumerate_linear_set(direct_product(S, T))
            form = common_ratio(S, T) if S.dim >= 2 else None
            ok_size = rep.size == q ** (k - 1) + 1
            if not ok_size or form is None:
                out["discrepancies"].append(
                    {"S": S.text(), "T": T.text(), "size": rep.size, "common_ratio": form is not None}
                )
            out["hits"].append(
                {"S": S.text(), "T": T.text(), "j": j, "size": rep.size, "ratio": None if form is None else form[2]}
            )
    return out


def verify_prime_complementary(
    ctx: FieldCtx, k: int, r: int, workers: int = 1, limit: int = PAIR_LIMIT, strict: bool = False
) -> SearchReport:
    """Prime n, n >= k > r >= 2: every S×T (dims k-r, r) with at least
    q^(k-2r)+1 weight-r points besides ⟨(1,0)⟩ has minimum size and S, T
    share a geometric ratio."""
    if not is_prime(ctx.n):
        raise NotPrime(f"n = {ctx.n} is not prime")
    if not (ctx.n >= k > r >= 2) or r > k - r:
        raise BadDims("need n >= k > r >= 2 and r <= k - r")
    t0 = time.perf_counter()
    nS = gaussian_binomial(ctx.n, k - r, ctx.q)
    nT = gaussian_binomial(ctx.n, r, ctx.q)
    _guard(nS * nT, limit, "pairs")
    report = SearchReport("thm39", {"field": ctx.spec_string(), "k": k, "r": r}, nS * nT)
    parts = _run(_prime_comp_worker, (ctx, k, r), nS, workers)
    _merge(report, parts, key=lambda h: (h["S"], h["T"]))
    return _finish(report, t0, strict)


# -- products of subspaces: Vosper and Kneser ---------------------------------


def _dim_pairs(n: int, max_dim: int, prime_window: bool) -> list[tuple[int, int]]:
    out = []
    for a in range(2 if prime_window else 1, max_dim + 1):
        for b in range(a, max_dim + 1):
            if prime_window and a + b - 1 > n - 2:
                continue
            out.append((a, b))
    return out


def _vosper_worker(ctx: FieldCtx, dS: int, dT: int, start: int, stop: int) -> dict:
    out = {"hits": [], "discrepancies": [], "counters": Counter()}
    Ts = _stratum_list(ctx, dT, True)
    N, k, shift, _ = _stratum(ctx, dS, True)
    n = ctx.n
    for S in iter_subspaces(ctx, N, k, start, stop, shift=shift):
        for T in Ts:
            out["counters"]["pairs"] += 1
            P = product_space(S, T)
            if P.dim != dS + dT - 1:
                continue
            out["counters"]["critical"] += 1
            if P.dim > n - 2:
                continue
            form = common_ratio(S, T)
            if form is None:
                out["discrepancies"].append({"S": S.text(), "T": T.text(), "issue": "no common ratio"})
            else:
                out["hits"].append({"S": S.text(), "T": T.text(), "a": form[2]})
    return out


def verify_vosper_exhaustive(
    ctx: FieldCtx, max_dim: int | None = None, workers: int = 1, limit: int = PAIR_LIMIT, strict: bool = False
) -> SearchReport:
    """Every critical pair with 2 <= dim S <= dim T <= max_dim and
    dim⟨ST⟩ <= n - 2 in prime degree has a common geometric ratio.

    Pairs are taken with 1 ∈ S and 1 ∈ T, which loses nothing because
    scaling S or T scales ⟨ST⟩ and the geometric form.
    """
    n = ctx.n
    if not is_prime(n):
        raise NotPrime(f"n = {n} is not prime")
    max_dim = n if max_dim is None else max_dim
    t0 = time.perf_counter()
    dims = _dim_pairs(n, max_dim, True)
    sizes = {(a, b): _stratum(ctx, a, True)[3] * _stratum(ctx, b, True)[3] for a, b in dims}
    total = sum(sizes.values())
    _guard(total, limit, "pairs")
    report = SearchReport("vosper", {"field": ctx.spec_string(), "max_dim": max_dim, "dims": [list(d) for d in dims]}, total)
    parts = []
    for a, b in dims:
        nS = _stratum(ctx, a, True)[3]
        got = _run(_vosper_worker, (ctx, a, b), nS, workers)
        for g in got:
            g["counters"] = Counter({f"{a}x{b}_{key}": v for key, v in g["counters"].items()})
            for h in g["hits"]:
                h["dims"] = [a, b]
        parts.extend(got)
    _merge(report, parts, key=lambda h: (h["dims"], h["S"], h["T"]))
    return _finish(report, t0, strict)


def _kneser_worker(ctx: FieldCtx, dS: int, dT: int, start: int, stop: int) -> dict:
    out = {"hits": [], "discrepancies": [], "counters": Counter()}
    Ts = _stratum_list(ctx, dT, True)
    N, k, shift, _ = _stratum(ctx, dS, True)
    for S in iter_subspaces(ctx, N, k, start, stop, shift=shift):
        for T in Ts:
            out["counters"]["pairs"] += 1
            try:
                res = kneser_check(S, T)
            except InternalContradiction:
                out["discrepancies"].append({"S": S.text(), "T": T.text(), "issue": "no stabilizer"})
                continue
            if res.stabilizer_t is not None:
                out["counters"]["deficient"] += 1
                out["counters"][f"stabilizer_{res.stabilizer_t}"] += 1
                out["hits"].append({"S": S.text(), "T": T.text(), "product_dim": res.product_dim, "t": res.stabilizer_t})
    return out


def verify_kneser_exhaustive(
    ctx: FieldCtx, max_dim: int = 3, workers: int = 1, limit: int = PAIR_LIMIT, strict: bool = False
) -> SearchReport:
    """Every pair with dim⟨ST⟩ < min(dim S + dim T - 1, n) has ⟨ST⟩ linear over some F_{q^t}, 1 < t | n."""
    t0 = time.perf_counter()
    dims = _dim_pairs(ctx.n, min(max_dim, ctx.n), False)
    total = sum(_stratum(ctx, a, True)[3] * _stratum(ctx, b, True)[3] for a, b in dims)
    _guard(total, limit, "pairs")
    report = SearchReport("kneser", {"field": ctx.spec_string(), "max_dim": max_dim}, total)
    parts = []
    for a, b in dims:
        got = _run(_kneser_worker, (ctx, a, b), _stratum(ctx, a, True)[3], workers)
        for g in got:
            for h in g["hits"]:
                h["dims"] = [a, b]
        parts.extend(got)
    _merge(report, parts, key=lambda h: (h["dims"], h["S"], h["T"]))
    return _finish(report, t0, strict)


# -- critical pairs and the linear sets L_{S^⊥ × T} ----------------------------


def _bridge_dims(ctx: FieldCtx, k: int, r: int) -> tuple[int, int]:
    n = ctx.n
    if r < 1 or not (2 * r <= k <= n + r - 1):
        raise BadDims(f"need r >= 1 and 2r <= k <= n + r - 1 (k={k}, r={r})")
    return n - k + r, r


def _bridge_worker(ctx: FieldCtx, k: int, r: int, normalized: bool, start: int, stop: int) -> dict:
    out = {"hits": [], "discrepancies": [], "counters": Counter()}
    dS, dT = _bridge_dims(ctx, k, r)
    Ts = _stratum_list(ctx, dT, normalized)
    N, kk, shift, _ = _stratum(ctx, dS, normalized)
    for S in iter_subspaces(ctx, N, kk, start, stop, shift=shift):
        for T in Ts:
            res = critpair_linset_bridge(S, T)
            out["counters"]["pairs"] += 1
            out["counters"]["critical"] += res.critical
            if not res.holds or res.lemma_bound_ok is False:
                out["discrepancies"].append({"S": S.text(), "T": T.text(), **res.to_dict()})
    return out


def verify_bridge_exhaustive(
    ctx: FieldCtx, k: int, r: int, workers: int = 1, limit: int = PAIR_LIMIT, strict: bool = False
) -> SearchReport:
    """The critical-pair / weight-count biconditional over all (S, T) of dims (n-k+r, r)."""
    dS, dT = _bridge_dims(ctx, k, r)
    t0 = time.perf_counter()
    nS = gaussian_binomial(ctx.n, dS, ctx.q)
    total = nS * gaussian_binomial(ctx.n, dT, ctx.q)
    _guard(total, limit, "pairs")
    report = SearchReport("bridge", {"field": ctx.spec_string(), "k": k, "r": r}, total)
    _merge(report, _run(_bridge_worker, (ctx, k, r, False), nS, workers))
    return _finish(report, t0, strict)


def random_subspace(ctx: FieldCtx, dim: int, rng: random.Random) -> Subspace:
    rows = []
    S = span(ctx, rows)
    while S.dim < dim:
        v = rng.randrange(1, ctx.order)
        if not S.contains(v):
            rows.append(v)
            S = span(ctx, rows)
    return S


def _random_bridge_worker(ctx: FieldCtx, instances: list, start: int, stop: int) -> dict:
    out = {"hits": [], "discrepancies": [], "counters": Counter()}
    for k, srows, trows in instances[start:stop]:
        S = Subspace(ctx, LINE, tuple(srows))
        T = Subspace(ctx, LINE, tuple(trows))
        res = critpair_linset_bridge(S, T)
        out["counters"]["pairs"] += 1
        out["counters"]["critical"] += res.critical
        if not res.holds or res.lemma_bound_ok is False:
            out["discrepancies"].append({"S": S.text(), "T": T.text(), **res.to_dict()})
    return out


def verify_bridge_random(
    ctx: FieldCtx, r: int, samples: int, seed: int = 0, ks=None, workers: int = 1, strict: bool = False
) -> SearchReport:
    """The biconditional on seeded random pairs; k cycles through ks
    (default: every k with 2r <= k <= n + r - 1)."""
    ks = list(ks) if ks else list(range(2 * r, ctx.n + r))
    for k in ks:
        _bridge_dims(ctx, k, r)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    instances = []
    for i in range(samples):
        k = ks[i % len(ks)]
        dS, dT = _bridge_dims(ctx, k, r)
        instances.append((k, random_subspace(ctx, dS, rng).rows, random_subspace(ctx, dT, rng).rows))
    report = SearchReport("bridge_random", {"field": ctx.spec_string(), "r": r, "samples": samples, "seed": seed, "ks": ks}, samples)
    _merge(report, _run(_random_bridge_worker, (ctx, instances), samples, workers))
    return _finish(report, t0, strict)


def _probe_worker(ctx: FieldCtx, k: int, r: int, start: int, stop: int) -> dict:
    out = {"hits": [], "findings": [], "counters": Counter()}
    dS, dT = _bridge_dims(ctx, k, r)
    Ts = _stratum_list(ctx, dT, True)
    N, kk, shift, _ = _stratum(ctx, dS, True)
    for S in iter_subspaces(ctx, N, kk, start, stop, shift=shift):
        for T in Ts:
            out["counters"]["pairs"] += 1
            if not critical_pair_check(S, T):
                continue
            out["counters"]["critical"] += 1
            rep = enumerate_linear_set(direct_product(trace_dual(S), T))
            if rep.flags.minimum_size:
                out["counters"]["minimum_size"] += 1
            else:
                out["findings"].append(
                    {"S": S.text(), "T": T.text(), "size": rep.size, "distribution": {str(i): c for i, c in rep.distribution.items()}}
                )
    return out


def probe_critpair_minsize(
    ctx: FieldCtx, k: int, r: int, workers: int = 1, limit: int = PAIR_LIMIT
) -> SearchReport:
    """For critical pairs (S, T) of dims (n-k+r, r), is L_{S^⊥ × T} of minimum size?

    Pairs with 1 ∈ S and 1 ∈ T stand for their scalar classes.  Linear sets
    that are not of minimum size are listed as findings, not as errors.
    """
    dS, dT = _bridge_dims(ctx, k, r)
    t0 = time.perf_counter()
    nS = _stratum(ctx, dS, True)[3]
    total = nS * _stratum(ctx, dT, True)[3]
    _guard(total, limit, "pairs")
    report = SearchReport("critprobe", {"field": ctx.spec_string(), "k": k, "r": r}, total)
    _merge(report, _run(_probe_worker, (ctx, k, r), nS, workers))
    return _finish(report, t0, False)
