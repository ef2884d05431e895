"""Structure of subspaces under multiplication: intersection chains, the
power decomposition, weight-r point counts, the type-(k', 2) classification,
and the Kneser / Vosper / critical-pair checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from linsets.errors import (
    BadDims,
    DimOrder,
    HypothesisViolation,
    InternalContradiction,
    MuInBaseField,
)
from linsets.field import Element, FieldCtx, is_prime
from linsets.linear_set import LinearSetReport, enumerate_linear_set, point_set, point_space
from linsets.subspace import (
    LINE,
    PLANE,
    Subspace,
    direct_product,
    full,
    intersect,
    is_subfield_linear,
    power_span,
    product_space,
    scale,
    span,
    subfield_linearity,
    subfield_span,
    trace_dual,
)


def _value(x) -> int:
    return x.value if isinstance(x, Element) else x


def _require_line(S: Subspace):
    if S.ambient != LINE:
        raise BadDims("expected a subspace of F_{q^n}")


def _check_mu(ctx: FieldCtx, mu: int):
    if ctx.in_base(mu):
        raise MuInBaseField("μ must lie outside F_q")


def intersection_chain(S: Subspace, mu, depth: int) -> list[int]:
    """dim S, dim(S ∩ μS), ..., dim(S ∩ μS ∩ ... ∩ μ^depth S)."""
    _require_line(S)
    ctx = S.ctx
    mu = _value(mu)
    _check_mu(ctx, mu)
    dims = [S.dim]
    C = S
    Si = S
    for _ in range(depth):
        Si = scale(mu, Si)
        C = intersect(C, Si)
        dims.append(C.dim)
    return dims


def _chain_spaces(S: Subspace, mu: int, depth: int) -> list[Subspace]:
    out = [S]
    Si = S
    for _ in range(depth):
        Si = scale(mu, Si)
        out.append(intersect(out[-1], Si))
    return out


SUBFIELD = "subfield"
GEOMETRIC = "geometric"
MIXED = "mixed"
NOT_APPLICABLE = "not_applicable"


@dataclass
class Decomposition:
    """Witness for how S sits relative to powers of μ.

    subfield:   S is an F_{q^t}-subspace
    geometric:  S = b⟨1, μ, ..., μ^(k-1)⟩
    mixed:      S = S̄ ⊕ b⟨1, μ, ..., μ^(m-1)⟩ with S̄ an F_{q^t}-subspace
    """

    case: str
    S: Subspace = field(repr=False)
    mu: int
    t: int
    b: int | None = None
    m: int | None = None
    sbar: Subspace | None = field(default=None, repr=False)

    @property
    def ell(self) -> int | None:
        if self.case == MIXED:
            return self.sbar.dim // self.t
        return None

    def reconstruct(self) -> Subspace | None:
        ctx = self.S.ctx
        if self.case == SUBFIELD:
            return subfield_span(self.S, self.t)
        if self.case == GEOMETRIC:
            return power_span(ctx, self.mu, self.S.dim, g=self.b)
        if self.case == MIXED:
            return self.sbar + power_span(ctx, self.mu, self.m, g=self.b)
        return None

    def to_dict(self) -> dict:
        ctx = self.S.ctx
        d = {"case": self.case, "t": self.t}
        if self.b is not None:
            d["b"] = str(Element(ctx, self.b))
        if self.m is not None:
            d["m"] = self.m
        if self.sbar is not None:
            d["sbar"] = self.sbar.text()
            d["l"] = self.ell
        return d


def power_decompose(S: Subspace, mu) -> Decomposition:
    _require_line(S)
    ctx = S.ctx
    mu = _value(mu)
    _check_mu(ctx, mu)
    k = S.dim
    if k < 2:
        raise BadDims("power decomposition needs dim S >= 2")
    t = ctx.degree(mu)
    chain = _chain_spaces(S, mu, k)
    d1 = chain[1].dim
    if d1 == k:
        dec = Decomposition(SUBFIELD, S, mu, t)
        if not is_subfield_linear(S, t):
            raise InternalContradiction("μS = S but S is not F_q(μ)-linear")
        return dec
    if d1 != k - 1:
        return Decomposition(NOT_APPLICABLE, S, mu, t)
    if t >= k:
        tail = chain[k - 1]
        if tail.dim != 1:
            raise InternalContradiction(f"chain {[c.dim for c in chain]} does not reach dimension 1")
        b = ctx.div(tail.rows[0], ctx.pow(mu, k - 1))
        dec = Decomposition(GEOMETRIC, S, mu, t, b=b)
    else:
        dims = [c.dim for c in chain]
        j = next((i for i in range(1, k) if dims[i] == k - i and dims[i + 1] == k - i), None)
        if j is None:
            raise InternalContradiction(f"chain {dims} never stabilizes")
        sbar = chain[j]
        before = chain[j - 1]
        a0 = next(r for r in before.rows if not sbar.contains(r))
        b = ctx.div(a0, ctx.pow(mu, j - 1))
        dec = Decomposition(MIXED, S, mu, t, b=b, m=j, sbar=sbar)
    if dec.reconstruct() != S:
        raise InternalContradiction(f"{dec.case} decomposition does not rebuild S")
    return dec


@dataclass
class WeightCount:
    j: int
    count: int
    witnesses: Subspace = field(repr=False)
    enumerated: int | None = None


def weight_r_space(S: Subspace, T: Subspace) -> Subspace:
    """a_1^{-1}S ∩ ... ∩ a_r^{-1}S over the echelon basis of T."""
    ctx = S.ctx
    W = full(ctx)
    for a in T.rows:
        W = intersect(W, scale(ctx.inv(a), S))
    return W


def count_weight_r(S: Subspace, T: Subspace, cross_check: bool = True) -> WeightCount:
    """Number of weight-r points of L_{S×T} other than ⟨(1,0)⟩, r = dim T."""
    _require_line(S)
    _require_line(T)
    r = T.dim
    if r < 1 or S.dim < 1:
        raise BadDims("S and T must be nonzero")
    if r > S.dim:
        raise DimOrder("need dim T <= dim S")
    W = weight_r_space(S, T)
    q = S.ctx.q
    out = WeightCount(W.dim, q**W.dim, W)
    if cross_check:
        rep = enumerate_linear_set(direct_product(S, T))
        inf = S.ctx.order
        tally = sum(1 for key, w in rep.weights.items() if w == r and key != inf)
        out.enumerated = tally
        if tally != out.count:
            raise InternalContradiction(f"weight-{r} count {out.count} but enumeration finds {tally}")
    return out


def _type2_inputs(S: Subspace, mu) -> int:
    _require_line(S)
    mu = _value(mu)
    _check_mu(S.ctx, mu)
    if S.dim < 2:
        raise BadDims("need dim S >= 2")
    return mu


def size_formula_type2(S: Subspace, mu, verify: bool = True) -> int:
    """q^(k'+1) + q^k' - q^(j+1) + 1 for L_{S×⟨1,μ⟩}, j = dim(S ∩ μS)."""
    mu = _type2_inputs(S, mu)
    ctx = S.ctx
    q, kp = ctx.q, S.dim
    j = intersect(S, scale(mu, S)).dim
    value = q ** (kp + 1) + q**kp - q ** (j + 1) + 1
    if verify:
        U = direct_product(S, power_span(ctx, mu, 2))
        rep = enumerate_linear_set(U)
        if rep.size != value:
            raise InternalContradiction(f"size formula gives {value}, enumeration {rep.size}")
        if j == kp:
            W = subfield_span(U, ctx.degree(mu))
            if point_set(U) != point_set(W):
                raise InternalContradiction("L_U differs from L_W for W = ⟨U⟩ over F_q(μ)")
    return value


@dataclass
class Type2Verdict:
    minimum_size: bool
    size: int
    decomposition: Decomposition | None
    consistent: bool
    report: LinearSetReport = field(repr=False)

    def to_dict(self) -> dict:
        d = {
            "schema": "report-v1",
            "kind": "type2_classification",
            "minimum_size": self.minimum_size,
            "size": self.size,
            "consistent": self.consistent,
            "decomposition": self.decomposition.to_dict() if self.decomposition else None,
            "report": self.report.to_dict(),
        }
        return d


def classify_min_size_type2(S: Subspace, mu) -> Type2Verdict:
    """Minimum size of L_{S×⟨1,μ⟩} against the power decomposition of S.

    Minimum size should hold exactly when S decomposes geometrically with
    t > dim S or as S̄ ⊕ b⟨1, ..., μ^(m-1)⟩ with m > 0.
    """
    mu = _type2_inputs(S, mu)
    ctx = S.ctx
    kp = S.dim
    rep = enumerate_linear_set(direct_product(S, power_span(ctx, mu, 2)))
    minimum = rep.flags.minimum_size
    dec = power_decompose(S, mu)
    if dec.case == GEOMETRIC:
        predicted = dec.t > kp
    elif dec.case == MIXED:
        predicted = dec.m > 0 and dec.t <= kp - 1 and dec.m == kp - dec.t * dec.ell and dec.m < dec.t
    else:
        predicted = False
    return Type2Verdict(minimum, rep.size, dec, minimum == predicted, rep)


# -- products of subspaces ------------------------------------------------------


def critical_pair_check(S: Subspace, T: Subspace) -> bool:
    """dim⟨ST⟩ = dim S + dim T - 1."""
    return product_space(S, T).dim == S.dim + T.dim - 1


@dataclass
class KneserResult:
    satisfies_lower_bound: bool
    stabilizer_t: int | None
    product_dim: int


def kneser_check(S: Subspace, T: Subspace) -> KneserResult:
    if S.is_zero() or T.is_zero():
        raise BadDims("S and T must be nonzero")
    P = product_space(S, T)
    n = S.ctx.n
    bound = S.dim + T.dim - 1
    ok = P.dim >= min(bound, n)
    stab = None
    if not ok:
        stab = subfield_linearity(P)
        if stab <= 1 or n % stab:
            raise InternalContradiction("deficient product without a stabilizing subfield")
    return KneserResult(ok, stab, P.dim)


def _ratios(S: Subspace) -> list[int]:
    """Sorted candidate ratios x/y for nonzero x, y in S, outside F_q."""
    ctx = S.ctx
    vecs = S.vectors()[1:]
    out = set()
    for y in vecs:
        yi = ctx.inv(y)
        for x in vecs:
            out.add(ctx.mul(x, yi))
    return sorted(a for a in out if not ctx.in_base(a))


def _geometric_with(S: Subspace, a: int) -> int | None:
    """g with S = g⟨1, a, ..., a^(k-1)⟩, or None."""
    ctx = S.ctx
    k = S.dim
    C, Si = S, S
    for i in range(1, k):
        Si = scale(a, Si)
        C = intersect(C, Si)
        if C.dim != k - i:
            return None
    g = ctx.div(C.rows[0], ctx.pow(a, k - 1))
    if power_span(ctx, a, k, g=g) != S:
        return None
    return g


def geometric_basis_recognizer(S: Subspace, candidates=None) -> tuple[int, int] | None:
    """First (g, a) in element order with S = g⟨1, a, ..., a^(k-1)⟩.

    Any valid ratio is a quotient of two vectors of S, so only those
    quotients are tried.
    """
    _require_line(S)
    if S.dim < 2:
        raise BadDims("need dim S >= 2")
    for a in candidates if candidates is not None else _ratios(S):
        g = _geometric_with(S, a)
        if g is not None:
            return g, a
    return None


@dataclass
class CriticalPairVerdict:
    dims: tuple[int, int, int]
    is_critical: bool
    kneser_stabilizer_t: int | None = None
    vosper_form: tuple[int, int, int] | None = None  # (g, g', a)
    hypothesis_ok: bool = True
    note: str = ""
    ctx: FieldCtx | None = field(default=None, repr=False)

    def __post_init__(self):
        dS, dT, dP = self.dims
        if self.is_critical != (dP == dS + dT - 1):
            raise InternalContradiction("critical flag disagrees with the dimensions")

    def to_dict(self) -> dict:
        d = {
            "schema": "report-v1",
            "kind": "critical_pair",
            "dims": list(self.dims),
            "is_critical": self.is_critical,
            "kneser_stabilizer_t": self.kneser_stabilizer_t,
            "hypothesis_ok": self.hypothesis_ok,
            "note": self.note,
            "vosper_form": None,
        }
        if self.vosper_form and self.ctx is not None:
            g, g2, a = self.vosper_form
            d["vosper_form"] = {k: str(Element(self.ctx, v)) for k, v in zip(("g", "g_prime", "a"), (g, g2, a))}
        if self.ctx is not None:
            d["field"] = self.ctx.describe()
        return d


def common_ratio(S: Subspace, T: Subspace) -> tuple[int, int, int] | None:
    """(g, g', a) with S = g⟨1..a^(dim S-1)⟩ and T = g'⟨1..a^(dim T-1)⟩."""
    small, big = (S, T) if S.dim <= T.dim else (T, S)
    for a in _ratios(small):
        gs = _geometric_with(S, a)
        if gs is None:
            continue
        gt = _geometric_with(T, a)
        if gt is not None:
            return gs, gt, a
    return None


def vosper_hypotheses(S: Subspace, T: Subspace, P: Subspace) -> str:
    """Empty string when the prime-degree critical-pair hypotheses hold."""
    n = S.ctx.n
    if not is_prime(n):
        return "n is not prime"
    if S.dim < 2 or T.dim < 2:
        return "need dim S, dim T >= 2"
    if P.dim > n - 2:
        return "need dim⟨ST⟩ <= n - 2"
    return ""


def vosper_check(S: Subspace, T: Subspace, strict: bool = False) -> CriticalPairVerdict:
    """Critical pairs in prime degree must share a geometric ratio.

    When the hypotheses fail the verdict only carries the critical flag
    (or HypothesisViolation is raised if strict).
    """
    _require_line(S)
    _require_line(T)
    if S.is_zero() or T.is_zero():
        raise BadDims("S and T must be nonzero")
    P = product_space(S, T)
    dims = (S.dim, T.dim, P.dim)
    critical = P.dim == S.dim + T.dim - 1
    kn = kneser_check(S, T)
    verdict = CriticalPairVerdict(dims, critical, kn.stabilizer_t, ctx=S.ctx)
    why = vosper_hypotheses(S, T, P)
    if why:
        if strict:
            raise HypothesisViolation(why)
        verdict.hypothesis_ok = False
        verdict.note = why
        return verdict
    if critical:
        form = common_ratio(S, T)
        if form is None:
            raise InternalContradiction("critical pair in prime degree without a common ratio")
        verdict.vosper_form = form
    return verdict


@dataclass
class BridgeResult:
    holds: bool
    critical: bool
    count: int
    expected: int
    k: int
    r: int
    lemma_bound_ok: bool | None = None

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "critical": self.critical,
            "weight_r_points": self.count,
            "expected_if_critical": self.expected,
            "k": self.k,
            "r": self.r,
            "lemma_bound_ok": self.lemma_bound_ok,
        }


def critpair_linset_bridge(S: Subspace, T: Subspace) -> BridgeResult:
    """Critical pair (S, T) versus the weight-r count of L_{S^⊥ × T}.

    dim S = n - k + r and dim T = r; both sides are computed separately.
    """
    _require_line(S)
    _require_line(T)
    ctx = S.ctx
    n, q = ctx.n, ctx.q
    r = T.dim
    k = n - S.dim + r
    if S.is_zero() or r < 1 or not (2 * r <= k <= n + r):
        raise BadDims(f"need nonzero S, T and 2r <= k <= n + r (k={k}, r={r})")
    critical = critical_pair_check(S, T)
    U = direct_product(trace_dual(S), T)
    rep = enumerate_linear_set(U)
    inf = ctx.order
    count = sum(1 for key, w in rep.weights.items() if w == r and key != inf)
    expected = q ** (k - 2 * r + 1)
    res = BridgeResult(critical == (count == expected), critical, count, expected, k, r)
    if is_prime(n) and n >= k > r >= 2:
        res.lemma_bound_ok = count <= expected
    return res


def heavy_point_subspace(U: Subspace, report: LinearSetReport | None = None) -> Subspace | None:
    """For the unique point P of maximal weight, {c : c·rep(P) ∈ U}; None if not unique."""
    if U.ambient != PLANE:
        raise BadDims("expected a plane subspace")
    rep = report or enumerate_linear_set(U)
    heavy = rep.heaviest_points()
    if len(heavy) != 1:
        return None
    P, _ = heavy[0]
    ctx = U.ctx
    meet = intersect(U, point_space(ctx, P))
    finite = P.x is not None
    Q = ctx.order
    coeffs = []
    for v in meet.rows:
        vy, vx = divmod(v, Q)
        coeffs.append(vy if finite else vx)
    return span(ctx, coeffs)
