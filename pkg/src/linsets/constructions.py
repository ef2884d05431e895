"""Explicit subspaces: trace graphs, power-basis products, lifts from a subfield,
and the trace-dual basis of a power basis."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from linsets.errors import (
    BadIntersection,
    BadParams,
    InseparableDefect,
    NotAGenerator,
    NotScattered,
    NotSubfieldLinear,
)
from linsets.field import Element, FieldCtx
from linsets.linear_set import enumerate_linear_set
from linsets.subspace import (
    LINE,
    PLANE,
    Subspace,
    direct_product,
    intersect,
    is_subfield_linear,
    power_span,
    scale,
    span,
    zero,
)


def _val(ctx: FieldCtx, x) -> int:
    if isinstance(x, Element):
        if x.ctx != ctx:
            raise BadParams("element from another field")
        return x.value
    return x


def relative_trace(ctx: FieldCtx, x: int, t: int) -> int:
    """Tr_{q^t/q}(x) for x in the intermediate field F_{q^t}."""
    acc, y = 0, x
    for _ in range(t):
        acc = ctx.add(acc, y)
        y = ctx.pow(y, ctx.q)
    return acc


def trace_graph(ctx: FieldCtx, t: int | None = None) -> Subspace:
    """{(x, Tr(x)) : x ∈ F_{q^t}}, with t = n by default."""
    t = ctx.n if t is None else t
    if t < 2 or ctx.n % t:
        raise BadParams("trace graph needs 2 <= t | n")
    Q = ctx.order
    basis = [ctx.q**i for i in range(ctx.n)] if t == ctx.n else ctx.subfield_basis(t)
    return span(ctx, [x + relative_trace(ctx, x, t) * Q for x in basis], PLANE)


def jvdv(lam: Element, t1: int, t2: int) -> Subspace:
    """⟨1, λ, ..., λ^(t1-1)⟩ × ⟨1, λ, ..., λ^(t2-1)⟩."""
    ctx, x = lam.ctx, lam.value
    s = ctx.degree(x)
    if s < 2:
        raise BadParams("λ must lie outside F_q")
    if t1 < 1 or t2 < 1 or t1 + t2 > s + 1:
        raise BadParams(f"need 1 <= t1, t2 and t1 + t2 <= s + 1 = {s + 1}")
    return direct_product(power_span(ctx, x, t1), power_span(ctx, x, t2))


def predicted_jvdv(q: int, t1: int, t2: int) -> dict:
    """Weight data the power-basis product is known to have.

    Returns the weight of the heavier coordinate point, the number of other
    points of the lighter weight, and the count for each weight below it.
    """
    lo, hi = min(t1, t2), max(t1, t2)
    k = t1 + t2
    return {
        "rank": k,
        "size": q ** (k - 1) + 1,
        "heavy_weight": hi,
        "light_weight": lo,
        "light_count": q ** (hi - lo + 1),
        "lower": {i: q ** (k - 2 * i + 1) - q ** (k - 2 * i - 1) for i in range(1, lo)},
    }


def predicted_jvdv_distribution(q: int, t1: int, t2: int) -> dict[int, int]:
    pred = predicted_jvdv(q, t1, t2)
    dist = dict(pred["lower"])
    dist[pred["light_weight"]] = dist.get(pred["light_weight"], 0) + pred["light_count"]
    dist[pred["heavy_weight"]] = dist.get(pred["heavy_weight"], 0) + 1
    return dist


@dataclass
class DualBasis:
    ctx: FieldCtx = field(repr=False)
    lam: int
    delta: int
    gammas: list[int]
    dual: list[int]

    def pairing_matrix(self) -> list[list[int]]:
        ctx = self.ctx
        return [[ctx.trace(ctx.mul(ctx.pow(self.lam, i), d)) for d in self.dual] for i in range(ctx.n)]


def dual_basis(lam: Element) -> DualBasis:
    """Trace-dual of (1, λ, ..., λ^(n-1)) from the minimal polynomial of λ."""
    ctx, x = lam.ctx, lam.value
    n = ctx.n
    if ctx.degree(x) != n:
        raise NotAGenerator("(1, λ, ..., λ^(n-1)) is not a basis")
    a = ctx.min_poly(x)  # a[0..n], a[n] = 1
    F = ctx.base
    delta = 0
    for i in range(1, n + 1):
        coeff = F.mul(F.from_int(i), a[i])
        delta = ctx.add(delta, ctx.mul(coeff, ctx.pow(x, i - 1)))
    if delta == 0:
        raise InseparableDefect("f'(λ) = 0")
    gammas = []
    for i in range(n):
        g = 0
        for j in range(1, n - i + 1):
            g = ctx.add(g, ctx.mul(ctx.pow(x, j - 1), a[i + j]))
        gammas.append(g)
    dinv = ctx.inv(delta)
    return DualBasis(ctx, x, delta, gammas, [ctx.mul(dinv, g) for g in gammas])


def power_span_dual(lam: Element, ell: int) -> Subspace:
    """Closed form of ⟨1, ..., λ^(ℓ-1)⟩^⊥ as δ^(-1)·⟨1, ..., λ^(n-ℓ-1)⟩."""
    ctx = lam.ctx
    if not 1 <= ell <= ctx.n - 1:
        raise BadParams("need 1 <= ℓ <= n - 1")
    db = dual_basis(lam)
    return power_span(ctx, lam.value, ctx.n - ell, g=ctx.inv(db.delta))


# -- building blocks for lifts ---------------------------------------------------


def subfield_line(ctx: FieldCtx, t: int, b: int = 1) -> Subspace:
    """b·F_{q^t} as an F_q-subspace of the line."""
    return span(ctx, [ctx.mul(b, w) for w in ctx.subfield_basis(t)])


def subfield_hull(ctx: FieldCtx, t: int, elements) -> Subspace:
    """F_{q^t}-span of the given elements."""
    ws = ctx.subfield_basis(t)
    return span(ctx, [ctx.mul(w, _val(ctx, x)) for x in elements for w in ws])


def default_sbar(ctx: FieldCtx, t: int, ell: int) -> Subspace:
    """Greedy F_{q^t}-subspace of F_{q^t}-dimension ℓ: add the smallest
    element outside the current span until the dimension is reached."""
    if ctx.n % t or ell * t > ctx.n:
        raise BadParams("ℓ·t must not exceed n and t must divide n")
    sbar = zero(ctx)
    x = 1
    while sbar.dim < ell * t:
        if not sbar.contains(x):
            sbar = subfield_hull(ctx, t, list(sbar.rows) + [x])
        x += 1
    return sbar


def lex_elements(ctx: FieldCtx):
    """Nonzero elements in coordinate-lexicographic order (c_0 compared first)."""
    for cs in itertools.product(range(ctx.q), repeat=ctx.n):
        v = sum(c * ctx.q**i for i, c in enumerate(cs))
        if v:
            yield v


def default_b(ctx: FieldCtx, sbar: Subspace, t: int) -> int:
    for b in lex_elements(ctx):
        if intersect(sbar, subfield_line(ctx, t, b)).is_zero():
            return b
    raise BadIntersection("no b with S̄ ∩ bF_{q^t} = {0}")


def _check_lift_inputs(ctx: FieldCtx, sbar: Subspace, b: int, t: int) -> int:
    if t < 2 or ctx.n % t:
        raise BadParams("need 1 < t | n")
    ell_prime = ctx.n // t
    if ell_prime < 2:
        raise BadParams("need n/t > 1")
    if sbar.ambient != LINE:
        raise BadParams("S̄ must be a line subspace")
    if not is_subfield_linear(sbar, t):
        raise NotSubfieldLinear(f"S̄ is not an F_(q^{t})-subspace")
    ell = sbar.dim // t
    if ell >= ell_prime:
        raise BadParams("need ℓ < n/t")
    if b == 0:
        raise BadParams("b must be nonzero")
    if not intersect(sbar, subfield_line(ctx, t, b)).is_zero():
        raise BadIntersection("S̄ ∩ bF_{q^t} ≠ {0}")
    return ell


def lift(uprime: Subspace, sbar: Subspace, b, t: int) -> Subspace:
    """{(s + b·u1, u2) : s ∈ S̄, (u1, u2) ∈ U'} for U' with coordinates in F_{q^t}."""
    ctx = uprime.ctx
    b = _val(ctx, b)
    if uprime.ambient != PLANE or uprime.is_zero():
        raise BadParams("U' must be a nonzero plane subspace")
    _check_lift_inputs(ctx, sbar, b, t)
    Q = ctx.order
    rows = []
    for r in uprime.rows:
        u2, u1 = divmod(r, Q)
        if not (ctx.in_subfield(u1, t) and ctx.in_subfield(u2, t)):
            raise BadParams(f"U' has coordinates outside F_(q^{t})")
        rows.append(ctx.mul(b, u1) + u2 * Q)
    rows.extend(sbar.rows)
    return span(ctx, rows, PLANE)


def min_size_family(mu: Element, sbar: Subspace, b, m: int, j: int) -> Subspace:
    """(S̄ ⊕ b⟨1, ..., μ^(m-1)⟩) × ⟨1, ..., μ^(j-1)⟩."""
    ctx, x = mu.ctx, mu.value
    b = _val(ctx, b)
    t = ctx.degree(x)
    if t < 2:
        raise BadParams("μ must lie outside F_q")
    if m < 1 or j < 1 or m + j > t + 1:
        raise BadParams(f"need m, j > 0 and m + j <= t + 1 = {t + 1}")
    ell = _check_lift_inputs(ctx, sbar, b, t)
    if ell < 1:
        raise BadParams("need ℓ >= 1")
    S = sbar + power_span(ctx, x, m, g=b)
    T = power_span(ctx, x, j)
    return direct_product(S, T)


def predicted_min_size_family(q: int, ell_t: int, m: int, j: int) -> dict[int, int]:
    """Weight distribution predicted for the lifted family (ℓt given as one number)."""
    k = ell_t + m + j
    dist = {ell_t + m: 1}

    def bump(w, c):
        dist[w] = dist.get(w, 0) + c

    if m >= j:
        bump(j, q ** (ell_t + m - j + 1))
        for i in range(1, j):
            bump(i, q ** (k - 2 * i + 1) - q ** (k - 2 * i - 1))
    else:
        bump(m, q ** (ell_t + j - m + 1) - q**ell_t)
        bump(j, q**ell_t)
        for i in range(1, m):
            bump(i, q ** (k - 2 * i + 1) - q ** (k - 2 * i - 1))
    return dist


def iclub_lift(uprime: Subspace, sbar: Subspace, b, t: int) -> Subspace:
    """Lift of a scattered U'; the result is a club."""
    rep = enumerate_linear_set(uprime)
    if not rep.flags.scattered:
        raise NotScattered("L_U' is not scattered")
    return lift(uprime, sbar, b, t)


def scattered_pseudoregulus(ctx: FieldCtx, t: int) -> Subspace:
    """{(x, x^q) : x ∈ F_{q^t}}, scattered in PG(1, q^t)."""
    Q = ctx.order
    basis = [ctx.q**i for i in range(ctx.n)] if t == ctx.n else ctx.subfield_basis(t)
    return span(ctx, [x + ctx.pow(x, ctx.q) * Q for x in basis], PLANE)


def base_product(ctx: FieldCtx) -> Subspace:
    """F_q × F_q."""
    return span(ctx, [1, ctx.order], PLANE)


@dataclass
class ConstructionSpec:
    kind: str
    params: dict = field(default_factory=dict)


KINDS = ("trace", "jvdv", "lift", "minfam", "iclub")


def build(ctx: FieldCtx, spec: ConstructionSpec) -> Subspace:
    """Dispatch a named construction; missing S̄ and b get deterministic defaults."""
    p = spec.params
    if spec.kind in ("trace", "trace_graph"):
        return trace_graph(ctx, p.get("t"))
    if spec.kind == "jvdv":
        lam = Element(ctx, _val(ctx, p.get("lam", ctx.gen)))
        return jvdv(lam, p["t1"], p["t2"])
    if spec.kind in ("lift", "iclub"):
        t = p["t"]
        sbar = p.get("sbar")
        if sbar is None:
            sbar = default_sbar(ctx, t, p.get("l", 1))
        b = p.get("b")
        if b is None:
            b = default_b(ctx, sbar, t)
        f = lift if spec.kind == "lift" else iclub_lift
        return f(p["uprime"], sbar, b, t)
    if spec.kind in ("minfam", "min_size_family"):
        mu = Element(ctx, _val(ctx, p["mu"]))
        t = ctx.degree(mu.value)
        sbar = p.get("sbar")
        if sbar is None:
            sbar = default_sbar(ctx, t, p.get("l", 1))
        b = p.get("b")
        if b is None:
            b = default_b(ctx, sbar, t)
        return min_size_family(mu, sbar, b, p["m"], p["j"])
    raise BadParams(f"unknown construction {spec.kind!r}")


def scale_plane(a: int, U: Subspace) -> Subspace:
    return scale(a, U)
