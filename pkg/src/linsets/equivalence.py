"""Equivalence tests: a·S1^ρ = S2 on the line, and a brute-force ΓL(2, q^n)
orbit search on the plane for tiny fields."""

from __future__ import annotations

from dataclasses import dataclass, field

from linsets.errors import BadDims, DimMismatch, TooLarge
from linsets.field import Element, FieldCtx
from linsets.linear_set import enumerate_linear_set
from linsets.subspace import LINE, PLANE, Subspace, _Echelon, direct_product, frob_image, scale, span

ORBIT_LIMIT = 10**8


def coset_representatives(ctx: FieldCtx) -> list[int]:
    """One element per F_q^*-coset of F_{q^n}^*: lowest nonzero coordinate equal to 1."""
    q = ctx.q
    out = []
    for a in range(1, ctx.order):
        x = a
        while x % q == 0:
            x //= q
        if x % q == 1:
            out.append(a)
    return out


@dataclass
class FrobeniusSearch:
    witness: tuple[int, int] | None  # (a, ρ-index): a·S1^(p^ρ) = S2
    checks: int
    ctx: FieldCtx | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        w = None
        if self.witness:
            w = {"a": str(Element(self.ctx, self.witness[0])), "rho": self.witness[1]}
        return {"witness": w, "checks": self.checks}


def scalar_frobenius_equivalent(S1: Subspace, S2: Subspace) -> FrobeniusSearch:
    """Search ρ = 0..ne-1 (outer) and a over F_q^*-coset representatives (inner)."""
    if S1.ambient != LINE or S2.ambient != LINE:
        raise BadDims("expected line subspaces")
    if S1.dim != S2.dim:
        raise DimMismatch("subspaces of different dimension")
    ctx = S1.ctx
    reps = coset_representatives(ctx)
    checks = 0
    for rho in range(ctx.n * ctx.e):
        img = frob_image(S1, rho)
        for a in reps:
            checks += 1
            if scale(a, img) == S2:
                return FrobeniusSearch((a, rho), checks, ctx)
    return FrobeniusSearch(None, checks, ctx)


@dataclass
class EquivVerdict:
    witness: tuple[int, int] | None
    checks: int
    certified_inequivalent: bool
    reason: str
    ctx: FieldCtx | None = field(default=None, repr=False)

    @property
    def verdict(self) -> str:
        if self.witness:
            return "(a,ρ) witness found"
        return "no (a,ρ) witness"

    def to_dict(self) -> dict:
        w = None
        if self.witness:
            w = {"a": str(Element(self.ctx, self.witness[0])), "rho": self.witness[1]}
        d = {
            "schema": "report-v1",
            "kind": "equivalence",
            "verdict": self.verdict,
            "witness": w,
            "checks": self.checks,
            "certified_inequivalent": self.certified_inequivalent,
            "reason": self.reason,
        }
        if self.ctx is not None:
            d["field"] = self.ctx.describe()
        return d


def product_inequivalence(S1: Subspace, T1: Subspace | None, S2: Subspace, T2: Subspace | None) -> EquivVerdict:
    """Scalar-Frobenius test on the first factors of S_i × T_i.

    A missing witness proves inequivalence only when ⟨(1,0)⟩ is the unique
    point of maximal weight in both linear sets, since any semilinear map
    must then carry U1 ∩ ⟨(1,0)⟩ onto U2 ∩ ⟨(1,0)⟩.
    """
    search = scalar_frobenius_equivalent(S1, S2)
    ctx = S1.ctx
    certified = False
    reason = "necessary condition only"
    if T1 is not None and T2 is not None:
        unique = True
        for S, T in ((S1, T1), (S2, T2)):
            heavy = enumerate_linear_set(direct_product(S, T)).heaviest_points()
            if len(heavy) != 1 or heavy[0][0].x is not None:
                unique = False
        if unique:
            reason = "⟨(1,0)⟩ is the unique heaviest point on both sides"
            certified = search.witness is None
        else:
            reason = "⟨(1,0)⟩ is not the unique heaviest point; necessary condition only"
    return EquivVerdict(search.witness, search.checks, certified, reason, ctx)


def _semilinear_image(ctx: FieldCtx, M, rho: int, v: int) -> int:
    a, b, c, d = M
    Q = ctx.order
    y, x = divmod(v, Q)
    x, y = ctx.frobenius(x, rho), ctx.frobenius(y, rho)
    nx = ctx.add(ctx.mul(a, x), ctx.mul(b, y))
    ny = ctx.add(ctx.mul(c, x), ctx.mul(d, y))
    return nx + ny * Q


def gamma_l_group_size(ctx: FieldCtx) -> int:
    Q = ctx.order
    return (Q * Q - 1) * (Q * Q - Q) * ctx.n * ctx.e


def gamma_l_orbit_equivalent(U1: Subspace, U2: Subspace, limit: int = ORBIT_LIMIT):
    """First (matrix, ρ) with M·U1^ρ = U2, or None; refuses large groups.

    The matrix is (a, b, c, d) acting as (x, y) -> (ax + by, cx + dy).
    """
    if U1.ambient != PLANE or U2.ambient != PLANE:
        raise BadDims("expected plane subspaces")
    ctx = U1.ctx
    size = gamma_l_group_size(ctx)
    if size > limit:
        raise TooLarge(f"ΓL(2, q^n) has {size} elements, above the limit {limit}")
    if U1.dim != U2.dim:
        return None
    target = _Echelon(ctx, 2 * ctx.n)
    for r in U2.rows:
        target.add(r)
    Q = ctx.order
    for rho in range(ctx.n * ctx.e):
        for a in range(Q):
            for b in range(Q):
                for c in range(Q):
                    for d in range(Q):
                        if ctx.mul(a, d) == ctx.mul(b, c):
                            continue
                        M = (a, b, c, d)
                        if all(target.contains(_semilinear_image(ctx, M, rho, r)) for r in U1.rows):
                            return M, rho
    return None


def apply_semilinear(U: Subspace, M, rho: int) -> Subspace:
    return span(U.ctx, [_semilinear_image(U.ctx, M, rho, r) for r in U.rows], PLANE)
