"""F_q-subspaces of F_{q^n} (the "line") and F_{q^n}^2 (the "plane").

A subspace is stored as the tuple of rows of its reduced row-echelon basis
matrix, each row a packed int (see :mod:`linsets.field`).  Pivots are taken at
the lowest coordinate index first, rows sorted by pivot, pivot entries equal
to 1 and every other row zero in each pivot column.  This form is canonical,
so equal subspaces compare equal as tuples.

A plane vector (x, y) is packed as ``x + y * q**n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from linsets.errors import BadParams, MixedAmbient, ZeroScalar
from linsets.field import Element, FieldCtx

LINE = "line"
PLANE = "plane"


def ambient_length(ctx: FieldCtx, ambient: str) -> int:
    return ctx.n if ambient == LINE else 2 * ctx.n


class _Echelon:
    """Incrementally maintained reduced echelon basis over F_q.

    ``self.rows`` maps pivot column -> row.  For q = 2 rows are bitmasks;
    otherwise they are digit lists and converted to ints on output.
    """

    __slots__ = ("ctx", "N", "rows", "binary")

    def __init__(self, ctx: FieldCtx, N: int):
        self.ctx = ctx
        self.N = N
        self.rows = {}
        self.binary = ctx.q == 2

    def _digits(self, v: int) -> list[int]:
        q = self.ctx.q
        out = []
        for _ in range(self.N):
            v, c = divmod(v, q)
            out.append(c)
        return out

    def reduce(self, v: int):
        """Return v reduced modulo the current rows (int for q=2, digits otherwise)."""
        if self.binary:
            for piv, r in self.rows.items():
                if (v >> piv) & 1:
                    v ^= r
            return v
        F = self.ctx.base
        d = self._digits(v) if isinstance(v, int) else list(v)
        for piv, r in self.rows.items():
            c = d[piv]
            if c:
                nc = F.neg_t[c]
                mrow = F.mul_t[nc]
                add = F.add_t
                for i, x in enumerate(r):
                    if x:
                        d[i] = add[d[i]][mrow[x]]
        return d

    def add(self, v) -> bool:
        """Insert v; return True if it enlarged the span."""
        w = self.reduce(v)
        if self.binary:
            if not w:
                return False
            piv = (w & -w).bit_length() - 1
            for p, r in self.rows.items():
                if (r >> piv) & 1:
                    self.rows[p] = r ^ w
            self.rows[piv] = w
            return True
        piv = next((i for i, c in enumerate(w) if c), None)
        if piv is None:
            return False
        F = self.ctx.base
        lead_inv = F.inv_t[w[piv]]
        if lead_inv != 1:
            m = F.mul_t[lead_inv]
            w = [m[x] for x in w]
        add = F.add_t
        for p, r in self.rows.items():
            c = r[piv]
            if c:
                mrow = F.mul_t[F.neg_t[c]]
                self.rows[p] = [add[x][mrow[y]] for x, y in zip(r, w)]
        self.rows[piv] = w
        return True

    def contains(self, v: int) -> bool:
        w = self.reduce(v)
        return not w if self.binary else not any(w)

    def basis(self) -> tuple[int, ...]:
        if self.binary:
            return tuple(self.rows[p] for p in sorted(self.rows))
        q = self.ctx.q
        out = []
        for p in sorted(self.rows):
            v = 0
            for c in reversed(self.rows[p]):
                v = v * q + c
            out.append(v)
        return tuple(out)


def _echelon(ctx: FieldCtx, N: int, vectors: Iterable[int]) -> tuple[int, ...]:
    ech = _Echelon(ctx, N)
    for v in vectors:
        if v:
            ech.add(v)
            if len(ech.rows) == N:
                break
    return ech.basis()


@dataclass(frozen=True)
class Subspace:
    """An F_q-subspace in canonical reduced echelon form."""

    ctx: FieldCtx
    ambient: str
    rows: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def length(self) -> int:
        return ambient_length(self.ctx, self.ambient)

    def is_zero(self) -> bool:
        return not self.rows

    def contains(self, v) -> bool:
        v = _as_vector(self.ctx, v, self.ambient)
        ech = _Echelon(self.ctx, self.length)
        for r in self.rows:
            ech.add(r)
        return ech.contains(v)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def vectors(self) -> list[int]:
        """All q^dim vectors, zero first."""
        ctx = self.ctx
        vecs = [0]
        if ctx.q == 2:
            for r in self.rows:
                vecs += [v ^ r for v in vecs]
            return vecs
        for r in self.rows:
            multiples = [ctx.vscale(c, r) for c in range(1, ctx.q)]
            vecs = vecs + [ctx.add(v, m) for m in multiples for v in vecs]
        return vecs

    def split(self, v: int) -> tuple[int, int]:
        """Unpack a plane vector into (x, y)."""
        y, x = divmod(v, self.ctx.order)
        return x, y

    def __le__(self, other: Subspace) -> bool:
        return is_subspace(self, other)

    def __add__(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def text(self) -> str:
        return subspace_text(self)

    def __repr__(self):
        return f"Subspace({self.ambient}, dim={self.dim}, [{self.text()}])"


def _as_vector(ctx: FieldCtx, v, ambient: str) -> int:
    if isinstance(v, Element):
        if v.ctx != ctx:
            raise MixedAmbient("element from another field")
        if ambient != LINE:
            raise MixedAmbient("line element given for a plane subspace")
        return v.value
    if isinstance(v, tuple):
        if ambient != PLANE or len(v) != 2:
            raise MixedAmbient("pair given for a line subspace")
        x, y = (c.value if isinstance(c, Element) else c for c in v)
        return x + y * ctx.order
    if not isinstance(v, int) or v < 0 or v >= ctx.order ** (2 if ambient == PLANE else 1):
        raise BadParams(f"bad vector {v!r}")
    return v


def span(ctx: FieldCtx, vectors=(), ambient: str = LINE) -> Subspace:
    """Canonical F_q-span of elements (line) or pairs (plane).

    Plain ints are accepted as already packed vectors.
    """
    if ambient not in (LINE, PLANE):
        raise BadParams(f"unknown ambient {ambient!r}")
    vs = [_as_vector(ctx, v, ambient) for v in vectors]
    return Subspace(ctx, ambient, _echelon(ctx, ambient_length(ctx, ambient), vs))


def zero(ctx: FieldCtx, ambient: str = LINE) -> Subspace:
    return Subspace(ctx, ambient, ())


def full(ctx: FieldCtx, ambient: str = LINE) -> Subspace:
    N = ambient_length(ctx, ambient)
    return Subspace(ctx, ambient, tuple(ctx.q**i for i in range(N)))


def _same(A: Subspace, B: Subspace):
    if A.ctx != B.ctx or A.ambient != B.ambient:
        raise MixedAmbient("subspaces live in different ambients")


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    _same(A, B)
    return Subspace(A.ctx, A.ambient, _echelon(A.ctx, A.length, A.rows + B.rows))


def intersect(A: Subspace, B: Subspace) -> Subspace:
    """Zassenhaus: echelonize [a|a] and [b|0]; rows with empty left half span A∩B."""
    _same(A, B)
    if not A.rows or not B.rows:
        return Subspace(A.ctx, A.ambient, ())
    ctx, N = A.ctx, A.length
    shift = ctx.q**N
    ech = _Echelon(ctx, 2 * N)
    for a in A.rows:
        ech.add(a + a * shift)
    for b in B.rows:
        ech.add(b)
    rows = ech.basis()
    meet = [r // shift for r in rows if r % shift == 0]
    return Subspace(ctx, A.ambient, _echelon(ctx, N, meet))


def is_subspace(A: Subspace, B: Subspace) -> bool:
    _same(A, B)
    ech = _Echelon(B.ctx, B.length)
    for r in B.rows:
        ech.add(r)
    return all(ech.contains(a) for a in A.rows)


def _map_rows(S: Subspace, f) -> Subspace:
    ctx = S.ctx
    if S.ambient == LINE:
        images = [f(r) for r in S.rows]
    else:
        Q = ctx.order
        images = []
        for r in S.rows:
            y, x = divmod(r, Q)
            images.append(f(x) + f(y) * Q)
    return Subspace(ctx, S.ambient, _echelon(ctx, S.length, images))


def scale(a, S: Subspace) -> Subspace:
    """{a·s : s ∈ S}; on the plane a acts on both coordinates."""
    a = a.value if isinstance(a, Element) else a
    if a == 0:
        raise ZeroScalar("scaling by zero")
    if a == 1:
        return S
    mul = S.ctx.mul
    return _map_rows(S, lambda x: mul(a, x))


def frob_image(S: Subspace, i: int) -> Subspace:
    """{s^(p^i) : s ∈ S}."""
    ctx = S.ctx
    i %= ctx.n * ctx.e
    if i == 0:
        return S
    return _map_rows(S, lambda x: ctx.frobenius(x, i))


def product_space(S: Subspace, T: Subspace) -> Subspace:
    """⟨ST⟩_{F_q}: span of all pairwise products of basis vectors."""
    _same(S, T)
    if S.ambient != LINE:
        raise MixedAmbient("product space is defined on the line")
    mul = S.ctx.mul
    prods = (mul(s, t) for s in S.rows for t in T.rows)
    return Subspace(S.ctx, LINE, _echelon(S.ctx, S.ctx.n, prods))


def nullspace(ctx: FieldCtx, matrix: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis of {x ∈ F_q^ncols : M x = 0} for a matrix of F_q ints."""
    F = ctx.base
    rows = [list(r) for r in matrix]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = F.neg(rows[i][c])
                rows[i] = [F.add(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [0] * ncols
        x[fcol] = 1
        for i, pc in enumerate(pivots):
            x[pc] = F.neg(rows[i][fcol])
        basis.append(x)
    return basis


def trace_dual(S: Subspace) -> Subspace:
    """S^⊥ = {a : Tr(ab) = 0 for all b ∈ S}, solved as a kernel of the trace form."""
    if S.ambient != LINE:
        raise MixedAmbient("trace dual is defined on the line")
    ctx = S.ctx
    n = ctx.n
    basis = [ctx.q**j for j in range(n)]
    matrix = [[ctx.trace(ctx.mul(w, s)) for w in basis] for s in S.rows]
    kernel = nullspace(ctx, matrix, n)
    return Subspace(ctx, LINE, _echelon(ctx, n, (ctx.from_coords(x) for x in kernel)))


def subfield_span(S: Subspace, t: int) -> Subspace:
    """⟨S⟩_{F_{q^t}}, the smallest F_{q^t}-subspace containing S."""
    ctx = S.ctx
    ws = ctx.subfield_basis(t)
    out = []
    for w in ws:
        out.extend(scale(w, S).rows if w != 1 else S.rows)
    return Subspace(ctx, S.ambient, _echelon(ctx, S.length, out))


def is_subfield_linear(S: Subspace, t: int) -> bool:
    if S.ctx.n % t:
        return False
    if t == 1:
        return True
    return scale(S.ctx.subfield_generator(t), S) == S


def subfield_linearity(S: Subspace) -> int:
    """Largest t | n such that S is closed under multiplication by F_{q^t}."""
    for t in sorted(S.ctx.divisors_of_n(), reverse=True):
        if is_subfield_linear(S, t):
            return t
    return 1  # pragma: no cover


def direct_product(S: Subspace, T: Subspace) -> Subspace:
    """S × T as a plane subspace."""
    _same(S, T)
    if S.ambient != LINE:
        raise MixedAmbient("direct product takes two line subspaces")
    Q = S.ctx.order
    rows = list(S.rows) + [t * Q for t in T.rows]
    return Subspace(S.ctx, PLANE, _echelon(S.ctx, 2 * S.ctx.n, rows))


def power_span(ctx: FieldCtx, a: int, k: int, g: int = 1) -> Subspace:
    """g·⟨1, a, ..., a^(k-1)⟩_{F_q}."""
    vecs = []
    x = g
    for _ in range(k):
        vecs.append(x)
        x = ctx.mul(x, a)
    return span(ctx, vecs)


# -- text format: rows joined by ';', coordinates by ',' ------------------------


def vector_text(ctx: FieldCtx, v: int, N: int) -> str:
    q = ctx.q
    cs = []
    for _ in range(N):
        v, c = divmod(v, q)
        cs.append(str(c))
    return ",".join(cs)


def subspace_text(S: Subspace) -> str:
    return ";".join(vector_text(S.ctx, r, S.length) for r in S.rows)


def parse_subspace(ctx: FieldCtx, text: str, ambient: str | None = None) -> Subspace:
    """Parse the ';'/',' text format; the ambient follows from the row length."""
    text = text.strip().strip("[]").strip()
    if not text:
        return zero(ctx, ambient or LINE)
    rows = []
    for chunk in text.split(";"):
        chunk = chunk.strip().strip("[]()")
        if not chunk:
            continue
        try:
            cs = [int(c) for c in chunk.split(",")]
        except ValueError as exc:
            raise BadParams(f"bad subspace row {chunk!r}") from exc
        rows.append(cs)
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise MixedAmbient("rows of different lengths")
    N = lengths.pop()
    if N == ctx.n:
        amb = LINE
    elif N == 2 * ctx.n:
        amb = PLANE
    else:
        raise BadParams(f"row length {N} matches neither n={ctx.n} nor 2n")
    if ambient is not None and amb != ambient:
        raise MixedAmbient(f"expected a {ambient} subspace, got {amb}")
    q = ctx.q
    vecs = []
    for cs in rows:
        if any(not 0 <= c < q for c in cs):
            raise BadParams(f"coordinate out of range 0..{q - 1}")
        vecs.append(sum(c * q**i for i, c in enumerate(cs)))
    return Subspace(ctx, amb, _echelon(ctx, N, vecs))
